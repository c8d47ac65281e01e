//! Dense digraphs on `0..n` and their strongly connected components.

use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct ComparisonDigraph {
    n: usize,
    adj: Vec<bool>,
}

/// Components of a digraph in topological order of the condensation
/// (sources first), each component sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDecomposition {
    pub components: Vec<Vec<usize>>,
    /// Lexicographically smallest source component; `None` when strongly connected.
    pub source: Option<Vec<usize>>,
}

impl SccDecomposition {
    pub fn is_strongly_connected(&self) -> bool {
        self.components.len() <= 1
    }
}

impl ComparisonDigraph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![false; n * n],
        }
    }

    /// Builds a digraph from an adjacency predicate; self-loops are ignored.
    pub fn from_fn(n: usize, mut edge: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                if i != j && edge(i, j) {
                    g.adj[i * n + j] = true;
                }
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            g.add_edge(i, j);
        }
        g
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        if i != j {
            self.adj[i * self.n + j] = true;
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.has_edge(i, j))
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has_edge(i, j))
            .collect()
    }

    /// Every unordered pair has at least one direction.
    pub fn is_total(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.has_edge(i, j) || self.has_edge(j, i)))
    }

    pub fn induced(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |a, b| self.has_edge(idx[a], idx[b]))
    }

    /// True iff every consecutive pair of `cycle` (wrapping around) is an edge.
    pub fn contains_cycle(&self, cycle: &[usize]) -> bool {
        !cycle.is_empty()
            && cycle
                .iter()
                .zip(cycle.iter().cycle().skip(1))
                .all(|(&a, &b)| a != b && a < self.n && b < self.n && self.has_edge(a, b))
    }

    /// Tarjan's algorithm, iterative.
    pub fn strongly_connected_components(&self) -> SccDecomposition {
        let n = self.n;
        const UNVISITED: usize = usize::MAX;
        let mut index = vec![UNVISITED; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comp_of = vec![UNVISITED; n];
        let mut components: Vec<Vec<usize>> = Vec::new();
        let mut counter = 0;

        for root in 0..n {
            if index[root] != UNVISITED {
                continue;
            }
            // (vertex, next successor to examine)
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;

            while let Some(&mut (v, ref mut next)) = call.last_mut() {
                if *next < n {
                    let w = *next;
                    *next += 1;
                    if !self.has_edge(v, w) {
                        continue;
                    }
                    if index[w] == UNVISITED {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp_of[w] = components.len();
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    components.push(comp);
                }
            }
        }

        // Tarjan emits sinks first.
        let count = components.len();
        components.reverse();
        let comp_of: Vec<usize> = comp_of.iter().map(|&c| count - 1 - c).collect();

        let source = if count <= 1 {
            None
        } else {
            let mut has_incoming = vec![false; count];
            for (i, j) in self.edges() {
                if comp_of[i] != comp_of[j] {
                    has_incoming[comp_of[j]] = true;
                }
            }
            components
                .iter()
                .enumerate()
                .filter(|&(c, _)| !has_incoming[c])
                .map(|(_, comp)| comp.clone())
                .min()
        };
        SccDecomposition { components, source }
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.strongly_connected_components().is_strongly_connected()
    }

    /// Vertex sets with no edge entering them from the complement.
    pub fn has_incoming_edge(&self, set: &[usize]) -> bool {
        let mut inside = vec![false; self.n];
        for &i in set {
            inside[i] = true;
        }
        (0..self.n)
            .filter(|&j| !inside[j])
            .any(|j| set.iter().any(|&i| self.has_edge(j, i)))
    }

    /// A Hamiltonian cycle starting at vertex 0, by backtracking. Intended for
    /// the small leading blocks we report on (`n <= 12`).
    pub fn find_hamiltonian_cycle(&self) -> Option<Vec<usize>> {
        let n = self.n;
        if n == 0 {
            return None;
        }
        if n == 1 {
            return Some(vec![0]);
        }
        let mut path = vec![0];
        let mut used = vec![false; n];
        used[0] = true;
        self.extend_path(&mut path, &mut used).then_some(path)
    }

    fn extend_path(&self, path: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let last = *path.last().expect("non-empty");
        if path.len() == self.n {
            return self.has_edge(last, path[0]);
        }
        for next in 0..self.n {
            if !used[next] && self.has_edge(last, next) {
                used[next] = true;
                path.push(next);
                if self.extend_path(path, used) {
                    return true;
                }
                path.pop();
                used[next] = false;
            }
        }
        false
    }
}

impl fmt::Debug for ComparisonDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComparisonDigraph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}
