//! Reciprocal matrices, weight vectors, monomial similarities and the
//! block-perturbed canonical form `A_n(B) = [[B, J], [J, J]]`.

use std::fmt;
use std::ops::Index;

use crate::error::{PcmError, Result};
use crate::scalar::{Scalar, TAU_CONS, TAU_RECIP};

/// Positive square matrix with `a_ii = 1` and `a_ji = 1 / a_ij`.
///
/// Dimension 1 is representable (it shows up as the trivial block of a
/// consistent matrix); user-facing parsing requires `n >= 2`.
#[derive(Clone, PartialEq)]
pub struct ReciprocalMatrix<S> {
    n: usize,
    entries: Vec<S>,
}

impl<S: Scalar> ReciprocalMatrix<S> {
    /// Validates a grid of entries with the default reciprocity tolerance.
    pub fn new(rows: Vec<Vec<S>>) -> Result<Self> {
        Self::with_tolerance(rows, TAU_RECIP)
    }

    /// Validates a grid. On the float backend entries within `recip_tol` of
    /// reciprocity are normalized so that `a_ji := 1 / a_ij` for `i < j`.
    pub fn with_tolerance(rows: Vec<Vec<S>>, recip_tol: f64) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(PcmError::BadShape("empty grid".into()));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(PcmError::BadShape(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                r.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if !a.is_positive() {
                    return Err(PcmError::NonPositiveEntry {
                        row: i + 1,
                        col: j + 1,
                    });
                }
            }
        }
        let mut entries: Vec<S> = rows.into_iter().flatten().collect();
        for i in 0..n {
            if !entries[i * n + i].approx_eq(&S::one(), recip_tol) {
                return Err(PcmError::ReciprocityViolation {
                    row: i + 1,
                    col: i + 1,
                });
            }
            entries[i * n + i] = S::one();
            for j in i + 1..n {
                let prod = entries[i * n + j].clone() * entries[j * n + i].clone();
                if !prod.approx_eq(&S::one(), recip_tol) {
                    return Err(PcmError::ReciprocityViolation {
                        row: i + 1,
                        col: j + 1,
                    });
                }
                entries[j * n + i] = entries[i * n + j].recip();
            }
        }
        Ok(Self { n, entries })
    }

    /// Builds a matrix from its strictly upper triangle, listed row by row.
    #[allow(clippy::needless_range_loop)]
    pub fn from_upper(n: usize, upper: &[S]) -> Result<Self> {
        if upper.len() != n * (n - 1) / 2 {
            return Err(PcmError::BadShape(format!(
                "{} upper entries for n = {n}",
                upper.len()
            )));
        }
        let mut rows = vec![vec![S::one(); n]; n];
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let a = it.next().expect("length checked").clone();
                if !a.is_positive() {
                    return Err(PcmError::NonPositiveEntry {
                        row: i + 1,
                        col: j + 1,
                    });
                }
                rows[j][i] = a.recip();
                rows[i][j] = a;
            }
        }
        Ok(Self {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// `J_n`, the all-ones matrix.
    pub fn ones(n: usize) -> Self {
        Self {
            n,
            entries: vec![S::one(); n * n],
        }
    }

    /// The consistent matrix `w w^(-T)`.
    pub fn from_weights(w: &WeightVector<S>) -> Self {
        let n = w.len();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(if i == j {
                    S::one()
                } else {
                    w[i].clone() / w[j].clone()
                });
            }
        }
        Self { n, entries }
    }

    /// `A_n(B)`: `B` in the leading block, ones everywhere else.
    pub fn block_perturbed(block: &Self, n: usize) -> Result<Self> {
        let s = block.n;
        if n < s {
            return Err(PcmError::DimensionMismatch {
                expected: s,
                found: n,
            });
        }
        let mut entries = vec![S::one(); n * n];
        for i in 0..s {
            for j in 0..s {
                entries[i * n + j] = block.get(i, j).clone();
            }
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> WeightVector<S> {
        WeightVector((0..self.n).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Principal submatrix `A[K]`, rows and columns in the order given.
    pub fn principal(&self, idx: &[usize]) -> Self {
        let entries = idx
            .iter()
            .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        Self {
            n: idx.len(),
            entries,
        }
    }

    /// `A(k)`: delete row and column `k`.
    pub fn delete(&self, k: usize) -> Self {
        let idx: Vec<usize> = (0..self.n).filter(|&i| i != k).collect();
        self.principal(&idx)
    }

    /// `a_ij a_jk = a_ik` for every triple (relative tolerance on floats).
    pub fn is_consistent(&self, tol: f64) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                (j + 1..n).all(|k| {
                    let lhs = self.get(i, j).clone() * self.get(j, k).clone();
                    lhs.approx_eq(self.get(i, k), tol)
                })
            })
        })
    }

    pub fn is_consistent_default(&self) -> bool {
        self.is_consistent(TAU_CONS)
    }

    /// Index triples `i < j < k` violating the product rule.
    pub fn inconsistent_triples(&self, tol: f64) -> Vec<[usize; 3]> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let lhs = self.get(i, j).clone() * self.get(j, k).clone();
                    if !lhs.approx_eq(self.get(i, k), tol) {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }

    pub fn to_f64(&self) -> ReciprocalMatrix<f64> {
        ReciprocalMatrix {
            n: self.n,
            entries: self.entries.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// Entry-wise geometric mean of the selected columns.
    pub fn geometric_mean_vector(&self, cols: &[usize]) -> Result<WeightVector<f64>> {
        if cols.is_empty() {
            return Err(PcmError::EmptySubset);
        }
        if let Some(&bad) = cols.iter().find(|&&j| j >= self.n) {
            return Err(PcmError::DimensionMismatch {
                expected: self.n,
                found: bad + 1,
            });
        }
        let m = cols.len() as f64;
        let w = (0..self.n)
            .map(|i| {
                let log_sum: f64 = cols.iter().map(|&j| self.get(i, j).to_f64().ln()).sum();
                (log_sum / m).exp()
            })
            .collect();
        Ok(WeightVector(w))
    }
}

impl<S: fmt::Debug> fmt::Debug for ReciprocalMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.chunks(self.n)).finish()
    }
}

impl<S: fmt::Display> fmt::Display for ReciprocalMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.n) {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", cells.join("\t"))?;
        }
        Ok(())
    }
}

/// Positive weight (priority) vector.
#[derive(Clone, PartialEq)]
pub struct WeightVector<S>(Vec<S>);

impl<S: Scalar> WeightVector<S> {
    pub fn new(entries: Vec<S>) -> Result<Self> {
        if entries.is_empty() {
            return Err(PcmError::EmptySubset);
        }
        if let Some(i) = entries.iter().position(|x| !x.is_positive()) {
            return Err(PcmError::NonPositiveWeight(i + 1));
        }
        Ok(Self(entries))
    }

    /// Convenience for fixtures: integer entries.
    pub fn from_ints(entries: &[i64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| S::from_ratio(x, 1)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<S> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.0.iter()
    }

    /// `w[K]`.
    pub fn subvector(&self, idx: &[usize]) -> Self {
        Self(idx.iter().map(|&i| self.0[i].clone()).collect())
    }

    /// `w(k)`.
    pub fn delete(&self, k: usize) -> Self {
        Self(
            self.0
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, x)| x.clone())
                .collect(),
        )
    }

    /// Inserts `value` so that it becomes entry `k`.
    pub fn insert(&self, k: usize, value: S) -> Self {
        let mut v = self.0.clone();
        v.insert(k, value);
        Self(v)
    }

    pub fn scaled(&self, c: &S) -> Self {
        Self(self.0.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn min(&self) -> S {
        S::min_of(&self.0).expect("non-empty")
    }

    pub fn max(&self) -> S {
        S::max_of(&self.0).expect("non-empty")
    }

    pub fn to_f64(&self) -> WeightVector<f64> {
        WeightVector(self.0.iter().map(Scalar::to_f64).collect())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.0.iter().map(Scalar::to_json).collect())
    }
}

impl<S> Index<usize> for WeightVector<S> {
    type Output = S;

    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S: fmt::Debug> fmt::Debug for WeightVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl<S: fmt::Display> fmt::Display for WeightVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", cells.join(", "))
    }
}

/// `X -> P D X D^{-1} P^T` and `w -> P D w`, where `(P x)_i = x_{perm[i]}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialSimilarity<S> {
    diag: Vec<S>,
    perm: Vec<usize>,
}

impl<S: Scalar> MonomialSimilarity<S> {
    pub fn new(diag: Vec<S>, perm: Vec<usize>) -> Result<Self> {
        if diag.len() != perm.len() {
            return Err(PcmError::DimensionMismatch {
                expected: diag.len(),
                found: perm.len(),
            });
        }
        if let Some(i) = diag.iter().position(|d| !d.is_positive()) {
            return Err(PcmError::NonPositiveWeight(i + 1));
        }
        check_permutation(&perm)?;
        Ok(Self { diag, perm })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            diag: vec![S::one(); n],
            perm: (0..n).collect(),
        }
    }

    pub fn permutation(perm: Vec<usize>) -> Result<Self> {
        Self::new(vec![S::one(); perm.len()], perm)
    }

    pub fn diagonal(diag: Vec<S>) -> Result<Self> {
        let n = diag.len();
        Self::new(diag, (0..n).collect())
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn diag(&self) -> &[S] {
        &self.diag
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply(&self, a: &ReciprocalMatrix<S>) -> Result<ReciprocalMatrix<S>> {
        let n = self.n();
        if a.n() != n {
            return Err(PcmError::DimensionMismatch {
                expected: n,
                found: a.n(),
            });
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            let pi = self.perm[i];
            for j in 0..n {
                let pj = self.perm[j];
                entries.push(if i == j {
                    S::one()
                } else {
                    self.diag[pi].clone() * a.get(pi, pj).clone() / self.diag[pj].clone()
                });
            }
        }
        Ok(ReciprocalMatrix { n, entries })
    }

    pub fn transform(&self, w: &WeightVector<S>) -> Result<WeightVector<S>> {
        if w.len() != self.n() {
            return Err(PcmError::DimensionMismatch {
                expected: self.n(),
                found: w.len(),
            });
        }
        Ok(WeightVector(
            self.perm
                .iter()
                .map(|&p| self.diag[p].clone() * w[p].clone())
                .collect(),
        ))
    }

    pub fn inverse(&self) -> Self {
        let inv = invert_permutation(&self.perm);
        let diag = self.perm.iter().map(|&p| self.diag[p].recip()).collect();
        Self { diag, perm: inv }
    }
}

pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

fn check_permutation(perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(PcmError::InvalidPermutation(format!("{perm:?}")));
        }
    }
    Ok(())
}

/// A matrix in the canonical form `A_n(B)` together with the similarity that
/// maps the canonical matrix back onto the original one.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockPerturbedForm<S> {
    block: ReciprocalMatrix<S>,
    n: usize,
    back_map: MonomialSimilarity<S>,
}

impl<S: Scalar> BlockPerturbedForm<S> {
    /// `A_n(B)` itself, with the identity back map.
    pub fn canonical(block: ReciprocalMatrix<S>, n: usize) -> Result<Self> {
        if block.n() >= n {
            return Err(PcmError::BadShape(format!(
                "block size {} must be below n = {n}",
                block.n()
            )));
        }
        Ok(Self {
            block,
            n,
            back_map: MonomialSimilarity::identity(n),
        })
    }

    pub fn block(&self) -> &ReciprocalMatrix<S> {
        &self.block
    }

    pub fn s(&self) -> usize {
        self.block.n()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn back_map(&self) -> &MonomialSimilarity<S> {
        &self.back_map
    }

    pub fn matrix(&self) -> ReciprocalMatrix<S> {
        ReciprocalMatrix::block_perturbed(&self.block, self.n).expect("s < n")
    }

    /// The original matrix, `back_map` applied to `A_n(B)`.
    pub fn reconstruct(&self) -> ReciprocalMatrix<S> {
        self.back_map
            .apply(&self.matrix())
            .expect("dimensions agree")
    }

    /// Maps a vector for the original matrix to canonical coordinates.
    pub fn to_canonical(&self, w: &WeightVector<S>) -> Result<WeightVector<S>> {
        self.back_map.inverse().transform(w)
    }

    /// Maps a canonical-coordinate vector back to the original matrix.
    pub fn from_canonical(&self, w: &WeightVector<S>) -> Result<WeightVector<S>> {
        self.back_map.transform(w)
    }
}

/// Tries to write `A` as a monomial similarity of `A_n(B)` where the
/// perturbed block sits on the indices `k`.
///
/// Returns `None` when `A` is not consistent outside `k`, or when `k` is empty,
/// the whole index set, or contains an invalid/duplicate index.
pub fn is_block_perturbation<S: Scalar>(
    a: &ReciprocalMatrix<S>,
    k: &[usize],
    tol: f64,
) -> Option<BlockPerturbedForm<S>> {
    let n = a.n();
    let s = k.len();
    if s == 0 || s >= n {
        return None;
    }
    let mut in_k = vec![false; n];
    for &i in k {
        if i >= n || std::mem::replace(&mut in_k[i], true) {
            return None;
        }
    }
    let mut order: Vec<usize> = k.to_vec();
    order.sort_unstable();
    order.extend((0..n).filter(|&i| !in_k[i]));
    let permuted = a.principal(&order);
    // reference column: the first index outside the block
    let d: Vec<S> = (0..n).map(|i| permuted.get(i, s).clone()).collect();
    for i in 0..n {
        for j in 0..n {
            if i < s && j < s {
                continue;
            }
            let c = permuted.get(i, j).clone() * d[j].clone() / d[i].clone();
            if !c.approx_eq(&S::one(), tol) {
                return None;
            }
        }
    }
    let mut block_rows = vec![vec![S::one(); s]; s];
    for (i, row) in block_rows.iter_mut().enumerate() {
        for (j, b) in row.iter_mut().enumerate() {
            if i != j {
                *b = permuted.get(i, j).clone() * d[j].clone() / d[i].clone();
            }
        }
    }
    let block = ReciprocalMatrix::with_tolerance(block_rows, tol.max(TAU_RECIP)).ok()?;
    let back_map = MonomialSimilarity {
        diag: d,
        perm: invert_permutation(&order),
    };
    Some(BlockPerturbedForm { block, n, back_map })
}

/// Result of [`detect_minimal_block`].
#[derive(Clone, Debug)]
pub struct DetectedBlock<S> {
    /// Perturbed index set, sorted.
    pub indices: Vec<usize>,
    pub form: BlockPerturbedForm<S>,
    /// False when the greedy search was used (`n > 8`).
    pub minimal_guaranteed: bool,
}

pub const EXHAUSTIVE_BLOCK_SEARCH_MAX_N: usize = 8;

/// Smallest index set (lexicographic tie-break) outside of which `A` is
/// consistent. A consistent matrix yields the trivial block `{0}`.
pub fn detect_minimal_block<S: Scalar>(
    a: &ReciprocalMatrix<S>,
    tol: f64,
) -> Option<DetectedBlock<S>> {
    let n = a.n();
    if n < 2 {
        return None;
    }
    if n <= EXHAUSTIVE_BLOCK_SEARCH_MAX_N {
        for size in 1..n {
            for combo in Combinations::new(n, size) {
                if let Some(form) = is_block_perturbation(a, &combo, tol) {
                    return Some(DetectedBlock {
                        indices: combo,
                        form,
                        minimal_guaranteed: true,
                    });
                }
            }
        }
        return None;
    }
    let mut counts = vec![0usize; n];
    for t in a.inconsistent_triples(tol) {
        for i in t {
            counts[i] += 1;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| counts[y].cmp(&counts[x]).then(x.cmp(&y)));
    for size in 1..n {
        let mut k = order[..size].to_vec();
        k.sort_unstable();
        if let Some(form) = is_block_perturbation(a, &k, tol) {
            return Some(DetectedBlock {
                indices: k,
                form,
                minimal_guaranteed: false,
            });
        }
    }
    None
}

/// Lexicographic `size`-subsets of `0..n`.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, size: usize) -> Self {
        let current = (size <= n).then(|| (0..size).collect());
        Self { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let k = next.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}
