//! Efficiency of weight vectors.
//!
//! `w` is efficient for `A` iff the digraph `G(A, w)` (edge `i -> j` iff
//! `w_i / w_j >= a_ij`) is strongly connected. Inefficient verdicts carry a
//! vector that strictly dominates `w`, so they can be checked with
//! [`dominance_compare`] alone.

use serde_json::json;

use crate::digraph::ComparisonDigraph;
use crate::error::{PcmError, Result};
use crate::matrix::{BlockPerturbedForm, ReciprocalMatrix, WeightVector};
use crate::scalar::{Scalar, TAU_DOMINANCE, TAU_EDGE};

fn check_dims<S: Scalar>(a: &ReciprocalMatrix<S>, w: &WeightVector<S>) -> Result<()> {
    if a.n() != w.len() {
        return Err(PcmError::DimensionMismatch {
            expected: a.n(),
            found: w.len(),
        });
    }
    Ok(())
}

/// `G(A, w)` with the default float edge slack.
pub fn build_digraph<S: Scalar>(
    a: &ReciprocalMatrix<S>,
    w: &WeightVector<S>,
) -> Result<ComparisonDigraph> {
    build_digraph_with(a, w, TAU_EDGE)
}

pub fn build_digraph_with<S: Scalar>(
    a: &ReciprocalMatrix<S>,
    w: &WeightVector<S>,
    edge_tol: f64,
) -> Result<ComparisonDigraph> {
    check_dims(a, w)?;
    // w_i / w_j >= a_ij  <=>  w_i >= a_ij w_j
    Ok(ComparisonDigraph::from_fn(a.n(), |i, j| {
        w[i].ge_slack(&(a.get(i, j).clone() * w[j].clone()), edge_tol)
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate<S> {
    /// `G(A, w)` is strongly connected.
    Efficient,
    /// `source` has no incoming edge; `dominator` strictly dominates `w`.
    Inefficient {
        source: Vec<usize>,
        dominator: WeightVector<S>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EfficiencyVerdict<S> {
    pub digraph: ComparisonDigraph,
    /// Strongly connected components, sources first.
    pub components: Vec<Vec<usize>>,
    pub certificate: Certificate<S>,
}

impl<S: Scalar> EfficiencyVerdict<S> {
    pub fn is_efficient(&self) -> bool {
        matches!(self.certificate, Certificate::Efficient)
    }

    pub fn source_set(&self) -> Option<&[usize]> {
        match &self.certificate {
            Certificate::Efficient => None,
            Certificate::Inefficient { source, .. } => Some(source),
        }
    }

    pub fn dominator(&self) -> Option<&WeightVector<S>> {
        match &self.certificate {
            Certificate::Efficient => None,
            Certificate::Inefficient { dominator, .. } => Some(dominator),
        }
    }

    /// `{status, scc_partition, source_set?, dominator?, edge_list}`; vertices
    /// are reported 1-based.
    pub fn to_json(&self) -> serde_json::Value {
        let one_based = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
        let mut out = json!({
            "status": if self.is_efficient() { "efficient" } else { "inefficient" },
            "scc_partition": self.components.iter().map(|c| one_based(c)).collect::<Vec<_>>(),
            "edge_list": self.digraph.edges().iter().map(|&(i, j)| [i + 1, j + 1]).collect::<Vec<_>>(),
        });
        if let Certificate::Inefficient { source, dominator } = &self.certificate {
            out["source_set"] = json!(one_based(source));
            out["dominator"] = dominator.to_json();
        }
        out
    }
}

pub fn is_efficient<S: Scalar>(
    a: &ReciprocalMatrix<S>,
    w: &WeightVector<S>,
) -> Result<EfficiencyVerdict<S>> {
    is_efficient_with(a, w, TAU_EDGE)
}

pub fn is_efficient_with<S: Scalar>(
    a: &ReciprocalMatrix<S>,
    w: &WeightVector<S>,
    edge_tol: f64,
) -> Result<EfficiencyVerdict<S>> {
    let digraph = build_digraph_with(a, w, edge_tol)?;
    let scc = digraph.strongly_connected_components();
    let certificate = match scc.source {
        None => Certificate::Efficient,
        Some(source) => {
            let dominator = dominating_vector_unchecked(a, w, &source);
            Certificate::Inefficient { source, dominator }
        }
    };
    Ok(EfficiencyVerdict {
        digraph,
        components: scc.components,
        certificate,
    })
}

/// Digraph test only, without building a certificate.
pub fn efficient<S: Scalar>(a: &ReciprocalMatrix<S>, w: &WeightVector<S>) -> Result<bool> {
    Ok(build_digraph(a, w)?.is_strongly_connected())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dominance {
    VDominates,
    WDominates,
    /// `v` is a positive multiple of `w`.
    Equal,
    Incomparable,
}

/// Compares the approximation errors `|a_ij - v_i/v_j|` and `|a_ij - w_i/w_j|`
/// over all `i != j`.
pub fn dominance_compare<S: Scalar>(
    a: &ReciprocalMatrix<S>,
    w: &WeightVector<S>,
    v: &WeightVector<S>,
) -> Result<Dominance> {
    check_dims(a, w)?;
    check_dims(a, v)?;
    let n = a.n();
    let scale = w[0].clone() / v[0].clone();
    let v = v.scaled(&scale);
    if (0..n).all(|i| v[i].approx_eq(&w[i], 1e-12)) {
        return Ok(Dominance::Equal);
    }
    let mut v_le = true;
    let mut w_le = true;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let aij = a.get(i, j);
            let ev = aij.abs_diff(&(v[i].clone() / v[j].clone()));
            let ew = aij.abs_diff(&(w[i].clone() / w[j].clone()));
            let slack = TAU_DOMINANCE * aij.to_f64();
            v_le &= ev.le_within(&ew, slack);
            w_le &= ew.le_within(&ev, slack);
            if !v_le && !w_le {
                return Ok(Dominance::Incomparable);
            }
        }
    }
    Ok(if v_le {
        Dominance::VDominates
    } else if w_le {
        Dominance::WDominates
    } else {
        Dominance::Incomparable
    })
}

/// Scales the source component `source` by
/// `t = max_{i in S, j not in S} a_ij w_j / w_i < 1`.
pub fn construct_dominating_vector<S: Scalar>(
    a: &ReciprocalMatrix<S>,
    w: &WeightVector<S>,
    source: &[usize],
) -> Result<WeightVector<S>> {
    let g = build_digraph(a, w)?;
    let n = a.n();
    let mut sorted = source.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let proper = !sorted.is_empty() && sorted.len() < n && sorted.iter().all(|&i| i < n);
    if !proper || g.has_incoming_edge(&sorted) {
        return Err(PcmError::InvalidWitness(source.to_vec()));
    }
    Ok(dominating_vector_unchecked(a, w, &sorted))
}

fn dominating_vector_unchecked<S: Scalar>(
    a: &ReciprocalMatrix<S>,
    w: &WeightVector<S>,
    source: &[usize],
) -> WeightVector<S> {
    let n = a.n();
    let mut inside = vec![false; n];
    for &i in source {
        inside[i] = true;
    }
    let t = S::max_of(
        source
            .iter()
            .flat_map(|&i| (0..n).filter(|&j| !inside[j]).map(move |j| (i, j)))
            .map(|(i, j)| a.get(i, j).clone() * w[j].clone() / w[i].clone())
            .collect::<Vec<_>>()
            .iter(),
    )
    .expect("source is proper");
    let v = (0..n)
        .map(|i| {
            if inside[i] {
                t.clone() * w[i].clone()
            } else {
                w[i].clone()
            }
        })
        .collect();
    WeightVector::new(v).expect("t > 0")
}

/// `[min, max]` of `w_i / a_ik` over `i != k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionInterval<S> {
    pub k: usize,
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> ExtensionInterval<S> {
    pub fn contains(&self, x: &S) -> bool {
        x.ge_slack(&self.lo, TAU_EDGE) && self.hi.ge_slack(x, TAU_EDGE)
    }
}

/// Interval of values `w_k` that extend an efficient `w(k)` to an efficient `w`.
/// `w_minus_k` lists the entries of `w` other than `k`, in order.
pub fn extension_interval<S: Scalar>(
    a: &ReciprocalMatrix<S>,
    w_minus_k: &WeightVector<S>,
    k: usize,
) -> Result<ExtensionInterval<S>> {
    let n = a.n();
    if k >= n {
        return Err(PcmError::DimensionMismatch {
            expected: n,
            found: k + 1,
        });
    }
    if w_minus_k.len() + 1 != n {
        return Err(PcmError::DimensionMismatch {
            expected: n - 1,
            found: w_minus_k.len(),
        });
    }
    if !efficient(&a.delete(k), w_minus_k)? {
        return Err(PcmError::SubvectorNotEfficient(k));
    }
    let ratios: Vec<S> = (0..n)
        .filter(|&i| i != k)
        .zip(w_minus_k.iter())
        .map(|(i, wi)| wi.clone() / a.get(i, k).clone())
        .collect();
    Ok(ExtensionInterval {
        k,
        lo: S::min_of(&ratios).expect("n >= 2"),
        hi: S::max_of(&ratios).expect("n >= 2"),
    })
}

pub fn extend_one<S: Scalar>(
    a: &ReciprocalMatrix<S>,
    w_minus_k: &WeightVector<S>,
    k: usize,
    w_k: &S,
) -> Result<bool> {
    Ok(extension_interval(a, w_minus_k, k)?.contains(w_k))
}

/// Indices `i` (0-based, ascending) with `w(i)` efficient for `A(i)`.
pub fn subvector_efficiency_profile<S: Scalar>(
    a: &ReciprocalMatrix<S>,
    w: &WeightVector<S>,
) -> Result<Vec<usize>> {
    check_dims(a, w)?;
    let mut out = Vec::new();
    for i in 0..a.n() {
        if efficient(&a.delete(i), &w.delete(i))? {
            out.push(i);
        }
    }
    Ok(out)
}

/// Result of [`equal_tail_reduce`].
#[derive(Clone, Debug, PartialEq)]
pub struct TailReduction<S> {
    pub matrix: ReciprocalMatrix<S>,
    pub vector: WeightVector<S>,
    /// Deleted index (0-based, canonical coordinates).
    pub removed: usize,
}

/// Deletes the last tail index whose entry repeats an earlier tail entry.
/// `w` is in the canonical coordinates of `form`; efficiency of the reduced
/// pair is equivalent to that of the original.
pub fn equal_tail_reduce<S: Scalar>(
    form: &BlockPerturbedForm<S>,
    w: &WeightVector<S>,
) -> Result<TailReduction<S>> {
    let (s, n) = (form.s(), form.n());
    if w.len() != n {
        return Err(PcmError::DimensionMismatch {
            expected: n,
            found: w.len(),
        });
    }
    let removed = (s..n)
        .rev()
        .find(|&p| (s..p).any(|q| w[q] == w[p]))
        .ok_or(PcmError::NoEqualTailPair)?;
    let matrix = ReciprocalMatrix::block_perturbed(form.block(), n - 1)?;
    Ok(TailReduction {
        matrix,
        vector: w.delete(removed),
        removed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d)
    }

    fn ints(v: &[i64]) -> WeightVector<Rational> {
        WeightVector::from_ints(v).unwrap()
    }

    fn cc() -> ReciprocalMatrix<Rational> {
        ReciprocalMatrix::from_upper(4, &[q(2, 1), q(3, 1), q(1, 1), q(1, 2), q(1, 1), q(1, 1)])
            .unwrap()
    }

    fn c5(x: i64) -> ReciprocalMatrix<Rational> {
        ReciprocalMatrix::from_upper(5, &vec![q(x, 1); 10]).unwrap()
    }

    #[test]
    fn complete_digraph_for_ones() {
        let g = build_digraph(&ReciprocalMatrix::<Rational>::ones(3), &ints(&[1, 1, 1])).unwrap();
        assert_eq!(g.edges().len(), 6);
    }

    #[test]
    fn cc_verdicts() {
        let c = cc();
        assert!(is_efficient(&c, &ints(&[13, 8, 7, 12]))
            .unwrap()
            .is_efficient());
        assert!(is_efficient(&c, &ints(&[3, 2, 1, 2]))
            .unwrap()
            .is_efficient());
        let head = c.principal(&[0, 1, 2]);
        let verdict = is_efficient(&head, &ints(&[3, 2, 1])).unwrap();
        assert!(!verdict.is_efficient());
        let dom = verdict.dominator().unwrap();
        assert_eq!(
            dominance_compare(&head, &ints(&[3, 2, 1]), dom).unwrap(),
            Dominance::VDominates
        );
    }

    #[test]
    fn dimension_mismatch() {
        assert_eq!(
            is_efficient(&cc(), &ints(&[1, 2, 3])).unwrap_err(),
            PcmError::DimensionMismatch {
                expected: 4,
                found: 3
            }
        );
    }

    #[test]
    fn columns_of_consistent_matrix_are_efficient() {
        let a = ReciprocalMatrix::from_weights(&ints(&[2, 3, 5, 7]));
        for j in 0..4 {
            assert!(is_efficient(&a, &a.column(j)).unwrap().is_efficient());
        }
        assert!(!is_efficient(&a, &ints(&[1, 1, 1, 1]))
            .unwrap()
            .is_efficient());
    }

    #[test]
    fn scale_is_irrelevant_to_dominance() {
        let c = cc();
        let w = ints(&[3, 2, 1, 2]);
        assert_eq!(
            dominance_compare(&c, &w, &w.scaled(&q(2, 1))).unwrap(),
            Dominance::Equal
        );
    }

    #[test]
    fn dominating_vector_rejects_bad_witness() {
        let c = cc();
        let w = ints(&[3, 2, 1, 2]);
        assert_eq!(
            construct_dominating_vector(&c, &w, &[0]),
            Err(PcmError::InvalidWitness(vec![0]))
        );
        let head = c.principal(&[0, 1, 2]);
        let w3 = ints(&[3, 2, 1]);
        let verdict = is_efficient(&head, &w3).unwrap();
        let source = verdict.source_set().unwrap().to_vec();
        let v = construct_dominating_vector(&head, &w3, &source).unwrap();
        assert_eq!(
            dominance_compare(&head, &w3, &v).unwrap(),
            Dominance::VDominates
        );
        assert_eq!(
            dominance_compare(&head, &v, &w3).unwrap(),
            Dominance::WDominates
        );
    }

    #[test]
    fn extension_intervals_for_c5() {
        let a = c5(3);
        let iv = extension_interval(&a, &ints(&[7, 3, 2, 1]), 4).unwrap();
        assert_eq!((iv.lo.clone(), iv.hi.clone()), (q(1, 3), q(7, 3)));
        let w = WeightVector::new(vec![q(7, 1), q(3, 1), q(2, 1), q(7, 3)]).unwrap();
        let iv = extension_interval(&a, &w, 4).unwrap();
        assert_eq!((iv.lo.clone(), iv.hi.clone()), (q(2, 3), q(7, 3)));
        assert!(extend_one(&a, &w, 4, &q(2, 3)).unwrap());
        assert!(!extend_one(&a, &w, 4, &q(1, 2)).unwrap());
        assert_eq!(
            extension_interval(&a, &ints(&[1, 1, 1, 9]), 4),
            Err(PcmError::SubvectorNotEfficient(4))
        );
    }

    #[test]
    fn consistent_extension_is_a_point() {
        let w = ints(&[4, 2, 6]);
        let a = ReciprocalMatrix::from_weights(&w);
        for k in 0..3 {
            let iv = extension_interval(&a, &w.delete(k), k).unwrap();
            assert_eq!(iv.lo, iv.hi);
            assert_eq!(iv.lo, w[k]);
        }
    }

    #[test]
    fn float_dominator_survives_rounding() {
        let a = cc().to_f64().principal(&[0, 1, 2]);
        let w = WeightVector::new(vec![3.0, 2.0, 1.0]).unwrap();
        let verdict = is_efficient(&a, &w).unwrap();
        let v = verdict.dominator().unwrap();
        assert_eq!(dominance_compare(&a, &w, v).unwrap(), Dominance::VDominates);
    }

    #[test]
    fn tail_reduction() {
        let b = cc().principal(&[0, 1, 2]);
        let form = BlockPerturbedForm::canonical(b.clone(), 6).unwrap();
        let u = ints(&[13, 8, 7, 12, 7, 7]);
        let red = equal_tail_reduce(&form, &u).unwrap();
        assert_eq!(red.removed, 5);
        assert_eq!(red.vector, ints(&[13, 8, 7, 12, 7]));
        assert_eq!(
            red.matrix,
            ReciprocalMatrix::block_perturbed(&b, 5).unwrap()
        );
        assert_eq!(
            efficient(&form.matrix(), &u).unwrap(),
            efficient(&red.matrix, &red.vector).unwrap()
        );
        assert_eq!(
            equal_tail_reduce(&form, &ints(&[13, 8, 7, 12, 9, 7])),
            Err(PcmError::NoEqualTailPair)
        );
        let two = BlockPerturbedForm::canonical(cc().principal(&[0, 1]), 5).unwrap();
        let red = equal_tail_reduce(&two, &ints(&[2, 1, 3, 5, 5])).unwrap();
        assert_eq!(red.matrix.n(), 4);
    }

    #[test]
    fn verdict_json_shape() {
        let head = cc().principal(&[0, 1, 2]);
        let v = is_efficient(&head, &ints(&[3, 2, 1])).unwrap().to_json();
        assert_eq!(v["status"], "inefficient");
        assert!(v["source_set"].is_array());
        assert!(v["dominator"].is_array());
        let e = is_efficient(&cc(), &ints(&[3, 2, 1, 2])).unwrap().to_json();
        assert_eq!(e["status"], "efficient");
        assert_eq!(e["scc_partition"], json!([[1, 2, 3, 4]]));
        assert!(e.get("dominator").is_none());
    }
}
