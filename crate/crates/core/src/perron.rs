//! Perron eigenpairs of reciprocal matrices and the efficiency of the Perron
//! vector for block perturbed consistent matrices.

use serde_json::json;

use crate::blockpert::ConstantBlockMatrix;
use crate::efficiency::{is_efficient_with, EfficiencyVerdict};
use crate::error::{PcmError, Result};
use crate::matrix::{BlockPerturbedForm, ReciprocalMatrix, WeightVector};
use crate::scalar::{Scalar, TAU_EDGE, TAU_PERRON};

pub const DEFAULT_MAX_ITER: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct PerronResult {
    pub lambda: f64,
    /// Normalized so that the last entry is 1.
    pub vector: WeightVector<f64>,
    /// `max_i |(Aw)_i - lambda w_i| / (lambda w_i)`.
    pub residual: f64,
    pub iterations: usize,
}

impl PerronResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "lambda": self.lambda,
            "vector": self.vector.to_json(),
            "residual": self.residual,
            "iterations": self.iterations,
        })
    }
}

pub fn perron<S: Scalar>(a: &ReciprocalMatrix<S>) -> Result<PerronResult> {
    perron_with(a, TAU_PERRON, DEFAULT_MAX_ITER)
}

/// Power iteration from the all-ones vector.
pub fn perron_with<S: Scalar>(
    a: &ReciprocalMatrix<S>,
    tol: f64,
    max_iter: usize,
) -> Result<PerronResult> {
    let a = a.to_f64();
    let n = a.n();
    let mut w = vec![1.0; n];
    let mut y = vec![0.0; n];
    let mut prev = f64::NAN;
    for it in 1..=max_iter {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = a.row(i).iter().zip(&w).map(|(aij, wj)| aij * wj).sum();
        }
        let lambda = y.iter().sum::<f64>() / w.iter().sum::<f64>();
        let residual = y
            .iter()
            .zip(&w)
            .map(|(yi, wi)| (yi - lambda * wi).abs() / (lambda * wi))
            .fold(0.0, f64::max);
        if (lambda - prev).abs() < tol * lambda && residual < tol {
            return Ok(PerronResult {
                lambda,
                vector: WeightVector::new(w).expect("positive iterate"),
                residual,
                iterations: it,
            });
        }
        prev = lambda;
        let last = y[n - 1];
        for (wi, yi) in w.iter_mut().zip(&y) {
            *wi = yi / last;
        }
    }
    Err(PcmError::NoConvergence(max_iter))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TailStructure {
    pub equal: bool,
    /// `n = s + 1`: a single tail entry, nothing to compare.
    pub vacuous: bool,
}

/// Whether the last `n - s` entries of `r.vector` agree within
/// `10 * TAU_PERRON` relative to their maximum.
pub fn perron_tail_structure<S: Scalar>(
    form: &BlockPerturbedForm<S>,
    r: &PerronResult,
) -> TailStructure {
    tail_structure_within(form, r, 10.0 * TAU_PERRON)
}

pub fn tail_structure_within<S: Scalar>(
    form: &BlockPerturbedForm<S>,
    r: &PerronResult,
    tol: f64,
) -> TailStructure {
    let tail = &r.vector.as_slice()[form.s()..];
    if tail.len() <= 1 {
        return TailStructure {
            equal: true,
            vacuous: true,
        };
    }
    let hi = tail.iter().cloned().fold(f64::MIN, f64::max);
    let lo = tail.iter().cloned().fold(f64::MAX, f64::min);
    TailStructure {
        equal: hi - lo <= tol * hi,
        vacuous: false,
    }
}

/// Digraph verdict on the leading `(s+1)`-by-`(s+1)` pair only.
pub fn perron_efficiency_via_submatrix<S: Scalar>(
    form: &BlockPerturbedForm<S>,
    r: &PerronResult,
) -> Result<EfficiencyVerdict<f64>> {
    perron_efficiency_via_submatrix_with(form, r, TAU_EDGE)
}

pub fn perron_efficiency_via_submatrix_with<S: Scalar>(
    form: &BlockPerturbedForm<S>,
    r: &PerronResult,
    edge_tol: f64,
) -> Result<EfficiencyVerdict<f64>> {
    if r.vector.len() != form.n() {
        return Err(PcmError::DimensionMismatch {
            expected: form.n(),
            found: r.vector.len(),
        });
    }
    if !perron_tail_structure(form, r).equal {
        return Err(PcmError::StructureViolation);
    }
    let lead: Vec<usize> = (0..=form.s()).collect();
    let a = form.matrix().principal(&lead).to_f64();
    is_efficient_with(&a, &r.vector.subvector(&lead), edge_tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SufficientCondition {
    Cond1,
    Cond2,
    Cond3,
}

impl SufficientCondition {
    pub fn number(self) -> u8 {
        match self {
            Self::Cond1 => 1,
            Self::Cond2 => 2,
            Self::Cond3 => 3,
        }
    }

    /// Cycle the condition forces in the leading 4-by-4 digraph (0-based).
    pub fn cycle(self) -> [usize; 4] {
        match self {
            Self::Cond1 => [0, 3, 2, 1],
            Self::Cond2 => [0, 3, 1, 2],
            Self::Cond3 => [0, 1, 3, 2],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThreeBlockPerronConditions<S> {
    pub a12: S,
    pub a13: S,
    pub a23: S,
    /// `a13 - a23 a12`.
    pub q: S,
    /// First matching condition, checked in order 1, 2, 3.
    pub matched: Option<SufficientCondition>,
}

/// Evaluates the three sufficient conditions on a 3-by-3 block with `a13 >= 1`.
pub fn three_block_sufficient<S: Scalar>(
    b: &ReciprocalMatrix<S>,
) -> Result<ThreeBlockPerronConditions<S>> {
    if b.n() != 3 {
        return Err(PcmError::DimensionMismatch {
            expected: 3,
            found: b.n(),
        });
    }
    let (a12, a13, a23) = (
        b.get(0, 1).clone(),
        b.get(0, 2).clone(),
        b.get(1, 2).clone(),
    );
    let one = S::one();
    if a13 < one {
        return Err(PcmError::NotNormalized);
    }
    let zero = S::zero();
    let q = a13.clone() - a23.clone() * a12.clone();
    let matched = if a12 >= one && a23 >= one && q <= zero {
        Some(SufficientCondition::Cond1)
    } else if a12 >= one && a23 <= one && q >= zero {
        Some(SufficientCondition::Cond2)
    } else if a12 <= one && a23 >= one && q >= zero {
        Some(SufficientCondition::Cond3)
    } else {
        None
    };
    Ok(ThreeBlockPerronConditions {
        a12,
        a13,
        a23,
        q,
        matched,
    })
}

/// Left-hand sides of the six row-combination identities for `A_n(B)`, `B` in
/// `PC_3`, evaluated at `(lambda, w)`. In the order `r1-r4`, `r4-r3`,
/// `r2-r4`, `r1-a12 r2`, `r2-a23 r3`, `r1-a13 r3`. All vanish at the Perron
/// pair.
pub fn three_block_identities(b: &ReciprocalMatrix<f64>, n: usize, r: &PerronResult) -> [f64; 6] {
    let (a12, a13, a23) = (*b.get(0, 1), *b.get(0, 2), *b.get(1, 2));
    let l = r.lambda;
    let w = r.vector.as_slice();
    let (w1, w2, w3, w4) = (w[0], w[1], w[2], w[3]);
    let m = (n - 3) as f64;
    [
        l * (w4 - w1) + (a12 - 1.0) * w2 + (a13 - 1.0) * w3,
        l * (w3 - w4) + (1.0 - 1.0 / a13) * w1 + (1.0 - 1.0 / a23) * w2,
        l * (w4 - w2) + (1.0 / a12 - 1.0) * w1 + (a23 - 1.0) * w3,
        l * (a12 * w2 - w1) + (a13 - a23 * a12) * w3 + (1.0 - a12) * m * w4,
        l * (a23 * w3 - w2) + (1.0 / a12 - a23 / a13) * w1 + (1.0 - a23) * m * w4,
        l * (a13 * w3 - w1) + (a12 - a13 / a23) * w2 + (1.0 - a13) * m * w4,
    ]
}

/// Perron vector of `A_n(C_s(x))` with the witness cycle
/// `s+1 -> s -> ... -> 1 -> s+1` of the leading block.
#[derive(Clone, Debug)]
pub struct ConstantBlockPerron {
    /// Eigenpair of the normalized matrix (`x >= 1`).
    pub perron: PerronResult,
    pub verdict: EfficiencyVerdict<f64>,
    /// 0-based, in the normalized coordinates.
    pub cycle: Vec<usize>,
}

pub fn constant_block_perron_check<S: Scalar>(
    m: &ConstantBlockMatrix<S>,
) -> Result<ConstantBlockPerron> {
    if m.n() <= m.s() {
        return Err(PcmError::BadShape(format!(
            "need n > s, got s = {}, n = {}",
            m.s(),
            m.n()
        )));
    }
    let a = m.matrix().to_f64();
    let perron = perron(&a)?;
    let s = m.s();
    let cycle: Vec<usize> = (0..=s).rev().collect();
    let lead: Vec<usize> = (0..=s).collect();
    let g = crate::efficiency::build_digraph(&a.principal(&lead), &perron.vector.subvector(&lead))?;
    if !g.contains_cycle(&cycle) {
        return Err(PcmError::TheoremViolation(format!(
            "cycle missing for x = {}, s = {s}, n = {}",
            m.x(),
            m.n()
        )));
    }
    let verdict = is_efficient_with(&a, &perron.vector, TAU_EDGE)?;
    if !verdict.is_efficient() {
        return Err(PcmError::TheoremViolation(
            "Perron vector not efficient".into(),
        ));
    }
    Ok(ConstantBlockPerron {
        perron,
        verdict,
        cycle,
    })
}
