//! Brute-force dominance search over a multiplicative lattice, used to
//! cross-check the digraph test.
//!
//! A lattice hit proves inefficiency. Finding nothing proves nothing.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::efficiency::{construct_dominating_vector, dominance_compare, is_efficient, Dominance};
use crate::error::{PcmError, Result};
use crate::matrix::{ReciprocalMatrix, WeightVector};
use crate::sampling::{random_int_vector, random_saaty_matrix};
use crate::scalar::{Rational, Scalar};

pub const MAX_GRID_CANDIDATES: u64 = 10_000_000;

/// Lattice `v_i = w_i rho^(k_i/m)`, `k_i in -m..=m`, with `v_1 = w_1` fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub rho: f64,
    pub steps: u32,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { rho: 2.0, steps: 6 }
    }
}

impl GridSpec {
    pub fn new(rho: f64, steps: u32) -> Result<Self> {
        if !(rho > 1.0 && rho.is_finite()) {
            return Err(PcmError::InvalidSpec(format!(
                "grid ratio must exceed 1, got {rho}"
            )));
        }
        if steps == 0 {
            return Err(PcmError::InvalidSpec("grid needs at least one step".into()));
        }
        Ok(Self { rho, steps })
    }

    /// `(2m+1)^(n-1)`, saturating.
    pub fn candidate_count(&self, n: usize) -> u64 {
        let side = 2 * u64::from(self.steps) + 1;
        (1..n).fold(1u64, |acc, _| acc.saturating_mul(side))
    }
}

/// A lattice point strictly dominating `w`, if any. The first one in lattice
/// order is returned.
pub fn grid_dominator_search<S: Scalar>(
    a: &ReciprocalMatrix<S>,
    w: &WeightVector<S>,
    grid: &GridSpec,
) -> Result<Option<WeightVector<S>>> {
    let n = a.n();
    if w.len() != n {
        return Err(PcmError::DimensionMismatch {
            expected: n,
            found: w.len(),
        });
    }
    let count = grid.candidate_count(n);
    if count > MAX_GRID_CANDIDATES {
        return Err(PcmError::GridTooLarge(count));
    }
    let m = grid.steps as i64;
    let side = (2 * m + 1) as u64;
    let factors: Vec<S> = (-m..=m)
        .map(|k| {
            if k == 0 {
                S::one()
            } else {
                S::approximate(grid.rho.powf(k as f64 / m as f64)).expect("finite factor")
            }
        })
        .collect();
    let factors_f: Vec<f64> = factors.iter().map(Scalar::to_f64).collect();
    let af = a.to_f64();
    let wf: Vec<f64> = w.iter().map(Scalar::to_f64).collect();
    let w_err: Vec<f64> = (0..n * n)
        .map(|ij| (af.get(ij / n, ij % n) - wf[ij / n] / wf[ij % n]).abs())
        .collect();

    let digits = |mut idx: u64| -> Vec<usize> {
        let mut d = vec![m as usize; n];
        for slot in d.iter_mut().skip(1) {
            *slot = (idx % side) as usize;
            idx /= side;
        }
        d
    };
    // Loose float screen; exact dominance implies it passes.
    let passes_screen = |d: &[usize]| -> bool {
        let v: Vec<f64> = (0..n).map(|i| wf[i] * factors_f[d[i]]).collect();
        (0..n).all(|i| {
            (0..n).all(|j| {
                i == j || {
                    let aij = *af.get(i, j);
                    (aij - v[i] / v[j]).abs() <= w_err[i * n + j] + 1e-9 * aij
                }
            })
        })
    };
    let hit = (0..count).into_par_iter().find_first(|&idx| {
        let d = digits(idx);
        if d.iter().all(|&k| k == m as usize) || !passes_screen(&d) {
            return false;
        }
        let v = candidate(w, &factors, &d);
        matches!(dominance_compare(a, w, &v), Ok(Dominance::VDominates))
    });
    Ok(hit.map(|idx| candidate(w, &factors, &digits(idx))))
}

fn candidate<S: Scalar>(w: &WeightVector<S>, factors: &[S], d: &[usize]) -> WeightVector<S> {
    let v = w
        .iter()
        .zip(d)
        .map(|(wi, &k)| wi.clone() * factors[k].clone())
        .collect();
    WeightVector::new(v).expect("positive")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Contradiction {
    /// Digraph says inefficient, but the certificate is not a dominator.
    CertificateFailed,
    /// Digraph says inefficient, but the lattice holds no dominator.
    GridMissed,
    /// Digraph says efficient, yet the lattice holds a dominator.
    GridFoundDominator,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairCheck<S> {
    pub digraph_efficient: bool,
    pub certificate: Option<WeightVector<S>>,
    pub grid_dominator: Option<WeightVector<S>>,
    pub contradiction: Option<Contradiction>,
}

/// Runs the digraph test, the certificate and the lattice search on one pair.
pub fn check_pair<S: Scalar>(
    a: &ReciprocalMatrix<S>,
    w: &WeightVector<S>,
    grid: &GridSpec,
) -> Result<PairCheck<S>> {
    let verdict = is_efficient(a, w)?;
    let grid_dominator = grid_dominator_search(a, w, grid)?;
    let (certificate, contradiction) = match verdict.source_set() {
        None => (
            None,
            grid_dominator
                .is_some()
                .then_some(Contradiction::GridFoundDominator),
        ),
        Some(source) => {
            let cert = construct_dominating_vector(a, w, source)?;
            let cert_ok = dominance_compare(a, w, &cert)? == Dominance::VDominates;
            let contradiction = if !cert_ok {
                Some(Contradiction::CertificateFailed)
            } else if grid_dominator.is_none() {
                Some(Contradiction::GridMissed)
            } else {
                None
            };
            (Some(cert), contradiction)
        }
    };
    Ok(PairCheck {
        digraph_efficient: verdict.is_efficient(),
        certificate,
        grid_dominator,
        contradiction,
    })
}

#[derive(Clone, Debug)]
pub struct EquivalenceConfig {
    pub trials: usize,
    pub sizes: Vec<usize>,
    pub grid: GridSpec,
}

impl Default for EquivalenceConfig {
    fn default() -> Self {
        Self {
            trials: 500,
            sizes: vec![3, 4],
            grid: GridSpec::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ContradictionRecord {
    pub trial: usize,
    pub matrix: ReciprocalMatrix<Rational>,
    pub vector: WeightVector<Rational>,
    pub kind: Contradiction,
}

#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub trials: usize,
    pub efficient: usize,
    pub inefficient: usize,
    pub contradictions: Vec<ContradictionRecord>,
    pub runtime_ms: u128,
}

impl EquivalenceReport {
    pub fn to_json(&self) -> serde_json::Value {
        let contradictions: Vec<_> = self
            .contradictions
            .iter()
            .map(|c| {
                json!({
                    "trial": c.trial,
                    "kind": format!("{:?}", c.kind),
                    "matrix": c.matrix.rows().iter().map(|r| r.iter().map(Scalar::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "vector": c.vector.to_json(),
                })
            })
            .collect();
        json!({
            "trials": self.trials,
            "efficient": self.efficient,
            "inefficient": self.inefficient,
            "contradictions": contradictions,
            "runtime_ms": self.runtime_ms,
        })
    }
}

/// Random Saaty-scale matrices with integer weights in `1..=9`, sizes cycled
/// from `config.sizes`, checked exactly. On these instances the certificate
/// scaling is at most `9/10`, so a `(2, 6)` lattice always contains a
/// dominator of an inefficient vector.
pub fn exhaustive_small_equivalence<R: Rng + ?Sized>(
    config: &EquivalenceConfig,
    rng: &mut R,
) -> Result<EquivalenceReport> {
    if config.sizes.is_empty() {
        return Err(PcmError::InvalidSpec("no sizes given".into()));
    }
    let start = Instant::now();
    let mut report = EquivalenceReport {
        trials: config.trials,
        efficient: 0,
        inefficient: 0,
        contradictions: Vec::new(),
        runtime_ms: 0,
    };
    for trial in 0..config.trials {
        let n = config.sizes[trial % config.sizes.len()];
        let a: ReciprocalMatrix<Rational> = random_saaty_matrix(n, rng);
        let w: WeightVector<Rational> = random_int_vector(n, 9, rng);
        let check = check_pair(&a, &w, &config.grid)?;
        if check.digraph_efficient {
            report.efficient += 1;
        } else {
            report.inefficient += 1;
        }
        if let Some(kind) = check.contradiction {
            report.contradictions.push(ContradictionRecord {
                trial,
                matrix: a,
                vector: w,
                kind,
            });
        }
    }
    report.runtime_ms = start.elapsed().as_millis();
    Ok(report)
}
