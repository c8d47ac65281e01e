//! Random instance helpers shared by the generators and the oracle.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::matrix::{ReciprocalMatrix, WeightVector};
use crate::scalar::Scalar;

/// Resolution of interior samples: `lo + (hi - lo) * k / 2^16`.
const INTERIOR_STEPS: i64 = 1 << 16;

/// Samples the closed interval `[lo, hi]`: each endpoint with probability
/// 0.1, otherwise a uniform interior point.
pub fn sample_closed<S: Scalar, R: Rng + ?Sized>(lo: &S, hi: &S, rng: &mut R) -> S {
    let u: f64 = rng.gen();
    if u < 0.1 || lo == hi {
        lo.clone()
    } else if u < 0.2 {
        hi.clone()
    } else {
        let k = rng.gen_range(1..INTERIOR_STEPS);
        lo.clone() + (hi.clone() - lo.clone()) * S::from_ratio(k, INTERIOR_STEPS)
    }
}

/// A positive value strictly outside `[lo, hi]`, below or above with equal odds.
pub fn sample_outside<S: Scalar, R: Rng + ?Sized>(lo: &S, hi: &S, rng: &mut R) -> S {
    let k = rng.gen_range(1..INTERIOR_STEPS);
    if rng.gen_bool(0.5) {
        lo.clone() * S::from_ratio(k, INTERIOR_STEPS)
    } else {
        hi.clone() * (S::one() + S::from_ratio(k, INTERIOR_STEPS))
    }
}

pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Uniform over the 17 values `1/9, ..., 1/2, 1, 2, ..., 9`.
pub fn saaty_value<S: Scalar, R: Rng + ?Sized>(rng: &mut R) -> S {
    let k: i64 = rng.gen_range(-8..=8);
    match k {
        0 => S::one(),
        k if k > 0 => S::from_ratio(k + 1, 1),
        k => S::from_ratio(1, 1 - k),
    }
}

/// Reciprocal matrix whose upper entries are drawn by `entry`.
pub fn random_reciprocal<S: Scalar, R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    mut entry: impl FnMut(&mut R) -> S,
) -> ReciprocalMatrix<S> {
    let upper: Vec<S> = (0..n * (n - 1) / 2).map(|_| entry(rng)).collect();
    ReciprocalMatrix::from_upper(n, &upper).expect("positive entries")
}

pub fn random_saaty_matrix<S: Scalar, R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> ReciprocalMatrix<S> {
    random_reciprocal(n, rng, |r| saaty_value(r))
}

/// Integer weights uniform in `1..=max`.
pub fn random_int_vector<S: Scalar, R: Rng + ?Sized>(
    n: usize,
    max: i64,
    rng: &mut R,
) -> WeightVector<S> {
    WeightVector::new(
        (0..n)
            .map(|_| S::from_ratio(rng.gen_range(1..=max), 1))
            .collect(),
    )
    .expect("positive")
}

/// `exp(U(-ln r, ln r))` approximated on the backend.
pub fn log_uniform<S: Scalar, R: Rng + ?Sized>(max_ratio: f64, rng: &mut R) -> S {
    let l = max_ratio.ln();
    S::approximate(rng.gen_range(-l..=l).exp()).expect("finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use rand::SeedableRng;

    #[test]
    fn closed_samples_stay_inside_and_hit_endpoints() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let lo = Rational::from_ratio(1, 3);
        let hi = Rational::from_ratio(7, 3);
        let (mut at_lo, mut at_hi) = (0, 0);
        for _ in 0..2000 {
            let x = sample_closed(&lo, &hi, &mut rng);
            assert!(x >= lo && x <= hi);
            at_lo += (x == lo) as usize;
            at_hi += (x == hi) as usize;
        }
        assert!(at_lo > 100 && at_hi > 100);
        for _ in 0..200 {
            let x = sample_outside(&lo, &hi, &mut rng);
            assert!(x < lo || x > hi);
            assert!(x.is_positive());
        }
    }

    #[test]
    fn saaty_values_cover_the_scale() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..2000 {
            let x: f64 = saaty_value(&mut rng);
            seen.insert((x * 1000.0).round() as i64);
        }
        assert_eq!(seen.len(), 17);
    }
}
