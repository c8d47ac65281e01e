use pcm_core::efficiency::{dominance_compare, efficient, is_efficient, Dominance};
use pcm_core::matrix::{MonomialSimilarity, ReciprocalMatrix, WeightVector};
use pcm_core::perron::perron;
use pcm_core::scalar::{Rational, Scalar};
use proptest::prelude::*;

type Q = Rational;

fn pair() -> impl Strategy<Value = (ReciprocalMatrix<Q>, WeightVector<Q>)> {
    (2usize..=6).prop_flat_map(|n| {
        let m = n * (n - 1) / 2;
        (
            prop::collection::vec((1i64..=9, 1i64..=9), m),
            prop::collection::vec(1i64..=20, n),
        )
            .prop_map(move |(upper, w)| {
                let upper: Vec<Q> = upper
                    .into_iter()
                    .map(|(p, q)| Q::from_ratio(p, q))
                    .collect();
                (
                    ReciprocalMatrix::from_upper(n, &upper).unwrap(),
                    WeightVector::from_ints(&w).unwrap(),
                )
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn verdict_is_scale_invariant((a, w) in pair(), c in 1i64..=50) {
        let scaled = w.scaled(&Q::from_ratio(c, 7));
        prop_assert_eq!(efficient(&a, &w).unwrap(), efficient(&a, &scaled).unwrap());
    }

    #[test]
    fn certificate_dominates((a, w) in pair()) {
        let v = is_efficient(&a, &w).unwrap();
        if let Some(d) = v.dominator() {
            prop_assert_eq!(dominance_compare(&a, &w, d).unwrap(), Dominance::VDominates);
            prop_assert!(!v.is_efficient());
        } else {
            prop_assert!(v.is_efficient());
        }
    }

    #[test]
    fn similarity_preserves_verdict((a, w) in pair(), seed in any::<u64>()) {
        let n = a.n();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left((seed as usize) % n);
        let diag = (0..n).map(|k| Q::from_ratio(((seed >> k) & 7) as i64 + 1, 3)).collect();
        let sim = MonomialSimilarity::new(diag, perm).unwrap();
        let b = sim.apply(&a).unwrap();
        let v = sim.transform(&w).unwrap();
        prop_assert_eq!(efficient(&a, &w).unwrap(), efficient(&b, &v).unwrap());
    }

    #[test]
    fn consistent_columns_are_efficient(w in prop::collection::vec(1i64..=30, 2..7), k in 0usize..6) {
        let w = WeightVector::<Q>::from_ints(&w).unwrap();
        let a = ReciprocalMatrix::from_weights(&w);
        prop_assert!(efficient(&a, &w).unwrap());
        prop_assert!(efficient(&a, &a.column(k % a.n())).unwrap());
    }

    #[test]
    fn perron_root_at_least_n((a, _) in pair()) {
        let r = perron(&a.to_f64()).unwrap();
        prop_assert!(r.lambda >= a.n() as f64 - 1e-9);
        prop_assert!(r.residual <= 1e-9);
    }

    #[test]
    fn float_backend_agrees_on_clear_cases((a, w) in pair()) {
        let exact = is_efficient(&a, &w).unwrap();
        let float = is_efficient(&a.to_f64(), &w.to_f64()).unwrap();
        // exact ties become float edges too, so only inefficiency with a margin must agree
        if float.is_efficient() != exact.is_efficient() {
            prop_assert!(float.is_efficient());
        }
    }
}

#[test]
fn three_by_three_dominator_matches_hand_computation() {
    let a =
        ReciprocalMatrix::<Q>::from_upper(3, &[Q::from_ratio(2, 1), Q::from_ratio(3, 1), Q::one()])
            .unwrap();
    let w = WeightVector::from_ints(&[3, 2, 1]).unwrap();
    let v = is_efficient(&a, &w).unwrap();
    assert!(!v.is_efficient());
    assert_eq!(v.source_set(), Some(&[1usize][..]));
    let d = v.dominator().unwrap();
    assert_eq!(
        d.as_slice(),
        &[Q::from_ratio(3, 1), Q::from_ratio(3, 2), Q::one()]
    );
    assert_eq!(dominance_compare(&a, &w, d).unwrap(), Dominance::VDominates);
}
