//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs sequentially with fixed seeds.

use std::cell::Cell;
use std::time::Instant;

use pcm_core::blockpert::{
    constant_block_class_check, constant_block_sample_head, constant_matrix, lcompl_membership,
    three_block_generate, three_block_membership, three_by_three_is_efficient,
    two_block_full_set_check, two_block_is_efficient, two_block_sample, ConstantBlockMatrix,
    ThreeBlockMatrix, TwoBlockMatrix,
};
use pcm_core::efficiency::{
    dominance_compare, equal_tail_reduce, is_efficient, subvector_efficiency_profile, Dominance,
};
use pcm_core::matrix::{BlockPerturbedForm, MonomialSimilarity, ReciprocalMatrix, WeightVector};
use pcm_core::oracle::{exhaustive_small_equivalence, Contradiction, EquivalenceConfig, GridSpec};
use pcm_core::perron::{
    constant_block_perron_check, perron, tail_structure_within, three_block_identities,
    three_block_sufficient,
};
use pcm_core::reproduce;
use pcm_core::sampling::{
    log_uniform, random_int_vector, random_permutation, random_saaty_matrix, saaty_value,
    sample_closed, sample_outside,
};
use pcm_core::scalar::{Rational, Scalar, TAU_PERRON};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = Rational;

thread_local! {
    static INEFFICIENT: Cell<usize> = const { Cell::new(0) };
    static CERT_FAILURES: Cell<usize> = const { Cell::new(0) };
}

/// Digraph verdict; every inefficient verdict has its certificate confirmed.
fn audited<S: Scalar>(a: &ReciprocalMatrix<S>, w: &WeightVector<S>) -> bool {
    let v = is_efficient(a, w).expect("valid pair");
    if !v.is_efficient() {
        INEFFICIENT.with(|c| c.set(c.get() + 1));
        let d = v.dominator().expect("certificate");
        if dominance_compare(a, w, d).expect("valid pair") != Dominance::VDominates {
            CERT_FAILURES.with(|c| c.set(c.get() + 1));
        }
    }
    v.is_efficient()
}

fn report(id: u32, pass: bool, title: &str, detail: String) -> bool {
    println!(
        "criterion {id}: {} | {title} | {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Weighted geometric mean of the columns, rounded to a rational.
fn gm_vector<R: Rng>(a: &ReciprocalMatrix<Q>, rng: &mut R) -> WeightVector<Q> {
    let n = a.n();
    let cols: Vec<usize> = (0..n).collect();
    let t: Vec<f64> = cols.iter().map(|_| rng.gen::<f64>() + 1e-3).collect();
    let total: f64 = t.iter().sum();
    let af = a.to_f64();
    let v = (0..n)
        .map(|i| {
            let log: f64 = (0..n).map(|j| af.get(i, j).ln() * t[j] / total).sum();
            Q::approximate(log.exp()).unwrap()
        })
        .collect();
    WeightVector::new(v).unwrap()
}

fn efficient_head<R: Rng>(b: &ReciprocalMatrix<Q>, rng: &mut R) -> WeightVector<Q> {
    for _ in 0..200 {
        let cand = match rng.gen_range(0..3) {
            0 => random_int_vector(b.n(), 9, rng),
            1 => gm_vector(b, rng),
            _ => b
                .column(rng.gen_range(0..b.n()))
                .scaled(&Q::from_ratio(rng.gen_range(1..=9), 1)),
        };
        if is_efficient(b, &cand).unwrap().is_efficient() {
            return cand;
        }
    }
    b.column(0)
}

fn criterion1() -> bool {
    let start = Instant::now();
    let checks = reproduce::table1().unwrap();
    let mut residual_ok = true;
    for row in reproduce::TABLE1 {
        let b = ReciprocalMatrix::from_upper(3, &[row.a12, row.a13, row.a23]).unwrap();
        let a = ReciprocalMatrix::block_perturbed(&b, 6).unwrap();
        let r = perron(&a).unwrap();
        residual_ok &= r.residual <= 1e-12;
        audited(&a, &r.vector);
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = checks.iter().filter(|c| c.pass).count();
    let pass = passed == checks.len() && checks.len() == 12 && residual_ok && elapsed < 1.0;
    report(
        1,
        pass,
        "tabulated three-block Perron verdicts and cycles",
        format!(
            "{passed}/{} checks, residuals <= 1e-12: {residual_ok}, {elapsed:.3}s",
            checks.len()
        ),
    )
}

fn criterion2() -> bool {
    let checks = reproduce::examples().unwrap();
    let failed: Vec<_> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.clone())
        .collect();
    report(
        2,
        failed.is_empty(),
        "example fixtures, exact equality",
        format!(
            "{}/{} match{}",
            checks.len() - failed.len(),
            checks.len(),
            if failed.is_empty() {
                String::new()
            } else {
                format!(", failed: {failed:?}")
            }
        ),
    )
}

struct Tally {
    mismatches: usize,
    yes: usize,
    no: usize,
}

impl Tally {
    fn new() -> Self {
        Self {
            mismatches: 0,
            yes: 0,
            no: 0,
        }
    }

    fn record(&mut self, closed_form: bool, digraph: bool) {
        if closed_form != digraph {
            self.mismatches += 1;
        }
        if digraph {
            self.yes += 1;
        } else {
            self.no += 1;
        }
    }

    fn ok(&self) -> bool {
        self.mismatches == 0 && self.yes > 0 && self.no > 0
    }
}

impl std::fmt::Display for Tally {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} mismatches ({} efficient, {} not)",
            self.mismatches, self.yes, self.no
        )
    }
}

fn criterion3() -> bool {
    const N: usize = 1000;
    let mut r = rng(3);

    let mut two = Tally::new();
    let mut routes_agree = true;
    for _ in 0..N {
        let x: Q = saaty_value(&mut r);
        let n = r.gen_range(3..=7);
        let m = TwoBlockMatrix::new(x, n).unwrap();
        let w = match r.gen_range(0..4) {
            0 | 1 => two_block_sample(&m, &mut r),
            2 => random_int_vector(n, 9, &mut r),
            _ => {
                let w = two_block_sample(&m, &mut r);
                let k = r.gen_range(0..n);
                let mut v = w.into_vec();
                v[k] = sample_outside(&v[k].clone(), &v[k].clone(), &mut r);
                WeightVector::new(v).unwrap()
            }
        };
        two.record(
            two_block_is_efficient(&m, &w).unwrap(),
            audited(&m.matrix(), &w),
        );
        routes_agree &= two_block_full_set_check(&m, &w).unwrap().agree();
    }

    let mut three = Tally::new();
    for _ in 0..N {
        let b: ReciprocalMatrix<Q> = random_saaty_matrix(3, &mut r);
        let w = if r.gen_bool(0.5) {
            random_int_vector(3, 9, &mut r)
        } else {
            gm_vector(&b, &mut r)
        };
        three.record(
            three_by_three_is_efficient(&b, &w).unwrap(),
            audited(&b, &w),
        );
    }

    let mut ext = Tally::new();
    for _ in 0..N {
        let s = r.gen_range(2..=4);
        let n = r.gen_range(s + 1..=8);
        let b: ReciprocalMatrix<Q> = random_saaty_matrix(s, &mut r);
        let form = BlockPerturbedForm::canonical(b.clone(), n).unwrap();
        let head = efficient_head(&b, &mut r);
        let (lo, hi) = (head.min(), head.max());
        let mut v = head.into_vec();
        for _ in s..n {
            v.push(if r.gen_bool(0.85) {
                sample_closed(&lo, &hi, &mut r)
            } else {
                sample_outside(&lo, &hi, &mut r)
            });
        }
        let w = WeightVector::new(v).unwrap();
        ext.record(
            lcompl_membership(&form, &w).unwrap(),
            audited(&form.matrix(), &w),
        );
    }

    let mut route = Tally::new();
    for _ in 0..N {
        let b: ReciprocalMatrix<Q> = random_saaty_matrix(3, &mut r);
        let n = r.gen_range(4..=8);
        let tb = ThreeBlockMatrix::new(b.clone(), n).unwrap();
        let a4 = ReciprocalMatrix::block_perturbed(&b, 4).unwrap();
        let w = match r.gen_range(0..3) {
            0 => random_int_vector(n, 9, &mut r),
            _ => {
                let mut seed_rng = rng(r.gen());
                let cands: Vec<_> = (0..50).map(|_| gm_vector(&a4, &mut seed_rng)).collect();
                let g = three_block_generate(&tb, cands, &mut r)
                    .next()
                    .expect("some efficient candidate");
                let mut v = g.vector.into_vec();
                if r.gen_bool(0.5) {
                    let k = r.gen_range(3..n);
                    v[k] = sample_outside(&g.tail_bounds.0, &g.tail_bounds.1, &mut r);
                }
                WeightVector::new(v).unwrap()
            }
        };
        route.record(
            three_block_membership(&tb, &w).unwrap().member,
            audited(&tb.matrix(), &w),
        );
    }

    let pass = two.ok() && three.ok() && ext.ok() && route.ok() && routes_agree;
    report(
        3,
        pass,
        "closed forms vs digraph, 1000 instances each",
        format!("S(x): {two}, routes agree: {routes_agree}; 3x3: {three}; tail bounds: {ext}; 3-block routes: {route}"),
    )
}

fn criterion4_extra() {
    // dedicated batch so the tally does not depend on the other suites alone
    let mut r = rng(4);
    for _ in 0..4000 {
        let n = r.gen_range(3..=8);
        let a: ReciprocalMatrix<Q> = random_saaty_matrix(n, &mut r);
        let w = random_int_vector(n, 9, &mut r);
        audited(&a, &w);
        let af = a.to_f64();
        let wf = WeightVector::new((0..n).map(|_| log_uniform::<f64, _>(9.0, &mut r)).collect())
            .unwrap();
        audited(&af, &wf);
    }
}

fn criterion4() -> bool {
    let inefficient = INEFFICIENT.with(Cell::get);
    let failures = CERT_FAILURES.with(Cell::get);
    report(
        4,
        failures == 0 && inefficient >= 5000,
        "every inefficient verdict carries a confirmed dominator",
        format!("{inefficient} inefficient verdicts, {failures} certificate failures"),
    )
}

fn criterion5() -> bool {
    let start = Instant::now();
    let mut total = 0;
    let mut contradictions = 0;
    let mut detail = Vec::new();
    for (size, seed) in [(3usize, 51u64), (4, 52)] {
        let cfg = EquivalenceConfig {
            trials: 500,
            sizes: vec![size],
            grid: GridSpec::new(2.0, 6).unwrap(),
        };
        let rep = exhaustive_small_equivalence(&cfg, &mut rng(seed)).unwrap();
        total += rep.trials;
        contradictions += rep.contradictions.len();
        INEFFICIENT.with(|c| c.set(c.get() + rep.inefficient));
        let cert_failures = rep
            .contradictions
            .iter()
            .filter(|c| c.kind == Contradiction::CertificateFailed)
            .count();
        CERT_FAILURES.with(|c| c.set(c.get() + cert_failures));
        detail.push(format!(
            "n={size}: {} efficient, {} not, {} contradictions",
            rep.efficient,
            rep.inefficient,
            rep.contradictions.len()
        ));
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        5,
        contradictions == 0 && total == 1000 && elapsed < 60.0,
        "oracle cross-check, grid rho = 2, m = 6",
        format!("{}; {elapsed:.1}s", detail.join("; ")),
    )
}

fn criterion6() -> bool {
    let grid: Vec<f64> = (0..20)
        .map(|k| 9f64.powf(2.0 * k as f64 / 19.0 - 1.0))
        .collect();
    let mut matched = [0usize; 3];
    let mut violations = 0;
    let mut identity_failures = 0;
    let mut tail_failures = 0;
    for &n in &[4usize, 6, 8] {
        for &a12 in &grid {
            for &a13 in &grid {
                for &a23 in &grid {
                    let tb = ThreeBlockMatrix::from_entries(a12, a13, a23, n).unwrap();
                    let norm = tb.normalized();
                    let cond = three_block_sufficient(norm.block()).unwrap();
                    let Some(c) = cond.matched else { continue };
                    matched[c.number() as usize - 1] += 1;
                    let a = tb.matrix();
                    let r = perron(&a).unwrap();
                    if !audited(&a, &r.vector) {
                        violations += 1;
                    }
                    let rn = perron(&norm.matrix()).unwrap();
                    if !tail_structure_within(&norm.form(), &rn, 1e-10).equal {
                        tail_failures += 1;
                    }
                    let bound = 1e-8 * rn.lambda * rn.vector.max();
                    if three_block_identities(norm.block(), n, &rn)
                        .iter()
                        .any(|x| x.abs() > bound)
                    {
                        identity_failures += 1;
                    }
                }
            }
        }
    }
    let total: usize = matched.iter().sum();
    report(
        6,
        violations == 0 && total > 0 && identity_failures == 0 && tail_failures == 0,
        "3-block Perron sufficient conditions, 20^3 grid, n in {4, 6, 8}",
        format!(
            "{total} matched (cond1 {}, cond2 {}, cond3 {}), {violations} violations, identity failures {identity_failures}, tail failures {tail_failures}",
            matched[0], matched[1], matched[2]
        ),
    )
}

fn criterion7() -> bool {
    let mut r = rng(7);
    let mut perron_failures = 0;
    let mut tail_failures = 0;
    for _ in 0..200 {
        let x: f64 = log_uniform(9.0, &mut r);
        let n = r.gen_range(3..=10);
        let s = r.gen_range(2..n);
        let m = ConstantBlockMatrix::new(x, s, n).unwrap();
        match constant_block_perron_check(&m) {
            Ok(c) => {
                if n > s + 1 && !tail_structure_within(&m.form().unwrap(), &c.perron, 1e-10).equal {
                    tail_failures += 1;
                }
            }
            Err(_) => perron_failures += 1,
        }
        let a = m.original_matrix();
        let ro = perron(&a).unwrap();
        if !audited(&a, &ro.vector) {
            perron_failures += 1;
        }
        let form = BlockPerturbedForm::canonical(constant_matrix(&m.original_x(), s), n).unwrap();
        if n > s + 1 && !tail_structure_within(&form, &ro, 1e-10).equal {
            tail_failures += 1;
        }
    }
    let mut class_failures = 0;
    for _ in 0..1000 {
        let x: Q = if r.gen_bool(0.5) {
            saaty_value(&mut r)
        } else {
            log_uniform(9.0, &mut r)
        };
        let s = r.gen_range(3..=8);
        let m = ConstantBlockMatrix::new(x.clone(), s, s).unwrap();
        let w = constant_block_sample_head(&m, &mut r);
        if !constant_block_class_check(&m, &w).unwrap() || !audited(&constant_matrix(&x, s), &w) {
            class_failures += 1;
        }
    }
    report(
        7,
        perron_failures == 0 && class_failures == 0 && tail_failures == 0,
        "constant blocks: Perron efficiency, sufficient class, equal tails",
        format!("{perron_failures} Perron failures / 200, {class_failures} class failures / 1000, {tail_failures} tail failures"),
    )
}

fn criterion8() -> bool {
    let mut r = rng(8);
    let mut similarity_mismatches = 0;
    for _ in 0..500 {
        let n = r.gen_range(2..=7);
        let a: ReciprocalMatrix<Q> = random_saaty_matrix(n, &mut r);
        let w = if r.gen_bool(0.5) {
            random_int_vector(n, 9, &mut r)
        } else {
            gm_vector(&a, &mut r)
        };
        let diag = (0..n)
            .map(|_| Q::from_ratio(r.gen_range(1..=9), r.gen_range(1..=9)))
            .collect();
        let sim = MonomialSimilarity::new(diag, random_permutation(n, &mut r)).unwrap();
        let lhs = audited(&a, &w);
        let rhs = audited(&sim.apply(&a).unwrap(), &sim.transform(&w).unwrap());
        if lhs != rhs {
            similarity_mismatches += 1;
        }
    }

    let mut profile_failures = 0;
    let mut found = 0;
    while found < 1000 {
        let n = r.gen_range(4..=7);
        let a: ReciprocalMatrix<Q> = random_saaty_matrix(n, &mut r);
        let w = if r.gen_bool(0.5) {
            random_int_vector(n, 9, &mut r)
        } else {
            gm_vector(&a, &mut r)
        };
        if !audited(&a, &w) {
            continue;
        }
        found += 1;
        if subvector_efficiency_profile(&a, &w).unwrap().len() < 2 {
            profile_failures += 1;
        }
    }

    let mut reduction_mismatches = 0;
    let (mut yes, mut no) = (0, 0);
    for _ in 0..500 {
        let s = r.gen_range(2..=4);
        let n = r.gen_range(s + 2..=8);
        let b: ReciprocalMatrix<Q> = random_saaty_matrix(s, &mut r);
        let form = BlockPerturbedForm::canonical(b.clone(), n).unwrap();
        let head = efficient_head(&b, &mut r);
        let (lo, hi) = (head.min(), head.max());
        let mut v = head.into_vec();
        for _ in s..n {
            v.push(if r.gen_bool(0.8) {
                sample_closed(&lo, &hi, &mut r)
            } else {
                sample_outside(&lo, &hi, &mut r)
            });
        }
        let (p, q) = (r.gen_range(s..n), r.gen_range(s..n));
        if p != q {
            v[q] = v[p].clone();
        } else {
            v[s + 1] = v[s].clone();
        }
        let w = WeightVector::new(v).unwrap();
        let red = equal_tail_reduce(&form, &w).unwrap();
        let full = audited(&form.matrix(), &w);
        if full {
            yes += 1;
        } else {
            no += 1;
        }
        if full != audited(&red.matrix, &red.vector) {
            reduction_mismatches += 1;
        }
    }
    report(
        8,
        similarity_mismatches == 0 && profile_failures == 0 && reduction_mismatches == 0 && yes > 0 && no > 0,
        "similarity invariance, two efficient subvectors, equal-tail reduction",
        format!(
            "{similarity_mismatches} similarity mismatches / 500, {profile_failures} profile failures / 1000, {reduction_mismatches} reduction mismatches / 500 ({yes} efficient, {no} not)"
        ),
    )
}

fn main() {
    let start = Instant::now();
    let mut results = vec![criterion1(), criterion2(), criterion3()];
    criterion4_extra();
    let c5 = criterion5();
    let (c6, c7, c8) = (criterion6(), criterion7(), criterion8());
    // reported last: it aggregates the verdicts of every other suite
    let c4 = criterion4();
    results.extend([c4, c5, c6, c7, c8]);
    let passed = results.iter().filter(|&&p| p).count();
    println!(
        "acceptance: {passed}/{} criteria passed in {:.1}s (tau_perron = {TAU_PERRON:e})",
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if passed != results.len() {
        std::process::exit(1);
    }
}
