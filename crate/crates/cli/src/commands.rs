use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use pcm_core::blockpert::{
    constant_block_sample_head, constant_matrix, lcompl_sample, three_block_generate,
    two_block_sample, ConstantBlockMatrix, GeneratedVector, ThreeBlockMatrix, TwoBlockMatrix,
};
use pcm_core::efficiency::{build_digraph_with, efficient, is_efficient_with};
use pcm_core::io::{self, Backend, Literal, Loaded};
use pcm_core::matrix::{
    detect_minimal_block, invert_permutation, BlockPerturbedForm, ReciprocalMatrix, WeightVector,
};
use pcm_core::perron::{
    perron_tail_structure, perron_with, three_block_sufficient, DEFAULT_MAX_ITER,
};
use pcm_core::reproduce;
use pcm_core::sampling::log_uniform;
use pcm_core::scalar::{Rational, Scalar, TAU_CONS};
use pcm_core::PcmError;

use crate::{BackendArg, Config, GenerateKind, Target};

fn requested(b: BackendArg) -> Option<Backend> {
    match b {
        BackendArg::Auto => None,
        BackendArg::Exact => Some(Backend::Exact),
        BackendArg::Float => Some(Backend::Float),
    }
}

fn backend_name(b: Backend) -> &'static str {
    match b {
        Backend::Exact => "exact",
        Backend::Float => "float",
    }
}

fn status(efficient: bool) -> &'static str {
    if efficient {
        "efficient"
    } else {
        "inefficient"
    }
}

pub fn check(matrix: &Path, vector: &Path, cfg: &Config) -> Result<u8> {
    let m = io::read_matrix(matrix).with_context(|| format!("reading {}", matrix.display()))?;
    let v = io::read_vector(vector).with_context(|| format!("reading {}", vector.display()))?;
    match io::load(&m, Some(&v), requested(cfg.backend))? {
        Loaded::Exact(a, Some(w)) => check_with(&a, &w, Backend::Exact, cfg),
        Loaded::Float(a, Some(w)) => check_with(&a, &w, Backend::Float, cfg),
        _ => unreachable!("vector was supplied"),
    }
}

fn check_with<S: Scalar>(
    a: &ReciprocalMatrix<S>,
    w: &WeightVector<S>,
    backend: Backend,
    cfg: &Config,
) -> Result<u8> {
    let verdict = is_efficient_with(a, w, cfg.tol_edge)?;
    let mut out = verdict.to_json();
    out["backend"] = json!(backend_name(backend));
    cfg.out.record(&out)?;
    Ok(if verdict.is_efficient() { 0 } else { 1 })
}

pub fn perron(matrix: &Path, cfg: &Config) -> Result<u8> {
    let m = io::read_matrix(matrix).with_context(|| format!("reading {}", matrix.display()))?;
    let report = match io::load(&m, None, requested(cfg.backend))? {
        Loaded::Exact(a, _) => perron_report(&a, Backend::Exact, cfg)?,
        Loaded::Float(a, _) => perron_report(&a, Backend::Float, cfg)?,
    };
    cfg.out.record(&report)?;
    Ok(0)
}

/// Largest leading block for which we search a Hamiltonian cycle to list.
const CYCLE_SEARCH_MAX: usize = 12;

fn perron_report<S: Scalar>(
    a: &ReciprocalMatrix<S>,
    backend: Backend,
    cfg: &Config,
) -> Result<Value> {
    let r = perron_with(a, cfg.tol_perron, DEFAULT_MAX_ITER)?;
    let af = a.to_f64();
    let verdict = is_efficient_with(&af, &r.vector, cfg.tol_edge)?;
    let mut out = json!({
        "backend": backend_name(backend),
        "lambda": r.lambda,
        "vector": r.vector.to_json(),
        "residual": r.residual,
        "iterations": r.iterations,
        "verdict": status(verdict.is_efficient()),
        "source_set": verdict.source_set().map(|s| s.iter().map(|i| i + 1).collect::<Vec<_>>()),
        "consistent": a.is_consistent(TAU_CONS),
        "block": Value::Null,
        "structure_ok": Value::Null,
        "sufficient_condition": Value::Null,
        "cycle": Value::Null,
    });
    if a.is_consistent(TAU_CONS) {
        return Ok(out);
    }
    let detected =
        detect_minimal_block(a, TAU_CONS).ok_or_else(|| anyhow!("no block decomposition"))?;
    let form = &detected.form;
    let (n, s) = (form.n(), form.s());
    out["block"] = json!({
        "indices": detected.indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "size": s,
        "minimal": detected.minimal_guaranteed,
    });
    let canonical = perron_with(&form.matrix(), cfg.tol_perron, DEFAULT_MAX_ITER)?;
    let structure = perron_tail_structure(form, &canonical);
    out["structure_ok"] = json!(structure.equal);
    // canonical index c sits at original index order[c]
    let order = invert_permutation(form.back_map().perm());
    let lead: Vec<usize> = (0..=s).collect();
    let g = build_digraph_with(
        &form.matrix().principal(&lead).to_f64(),
        &canonical.vector.subvector(&lead),
        cfg.tol_edge,
    )?;
    let mut cycle: Option<Vec<usize>> = None;
    if s == 3 && n >= 4 {
        let tb = ThreeBlockMatrix::new(form.block().clone(), n)?;
        let normalized = tb.normalized();
        let cond = three_block_sufficient(normalized.block())?;
        out["sufficient_condition"] = json!({
            "a12": cond.a12.to_json(),
            "a13": cond.a13.to_json(),
            "a23": cond.a23.to_json(),
            "q": cond.q.to_json(),
            "reversed": normalized.is_reversed(),
            "matched": cond.matched.map(|c| c.number()),
        });
        if let Some(c) = cond.matched {
            let to_canonical = |i: usize| {
                if normalized.is_reversed() && i < 3 {
                    2 - i
                } else {
                    i
                }
            };
            let mapped: Vec<usize> = c.cycle().iter().map(|&i| to_canonical(i)).collect();
            if g.contains_cycle(&mapped) {
                cycle = Some(mapped);
            }
        }
    }
    if cycle.is_none() && s < CYCLE_SEARCH_MAX && g.is_strongly_connected() {
        cycle = g.find_hamiltonian_cycle();
    }
    if let Some(c) = cycle {
        let labels: Vec<String> = c
            .iter()
            .chain(c.first())
            .map(|&i| (order[i] + 1).to_string())
            .collect();
        out["cycle"] = json!(labels.join("->"));
    }
    Ok(out)
}

fn literal(name: &str, text: &str) -> Result<Literal> {
    text.parse().with_context(|| format!("--{name}"))
}

fn scalar<S: Scalar>(l: &Literal) -> S {
    match &l.exact {
        Some(r) if S::EXACT => S::from_rational(r),
        _ => S::from_f64(l.value).expect("finite literal"),
    }
}

fn generation_backend(cfg: &Config, lits: &[&Literal]) -> Result<Backend> {
    let exact_capable = lits.iter().all(|l| l.exact.is_some());
    match requested(cfg.backend) {
        Some(Backend::Exact) if !exact_capable => bail!(PcmError::InvalidSpec(
            "float literal with --backend exact".into()
        )),
        Some(b) => Ok(b),
        None => Ok(if exact_capable {
            Backend::Exact
        } else {
            Backend::Float
        }),
    }
}

pub fn generate(kind: &GenerateKind, cfg: &Config) -> Result<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let records = match kind {
        GenerateKind::TwoBlock { x, n } => {
            let x = literal("x", x)?;
            match generation_backend(cfg, &[&x])? {
                Backend::Exact => gen_two::<Rational>(scalar(&x), *n, cfg.count, &mut rng)?,
                Backend::Float => gen_two::<f64>(scalar(&x), *n, cfg.count, &mut rng)?,
            }
        }
        GenerateKind::ThreeBlock { a12, a13, a23, n } => {
            let lits = [
                literal("a12", a12)?,
                literal("a13", a13)?,
                literal("a23", a23)?,
            ];
            match generation_backend(cfg, &lits.iter().collect::<Vec<_>>())? {
                Backend::Exact => {
                    gen_three::<Rational>(&lits.map(|l| scalar(&l)), *n, cfg.count, &mut rng)?
                }
                Backend::Float => {
                    gen_three::<f64>(&lits.map(|l| scalar(&l)), *n, cfg.count, &mut rng)?
                }
            }
        }
        GenerateKind::Constant { x, s, n } => {
            let x = literal("x", x)?;
            match generation_backend(cfg, &[&x])? {
                Backend::Exact => {
                    gen_constant::<Rational>(scalar(&x), *s, *n, cfg.count, &mut rng)?
                }
                Backend::Float => gen_constant::<f64>(scalar(&x), *s, *n, cfg.count, &mut rng)?,
            }
        }
    };
    cfg.out.records(&records)?;
    Ok(0)
}

/// Digraph check before emission; a failure is a library bug.
fn certified<S: Scalar>(a: &ReciprocalMatrix<S>, g: &GeneratedVector<S>) -> Result<Value> {
    if !efficient(a, &g.vector)? {
        bail!(PcmError::TheoremViolation(format!(
            "generated vector {} is not efficient",
            g.vector
        )));
    }
    Ok(g.to_json())
}

fn untouched<S: Scalar>(vector: WeightVector<S>, head_len: usize) -> GeneratedVector<S> {
    let head = vector.subvector(&(0..head_len).collect::<Vec<_>>());
    let tail_bounds = (head.min(), head.max());
    let permutation = (0..vector.len() - head_len).collect();
    GeneratedVector {
        vector,
        seed_head: head,
        tail_bounds,
        permutation,
    }
}

fn gen_two<S: Scalar>(x: S, n: usize, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Value>> {
    let m = TwoBlockMatrix::new(x, n)?;
    let a = m.matrix();
    (0..count)
        .map(|_| certified(&a, &untouched(two_block_sample(&m, rng), 2)))
        .collect()
}

/// Candidates per requested vector before giving up.
const CANDIDATE_BUDGET: usize = 10_000;

fn gen_three<S: Scalar>(
    entries: &[S; 3],
    n: usize,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Value>> {
    let tb = ThreeBlockMatrix::from_entries(
        entries[0].clone(),
        entries[1].clone(),
        entries[2].clone(),
        n,
    )?;
    let a4 = ReciprocalMatrix::block_perturbed(tb.block(), 4)?.to_f64();
    let mut cand_rng = ChaCha8Rng::seed_from_u64(rng.gen());
    // weighted geometric means of the columns of A_4(B), jittered
    let candidates = std::iter::repeat_with(move || {
        let t: Vec<f64> = (0..4).map(|_| cand_rng.gen::<f64>() + 1e-3).collect();
        let total: f64 = t.iter().sum();
        let w: Vec<f64> = (0..4)
            .map(|i| {
                let log: f64 = (0..4).map(|j| a4.get(i, j).ln() * t[j] / total).sum();
                log.exp() * log_uniform::<f64, _>(1.25, &mut cand_rng)
            })
            .collect();
        let v = w
            .iter()
            .map(|x| S::approximate(x / w[3]).expect("finite"))
            .collect();
        WeightVector::new(v).expect("positive")
    })
    .take(count.saturating_mul(CANDIDATE_BUDGET));
    let a = tb.matrix();
    let out: Vec<Value> = three_block_generate(&tb, candidates, rng)
        .take(count)
        .map(|g| certified(&a, &g))
        .collect::<Result<_>>()?;
    if out.len() < count {
        bail!("found only {} of {count} efficient vectors", out.len());
    }
    Ok(out)
}

fn gen_constant<S: Scalar>(
    x: S,
    s: usize,
    n: usize,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Value>> {
    if n <= s {
        bail!(PcmError::InvalidSpec(format!(
            "n must exceed s, got s = {s}, n = {n}"
        )));
    }
    let m = ConstantBlockMatrix::new(x, s, n)?;
    let form = BlockPerturbedForm::canonical(constant_matrix(&m.original_x(), s), n)?;
    let a = form.matrix();
    (0..count)
        .map(|_| {
            let head = constant_block_sample_head(&m, rng);
            let vector = lcompl_sample(&form, &head, rng)?
                .next()
                .expect("endless sampler");
            certified(&a, &untouched(vector, s))
        })
        .collect()
}

pub fn reproduce(target: Target, cfg: &Config) -> Result<u8> {
    let checks = match target {
        Target::Table1 => reproduce::table1()?,
        Target::Examples => reproduce::examples()?,
        Target::All => reproduce::all()?,
    };
    let records: Vec<Value> = checks
        .iter()
        .map(|c| {
            let mut v = c.to_json();
            v["result"] = json!(if c.pass { "PASS" } else { "FAIL" });
            v
        })
        .collect();
    cfg.out.records(&records)?;
    let passed = checks.iter().filter(|c| c.pass).count();
    eprintln!("{passed}/{} fixtures match", checks.len());
    Ok(if passed == checks.len() { 0 } else { 1 })
}
