//! Matrix and vector files.
//!
//! CSV cells and JSON values may be rational literals (`7/3`), plain
//! decimals (`8.5`) or floats in exponent notation (`1e-3`). Rationals and
//! decimals are read exactly; exponent notation is float only.
//!
//! JSON matrices are `{"n": 3, "entries": [[...], ...]}` (or a bare array of
//! rows); JSON vectors are `{"vector": [...]}` or a bare array. Entries may be
//! numbers or strings.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::Value;

use crate::error::{PcmError, Result};
use crate::matrix::{ReciprocalMatrix, WeightVector};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiteralKind {
    Rational,
    Decimal,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Literal {
    pub kind: LiteralKind,
    /// Present for rational and decimal literals.
    pub exact: Option<Rational>,
    pub value: f64,
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rational::new(numer, denom);
    Some(if neg { -r } else { r })
}

impl FromStr for Literal {
    type Err = PcmError;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let bad = || PcmError::Parse(format!("not a number: {text:?}"));
        if let Some((p, q)) = t.split_once('/') {
            let p = parse_decimal(p.trim()).ok_or_else(bad)?;
            let q = parse_decimal(q.trim()).ok_or_else(bad)?;
            if q.is_zero() {
                return Err(PcmError::Parse(format!("zero denominator in {text:?}")));
            }
            let r = p / q;
            return Ok(Self {
                kind: LiteralKind::Rational,
                value: r.to_f64(),
                exact: Some(r),
            });
        }
        if let Some(r) = parse_decimal(t) {
            return Ok(Self {
                kind: LiteralKind::Decimal,
                value: r.to_f64(),
                exact: Some(r),
            });
        }
        let value: f64 = t.parse().map_err(|_| bad())?;
        if !value.is_finite() {
            return Err(bad());
        }
        Ok(Self {
            kind: LiteralKind::Float,
            exact: None,
            value,
        })
    }
}

impl Literal {
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => s.parse(),
            // serde_json prints the shortest round-trip form, so integers and
            // decimals written in the file stay exact
            Value::Number(n) => n.to_string().parse(),
            other => Err(PcmError::Parse(format!("expected a number, got {other}"))),
        }
    }
}

fn all_exact<'a>(lits: impl IntoIterator<Item = &'a Literal>) -> bool {
    lits.into_iter().all(|l| l.exact.is_some())
}

fn any_rational<'a>(lits: impl IntoIterator<Item = &'a Literal>) -> bool {
    lits.into_iter().any(|l| l.kind == LiteralKind::Rational)
}

/// Square grid of literals, `n >= 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct RawMatrix {
    pub rows: Vec<Vec<Literal>>,
}

impl RawMatrix {
    pub fn new(rows: Vec<Vec<Literal>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(PcmError::BadShape(format!(
                "matrix must be at least 2 by 2, got {n} rows"
            )));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(PcmError::BadShape(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                r.len()
            )));
        }
        Ok(Self { rows })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    fn cells(&self) -> impl Iterator<Item = &Literal> {
        self.rows.iter().flatten()
    }

    pub fn is_exact_capable(&self) -> bool {
        all_exact(self.cells())
    }

    pub fn has_rational_literal(&self) -> bool {
        any_rational(self.cells())
    }

    pub fn to_exact(&self) -> Result<ReciprocalMatrix<Rational>> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|l| {
                        l.exact
                            .clone()
                            .ok_or_else(|| PcmError::Parse("float literal in exact input".into()))
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<_>>>>()?;
        ReciprocalMatrix::new(rows)
    }

    pub fn to_float(&self) -> Result<ReciprocalMatrix<f64>> {
        ReciprocalMatrix::new(
            self.rows
                .iter()
                .map(|r| r.iter().map(|l| l.value).collect())
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawVector(pub Vec<Literal>);

impl RawVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_exact_capable(&self) -> bool {
        all_exact(&self.0)
    }

    pub fn has_rational_literal(&self) -> bool {
        any_rational(&self.0)
    }

    pub fn to_exact(&self) -> Result<WeightVector<Rational>> {
        let v = self
            .0
            .iter()
            .map(|l| {
                l.exact
                    .clone()
                    .ok_or_else(|| PcmError::Parse("float literal in exact input".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        WeightVector::new(v)
    }

    pub fn to_float(&self) -> Result<WeightVector<f64>> {
        WeightVector::new(self.0.iter().map(|l| l.value).collect())
    }
}

fn looks_like_json(text: &str) -> bool {
    matches!(text.trim_start().chars().next(), Some('{') | Some('['))
}

fn csv_records(text: &str) -> Result<Vec<Vec<Literal>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| PcmError::Parse(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        rows.push(
            record
                .iter()
                .map(str::parse)
                .collect::<Result<Vec<Literal>>>()?,
        );
    }
    Ok(rows)
}

fn json_array(v: &Value) -> Result<&Vec<Value>> {
    v.as_array()
        .ok_or_else(|| PcmError::Parse(format!("expected an array, got {v}")))
}

pub fn parse_matrix(text: &str) -> Result<RawMatrix> {
    if !looks_like_json(text) {
        return RawMatrix::new(csv_records(text)?);
    }
    let doc: Value = serde_json::from_str(text).map_err(|e| PcmError::Parse(e.to_string()))?;
    let entries = match &doc {
        Value::Object(map) => map
            .get("entries")
            .ok_or_else(|| PcmError::Parse("missing \"entries\"".into()))?,
        other => other,
    };
    let rows = json_array(entries)?
        .iter()
        .map(|r| json_array(r)?.iter().map(Literal::from_json).collect())
        .collect::<Result<Vec<Vec<Literal>>>>()?;
    let m = RawMatrix::new(rows)?;
    if let Some(n) = doc.get("n") {
        if n.as_u64() != Some(m.n() as u64) {
            return Err(PcmError::BadShape(format!(
                "declared n = {n} but {} rows given",
                m.n()
            )));
        }
    }
    Ok(m)
}

/// A single CSV row, a single CSV column, or JSON.
pub fn parse_vector(text: &str) -> Result<RawVector> {
    let v = if looks_like_json(text) {
        let doc: Value = serde_json::from_str(text).map_err(|e| PcmError::Parse(e.to_string()))?;
        let arr = match &doc {
            Value::Object(map) => map
                .get("vector")
                .ok_or_else(|| PcmError::Parse("missing \"vector\"".into()))?,
            other => other,
        };
        json_array(arr)?
            .iter()
            .map(Literal::from_json)
            .collect::<Result<Vec<_>>>()?
    } else {
        let rows = csv_records(text)?;
        match rows.as_slice() {
            [single] => single.clone(),
            many if many.iter().all(|r| r.len() == 1) => {
                many.iter().map(|r| r[0].clone()).collect()
            }
            _ => {
                return Err(PcmError::BadShape(
                    "vector must be a single row or column".into(),
                ))
            }
        }
    };
    if v.is_empty() {
        return Err(PcmError::BadShape("empty vector".into()));
    }
    Ok(RawVector(v))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| PcmError::Parse(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<RawMatrix> {
    parse_matrix(&read(path.as_ref())?)
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<RawVector> {
    parse_vector(&read(path.as_ref())?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
}

/// A matrix (and optional vector) in the chosen backend.
#[derive(Clone, Debug)]
pub enum Loaded {
    Exact(ReciprocalMatrix<Rational>, Option<WeightVector<Rational>>),
    Float(ReciprocalMatrix<f64>, Option<WeightVector<f64>>),
}

impl Loaded {
    pub fn backend(&self) -> Backend {
        match self {
            Self::Exact(..) => Backend::Exact,
            Self::Float(..) => Backend::Float,
        }
    }
}

/// `requested = None` picks exact when every literal is exact-capable and
/// the exact matrix validates, float otherwise.
pub fn load(
    matrix: &RawMatrix,
    vector: Option<&RawVector>,
    requested: Option<Backend>,
) -> Result<Loaded> {
    if let Some(v) = vector.filter(|v| v.0.len() != matrix.n()) {
        return Err(PcmError::DimensionMismatch {
            expected: matrix.n(),
            found: v.0.len(),
        });
    }
    let exact_capable = matrix.is_exact_capable() && vector.is_none_or(RawVector::is_exact_capable);
    let load_exact = || -> Result<Loaded> {
        Ok(Loaded::Exact(
            matrix.to_exact()?,
            vector.map(RawVector::to_exact).transpose()?,
        ))
    };
    let load_float = || -> Result<Loaded> {
        Ok(Loaded::Float(
            matrix.to_float()?,
            vector.map(RawVector::to_float).transpose()?,
        ))
    };
    match requested {
        Some(Backend::Exact) => load_exact(),
        Some(Backend::Float) => load_float(),
        None if exact_capable => load_exact().or_else(|e| {
            let rational = matrix.has_rational_literal()
                || vector.is_some_and(RawVector::has_rational_literal);
            if rational {
                Err(e)
            } else {
                load_float()
            }
        }),
        None => load_float(),
    }
}

/// CSV text of a matrix, one row per line.
pub fn matrix_to_csv<S: Scalar>(a: &ReciprocalMatrix<S>) -> String {
    let mut out = String::new();
    for row in a.rows() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn matrix_to_json<S: Scalar>(a: &ReciprocalMatrix<S>) -> Value {
    let entries: Vec<Vec<Value>> = a
        .rows()
        .iter()
        .map(|r| r.iter().map(Scalar::to_json).collect())
        .collect();
    serde_json::json!({ "n": a.n(), "entries": entries })
}
