//! Bundled fixtures with known verdicts, each checked against the library.

use std::fmt;

use serde_json::json;

use crate::blockpert::{
    constant_block_class_check, constant_block_next_interval, lcompl_membership, three_block_route,
    ConstantBlockMatrix, ThreeBlockMatrix,
};
use crate::efficiency::{efficient, is_efficient_with, subvector_efficiency_profile};
use crate::error::Result;
use crate::matrix::{BlockPerturbedForm, ReciprocalMatrix, WeightVector};
use crate::perron::{perron, perron_efficiency_via_submatrix_with};
use crate::scalar::{Rational, Scalar, TAU_EDGE};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl FixtureCheck {
    fn new(name: impl Into<String>, expected: impl fmt::Debug, actual: impl fmt::Debug) -> Self {
        let (expected, actual) = (format!("{expected:?}"), format!("{actual:?}"));
        let pass = expected == actual;
        Self {
            name: name.into(),
            expected,
            actual,
            pass,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "name": self.name, "expected": self.expected, "actual": self.actual, "pass": self.pass })
    }
}

/// One row of the 3-block Perron table, `n = 6`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Table1Row {
    pub a12: f64,
    pub a13: f64,
    pub a23: f64,
    pub efficient: bool,
    /// 0-based cycle in the leading 4-by-4 digraph.
    pub cycle: Option<[usize; 4]>,
}

pub const TABLE1: [Table1Row; 8] = [
    Table1Row {
        a12: 2.0,
        a13: 8.5,
        a23: 2.0,
        efficient: false,
        cycle: None,
    },
    Table1Row {
        a12: 2.0,
        a13: 8.0,
        a23: 2.0,
        efficient: true,
        cycle: Some([0, 3, 2, 1]),
    },
    Table1Row {
        a12: 100.0,
        a13: 5.9,
        a23: 0.1,
        efficient: false,
        cycle: None,
    },
    Table1Row {
        a12: 90.0,
        a13: 5.9,
        a23: 0.1,
        efficient: true,
        cycle: Some([0, 3, 1, 2]),
    },
    Table1Row {
        a12: 0.1,
        a13: 5.9,
        a23: 140.0,
        efficient: false,
        cycle: None,
    },
    Table1Row {
        a12: 0.1,
        a13: 5.9,
        a23: 130.0,
        efficient: true,
        cycle: Some([0, 1, 3, 2]),
    },
    Table1Row {
        a12: 0.5,
        a13: 8.0,
        a23: 0.4,
        efficient: false,
        cycle: None,
    },
    Table1Row {
        a12: 0.5,
        a13: 9.0,
        a23: 0.4,
        efficient: true,
        cycle: Some([0, 1, 3, 2]),
    },
];

fn cycle_label(c: &[usize]) -> String {
    c.iter()
        .chain(c.first())
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join("->")
}

pub fn table1() -> Result<Vec<FixtureCheck>> {
    let mut out = Vec::new();
    for row in TABLE1 {
        let b = ReciprocalMatrix::from_upper(3, &[row.a12, row.a13, row.a23])?;
        let form = BlockPerturbedForm::canonical(b, 6)?;
        let r = perron(&form.matrix())?;
        let verdict = perron_efficiency_via_submatrix_with(&form, &r, TAU_EDGE)?;
        let full = is_efficient_with(&form.matrix(), &r.vector, TAU_EDGE)?;
        let name = format!("table1 ({}, {}, {})", row.a12, row.a13, row.a23);
        out.push(FixtureCheck::new(
            format!("{name} efficiency"),
            (row.efficient, row.efficient),
            (verdict.is_efficient(), full.is_efficient()),
        ));
        if let Some(cycle) = row.cycle {
            let present = verdict.digraph.contains_cycle(&cycle);
            out.push(FixtureCheck::new(
                format!("{name} cycle {}", cycle_label(&cycle)),
                true,
                present,
            ));
        }
    }
    Ok(out)
}

fn q(p: i64, d: i64) -> Rational {
    Rational::from_ratio(p, d)
}

fn ints(xs: &[i64]) -> WeightVector<Rational> {
    WeightVector::from_ints(xs).expect("positive")
}

fn vq(xs: Vec<Rational>) -> WeightVector<Rational> {
    WeightVector::new(xs).expect("positive")
}

fn one_based(v: Vec<usize>) -> Vec<usize> {
    v.into_iter().map(|i| i + 1).collect()
}

/// Leading 4-by-4 block of the three-block example.
pub fn cc_matrix() -> ReciprocalMatrix<Rational> {
    ReciprocalMatrix::block_perturbed(&cc_head(), 4).expect("3 <= 4")
}

fn cc_head() -> ReciprocalMatrix<Rational> {
    ReciprocalMatrix::from_upper(3, &[q(2, 1), q(3, 1), q(1, 2)]).expect("positive")
}

fn tail_families() -> Result<Vec<FixtureCheck>> {
    let b = ReciprocalMatrix::new(vec![
        vec![q(1, 1), q(1, 1), q(3, 4), q(1, 2)],
        vec![q(1, 1), q(1, 1), q(1, 4), q(1, 1)],
        vec![q(4, 3), q(4, 1), q(1, 1), q(2, 1)],
        vec![q(2, 1), q(1, 1), q(1, 2), q(1, 1)],
    ])?;
    let form = BlockPerturbedForm::canonical(b, 7)?;
    let a = form.matrix();
    let mut out = Vec::new();
    // (w1, 8, 24, 10 | tail) with tail in [min{8, w1}, 24]
    let mut first = Vec::new();
    for w1 in [q(5, 1), q(7, 1), q(8, 1), q(18, 1)] {
        let lo = if w1 < q(8, 1) { w1.clone() } else { q(8, 1) };
        for tail in [
            [lo.clone(), lo.clone(), lo.clone()],
            [lo.clone(), q(24, 1), q(12, 1)],
            [q(24, 1), q(24, 1), q(24, 1)],
        ] {
            let mut v = vec![w1.clone(), q(8, 1), q(24, 1), q(10, 1)];
            v.extend(tail);
            let w = vq(v);
            first.push(efficient(&a, &w)? && lcompl_membership(&form, &w)?);
        }
        let below = vq(vec![
            w1.clone(),
            q(8, 1),
            q(24, 1),
            q(10, 1),
            lo.clone() - q(1, 2),
            q(10, 1),
            q(10, 1),
        ]);
        let above = vq(vec![
            w1,
            q(8, 1),
            q(24, 1),
            q(10, 1),
            q(10, 1),
            q(49, 2),
            q(10, 1),
        ]);
        first.push(!efficient(&a, &below)? && !efficient(&a, &above)?);
    }
    out.push(FixtureCheck::new(
        "tail family (w1, 8, 24, 10)",
        true,
        first.iter().all(|&b| b),
    ));
    // (15, 2 w2, 32, 24 | tail) with tail in [min{15, 2 w2}, 32]
    let mut second = Vec::new();
    for w2 in [q(4, 1), q(15, 2), q(12, 1)] {
        let two_w2 = q(2, 1) * w2;
        let lo = if two_w2 < q(15, 1) {
            two_w2.clone()
        } else {
            q(15, 1)
        };
        for tail in [
            [lo.clone(), lo.clone(), lo.clone()],
            [q(32, 1), lo.clone(), q(20, 1)],
        ] {
            let mut v = vec![q(15, 1), two_w2.clone(), q(32, 1), q(24, 1)];
            v.extend(tail);
            let w = vq(v);
            second.push(efficient(&a, &w)? && lcompl_membership(&form, &w)?);
        }
        let above = vq(vec![
            q(15, 1),
            two_w2,
            q(32, 1),
            q(24, 1),
            q(33, 1),
            lo.clone(),
            lo,
        ]);
        second.push(!efficient(&a, &above)?);
    }
    out.push(FixtureCheck::new(
        "tail family (15, 2w2, 32, 24)",
        true,
        second.iter().all(|&b| b),
    ));
    Ok(out)
}

fn three_block_routes() -> Result<Vec<FixtureCheck>> {
    let a = ThreeBlockMatrix::new(cc_head(), 6)?;
    let routes = |w: &WeightVector<Rational>| -> Result<Vec<usize>> {
        let mut js = Vec::new();
        for j in 3..6 {
            if three_block_route(&a, w, j)? {
                js.push(j + 1);
            }
        }
        Ok(js)
    };
    let u = ints(&[13, 8, 7, 12, 7, 7]);
    let v = ints(&[13, 8, 7, 7, 12, 7]);
    let head = ints(&[13, 8, 7]);
    Ok(vec![
        FixtureCheck::new("three-block u routes", vec![4], routes(&u)?),
        FixtureCheck::new("three-block v routes", vec![5], routes(&v)?),
        FixtureCheck::new(
            "three-block u, v efficient",
            (true, true),
            (efficient(&a.matrix(), &u)?, efficient(&a.matrix(), &v)?),
        ),
        FixtureCheck::new(
            "three-block head (13, 8, 7) efficient",
            false,
            efficient(&cc_head(), &head)?,
        ),
    ])
}

fn six_point_profiles() -> Result<Vec<FixtureCheck>> {
    let a = ReciprocalMatrix::block_perturbed(
        &ReciprocalMatrix::from_upper(4, &[q(5, 1), q(2, 1), q(3, 1), q(1, 2), q(3, 1), q(2, 1)])?,
        6,
    )?;
    let w = ints(&[8, 2, 3, 4, 6, 2]);
    let v = ints(&[8, 2, 6, 4, 6, 2]);
    Ok(vec![
        FixtureCheck::new("six-point w efficient", true, efficient(&a, &w)?),
        FixtureCheck::new(
            "six-point w profile",
            vec![3, 4],
            one_based(subvector_efficiency_profile(&a, &w)?),
        ),
        FixtureCheck::new("six-point v efficient", true, efficient(&a, &v)?),
        FixtureCheck::new(
            "six-point v profile",
            vec![3, 4, 6],
            one_based(subvector_efficiency_profile(&a, &v)?),
        ),
    ])
}

fn seven_point_profile() -> Result<Vec<FixtureCheck>> {
    let b =
        ReciprocalMatrix::from_upper(4, &[q(2, 1), q(1, 1), q(3, 1), q(1, 4), q(1, 1), q(2, 1)])?;
    let a = ReciprocalMatrix::block_perturbed(&b, 7)?;
    let w = ints(&[8, 2, 6, 4, 7, 3, 5]);
    Ok(vec![
        FixtureCheck::new("seven-point w efficient", true, efficient(&a, &w)?),
        FixtureCheck::new(
            "seven-point w profile",
            vec![5, 6],
            one_based(subvector_efficiency_profile(&a, &w)?),
        ),
        FixtureCheck::new(
            "seven-point head efficient",
            false,
            efficient(&b, &ints(&[8, 2, 6, 4]))?,
        ),
    ])
}

fn constant_block_intervals() -> Result<Vec<FixtureCheck>> {
    let m = ConstantBlockMatrix::new(q(3, 1), 5, 8)?;
    let c5 = m.block();
    let form = m.form()?;
    let a = m.matrix();
    let mut out = Vec::new();
    for (label, w4, expected) in [
        ("(7, 3, 2, 1)", q(1, 1), (q(1, 3), q(7, 3))),
        ("(7, 3, 2, 7/3)", q(7, 3), (q(2, 3), q(7, 3))),
    ] {
        let prefix = [q(7, 1), q(3, 1), q(2, 1), w4.clone()];
        let interval = constant_block_next_interval(&m, &prefix)?;
        out.push(FixtureCheck::new(
            format!("constant block interval after {label}"),
            &expected,
            &interval,
        ));
        let mut ok = true;
        for w5 in [
            interval.0.clone(),
            (interval.0.clone() + interval.1.clone()) / q(2, 1),
            interval.1.clone(),
        ] {
            let mut head = prefix.to_vec();
            head.push(w5.clone());
            let head = vq(head);
            ok &= constant_block_class_check(&m, &head)? && efficient(&c5, &head)?;
            let lo = head.min();
            for tail in [
                [lo.clone(), lo.clone(), lo.clone()],
                [q(7, 1), q(7, 1), q(7, 1)],
                [lo.clone(), q(7, 1), q(4, 1)],
            ] {
                let mut v = head.as_slice().to_vec();
                v.extend(tail);
                let w = vq(v);
                ok &= efficient(&a, &w)? && lcompl_membership(&form, &w)?;
            }
        }
        out.push(FixtureCheck::new(
            format!("constant block vectors from {label}"),
            true,
            ok,
        ));
    }
    Ok(out)
}

fn padded_pair() -> Result<Vec<FixtureCheck>> {
    let c = cc_matrix();
    Ok(vec![
        FixtureCheck::new(
            "(3, 2, 1, 2) efficient for the 4-by-4 block",
            true,
            efficient(&c, &ints(&[3, 2, 1, 2]))?,
        ),
        FixtureCheck::new(
            "(3, 2, 1) efficient for its leading 3-by-3",
            false,
            efficient(&cc_head(), &ints(&[3, 2, 1]))?,
        ),
    ])
}

pub fn examples() -> Result<Vec<FixtureCheck>> {
    let mut out = Vec::new();
    for part in [
        tail_families,
        three_block_routes,
        six_point_profiles,
        seven_point_profile,
        constant_block_intervals,
        padded_pair,
    ] {
        out.extend(part()?);
    }
    Ok(out)
}

pub fn all() -> Result<Vec<FixtureCheck>> {
    let mut out = table1()?;
    out.extend(examples()?);
    Ok(out)
}
