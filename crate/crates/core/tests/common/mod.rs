#![allow(dead_code)]

use dirac_core::cartan::{Bivector, KForm, VField};
use dirac_core::symalg::{rat, Expr, Patch};
use proptest::prelude::*;

pub fn patch(coords: &[&str]) -> Patch {
    Patch::new("M", coords.iter().copied()).unwrap()
}

pub fn r2() -> Patch {
    patch(&["x", "y"])
}

pub fn r3() -> Patch {
    patch(&["x", "y", "z"])
}

fn monomial(p: &Patch, exps: &[u32], max_deg: u32) -> Expr {
    let mut budget = max_deg;
    let mut out = Expr::one(p);
    for (i, &e) in exps.iter().enumerate() {
        let e = e.min(budget);
        budget -= e;
        if e > 0 {
            out = out * Expr::var(p, i).pow(e);
        }
    }
    out
}

/// Polynomials with small integer coefficients and total degree at most `max_deg`.
pub fn expr(p: Patch, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Expr> {
    let n = p.dim();
    prop::collection::vec((prop::collection::vec(0..=max_deg, n), -3i64..=3), 0..=max_terms).prop_map(
        move |terms| {
            terms.iter().fold(Expr::zero(&p), |acc, (exps, c)| {
                acc + monomial(&p, exps, max_deg).scale(&rat(*c))
            })
        },
    )
}

pub fn exprs(p: Patch, count: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Vec<Expr>> {
    prop::collection::vec(expr(p, max_deg, max_terms), count)
}

pub fn vfield(p: Patch, max_deg: u32) -> impl Strategy<Value = VField> {
    let n = p.dim();
    exprs(p.clone(), n, max_deg, 3).prop_map(move |c| VField::new(&p, c).unwrap())
}

pub fn one_form(p: Patch, max_deg: u32) -> impl Strategy<Value = KForm> {
    let n = p.dim();
    exprs(p.clone(), n, max_deg, 3).prop_map(move |c| KForm::one_form(&p, c).unwrap())
}

pub fn two_form(p: Patch, max_deg: u32) -> impl Strategy<Value = KForm> {
    let n = p.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    exprs(p.clone(), pairs.len(), max_deg, 3).prop_map(move |c| {
        KForm::from_terms(&p, 2, pairs.iter().zip(c).map(|(&(i, j), e)| (vec![i, j], e))).unwrap()
    })
}

pub fn bivector(p: Patch, max_deg: u32) -> impl Strategy<Value = Bivector> {
    let n = p.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    exprs(p.clone(), pairs.len(), max_deg, 3)
        .prop_map(move |c| Bivector::from_terms(&p, pairs.iter().copied().zip(c)).unwrap())
}

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}
