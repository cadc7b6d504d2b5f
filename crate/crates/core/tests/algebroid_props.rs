mod common;

use common::{config, r2, r3, two_form};
use dirac_core::algebroid::{
    check_im_two_form, check_lie_algebroid, check_lie_bialgebroid, check_linearity,
    dual_linear_poisson, AlgebroidPatch, IMTwoForm,
};
use dirac_core::cartan::{exterior_derivative, schouten_jacobiator, Bivector, KForm, VField};
use dirac_core::courant::{check_dirac, graph_bivector, graph_two_form};
use dirac_core::symalg::{parse_expr, rat, BigRational, Expr, Patch};
use proptest::prelude::*;

fn lie(r: usize, brackets: &[(usize, usize, usize, i64)]) -> AlgebroidPatch {
    let mut c = vec![vec![vec![rat(0); r]; r]; r];
    for &(a, b, k, v) in brackets {
        c[k][a][b] = rat(v);
        c[k][b][a] = rat(-v);
    }
    AlgebroidPatch::lie_algebra(&c).unwrap()
}

fn so3() -> AlgebroidPatch {
    lie(3, &[(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)])
}

fn affine() -> AlgebroidPatch {
    lie(2, &[(0, 1, 0, 1)])
}

/// A rank-1 algebroid over the line with anchor x d/dx.
fn euler_line() -> AlgebroidPatch {
    let p = Patch::new("L", ["x"]).unwrap();
    let f = VField::new(&p, vec![Expr::var(&p, 0)]).unwrap();
    AlgebroidPatch::trivial(&p, 1).with_anchor_column(0, &f).unwrap()
}

/// `[e1, e2] = x e2` with anchor `(D x, 0)` on the line.
fn action_line() -> AlgebroidPatch {
    let p = Patch::new("L", ["x"]).unwrap();
    let x = Expr::var(&p, 0);
    AlgebroidPatch::trivial(&p, 2)
        .with_anchor_column(0, &VField::coord(&p, 0))
        .unwrap()
        .with_bracket(0, 1, vec![Expr::zero(&p), x])
        .unwrap()
}

fn library() -> Vec<AlgebroidPatch> {
    vec![
        so3(),
        affine(),
        lie(3, &[(0, 1, 2, 1)]),
        lie(2, &[]),
        AlgebroidPatch::tangent(&r2()),
        euler_line(),
        action_line(),
    ]
}

#[test]
fn dual_poisson_of_algebroids_is_poisson() {
    for a in library() {
        assert!(check_lie_algebroid(&a).passed());
        assert!(schouten_jacobiator(&dual_linear_poisson(&a).unwrap()).is_zero());
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn dual_poisson_is_poisson_when_lie(entries in prop::collection::vec(-1i64..=1, 3)) {
        // [e1,e2] = a e1 + b e2 + c e3 and [e1,e3] = e3 style families
        let a = lie(3, &[(0, 1, 0, entries[0]), (0, 1, 1, entries[1]), (0, 2, 2, entries[2]), (1, 2, 2, 1)]);
        if check_lie_algebroid(&a).passed() {
            prop_assert!(schouten_jacobiator(&dual_linear_poisson(&a).unwrap()).is_zero());
        } else {
            prop_assert!(dual_linear_poisson(&a).is_err());
        }
    }

    #[test]
    fn im_two_form_on_tm_iff_closed(beta in two_form(r3(), 2)) {
        let a = AlgebroidPatch::tangent(&r3());
        let s = IMTwoForm::from_two_form(&beta).unwrap();
        let closed = exterior_derivative(&beta).unwrap().is_zero();
        prop_assert_eq!(check_im_two_form(&a, &s).unwrap().passed(), closed);
    }
}

#[test]
fn bialgebroid_check_is_symmetric() {
    let zero_on = |a: &AlgebroidPatch| AlgebroidPatch::trivial(a.base(), a.rank());
    let mut pairs = Vec::new();
    for a in library() {
        pairs.push((a.clone(), zero_on(&a)));
    }
    pairs.push((so3(), so3()));
    pairs.push((affine(), affine()));
    pairs.push((lie(2, &[]), affine()));
    pairs.push((lie(3, &[]), so3()));
    pairs.push((lie(3, &[(0, 1, 2, 1)]), lie(3, &[(0, 2, 1, 1)])));
    let mut seen = [0, 0];
    for (a, b) in pairs {
        let ab = check_lie_bialgebroid(&a, &b).unwrap().passed();
        let ba = check_lie_bialgebroid(&b, &a).unwrap().passed();
        assert_eq!(ab, ba, "{a:?} / {b:?}");
        seen[usize::from(ab)] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0, "library covers both verdicts: {seen:?}");
}

#[test]
fn linear_poisson_of_lie_algebras_is_dirac_and_linear() {
    for g in [so3(), affine(), lie(3, &[(0, 1, 2, 1)])] {
        let l = graph_bivector(&dual_linear_poisson(&g).unwrap()).unwrap();
        assert!(check_dirac(&l).unwrap().passed());
        assert!(check_linearity(&l, 0).unwrap().passed());
    }
}

#[test]
fn linearity_matches_provenance() {
    let e = |p: &Patch, s: &str| parse_expr(s, p).unwrap();
    // linear: fiberwise-linear bivectors and the canonical 2-form
    let lp = dual_linear_poisson(&AlgebroidPatch::tangent(&Patch::new("Q", ["q"]).unwrap())).unwrap();
    assert!(check_linearity(&graph_bivector(&lp).unwrap(), 1).unwrap().passed());
    let tq = Patch::new("TQ", ["q", "p"]).unwrap();
    let can = KForm::from_terms(&tq, 2, [(vec![0, 1], e(&tq, "1"))]).unwrap();
    assert!(check_linearity(&graph_two_form(&can).unwrap(), 1).unwrap().passed());
    let qp = KForm::from_terms(&tq, 2, [(vec![0, 1], e(&tq, "q^2 + 1"))]).unwrap();
    assert!(check_linearity(&graph_two_form(&qp).unwrap(), 1).unwrap().passed());
    // constant-shifted variants
    let shifted = KForm::from_terms(&tq, 2, [(vec![0, 1], e(&tq, "p"))]).unwrap();
    assert!(!check_linearity(&graph_two_form(&shifted).unwrap(), 1).unwrap().passed());
    let so3p = dual_linear_poisson(&so3()).unwrap();
    let shift = Bivector::from_terms(so3p.patch(), [((0, 1), Expr::constant(so3p.patch(), BigRational::from_integer(2.into())))]).unwrap();
    let l = graph_bivector(&so3p.add(&shift).unwrap()).unwrap();
    assert!(!check_linearity(&l, 0).unwrap().passed());
}
