use super::*;
use crate::algebroid::{check_im_foliation, check_im_two_form, check_lie_algebroid, check_lie_bialgebra, IMTwoForm, LieBialgebraData};
use crate::cartan::{Bivector, KForm, PolyMap, VField};
use crate::courant::{foliation_frame, graph_bivector, graph_two_form, GSec};
use crate::symalg::{parse_expr, rat};

fn e(p: &Patch, s: &str) -> Expr {
    parse_expr(s, p).unwrap()
}

fn r2() -> Patch {
    Patch::new("M", ["x", "y"]).unwrap()
}

fn two_form(p: &Patch, i: usize, j: usize, c: &str) -> KForm {
    KForm::from_terms(p, 2, [(vec![i, j], e(p, c))]).unwrap()
}

#[test]
fn axioms_of_builtin_groupoids() {
    for g in [
        pair_groupoid(&r2()).unwrap(),
        abelian_group(2).unwrap(),
        heisenberg3().unwrap(),
        pair_groupoid(&Patch::new("L", ["x"]).unwrap()).unwrap(),
    ] {
        let r = check_groupoid_axioms(&g).unwrap();
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn broken_multiplication_fails() {
    let g = pair_groupoid(&Patch::new("L", ["x"]).unwrap()).unwrap();
    let comp = g.comp_chart().clone();
    let mul = PolyMap::new(&comp, g.total(), vec![e(&comp, "x_1"), e(&comp, "x_3 + x_2^2")]).unwrap();
    let bad = GroupoidPatch::new(
        g.src().clone(),
        g.tgt().clone(),
        g.unit().clone(),
        g.inv().clone(),
        g.g_of().clone(),
        g.h_of().clone(),
        mul,
    )
    .unwrap();
    let r = check_groupoid_axioms(&bad).unwrap();
    assert!(!r.finding("associativity").unwrap().passed());
    assert!(!r.finding("left unit").unwrap().passed() || !r.finding("right unit").unwrap().passed());
}

#[test]
fn chart_mismatch_detected() {
    let g = pair_groupoid(&Patch::new("L", ["x"]).unwrap()).unwrap();
    let comp = g.comp_chart().clone();
    let h_bad = PolyMap::new(&comp, g.total(), vec![e(&comp, "x_3"), e(&comp, "x_2")]).unwrap();
    let err = GroupoidPatch::new(
        g.src().clone(),
        g.tgt().clone(),
        g.unit().clone(),
        g.inv().clone(),
        g.g_of().clone(),
        h_bad,
        g.mul().clone(),
    )
    .unwrap_err();
    assert!(matches!(err, Error::ChartMismatch(_)));
}

#[test]
fn tangent_groupoid_examples() {
    let line = abelian_group(1).unwrap();
    let t = tangent_groupoid(&line).unwrap();
    assert_eq!(t.total().coords(), ["x1", "x1_dot"]);
    let c = t.comp_chart().clone();
    assert_eq!(t.mul().comps(), [e(&c, "x1 + x1_2"), e(&c, "x1_dot + x1_2_dot")]);
    let pair = pair_groupoid(&Patch::new("L", ["x"]).unwrap()).unwrap();
    let tp = tangent_groupoid(&pair).unwrap();
    let c = tp.comp_chart().clone();
    assert_eq!(
        tp.mul().comps(),
        [e(&c, "x_1"), e(&c, "x_3"), e(&c, "x_1_dot"), e(&c, "x_3_dot")]
    );
    let b = tp.base().clone();
    assert_eq!(tp.unit().comps(), [e(&b, "x"), e(&b, "x"), e(&b, "x_dot"), e(&b, "x_dot")]);
    for g in [pair_groupoid(&r2()).unwrap(), abelian_group(2).unwrap(), heisenberg3().unwrap()] {
        assert!(check_groupoid_axioms(&tangent_groupoid(&g).unwrap()).unwrap().passed());
    }
}

#[test]
fn cotangent_source_target_examples() {
    let g = abelian_group(2).unwrap();
    let cs = cotangent_source_target(&g).unwrap();
    let t = cs.cotangent.total().clone();
    assert_eq!(cs.s_tilde.comps(), [e(&t, "p_x1"), e(&t, "p_x2")]);
    assert_eq!(cs.t_tilde.comps(), [e(&t, "p_x1"), e(&t, "p_x2")]);
    let pair = pair_groupoid(&Patch::new("L", ["x"]).unwrap()).unwrap();
    let cs = cotangent_source_target(&pair).unwrap();
    let t = cs.cotangent.total().clone();
    assert_eq!(cs.dual.coords(), ["x", "xi1"]);
    assert_eq!(cs.s_tilde.comps(), [e(&t, "x_2"), e(&t, "-p_x_2")]);
    assert_eq!(cs.t_tilde.comps(), [e(&t, "x_1"), e(&t, "p_x_1")]);
    // Heisenberg: left translation mixes coordinates
    let h = heisenberg3().unwrap();
    let cs = cotangent_source_target(&h).unwrap();
    let t = cs.cotangent.total().clone();
    assert_eq!(cs.s_tilde.comps(), [e(&t, "p_a"), e(&t, "p_b + a*p_c"), e(&t, "p_c")]);
    assert_eq!(cs.t_tilde.comps(), [e(&t, "p_a + b*p_c"), e(&t, "p_b"), e(&t, "p_c")]);
}

#[test]
fn unit_covectors_follow_the_convention() {
    let pair = pair_groupoid(&Patch::new("L", ["x"]).unwrap()).unwrap();
    let p = Patch::new("P", ["x", "xi"]).unwrap();
    let (u, d) = pair
        .unit_covector(&[e(&p, "x")], &[e(&p, "xi")], &p)
        .unwrap();
    let u: Vec<Expr> = u.iter().map(|c| c.div_exact(&d).unwrap()).collect();
    // kills Te(d/dx) = (1, 1), restricts to xi on e_1 = (1, 0)
    assert_eq!(u, [e(&p, "xi"), e(&p, "-xi")]);
    let gpt = [e(&p, "x"), e(&p, "x")];
    assert_eq!(pair.cotangent_source(&gpt, &u, &p).unwrap(), [e(&p, "xi")]);
    assert_eq!(pair.cotangent_target(&gpt, &u, &p).unwrap(), [e(&p, "xi")]);
}

#[test]
fn cotangent_compose_examples() {
    let g = abelian_group(2).unwrap();
    let p = Patch::new("P", ["x1", "x2", "y1", "y2", "u", "v"]).unwrap();
    let xs = [e(&p, "x1"), e(&p, "x2")];
    let ys = [e(&p, "y1"), e(&p, "y2")];
    let xi = [e(&p, "u"), e(&p, "v")];
    let out = cotangent_compose(&g, &xs, &ys, &xi, &xi).unwrap();
    assert_eq!(out, xi);
    let other = [e(&p, "u + 1"), e(&p, "v")];
    assert!(matches!(cotangent_compose(&g, &xs, &ys, &xi, &other), Err(Error::NotComposable(_))));

    let pair = pair_groupoid(&Patch::new("L", ["x"]).unwrap()).unwrap();
    let q = Patch::new("Q", ["x", "y", "z", "xi", "eta", "zeta"]).unwrap();
    let out = cotangent_compose(
        &pair,
        &[e(&q, "x"), e(&q, "y")],
        &[e(&q, "y"), e(&q, "z")],
        &[e(&q, "xi"), e(&q, "-eta")],
        &[e(&q, "eta"), e(&q, "-zeta")],
    )
    .unwrap();
    assert_eq!(out, [e(&q, "xi"), e(&q, "-zeta")]);
    assert!(matches!(
        cotangent_compose(
            &pair,
            &[e(&q, "x"), e(&q, "y")],
            &[e(&q, "z"), e(&q, "z")],
            &[e(&q, "xi"), e(&q, "-eta")],
            &[e(&q, "eta"), e(&q, "-zeta")],
        ),
        Err(Error::NotComposable(_))
    ));
}

#[test]
fn lie_algebroid_examples() {
    let m = r2();
    let a = lie_algebroid_of(&pair_groupoid(&m).unwrap()).unwrap();
    assert_eq!(a.rank(), 2);
    assert_eq!(a.anchor(), &crate::symalg::ExprMatrix::identity(&m, 2));
    assert!(a.structure().iter().flatten().flatten().all(Expr::is_zero));
    let ab = lie_algebroid_of(&abelian_group(3).unwrap()).unwrap();
    assert!(ab.structure().iter().flatten().flatten().all(Expr::is_zero));
    // Right-invariant fields of the Heisenberg group: R1 = Da + b Dc,
    // R2 = Db, R3 = Dc, so [R1, R2] = -R3.
    let h = lie_algebroid_of(&heisenberg3().unwrap()).unwrap();
    assert!(check_lie_algebroid(&h).passed());
    assert_eq!(h.c(2, 0, 1).constant_value(), Some(rat(-1)));
    let nonzero = h.structure().iter().flatten().flatten().filter(|c| !c.is_zero()).count();
    assert_eq!(nonzero, 2);
}

#[test]
fn tangent_groupoid_algebroid_rank() {
    for g in [pair_groupoid(&Patch::new("L", ["x"]).unwrap()).unwrap(), heisenberg3().unwrap()] {
        let a = lie_algebroid_of(&g).unwrap();
        let ta = lie_algebroid_of(&tangent_groupoid(&g).unwrap()).unwrap();
        assert_eq!(ta.rank(), 2 * a.rank());
        assert_eq!(ta.base().dim(), 2 * g.base().dim());
        assert!(check_lie_algebroid(&ta).passed());
    }
}

#[test]
fn multiplicative_two_form_examples() {
    let m = r2();
    let g = pair_groupoid(&m).unwrap();
    let beta = two_form(&m, 0, 1, "1");
    let w = coboundary(&g, &beta).unwrap();
    assert!(check_multiplicative_two_form(&g, &w).unwrap().passed());
    let only = crate::cartan::pullback_form(g.tgt(), &beta).unwrap();
    assert!(!check_multiplicative_two_form(&g, &only).unwrap().passed());
    assert!(check_multiplicative_two_form(&g, &KForm::zero(g.total(), 2).unwrap()).unwrap().passed());
    assert!(check_multiplicative_frame(&g, &graph_two_form(&w).unwrap()).unwrap().passed());
    assert!(!check_multiplicative_frame(&g, &graph_two_form(&only).unwrap()).unwrap().passed());
}

#[test]
fn multiplicative_bivector_examples() {
    let g = abelian_group(2).unwrap();
    let t = g.total().clone();
    let lin = Bivector::from_terms(&t, [((0, 1), e(&t, "x1"))]).unwrap();
    let cst = Bivector::from_terms(&t, [((0, 1), e(&t, "1"))]).unwrap();
    assert!(check_multiplicative_bivector(&g, &lin).unwrap().passed());
    assert!(!check_multiplicative_bivector(&g, &cst).unwrap().passed());
    assert!(check_multiplicative_bivector(&g, &Bivector::zero(&t)).unwrap().passed());
    assert!(check_multiplicative_frame(&g, &graph_bivector(&lin).unwrap()).unwrap().passed());
    assert!(!check_multiplicative_frame(&g, &graph_bivector(&cst).unwrap()).unwrap().passed());
    let pair = pair_groupoid(&r2()).unwrap();
    assert_eq!(
        check_multiplicative_bivector(&pair, &Bivector::zero(pair.total())).unwrap_err(),
        Error::NotAGroup(2)
    );
}

#[test]
fn multiplicative_foliation_frame() {
    let m = r2();
    let g = pair_groupoid(&m).unwrap();
    let t = g.total().clone();
    let f = [VField::coord(&t, 0), VField::coord(&t, 2)];
    let l = foliation_frame(&t, &f).unwrap();
    let r = check_multiplicative_frame(&g, &l).unwrap();
    assert!(r.passed(), "{r}");
    // span{Dx_1} alone is not a subgroupoid: its source is 0 but target is Dx
    let l1 = foliation_frame(&t, &[VField::coord(&t, 0), VField::coord(&t, 1)]).unwrap();
    assert!(!check_multiplicative_frame(&g, &l1).unwrap().passed());
}

#[test]
fn induced_im_two_form_examples() {
    let m = r2();
    let g = pair_groupoid(&m).unwrap();
    let beta = two_form(&m, 0, 1, "1");
    let (a, s) = induced_im_two_form(&g, &coboundary(&g, &beta).unwrap()).unwrap();
    assert_eq!(s, IMTwoForm::from_two_form(&beta).unwrap());
    assert!(check_im_two_form(&a, &s).unwrap().passed());
    let m3 = Patch::new("M", ["x", "y", "z"]).unwrap();
    let g3 = pair_groupoid(&m3).unwrap();
    let beta3 = two_form(&m3, 0, 1, "z");
    let (a3, s3) = induced_im_two_form(&g3, &coboundary(&g3, &beta3).unwrap()).unwrap();
    assert_eq!(s3, IMTwoForm::from_two_form(&beta3).unwrap());
    let r = check_im_two_form(&a3, &s3).unwrap();
    assert!(!r.finding("bracket compatibility").unwrap().passed());
    let (_, z) = induced_im_two_form(&g, &KForm::zero(g.total(), 2).unwrap()).unwrap();
    assert!(z.sigma.is_zero());
}

#[test]
fn induced_dual_bracket_examples() {
    let g = abelian_group(2).unwrap();
    let t = g.total().clone();
    let lin = Bivector::from_terms(&t, [((0, 1), e(&t, "x1"))]).unwrap();
    let d = induced_dual_bracket(&g, &lin).unwrap();
    assert_eq!(d.c(0, 0, 1).constant_value(), Some(rat(1)));
    assert!(d.c(1, 0, 1).is_zero());
    let ga = lie_algebroid_of(&g).unwrap();
    let data = LieBialgebraData::new(ga, d).unwrap();
    assert!(check_lie_bialgebra(&data, None).unwrap().passed());
    let zero = induced_dual_bracket(&g, &Bivector::zero(&t)).unwrap();
    assert!(zero.structure().iter().flatten().flatten().all(Expr::is_zero));
    let g3 = abelian_group(3).unwrap();
    let t3 = g3.total().clone();
    let so3 = Bivector::from_terms(
        &t3,
        [((0, 1), e(&t3, "x3")), ((1, 2), e(&t3, "x1")), ((2, 0), e(&t3, "x2"))],
    )
    .unwrap();
    let d3 = induced_dual_bracket(&g3, &so3).unwrap();
    assert_eq!(d3.c(2, 0, 1).constant_value(), Some(rat(1)));
    assert_eq!(d3.c(0, 1, 2).constant_value(), Some(rat(1)));
    assert_eq!(d3.c(1, 2, 0).constant_value(), Some(rat(1)));
    let cst = Bivector::from_terms(&t, [((0, 1), e(&t, "1"))]).unwrap();
    assert!(matches!(induced_dual_bracket(&g, &cst), Err(Error::NotMultiplicative(_))));
}

#[test]
fn induced_im_foliation_example() {
    let m = r2();
    let g = pair_groupoid(&m).unwrap();
    let t = g.total().clone();
    let (a, f) = induced_im_foliation(&g, &[VField::coord(&t, 0), VField::coord(&t, 2)]).unwrap();
    assert_eq!(f.kernel.len(), 1);
    assert_eq!(f.leaves.len(), 1);
    let r = check_im_foliation(&a, &f).unwrap();
    assert!(r.passed(), "{r}");
}

#[test]
fn ca_identities_examples() {
    let g = abelian_group(2).unwrap();
    let q = |v: &[i64]| v.iter().map(|&x| rat(x)).collect::<Vec<_>>();
    let zero2 = vec![q(&[0, 0]), q(&[0, 0])];
    // translation-invariant sections split across the factors
    let inv = |v: &[i64], al: &[i64]| abelian_invariant_section(&g, &zero2, &q(v), &q(al)).unwrap();
    let fam = CaFamily {
        a: [inv(&[1, 0], &[2, 1]), inv(&[0, 3], &[2, 1]), inv(&[1, 3], &[2, 1])],
        b: [inv(&[0, 1], &[1, -1]), inv(&[2, 0], &[1, -1]), inv(&[2, 1], &[1, -1])],
    };
    let lin = abelian_invariant_section(&g, &[q(&[0, 1]), q(&[1, 0])], &q(&[0, 0]), &q(&[1, 0])).unwrap();
    let lin2 = abelian_invariant_section(&g, &[q(&[1, 0]), q(&[0, -1])], &q(&[0, 0]), &q(&[0, 2])).unwrap();
    let r = check_ca_identities(&g, &[fam, CaFamily::uniform(lin, lin2)]).unwrap();
    assert!(r.passed(), "{r}");

    let m = r2();
    let pg = pair_groupoid(&m).unwrap();
    let x = VField::new(&m, vec![e(&m, "y"), e(&m, "x^2")]).unwrap();
    let b = KForm::one_form(&m, vec![e(&m, "x*y"), e(&m, "1")]).unwrap();
    let y = VField::coord(&m, 0);
    let b2 = KForm::one_form(&m, vec![e(&m, "0"), e(&m, "x")]).unwrap();
    let s1 = pair_section(&pg, &x, &b).unwrap();
    let s2 = pair_section(&pg, &y, &b2).unwrap();
    let r = check_ca_identities(&pg, &[CaFamily::uniform(s1.clone(), s2)]).unwrap();
    assert!(r.passed(), "{r}");
    let z = GSec::zero(pg.total());
    assert!(check_ca_identities(&pg, &[CaFamily::uniform(z.clone(), z)]).unwrap().passed());
    // a section that is not related to itself
    let bad = GSec::vector(VField::coord(pg.total(), 0));
    assert!(matches!(
        check_ca_identities(&pg, &[CaFamily::uniform(bad, s1)]),
        Err(Error::HypothesisFails(_))
    ));
}
