mod common;

use common::{bivector, config, expr, one_form, r2, r3, two_form, vfield};
use dirac_core::cartan::{exterior_derivative, VField};
use dirac_core::courant::{check_dirac, graph_bivector, graph_two_form, GSec};
use dirac_core::tanlift::{
    canonical_involution, check_involution_identities, check_lift_bracket_identities,
    check_lift_identities, check_tangent_mu_identity, check_tulczyjew_identities, lift_function,
    lift_vector_field, tangent_lift_dirac, LiftKind, TangentPatch,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn lift_identities_hold(x in vfield(r3(), 2), a in one_form(r3(), 2), f in expr(r3(), 2, 4)) {
        let r = check_lift_identities(&x, &a, &f).unwrap();
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn vertical_lifts_kill_vertical_lifts(x in vfield(r2(), 2), f in expr(r2(), 2, 4)) {
        // independent of the report: X^v(f^v) = 0 and X^T(f^T) = (Xf)^T
        let tp = TangentPatch::new(&r2()).unwrap();
        let xv = lift_vector_field(&tp, &x, LiftKind::Vertical).unwrap();
        let xt = lift_vector_field(&tp, &x, LiftKind::Tangent).unwrap();
        let fv = lift_function(&tp, &f, LiftKind::Vertical).unwrap();
        let ft = lift_function(&tp, &f, LiftKind::Tangent).unwrap();
        prop_assert!(xv.apply(&fv).is_zero());
        prop_assert_eq!(xt.apply(&ft), lift_function(&tp, &x.apply(&f), LiftKind::Tangent).unwrap());
    }

    #[test]
    fn lift_bracket_identities_hold(
        x in vfield(r2(), 2), a in one_form(r2(), 2),
        y in vfield(r2(), 2), b in one_form(r2(), 2),
    ) {
        let s1 = GSec::new(x, a).unwrap();
        let s2 = GSec::new(y, b).unwrap();
        let r = check_lift_bracket_identities(&s1, &s2).unwrap();
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn involution_and_tulczyjew(x in vfield(r2(), 2), a in one_form(r2(), 2)) {
        prop_assert!(check_involution_identities(&x).unwrap().passed());
        prop_assert!(check_tulczyjew_identities(&a).unwrap().passed());
    }

    #[test]
    fn mu_identity_on_lagrangian_frames(w in two_form(r3(), 2)) {
        let r = check_tangent_mu_identity(&graph_two_form(&w).unwrap()).unwrap();
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn lifts_of_dirac_frames_are_dirac(a in one_form(r3(), 2), p in bivector(r2(), 2)) {
        let l = graph_two_form(&exterior_derivative(&a).unwrap()).unwrap();
        prop_assert!(check_dirac(&tangent_lift_dirac(&l).unwrap()).unwrap().passed());
        // every bivector on a plane is Poisson
        let lp = graph_bivector(&p).unwrap();
        prop_assert!(check_dirac(&tangent_lift_dirac(&lp).unwrap()).unwrap().passed());
    }
}

#[test]
fn involution_squares_to_identity() {
    for base in [r2(), r3()] {
        let t = TangentPatch::new(&base).unwrap();
        let tt = TangentPatch::new(t.total()).unwrap();
        let j = canonical_involution(&tt).unwrap();
        assert!(j.then(&j).unwrap().is_identity());
        assert!(!j.is_identity());
    }
}

#[test]
fn lifted_frame_has_twice_the_rank() {
    let p = r3();
    let l = dirac_core::courant::foliation_frame(&p, &[VField::coord(&p, 0), VField::coord(&p, 1)]).unwrap();
    let t = tangent_lift_dirac(&l).unwrap();
    assert_eq!(t.rank(), 2 * l.rank());
    assert!(check_dirac(&t).unwrap().passed());
}
