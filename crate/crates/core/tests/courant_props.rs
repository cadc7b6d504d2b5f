mod common;

use common::{bivector, config, expr, one_form, r3, two_form, vfield};
use dirac_core::cartan::{exterior_derivative, lie_bracket, schouten_jacobiator};
use dirac_core::courant::{
    bfield_transform, check_dirac, check_lagrangian, courant_tensor_unchecked, foliation_frame,
    graph_bivector, graph_two_form, GSec,
};
use dirac_core::symalg::{span_contains, span_rank};
use proptest::prelude::*;

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn mu_is_tensorial(w in two_form(r3(), 2), f in expr(r3(), 1, 3)) {
        let l = graph_two_form(&w).unwrap();
        let secs = l.secs().to_vec();
        let mu = courant_tensor_unchecked(&secs).unwrap();
        let mut scaled = secs.clone();
        scaled[0] = secs[0].scale(&f);
        let mu_f = courant_tensor_unchecked(&scaled).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let hits = [i, j, k].iter().filter(|&&a| a == 0).count() as u32;
                    let want = mu.get(i, j, k) * &f.pow(hits);
                    prop_assert_eq!(mu_f.get(i, j, k), &want);
                }
            }
        }
    }

    #[test]
    fn mu_is_antisymmetric(w in two_form(r3(), 2)) {
        let l = graph_two_form(&w).unwrap();
        let mu = courant_tensor_unchecked(l.secs()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    prop_assert_eq!(mu.get(i, j, k), &-mu.get(j, i, k));
                    prop_assert_eq!(mu.get(i, j, k), &-mu.get(i, k, j));
                }
            }
        }
    }

    #[test]
    fn graph_of_form_is_dirac_iff_closed(w in two_form(r3(), 2)) {
        let closed = exterior_derivative(&w).unwrap().is_zero();
        prop_assert_eq!(check_dirac(&graph_two_form(&w).unwrap()).unwrap().passed(), closed);
    }

    #[test]
    fn exact_forms_give_dirac_graphs(a in one_form(r3(), 2)) {
        let w = exterior_derivative(&a).unwrap();
        prop_assert!(check_dirac(&graph_two_form(&w).unwrap()).unwrap().passed());
    }

    #[test]
    fn graph_of_bivector_is_dirac_iff_poisson(p in bivector(r3(), 1)) {
        let poisson = schouten_jacobiator(&p).is_zero();
        prop_assert_eq!(check_dirac(&graph_bivector(&p).unwrap()).unwrap().passed(), poisson);
    }

    #[test]
    fn foliation_is_dirac_iff_involutive(x in vfield(r3(), 1), y in vfield(r3(), 1)) {
        let p = r3();
        let span = vec![x.comps().to_vec(), y.comps().to_vec()];
        prop_assume!(span_rank(&p, &span) == 2);
        let br = lie_bracket(&x, &y).unwrap();
        let involutive = span_contains(&p, &span, br.comps());
        let l = foliation_frame(&p, &[x, y]).unwrap();
        prop_assert_eq!(check_dirac(&l).unwrap().passed(), involutive);
    }

    #[test]
    fn bfield_keeps_dirac_iff_b_closed(a in one_form(r3(), 2), b in two_form(r3(), 1)) {
        let l = graph_two_form(&exterior_derivative(&a).unwrap()).unwrap();
        let t = bfield_transform(&l, &b).unwrap();
        prop_assert!(check_lagrangian(&t).unwrap().passed());
        let closed = exterior_derivative(&b).unwrap().is_zero();
        prop_assert_eq!(check_dirac(&t).unwrap().passed(), closed);
    }

    #[test]
    fn bfield_keeps_lagrangian(p in bivector(r3(), 1), b in two_form(r3(), 2)) {
        let l = graph_bivector(&p).unwrap();
        prop_assert!(check_lagrangian(&bfield_transform(&l, &b).unwrap()).unwrap().passed());
    }
}

#[test]
fn pairing_of_graph_sections_vanishes() {
    let p = r3();
    let w = dirac_core::symalg::parse_expr("x*y + z", &p).unwrap();
    let form = dirac_core::cartan::KForm::from_terms(&p, 2, [(vec![0, 2], w)]).unwrap();
    let l = graph_two_form(&form).unwrap();
    for s in l.secs() {
        for t in l.secs() {
            assert!(dirac_core::courant::pairing(s, t).unwrap().is_zero());
        }
    }
    assert!(GSec::zero(&p).is_zero());
}
