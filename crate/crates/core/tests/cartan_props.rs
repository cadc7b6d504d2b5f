mod common;

use common::{config, expr, one_form, r3, two_form, vfield};
use dirac_core::algebroid::{check_lie_algebroid, AlgebroidPatch};
use dirac_core::cartan::{
    exterior_derivative, interior_product, lie_bracket, lie_derivative, lie_derivative_coordinates,
    schouten_jacobiator, Bivector, KForm,
};
use dirac_core::symalg::{rat, BigRational, Expr, Patch};
use proptest::prelude::*;

/// `pi = sum c^k_ab x_k d_a ^ d_b` on the dual of a Lie algebra, built
/// directly from the constants (independent of `dual_linear_poisson`).
fn lie_poisson(c: &[Vec<Vec<BigRational>>]) -> Bivector {
    let r = c.len();
    let names: Vec<String> = (1..=r).map(|i| format!("w{i}")).collect();
    let p = Patch::new("D", names).unwrap();
    let mut terms = Vec::new();
    for a in 0..r {
        for b in a + 1..r {
            let mut e = Expr::zero(&p);
            for (k, ck) in c.iter().enumerate() {
                e = e + Expr::var(&p, k).scale(&ck[a][b]);
            }
            terms.push(((a, b), e));
        }
    }
    Bivector::from_terms(&p, terms).unwrap()
}

fn constants(entries: &[i64]) -> Vec<Vec<Vec<BigRational>>> {
    // entries give c^k_12, c^k_13, c^k_23 for k = 1..3
    let mut c = vec![vec![vec![rat(0); 3]; 3]; 3];
    for k in 0..3 {
        for (slot, &(a, b)) in [(0, 1), (0, 2), (1, 2)].iter().enumerate() {
            let v = rat(entries[3 * k + slot]);
            c[k][a][b] = v.clone();
            c[k][b][a] = -v;
        }
    }
    c
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn d_squared_vanishes(f in expr(r3(), 3, 5), a in one_form(r3(), 3)) {
        let d0 = exterior_derivative(&KForm::function(f)).unwrap();
        prop_assert!(exterior_derivative(&d0).unwrap().is_zero());
        let d1 = exterior_derivative(&a).unwrap();
        prop_assert!(exterior_derivative(&d1).unwrap().is_zero());
    }

    #[test]
    fn cartan_formula_matches_coordinates(x in vfield(r3(), 2), a in one_form(r3(), 2), w in two_form(r3(), 2)) {
        prop_assert_eq!(lie_derivative(&x, &a).unwrap(), lie_derivative_coordinates(&x, &a).unwrap());
        prop_assert_eq!(lie_derivative(&x, &w).unwrap(), lie_derivative_coordinates(&x, &w).unwrap());
    }

    #[test]
    fn jacobi_for_vector_fields(x in vfield(r3(), 2), y in vfield(r3(), 2), z in vfield(r3(), 2)) {
        let t1 = lie_bracket(&lie_bracket(&x, &y).unwrap(), &z).unwrap();
        let t2 = lie_bracket(&lie_bracket(&y, &z).unwrap(), &x).unwrap();
        let t3 = lie_bracket(&lie_bracket(&z, &x).unwrap(), &y).unwrap();
        prop_assert!(t1.add(&t2).unwrap().add(&t3).unwrap().is_zero());
    }

    #[test]
    fn double_contraction_vanishes(x in vfield(r3(), 2), w in two_form(r3(), 2)) {
        let once = interior_product(&x, &w).unwrap();
        prop_assert!(interior_product(&x, &once).unwrap().is_zero());
    }

    #[test]
    fn lie_poisson_iff_lie_algebra(entries in prop::collection::vec(-1i64..=1, 9)) {
        let c = constants(&entries);
        let lie = check_lie_algebroid(&AlgebroidPatch::lie_algebra(&c).unwrap()).passed();
        prop_assert_eq!(lie, schouten_jacobiator(&lie_poisson(&c)).is_zero());
    }
}

#[test]
fn lie_poisson_of_known_algebras() {
    // so(3), the Heisenberg algebra and an affine-type algebra
    for entries in [[0, 0, 1, 0, -1, 0, 1, 0, 0], [0, 0, 0, 0, 0, 0, 1, 0, 0], [1, 0, 0, 0, 0, 0, 0, 0, 0]] {
        let c = constants(&entries);
        assert!(check_lie_algebroid(&AlgebroidPatch::lie_algebra(&c).unwrap()).passed());
        assert!(schouten_jacobiator(&lie_poisson(&c)).is_zero());
    }
}
