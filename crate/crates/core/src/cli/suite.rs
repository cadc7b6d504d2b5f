//! The built-in example library behind `verify --suite paper-examples`.
//!
//! It is generated as check-file source, so the suite also exercises the
//! parser and evaluator. Check labels start with `cN/`, the number of the
//! acceptance criterion they belong to. Random instances use a fixed seed.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SUITE_SEED: u64 = 0x00D1_12AC;

/// Number of randomized tangent-lift instances.
pub const RANDOM_INSTANCES: usize = 20;

fn rand_poly(rng: &mut ChaCha8Rng, coords: &[&str]) -> String {
    let mut monos: Vec<String> = vec![String::new()];
    for (i, a) in coords.iter().enumerate() {
        monos.push((*a).to_string());
        for b in &coords[i..] {
            monos.push(if a == b { format!("{a}^2") } else { format!("{a}*{b}") });
        }
    }
    let mut out = String::new();
    for m in monos {
        if !rng.gen_bool(0.35) {
            continue;
        }
        let c: i64 = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let body = match (m.is_empty(), c.abs()) {
            (true, k) => k.to_string(),
            (false, 1) => m,
            (false, k) => format!("{k}*{m}"),
        };
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn rand_combo(rng: &mut ChaCha8Rng, coords: &[&str], prefix: &str) -> String {
    coords
        .iter()
        .map(|c| format!("({})*{prefix}{c}", rand_poly(rng, coords)))
        .collect::<Vec<_>>()
        .join(" + ")
}

struct Suite {
    src: String,
}

impl Suite {
    fn line(&mut self, l: impl AsRef<str>) {
        self.src.push_str(l.as_ref());
        self.src.push('\n');
    }

    fn check(&mut self, kind: &str, args: &str, pass: bool, label: &str) {
        let expect = if pass { "" } else { " expect fail" };
        let _ = writeln!(self.src, "check {kind} {args}{expect} as {label}");
    }
}

const SO3: &str = "x3*Dx1^Dx2 + x1*Dx2^Dx3 + x2*Dx3^Dx1";

/// Source of the example suite.
pub fn example_suite() -> String {
    let mut s = Suite { src: String::new() };
    s.line("# built-in example library");
    s.line("patch R2 = (x, y)");
    s.line("patch R3 = (x, y, z)");
    s.line("patch P3 = (x1, x2, x3)");

    // 1: graph of a 2-form is Dirac iff the form is closed
    s.line("use R2");
    let forms: [(&str, &str, bool); 8] = [
        ("R2", "(1 + x*y)*dx^dy", true),
        ("R2", "x^2*dx^dy", true),
        ("R3", "dx^dy + dy^dz", true),
        ("R3", "y*dx^dz + x*dy^dz", true),
        ("R3", "z^2*dx^dy + 2*x*z*dz^dy", true),
        ("R3", "z*dx^dy", false),
        ("R3", "x*dy^dz + y*dz^dx", false),
        ("R3", "x*y*dy^dz", false),
    ];
    for (i, (p, w, closed)) in forms.iter().enumerate() {
        s.line(format!("use {p}"));
        s.check("closed", w, *closed, &format!("c1/closed-{}", i + 1));
        s.check("dirac", &format!("graph_two_form({w})"), *closed, &format!("c1/dirac-{}", i + 1));
    }

    // 2: graph of a bivector is Dirac iff the bivector is Poisson
    s.line("use P3");
    let bivs: [(&str, bool); 7] = [
        (SO3, true),
        ("x1*Dx1^Dx2 + x2*Dx2^Dx3 + x3*Dx3^Dx1", false),
        ("Dx1^Dx2 + Dx2^Dx3", true),
        ("x1*Dx2^Dx3", true),
        ("x3*Dx1^Dx2 + Dx2^Dx3", true),
        ("x2*Dx1^Dx2 + x1*Dx2^Dx3", false),
        ("x1*x2*Dx1^Dx2 + Dx1^Dx3", false),
    ];
    for (i, (p, poisson)) in bivs.iter().enumerate() {
        s.check("poisson", p, *poisson, &format!("c2/poisson-{}", i + 1));
        s.check("dirac", &format!("graph_bivector({p})"), *poisson, &format!("c2/dirac-{}", i + 1));
    }

    // 3: F + ann(F) is Dirac iff F is involutive
    s.line("use R3");
    let fols: [(&str, bool); 6] = [
        ("Dx, Dy", true),
        ("Dx + y*Dz, Dy + x*Dz", true),
        ("x*Dy - y*Dx", true),
        ("Dx, Dy, Dz", true),
        ("Dx + y*Dz, Dy", false),
        ("Dx, Dy + x*Dz", false),
    ];
    for (i, (f, inv)) in fols.iter().enumerate() {
        s.check("involutive", f, *inv, &format!("c3/involutive-{}", i + 1));
        s.check("dirac", &format!("foliation({f})"), *inv, &format!("c3/dirac-{}", i + 1));
    }

    // 4: tangent lift identities on random data
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    for i in 1..=RANDOM_INSTANCES {
        let (p, coords): (&str, &[&str]) = if i % 5 == 0 { ("R3", &["x", "y", "z"]) } else { ("R2", &["x", "y"]) };
        s.line(format!("use {p}"));
        let x = rand_combo(&mut rng, coords, "D");
        let y = rand_combo(&mut rng, coords, "D");
        let a = rand_combo(&mut rng, coords, "d");
        let b = rand_combo(&mut rng, coords, "d");
        let f = rand_poly(&mut rng, coords);
        s.check("lift_identities", &format!("{x}, {a}, {f}"), true, &format!("c4/lift-{i}"));
        s.check("lift_brackets", &format!("{x} + {a}, {y} + {b}"), true, &format!("c4/brackets-{i}"));
        s.check("involution", &x, true, &format!("c4/involution-{i}"));
        s.check("tulczyjew", &a, true, &format!("c4/tulczyjew-{i}"));
        if p == "R2" {
            let c = rand_poly(&mut rng, coords);
            let l = if i % 2 == 0 {
                format!("graph_two_form(({c})*dx^dy)")
            } else {
                format!("graph_bivector(({c})*Dx^Dy)")
            };
            s.check("tangent_mu", &l, true, &format!("c4/mu-{i}"));
            s.check("tangent_dirac", &l, true, &format!("c4/tangent-dirac-{i}"));
        }
    }
    s.line("use R3");
    s.check("tangent_mu", "graph_two_form(z*dx^dy)", true, "c4/mu-non-dirac");
    s.check("tangent_dirac", "foliation(Dx + y*Dz, Dy + x*Dz)", true, "c4/tangent-dirac-foliation");
    s.line("use P3");
    s.check("tangent_dirac", &format!("graph_bivector({SO3})"), true, "c4/tangent-dirac-so3");
    for r in 1..=2 {
        s.check("legendre", &format!("R2, {r}"), true, &format!("c4/legendre-{r}"));
    }

    // 5: B-field transforms keep Dirac iff B is closed
    s.line("use R3");
    s.line("let c5_closed = dx^dy + dy^dz");
    s.line("let c5_open = z*dx^dy");
    s.check("closed", "c5_closed", true, "c5/closed-b");
    s.check("closed", "c5_open", false, "c5/non-closed-b");
    for (i, l) in ["graph_two_form(x*dx^dy)", "graph_two_form(0)"].iter().enumerate() {
        let k = i + 1;
        s.check("dirac", l, true, &format!("c5/frame-{k}"));
        s.check("dirac", &format!("bfield({l}, c5_closed)"), true, &format!("c5/closed-b-frame-{k}"));
        s.check("dirac", &format!("bfield({l}, c5_open)"), false, &format!("c5/non-closed-b-frame-{k}"));
    }

    // 6: tangent groupoids and Lie functor
    s.line("let c6_pair = pair_groupoid(R2)");
    s.line("let c6_ab = abelian_group(2)");
    s.line("let c6_heis = heisenberg()");
    for g in ["c6_pair", "c6_ab", "c6_heis"] {
        s.check("groupoid", g, true, &format!("c6/axioms-{g}"));
        s.check("groupoid", &format!("tangent_groupoid({g})"), true, &format!("c6/tangent-axioms-{g}"));
        s.check("lie_algebroid", &format!("lie_algebroid_of({g})"), true, &format!("c6/algebroid-{g}"));
        s.check(
            "lie_algebroid",
            &format!("lie_algebroid_of(tangent_groupoid({g}))"),
            true,
            &format!("c6/tangent-algebroid-{g}"),
        );
    }
    s.check("same_algebroid", "lie_algebroid_of(c6_pair), tangent_algebroid(R2)", true, "c6/pair-is-tm");
    s.check("same_algebroid", "lie_algebroid_of(c6_ab), lie_algebra(2)", true, "c6/abelian-is-abelian");
    s.check("structure_constant", "lie_algebroid_of(c6_heis), 3, 1, 2, 1", true, "c6/heisenberg-c312");

    // 7: multiplicativity of forms and bivectors vs their graphs
    s.line("let c7_pair = pair_groupoid(R2)");
    s.line("let c7_ab = abelian_group(2)");
    s.line("let c7_ab3 = abelian_group(3)");
    s.line("use c7_pair");
    let mforms: [(&str, &str, bool); 6] = [
        ("c7_pair", "coboundary(c7_pair, dx^dy)", true),
        ("c7_pair", "dx_1^dy_1", false),
        ("c7_pair", "0", true),
        ("c7_ab", "dx1^dx2", false),
        ("c7_ab", "x1*dx1^dx2", false),
        ("c7_ab", "0", true),
    ];
    // `coboundary` needs the base patch, the literals need the groupoid
    for (i, (g, w, mult)) in mforms.iter().enumerate() {
        let k = i + 1;
        if w.starts_with("coboundary") {
            s.line("use R2");
            s.line(format!("let c7_w{k} = {w}"));
        } else {
            s.line(format!("use {g}"));
            s.line(format!("let c7_w{k} = {w}"));
        }
        s.check("multiplicative_two_form", &format!("{g}, c7_w{k}"), *mult, &format!("c7/two-form-{k}"));
        s.check(
            "multiplicative_frame",
            &format!("{g}, graph_two_form(c7_w{k})"),
            *mult,
            &format!("c7/two-form-frame-{k}"),
        );
    }
    let mbivs: [(&str, &str, bool); 5] = [
        ("c7_ab", "x1*Dx1^Dx2", true),
        ("c7_ab", "Dx1^Dx2", false),
        ("c7_ab", "(x1 + x2)*Dx1^Dx2", true),
        ("c7_ab3", SO3, true),
        ("c7_ab3", "x1*x2*Dx1^Dx3", false),
    ];
    for (i, (g, p, mult)) in mbivs.iter().enumerate() {
        let k = i + 1;
        s.line(format!("use {g}"));
        s.line(format!("let c7_p{k} = {p}"));
        s.check("multiplicative_bivector", &format!("{g}, c7_p{k}"), *mult, &format!("c7/bivector-{k}"));
        s.check(
            "multiplicative_frame",
            &format!("{g}, graph_bivector(c7_p{k})"),
            *mult,
            &format!("c7/bivector-frame-{k}"),
        );
    }

    // 8: infinitesimal data induced by multiplicative structures
    s.line("let c8_pair2 = pair_groupoid(R2)");
    s.line("let c8_pair3 = pair_groupoid(R3)");
    s.line("use R2");
    s.line("let c8_w1 = coboundary(c8_pair2, dx^dy)");
    s.line("use R3");
    s.line("let c8_w2 = coboundary(c8_pair3, dx^dy + dy^dz)");
    s.line("let c8_w3 = coboundary(c8_pair3, z*dx^dy)");
    s.check("im_two_form", "c8_pair2, c8_w1", true, "c8/a-closed-r2");
    s.check("im_two_form", "c8_pair3, c8_w2", true, "c8/a-closed-r3");
    s.check("im_two_form", "c8_pair3, c8_w3", false, "c8/a-non-closed-r3");
    s.line("let c8_ab = abelian_group(2)");
    s.line("use c8_ab");
    s.line("let c8_pi = x1*Dx1^Dx2");
    s.check("multiplicative_bivector", "c8_ab, c8_pi", true, "c8/b-multiplicative");
    s.check("same_algebroid", "induced_dual(c8_ab, c8_pi), lie_algebra(2, [1, 2, 1, 1])", true, "c8/b-affine");
    s.check("bialgebra", "lie_algebroid_of(c8_ab), induced_dual(c8_ab, c8_pi)", true, "c8/b-bialgebra");
    s.line("use c8_pair2");
    s.check("multiplicative_frame", "c8_pair2, foliation(Dx_1, Dx_2)", true, "c8/c-multiplicative");
    s.check("im_foliation", "c8_pair2, Dx_1, Dx_2", true, "c8/c-im-foliation");

    // 9: Courant algebroid identities for m-related sections
    for n in 1..=3usize {
        let g = format!("c9_ab{n}");
        s.line(format!("let {g} = abelian_group({n})"));
        s.line(format!("use {g}"));
        let xs: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        // linear fields with constant forms are related to themselves
        let lin1 = (0..n)
            .map(|i| format!("{}*D{}", xs[(i + 1) % n], xs[i]))
            .collect::<Vec<_>>()
            .join(" + ");
        let lin2 = format!("{}*D{} - {}*D{}", xs[0], xs[0], xs[n - 1], xs[n - 1]);
        let lin2 = if n == 1 { format!("2*{}*D{}", xs[0], xs[0]) } else { lin2 };
        let a1 = format!("d{} + 2*d{}", xs[0], xs[n - 1]);
        let a2 = format!("-d{}", xs[n / 2]);
        let fam_uniform = format!("uniform({lin1} + {a1}, {lin2} + {a2})");
        // translation-invariant fields whose values add up
        let v = |k: i64| format!("{k}*D{}", xs[0]);
        let fam_split = format!(
            "family({} + {a1}, {} + {a1}, {} + {a1}, {} + {a2}, {} + {a2}, {} + {a2})",
            v(1),
            v(2),
            v(3),
            v(-1),
            v(4),
            v(3)
        );
        s.check("ca_identities", &format!("{g}, {fam_uniform}, {fam_split}"), true, &format!("c9/abelian-{n}"));
    }
    s.line("let c9_pair = pair_groupoid(R2)");
    s.line("use R2");
    s.line("let c9_s1 = pair_section(c9_pair, y*Dx + x^2*Dy, x*y*dx + dy)");
    s.line("let c9_s2 = pair_section(c9_pair, Dx, x*dy)");
    s.check("ca_identities", "c9_pair, uniform(c9_s1, c9_s2)", true, "c9/pair-r2");

    // 10: linearity of structures on vector bundles
    s.line("let c10_so3 = dual_poisson(lie_algebra(3, [1, 2, 3, 1], [2, 3, 1, 1], [3, 1, 2, 1]))");
    s.line("let c10_aff = dual_poisson(lie_algebra(2, [1, 2, 1, 1]))");
    s.line("patch Q = (q)");
    s.line("let c10_tq = dual_poisson(tangent_algebroid(Q))");
    s.line("patch TQ = (q, p)");
    s.line("patch U = (u1, u2)");
    s.check("linear", "graph_bivector(c10_so3), 0", true, "c10/so3-dual");
    s.check("linear", "graph_bivector(c10_aff), 0", true, "c10/affine-dual");
    s.check("linear", "graph_bivector(c10_tq), 1", true, "c10/cotangent-poisson");
    s.line("use TQ");
    s.check("linear", "graph_two_form(-dq^dp), 1", true, "c10/canonical-form");
    s.check("linear", "graph_two_form((p + 1)*dq^dp), 1", false, "c10/shifted-canonical-form");
    s.line("use U");
    s.check("linear", "graph_bivector(Du1^Du2), 0", false, "c10/constant-bivector");
    s.line("use c10_so3");
    s.check("linear", "graph_bivector(c10_so3 + Dxi1^Dxi2), 0", false, "c10/shifted-so3-dual");
    s.src
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_is_deterministic_and_parses() {
        let a = example_suite();
        assert_eq!(a, example_suite());
        let cf = crate::cli::parse_checkfile(&a).unwrap();
        let checks = cf
            .lines
            .iter()
            .filter(|l| matches!(l.stmt, crate::cli::Stmt::Check { .. }))
            .count();
        assert!(checks > 150, "{checks}");
    }

    #[test]
    fn random_polys_parse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = crate::symalg::Patch::new("R", ["x", "y"]).unwrap();
        for _ in 0..50 {
            let s = rand_poly(&mut rng, &["x", "y"]);
            crate::symalg::parse_expr(&s, &p).unwrap();
        }
    }
}
