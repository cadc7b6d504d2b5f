//! Polynomial Lie groupoids on global charts.
//!
//! Composable pairs are parametrized by an explicit chart `comp` with maps
//! `g_of, h_of, mul: comp -> G`. The chart must be solved: every coordinate of
//! `comp` is literally one coordinate of `g_of` or of `h_of`. This is what
//! lets translations, tangent pairs and triples be derived without solving
//! polynomial equations.

mod cotangent;
mod lie;
mod multiplicative;

pub use cotangent::{cotangent_compose, cotangent_source_target, CotangentStructure};
pub use lie::{
    abelian_invariant_section, check_ca_identities, coboundary, induced_dual_bracket,
    induced_im_foliation, induced_im_two_form, lie_algebroid_of, pair_section, CaFamily,
};
pub use multiplicative::{
    check_multiplicative_bivector, check_multiplicative_frame, check_multiplicative_two_form,
};

use crate::cartan::PolyMap;
use crate::error::{Error, Result};
use crate::report::{Finding, Report, Witness};
use crate::symalg::{Expr, Patch};
use crate::tanlift::{tangent_map, TangentPatch};

/// Pass/fail findings of a multiplicativity or axiom check.
pub type MultReport = Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    G,
    H,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidPatch {
    base: Patch,
    total: Patch,
    src: PolyMap,
    tgt: PolyMap,
    unit: PolyMap,
    inv: PolyMap,
    g_of: PolyMap,
    h_of: PolyMap,
    mul: PolyMap,
    slots: Vec<(Side, usize)>,
}

impl GroupoidPatch {
    /// Assemble a groupoid chart. Fails with `ChartMismatch` when
    /// `src o g_of != tgt o h_of` or when the composable-pair chart is not
    /// solved.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        src: PolyMap,
        tgt: PolyMap,
        unit: PolyMap,
        inv: PolyMap,
        g_of: PolyMap,
        h_of: PolyMap,
        mul: PolyMap,
    ) -> Result<Self> {
        let total = src.source().clone();
        let base = src.target().clone();
        let comp = g_of.source().clone();
        let shape = |m: &PolyMap, s: &Patch, t: &Patch, what: &str| -> Result<()> {
            if m.source() != s || m.target() != t {
                return Err(Error::ChartMismatch(format!(
                    "{what} must map {s} to {t}, got {} to {}",
                    m.source(),
                    m.target()
                )));
            }
            Ok(())
        };
        shape(&tgt, &total, &base, "target")?;
        shape(&unit, &base, &total, "unit")?;
        shape(&inv, &total, &total, "inverse")?;
        shape(&g_of, &comp, &total, "first factor")?;
        shape(&h_of, &comp, &total, "second factor")?;
        shape(&mul, &comp, &total, "multiplication")?;
        if g_of.then(&src)? != h_of.then(&tgt)? {
            return Err(Error::ChartMismatch(
                "s(g) and t(h) differ on the composable-pair chart".into(),
            ));
        }
        let mut slots = Vec::with_capacity(comp.dim());
        for j in 0..comp.dim() {
            let v = Expr::var(&comp, j);
            let slot = if let Some(i) = g_of.comps().iter().position(|c| *c == v) {
                (Side::G, i)
            } else if let Some(i) = h_of.comps().iter().position(|c| *c == v) {
                (Side::H, i)
            } else {
                return Err(Error::ChartMismatch(format!(
                    "chart coordinate `{}` is not a coordinate of either factor",
                    comp.coords()[j]
                )));
            };
            slots.push(slot);
        }
        Ok(GroupoidPatch {
            base,
            total,
            src,
            tgt,
            unit,
            inv,
            g_of,
            h_of,
            mul,
            slots,
        })
    }

    pub fn base(&self) -> &Patch {
        &self.base
    }

    pub fn total(&self) -> &Patch {
        &self.total
    }

    pub fn comp_chart(&self) -> &Patch {
        self.g_of.source()
    }

    pub fn src(&self) -> &PolyMap {
        &self.src
    }

    pub fn tgt(&self) -> &PolyMap {
        &self.tgt
    }

    pub fn unit(&self) -> &PolyMap {
        &self.unit
    }

    pub fn inv(&self) -> &PolyMap {
        &self.inv
    }

    pub fn g_of(&self) -> &PolyMap {
        &self.g_of
    }

    pub fn h_of(&self) -> &PolyMap {
        &self.h_of
    }

    pub fn mul(&self) -> &PolyMap {
        &self.mul
    }

    pub fn is_group(&self) -> bool {
        self.base.dim() == 0
    }

    /// Chart point for the pair `(g, h)`, or `None` if the pair is not
    /// represented (not composable, or off the chart).
    pub(crate) fn pair_point(&self, g: &[Expr], h: &[Expr]) -> Result<Option<Vec<Expr>>> {
        let c: Vec<Expr> = self
            .slots
            .iter()
            .map(|&(side, i)| match side {
                Side::G => g[i].clone(),
                Side::H => h[i].clone(),
            })
            .collect();
        let p = match g.first().or(h.first()) {
            Some(e) => e.patch().clone(),
            None => return Ok(Some(c)),
        };
        let g2 = subst_all(self.g_of.comps(), &p, &c)?;
        let h2 = subst_all(self.h_of.comps(), &p, &c)?;
        Ok((g2 == g && h2 == h).then_some(c))
    }

    /// Lift a tangent pair `(X_g, Y_h)` to a tangent vector of the chart at
    /// `c`, or `None` when the pair is not tangent to composable pairs.
    pub(crate) fn lift_pair(&self, c: &[Expr], x: &[Expr], y: &[Expr]) -> Result<Option<Vec<Expr>>> {
        let zeta: Vec<Expr> = self
            .slots
            .iter()
            .map(|&(side, i)| match side {
                Side::G => x[i].clone(),
                Side::H => y[i].clone(),
            })
            .collect();
        let jg = jacobian_at(&self.g_of, c)?;
        let jh = jacobian_at(&self.h_of, c)?;
        Ok((mat_vec(&jg, &zeta) == x && mat_vec(&jh, &zeta) == y).then_some(zeta))
    }

    /// `X_g . Y_h` at chart point `c`.
    pub(crate) fn tangent_product(&self, c: &[Expr], x: &[Expr], y: &[Expr]) -> Result<Option<Vec<Expr>>> {
        let Some(zeta) = self.lift_pair(c, x, y)? else {
            return Ok(None);
        };
        Ok(Some(mat_vec(&jacobian_at(&self.mul, c)?, &zeta)))
    }

    /// A copy of the chart patch used as a generic point, plus a chart of
    /// composable triples `(g, h, k)` given by `(c, c')` with `h_of(c) = g_of(c')`.
    fn triple_chart(&self) -> Result<(Patch, Vec<Expr>, Vec<Expr>)> {
        let comp = self.comp_chart();
        let mut coords: Vec<String> = comp.coords().to_vec();
        let mut fresh = Vec::new();
        for (j, &(side, _)) in self.slots.iter().enumerate() {
            if side == Side::H {
                let mut name = format!("k_{}", comp.coords()[j]);
                while coords.contains(&name) {
                    name.push('_');
                }
                fresh.push((j, coords.len()));
                coords.push(name);
            }
        }
        let tp = Patch::new(format!("{}3", comp.name()), coords)?;
        let c: Vec<Expr> = (0..comp.dim()).map(|j| Expr::var(&tp, j)).collect();
        let h = subst_all(self.h_of.comps(), &tp, &c)?;
        let c2: Vec<Expr> = self
            .slots
            .iter()
            .enumerate()
            .map(|(j, &(side, i))| match side {
                Side::G => h[i].clone(),
                Side::H => {
                    let idx = fresh.iter().find(|(jj, _)| *jj == j).expect("fresh").1;
                    Expr::var(&tp, idx)
                }
            })
            .collect();
        if subst_all(self.g_of.comps(), &tp, &c2)? != h {
            return Err(Error::ChartMismatch(
                "composable triples are not parametrized by the chart".into(),
            ));
        }
        Ok((tp, c, c2))
    }
}

pub(crate) fn subst_all(es: &[Expr], target: &Patch, vals: &[Expr]) -> Result<Vec<Expr>> {
    es.iter().map(|e| e.substitute(target, vals)).collect()
}

/// Jacobian of `m` (rows = target coordinates) evaluated at `pt`.
pub(crate) fn jacobian_at(m: &PolyMap, pt: &[Expr]) -> Result<Vec<Vec<Expr>>> {
    let target = match pt.first() {
        Some(e) => e.patch().clone(),
        None => m.source().clone(),
    };
    let j = m.jacobian();
    (0..j.rows())
        .map(|a| subst_all(j.row(a), &target, pt))
        .collect()
}

pub(crate) fn mat_vec(m: &[Vec<Expr>], v: &[Expr]) -> Vec<Expr> {
    m.iter()
        .map(|row| {
            let mut acc: Option<Expr> = None;
            for (a, b) in row.iter().zip(v) {
                if a.is_zero() || b.is_zero() {
                    if acc.is_none() {
                        acc = Some(Expr::zero(a.patch()));
                    }
                    continue;
                }
                let t = a * b;
                acc = Some(match acc {
                    None => t,
                    Some(s) => s + t,
                });
            }
            acc.expect("nonempty row")
        })
        .collect()
}

/// `m^T v`.
pub(crate) fn mat_t_vec(m: &[Vec<Expr>], v: &[Expr], patch: &Patch) -> Vec<Expr> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| {
            let mut acc = Expr::zero(patch);
            for (row, vi) in m.iter().zip(v) {
                if !row[j].is_zero() && !vi.is_zero() {
                    acc = acc + &row[j] * vi;
                }
            }
            acc
        })
        .collect()
}

pub(crate) fn first_diff(a: &[Expr], b: &[Expr]) -> Option<(usize, Expr)> {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| (i, x - y))
        .find(|(_, d)| !d.is_zero())
}

fn suffixed(base: &Patch, k: usize) -> Vec<String> {
    base.coords().iter().map(|c| format!("{c}_{k}")).collect()
}

fn vars(p: &Patch) -> Vec<Expr> {
    (0..p.dim()).map(|i| Expr::var(p, i)).collect()
}

fn map_by_names(src: &Patch, tgt: &Patch, names: &[String]) -> Result<PolyMap> {
    let comps = names
        .iter()
        .map(|n| Expr::coord(src, n))
        .collect::<Result<Vec<_>>>()?;
    PolyMap::new(src, tgt, comps)
}

/// `M x M` over `M`, with `t = pr1`, `s = pr2` and `(x, y)(y, z) = (x, z)`.
/// Coordinates carry suffixes `_1`, `_2` on `G` and `_1`, `_2`, `_3` on the
/// chart of composable pairs.
pub fn pair_groupoid(m: &Patch) -> Result<GroupoidPatch> {
    let (c1, c2, c3) = (suffixed(m, 1), suffixed(m, 2), suffixed(m, 3));
    let g = Patch::new(
        format!("Pair{}", m.name()),
        c1.iter().chain(&c2).cloned().collect::<Vec<_>>(),
    )?;
    let comp = Patch::new(
        format!("Pair{}2", m.name()),
        c1.iter().chain(&c2).chain(&c3).cloned().collect::<Vec<_>>(),
    )?;
    let tgt = map_by_names(&g, m, &c1)?;
    let src = map_by_names(&g, m, &c2)?;
    let xs = vars(m);
    let unit = PolyMap::new(m, &g, xs.iter().chain(&xs).cloned().collect())?;
    let inv = map_by_names(&g, &g, &c2.iter().chain(&c1).cloned().collect::<Vec<_>>())?;
    let g_of = map_by_names(&comp, &g, &c1.iter().chain(&c2).cloned().collect::<Vec<_>>())?;
    let h_of = map_by_names(&comp, &g, &c2.iter().chain(&c3).cloned().collect::<Vec<_>>())?;
    let mul = map_by_names(&comp, &g, &c1.iter().chain(&c3).cloned().collect::<Vec<_>>())?;
    GroupoidPatch::new(src, tgt, unit, inv, g_of, h_of, mul)
}

/// A group over a point given by polynomial multiplication and inverse.
/// `g` has coordinates `names`; the chart of pairs is `(names, names_2)`.
pub fn group_from(
    name: &str,
    names: &[&str],
    mul: impl Fn(&[Expr], &[Expr]) -> Vec<Expr>,
    inv: impl Fn(&[Expr]) -> Vec<Expr>,
) -> Result<GroupoidPatch> {
    let g = Patch::new(name, names.iter().copied())?;
    let second: Vec<String> = names.iter().map(|n| format!("{n}_2")).collect();
    let comp = Patch::new(
        format!("{name}2"),
        names.iter().map(|s| s.to_string()).chain(second.iter().cloned()).collect::<Vec<_>>(),
    )?;
    let pt = Patch::point();
    let n = names.len();
    let cv = vars(&comp);
    let (x, y) = cv.split_at(n);
    let src = PolyMap::new(&g, &pt, vec![])?;
    let tgt = src.clone();
    let unit = PolyMap::new(&pt, &g, vec![Expr::zero(&pt); n])?;
    let invm = PolyMap::new(&g, &g, inv(&vars(&g)))?;
    let g_of = PolyMap::new(&comp, &g, x.to_vec())?;
    let h_of = PolyMap::new(&comp, &g, y.to_vec())?;
    let mulm = PolyMap::new(&comp, &g, mul(x, y))?;
    GroupoidPatch::new(src, tgt, unit, invm, g_of, h_of, mulm)
}

/// `(R^n, +)` with coordinates `x1..xn`.
pub fn abelian_group(n: usize) -> Result<GroupoidPatch> {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    group_from(
        &format!("R{n}"),
        &refs,
        |x, y| x.iter().zip(y).map(|(a, b)| a + b).collect(),
        |x| x.iter().map(|a| -a).collect(),
    )
}

/// Heisenberg group `(a, b, c)(a', b', c') = (a + a', b + b', c + c' + a b')`.
pub fn heisenberg3() -> Result<GroupoidPatch> {
    group_from(
        "Heis",
        &["a", "b", "c"],
        |x, y| vec![&x[0] + &y[0], &x[1] + &y[1], &x[2] + &y[2] + &x[0] * &y[1]],
        |x| vec![-&x[0], -&x[1], &x[0] * &x[1] - &x[2]],
    )
}

/// Apply the tangent functor to every structure map.
pub fn tangent_groupoid(g: &GroupoidPatch) -> Result<GroupoidPatch> {
    let tm = TangentPatch::new(&g.base)?;
    let tg = TangentPatch::new(&g.total)?;
    let tc = TangentPatch::new(g.comp_chart())?;
    GroupoidPatch::new(
        tangent_map(&g.src, &tg, &tm)?,
        tangent_map(&g.tgt, &tg, &tm)?,
        tangent_map(&g.unit, &tm, &tg)?,
        tangent_map(&g.inv, &tg, &tg)?,
        tangent_map(&g.g_of, &tc, &tg)?,
        tangent_map(&g.h_of, &tc, &tg)?,
        tangent_map(&g.mul, &tc, &tg)?,
    )
}

fn vec_finding(name: &str, at: &str, coords: &Patch, a: &[Expr], b: &[Expr]) -> Finding {
    Finding::from_option(
        name,
        first_diff(a, b).map(|(i, d)| Witness::Value {
            at: format!("{at} on {}", coords.coords().get(i).map_or("?", String::as_str)),
            value: d,
        }),
    )
}

/// Source/target of products, associativity, unit and inverse laws.
pub fn check_groupoid_axioms(g: &GroupoidPatch) -> Result<MultReport> {
    let comp = g.comp_chart();
    let mut r = Report::new();
    let prod = g.mul.comps().to_vec();
    let gp = g.g_of.comps().to_vec();
    let hp = g.h_of.comps().to_vec();
    let s = |pt: &[Expr], p: &Patch| subst_all(g.src.comps(), p, pt);
    let t = |pt: &[Expr], p: &Patch| subst_all(g.tgt.comps(), p, pt);
    r.push(vec_finding("source of product", "s(gh) - s(h)", &g.base, &s(&prod, comp)?, &s(&hp, comp)?));
    r.push(vec_finding("target of product", "t(gh) - t(g)", &g.base, &t(&prod, comp)?, &t(&gp, comp)?));

    let (tp, c1, c2) = g.triple_chart()?;
    let gg = subst_all(g.g_of.comps(), &tp, &c1)?;
    let gh = subst_all(g.mul.comps(), &tp, &c1)?;
    let k = subst_all(g.h_of.comps(), &tp, &c2)?;
    let hk = subst_all(g.mul.comps(), &tp, &c2)?;
    let assoc = match (g.pair_point(&gh, &k)?, g.pair_point(&gg, &hk)?) {
        (Some(p1), Some(p2)) => {
            let left = subst_all(g.mul.comps(), &tp, &p1)?;
            let right = subst_all(g.mul.comps(), &tp, &p2)?;
            vec_finding("associativity", "(gh)k - g(hk)", &g.total, &left, &right)
        }
        _ => Finding::fail(
            "associativity",
            Witness::Text("(gh, k) or (g, hk) is not a composable pair of the chart".into()),
        ),
    };
    r.push(assoc);

    let total = &g.total;
    let x = vars(total);
    let base = &g.base;
    let bx = vars(base);
    r.push(vec_finding(
        "units",
        "s(e(x)) - x",
        base,
        &subst_all(g.src.comps(), base, g.unit.comps())?,
        &bx,
    ));
    let tu = subst_all(g.tgt.comps(), base, g.unit.comps())?;
    if let Some(f) = first_diff(&tu, &bx) {
        r.findings.last_mut().expect("pushed").witness.get_or_insert(Witness::Value {
            at: format!("t(e(x)) - x on {}", base.coords()[f.0]),
            value: f.1,
        });
    }
    let et = subst_all(g.unit.comps(), total, g.tgt.comps())?;
    let es = subst_all(g.unit.comps(), total, g.src.comps())?;
    let left_unit = match g.pair_point(&et, &x)? {
        Some(p) => vec_finding("left unit", "e(t(g)) g - g", total, &subst_all(g.mul.comps(), total, &p)?, &x),
        None => Finding::fail("left unit", Witness::Text("(e(t(g)), g) is not on the chart".into())),
    };
    r.push(left_unit);
    let right_unit = match g.pair_point(&x, &es)? {
        Some(p) => vec_finding("right unit", "g e(s(g)) - g", total, &subst_all(g.mul.comps(), total, &p)?, &x),
        None => Finding::fail("right unit", Witness::Text("(g, e(s(g))) is not on the chart".into())),
    };
    r.push(right_unit);

    let gi = g.inv.comps().to_vec();
    let mut inv = vec_finding("inverse", "s(g^-1) - t(g)", base, &s(&gi, total)?, g.tgt.comps());
    if inv.passed() {
        inv = vec_finding("inverse", "t(g^-1) - s(g)", base, &t(&gi, total)?, g.src.comps());
    }
    if inv.passed() {
        inv = match g.pair_point(&x, &gi)? {
            Some(p) => vec_finding("inverse", "g g^-1 - e(t(g))", total, &subst_all(g.mul.comps(), total, &p)?, &et),
            None => Finding::fail("inverse", Witness::Text("(g, g^-1) is not on the chart".into())),
        };
    }
    if inv.passed() {
        inv = match g.pair_point(&gi, &x)? {
            Some(p) => vec_finding("inverse", "g^-1 g - e(s(g))", total, &subst_all(g.mul.comps(), total, &p)?, &es),
            None => Finding::fail("inverse", Witness::Text("(g^-1, g) is not on the chart".into())),
        };
    }
    r.push(inv);
    Ok(r)
}

#[cfg(test)]
mod tests;
