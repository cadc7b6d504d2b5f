//! Multiplicativity of 2-forms, bivectors and Lagrangian frames.

use super::cotangent::transpose;
use super::{jacobian_at, mat_t_vec, mat_vec, subst_all, GroupoidPatch, MultReport};
use crate::cartan::{pullback_form, Bivector, KForm};
use crate::courant::{lagrangian_finding, Frame};
use crate::error::{Error, Result};
use crate::report::{Finding, Report, Witness};
use crate::symalg::{span_contains, span_rank, Expr, ExprMatrix, Patch};

/// `m* w = pr1* w + pr2* w` on the chart of composable pairs.
pub fn check_multiplicative_two_form(g: &GroupoidPatch, w: &KForm) -> Result<MultReport> {
    g.total.ensure_same(w.patch())?;
    let lhs = pullback_form(&g.mul, w)?;
    let rhs = pullback_form(&g.g_of, w)?.add(&pullback_form(&g.h_of, w)?)?;
    let d = lhs.sub(&rhs)?;
    let comp = g.comp_chart();
    let witness = d.terms().next().map(|(idx, c)| Witness::Value {
        at: format!(
            "(m*w - pr1*w - pr2*w) on {}",
            idx.iter()
                .map(|&i| format!("d{}", comp.coords()[i]))
                .collect::<Vec<_>>()
                .join("^")
        ),
        value: c.clone(),
    });
    let mut r = Report::new();
    r.push(Finding::from_option("multiplicative", witness));
    Ok(r)
}

/// `pi(gh) = (l_g)_* pi(h) + (r_h)_* pi(g)` on a group.
pub fn check_multiplicative_bivector(g: &GroupoidPatch, p: &Bivector) -> Result<MultReport> {
    if !g.is_group() {
        return Err(Error::NotAGroup(g.base.dim()));
    }
    g.total.ensure_same(p.patch())?;
    let comp = g.comp_chart();
    let n = g.total.dim();
    let c: Vec<Expr> = (0..comp.dim()).map(|i| Expr::var(comp, i)).collect();
    let jm = jacobian_at(&g.mul, &c)?;
    let zero = vec![Expr::zero(comp); n];
    // columns of Tl_g and Tr_h: products of (0, e_j) and (e_j, 0)
    let mut l_cols = Vec::with_capacity(n);
    let mut r_cols = Vec::with_capacity(n);
    for j in 0..n {
        let ej: Vec<Expr> = (0..n)
            .map(|i| if i == j { Expr::one(comp) } else { Expr::zero(comp) })
            .collect();
        let zl = g.lift_pair(&c, &zero, &ej)?.ok_or_else(|| {
            Error::TranslationNotDerivable("left translation".into())
        })?;
        let zr = g.lift_pair(&c, &ej, &zero)?.ok_or_else(|| {
            Error::TranslationNotDerivable("right translation".into())
        })?;
        l_cols.push(mat_vec(&jm, &zl));
        r_cols.push(mat_vec(&jm, &zr));
    }
    let lg = ExprMatrix::from_cols(comp, l_cols)?;
    let rh = ExprMatrix::from_cols(comp, r_cols)?;
    let on = |map: &crate::cartan::PolyMap| -> Result<ExprMatrix> {
        let m = p.matrix();
        let rows = (0..n)
            .map(|i| subst_all(m.row(i), comp, map.comps()))
            .collect::<Result<Vec<_>>>()?;
        ExprMatrix::from_rows(comp, rows)
    };
    let lhs = on(&g.mul)?;
    let t1 = lg.mul(&on(&g.h_of)?)?.mul(&lg.transpose())?;
    let t2 = rh.mul(&on(&g.g_of)?)?.mul(&rh.transpose())?;
    let mut witness = None;
    'outer: for a in 0..n {
        for b in a + 1..n {
            let d = lhs.get(a, b) - t1.get(a, b) - t2.get(a, b);
            if !d.is_zero() {
                witness = Some(Witness::Value {
                    at: format!(
                        "(pi(gh) - l_g pi(h) - r_h pi(g)) on D{}^D{}",
                        g.total.coords()[a],
                        g.total.coords()[b]
                    ),
                    value: d,
                });
                break 'outer;
            }
        }
    }
    let mut r = Report::new();
    r.push(Finding::from_option("multiplicative", witness));
    Ok(r)
}

/// Frame coefficients (vector part, form part) evaluated at a point.
fn frame_at(l: &Frame, pt: &[Expr], p: &Patch) -> Result<Vec<Vec<Expr>>> {
    l.secs()
        .iter()
        .map(|s| subst_all(&s.coefficients(), p, pt))
        .collect()
}

fn combine(cols: &[Vec<Expr>], lam: &[Expr], p: &Patch) -> Vec<Expr> {
    let len = cols.first().map_or(0, Vec::len);
    let mut out = vec![Expr::zero(p); len];
    for (col, l) in cols.iter().zip(lam) {
        if l.is_zero() {
            continue;
        }
        for (o, c) in out.iter_mut().zip(col) {
            if !c.is_zero() {
                *o = &*o + c * l;
            }
        }
    }
    out
}

/// Is `l` a subgroupoid of `TG + T*G`? Products of composable elements must
/// stay in `l`, and the source and target of every element, embedded as
/// units, must lie in `l`. The unit subbundle `E` is reported as a note.
pub fn check_multiplicative_frame(g: &GroupoidPatch, l: &Frame) -> Result<MultReport> {
    g.total.ensure_same(l.patch())?;
    if let Some(w) = lagrangian_finding(l)?.witness {
        return Err(Error::NotLagrangian(w.to_string()));
    }
    let n = g.total.dim();
    let dm = g.base.dim();
    let r = g.algebroid_rank();
    let comp = g.comp_chart();
    let c: Vec<Expr> = (0..comp.dim()).map(|i| Expr::var(comp, i)).collect();
    let gp = g.g_of.comps().to_vec();
    let hp = g.h_of.comps().to_vec();
    let mp = g.mul.comps().to_vec();
    let sg = frame_at(l, &gp, comp)?;
    let sh = frame_at(l, &hp, comp)?;
    let sm = frame_at(l, &mp, comp)?;

    // Composability constraints on (lambda, mu).
    let js = if dm == 0 { Vec::new() } else { jacobian_at(&g.src, &gp)? };
    let jt = if dm == 0 { Vec::new() } else { jacobian_at(&g.tgt, &hp)? };
    let left = g.left_frame_at(&gp, comp)?;
    let right = g.right_frame_at(&hp, comp)?;
    let mut rows = vec![Vec::with_capacity(2 * n); dm + r];
    for (side, frame) in [(0, &sg), (1, &sh)] {
        for col in frame.iter() {
            let (x, a) = col.split_at(n);
            let tang = if side == 0 { mat_vec(&js, x) } else { mat_vec(&jt, x) };
            let cot: Vec<Expr> = if side == 0 {
                left.iter().map(|v| super::cotangent::dot(a, v, comp)).collect()
            } else {
                right.iter().map(|v| super::cotangent::dot(a, v, comp)).collect()
            };
            for (k, e) in tang.into_iter().chain(cot).enumerate() {
                rows[k].push(if side == 0 { e } else { -e });
            }
        }
    }
    let pairs: Vec<Vec<Expr>> = if rows.is_empty() {
        (0..2 * n)
            .map(|j| (0..2 * n).map(|i| if i == j { Expr::one(comp) } else { Expr::zero(comp) }).collect())
            .collect()
    } else {
        ExprMatrix::from_rows(comp, rows)?.nullspace()
    };

    let jm = jacobian_at(&g.mul, &c)?;
    let jmt = ExprMatrix::from_rows(comp, transpose(&jm, comp))?;
    if jmt.generic_rank() < n {
        return Err(Error::UnderdeterminedSpan(
            "the product is not determined by composable tangent pairs".into(),
        ));
    }
    let jg = jacobian_at(&g.g_of, &c)?;
    let jh = jacobian_at(&g.h_of, &c)?;
    let mut prod = None;
    for (k, lm) in pairs.iter().enumerate() {
        let (lam, mu) = lm.split_at(n);
        let u = combine(&sg, lam, comp);
        let v = combine(&sh, mu, comp);
        let (x, a) = u.split_at(n);
        let (y, b) = v.split_at(n);
        let zeta = g.lift_pair(&c, x, y)?.ok_or_else(|| {
            Error::TranslationNotDerivable("composable tangent pair does not lift to the chart".into())
        })?;
        let z = mat_vec(&jm, &zeta);
        let rhs: Vec<Expr> = mat_t_vec(&jg, a, comp)
            .iter()
            .zip(mat_t_vec(&jh, b, comp))
            .map(|(p, q)| p + q)
            .collect();
        let (num, den) = jmt.solve_cleared(&rhs).map_err(|e| match e {
            Error::Inconsistent => Error::NotComposable("covector product does not exist".into()),
            other => other,
        })?;
        let mut w: Vec<Expr> = z.iter().map(|e| e * &den).collect();
        w.extend(num);
        if !span_contains(comp, &sm, &w) {
            prod = Some(Witness::Rank {
                what: format!("frame at gh together with composed pair {}", k + 1),
                expected: n,
                found: span_rank(comp, &{
                    let mut all = sm.clone();
                    all.push(w);
                    all
                }),
            });
            break;
        }
    }
    let mut report = Report::new();
    report.push(Finding::from_option("products stay in L", prod));

    // Units: source and target of elements of L, embedded back as units.
    let total = &g.total;
    let xg: Vec<Expr> = (0..n).map(|i| Expr::var(total, i)).collect();
    let frame_g = frame_at(l, &xg, total)?;
    let mut unit = None;
    'units: for (which, base_pt) in [("source", g.src.comps().to_vec()), ("target", g.tgt.comps().to_vec())] {
        let upt = subst_all(g.unit.comps(), total, &base_pt)?;
        let frame_u = frame_at(l, &upt, total)?;
        let te = g.unit_jacobian_at(&base_pt, total)?;
        let jmap = if dm == 0 {
            Vec::new()
        } else if which == "source" {
            jacobian_at(&g.src, &xg)?
        } else {
            jacobian_at(&g.tgt, &xg)?
        };
        for (k, col) in frame_g.iter().enumerate() {
            let (x, a) = col.split_at(n);
            let v = mat_vec(&jmap, x);
            let xi = if which == "source" {
                g.cotangent_source(&xg, a, total)?
            } else {
                g.cotangent_target(&xg, a, total)?
            };
            let (num, den) = g.unit_covector(&base_pt, &xi, total)?;
            let tv = if dm == 0 { vec![Expr::zero(total); n] } else { mat_vec(&te, &v) };
            let mut w: Vec<Expr> = tv.iter().map(|e| e * &den).collect();
            w.extend(num);
            if !span_contains(total, &frame_u, &w) {
                unit = Some(Witness::Text(format!(
                    "the unit over the {which} of section {} is not in L",
                    k + 1
                )));
                break 'units;
            }
        }
    }
    report.push(Finding::from_option("units of E lie in L", unit));

    // Rank of E = {(v, xi) : unit(v, xi) in L} along the units.
    let base = &g.base;
    let bx: Vec<Expr> = (0..dm).map(|i| Expr::var(base, i)).collect();
    let upt = g.unit.comps().to_vec();
    let mut cols = frame_at(l, &upt, base)?;
    let te = g.unit_jacobian_at(&bx, base)?;
    for i in 0..dm {
        let mut col: Vec<Expr> = te.iter().map(|row| row[i].clone()).collect();
        col.extend(vec![Expr::zero(base); n]);
        cols.push(col);
    }
    for a in 0..r {
        let xi: Vec<Expr> = (0..r)
            .map(|b| if a == b { Expr::one(base) } else { Expr::zero(base) })
            .collect();
        let (num, _) = g.unit_covector(&bx, &xi, base)?;
        let mut col = vec![Expr::zero(base); n];
        col.extend(num);
        cols.push(col);
    }
    let e_rank = 2 * n - span_rank(base, &cols);
    report.note(format!(
        "unit subbundle E of TM + A*G has generic rank {e_rank} (units kill Te(TM) and extend xi on Ker Ts)"
    ));
    Ok(report)
}
