//! The Lie functor: algebroid of a groupoid, infinitesimal data induced by
//! multiplicative structures, and the compatibility identities of the
//! standard Courant algebroid with the groupoid structure.

use num_rational::BigRational;

use super::cotangent::{dot, transpose};
use super::{
    check_multiplicative_bivector, first_diff, jacobian_at, mat_t_vec, subst_all, GroupoidPatch,
    MultReport,
};
use crate::algebroid::{AlgebroidPatch, ASection, IMFoliation, IMTwoForm};
use crate::cartan::{lie_bracket, pullback_form, Bivector, KForm, VField};
use crate::courant::{courant_bracket, pairing, GSec};
use crate::error::{Error, Result};
use crate::report::{Finding, Report, Witness};
use crate::symalg::{span_rank, Expr, ExprMatrix, Patch};

fn vars(p: &Patch) -> Vec<Expr> {
    (0..p.dim()).map(|i| Expr::var(p, i)).collect()
}

fn poly(n: &Expr, d: &Expr) -> Result<Expr> {
    n.div_exact(d)
        .ok_or_else(|| Error::NotPolynomial(format!("({n})/({d})")))
}

/// Solve `cols * x = v` and insist on a polynomial solution.
fn poly_solve(p: &Patch, cols: &[Vec<Expr>], v: &[Expr]) -> Result<Vec<Expr>> {
    if cols.is_empty() {
        return Ok(Vec::new());
    }
    let (num, den) = ExprMatrix::from_cols(p, cols.to_vec())?.solve_cleared(v)?;
    num.iter().map(|x| poly(x, &den)).collect()
}

/// Bracket of right-invariant fields, restricted to the units and written in
/// the unit frame. The anchor is `Tt` on the frame.
pub fn lie_algebroid_of(g: &GroupoidPatch) -> Result<AlgebroidPatch> {
    let base = &g.base;
    let total = &g.total;
    let dm = base.dim();
    let r = g.algebroid_rank();
    let frame = g.unit_frame()?;
    let mut anchor = ExprMatrix::zeros(base, dm, r);
    if dm > 0 {
        let jt = jacobian_at(&g.tgt, g.unit.comps())?;
        for (a, e) in frame.iter().enumerate() {
            for (i, v) in super::mat_vec(&jt, e).into_iter().enumerate() {
                anchor.set(i, a, v);
            }
        }
    }
    let fields: Vec<VField> = g
        .right_frame_at(&vars(total), total)?
        .into_iter()
        .map(|c| VField::new(total, c))
        .collect::<Result<_>>()?;
    let mut structure = vec![vec![vec![Expr::zero(base); r]; r]; r];
    for a in 0..r {
        for b in a + 1..r {
            let br = lie_bracket(&fields[a], &fields[b])?;
            let at_units = subst_all(br.comps(), base, g.unit.comps())?;
            let c = poly_solve(base, &frame, &at_units).map_err(|e| match e {
                Error::Inconsistent => Error::RankJump(
                    "bracket of right-invariant fields leaves Ker(Ts) along the units".into(),
                ),
                other => other,
            })?;
            for (k, ck) in c.into_iter().enumerate() {
                structure[k][b][a] = -&ck;
                structure[k][a][b] = ck;
            }
        }
    }
    AlgebroidPatch::new(base, r, anchor, structure)
}

/// `t* beta - s* beta` on `G`.
pub fn coboundary(g: &GroupoidPatch, beta: &KForm) -> Result<KForm> {
    pullback_form(&g.tgt, beta)?.sub(&pullback_form(&g.src, beta)?)
}

/// `sigma(e_a) = (i_{e_a} w)` restricted to `Te(TM)` along the units.
pub fn induced_im_two_form(g: &GroupoidPatch, w: &KForm) -> Result<(AlgebroidPatch, IMTwoForm)> {
    g.total.ensure_same(w.patch())?;
    if w.degree() != 2 {
        return Err(Error::DimensionMismatch("expected a 2-form".into()));
    }
    let a = lie_algebroid_of(g)?;
    let base = &g.base;
    let n = g.total.dim();
    let dm = base.dim();
    let frame = g.unit_frame()?;
    let te = g.unit_jacobian_at(&vars(base), base)?;
    let mut wm = vec![vec![Expr::zero(base); n]; n];
    for (k, row) in wm.iter_mut().enumerate() {
        for (l, e) in row.iter_mut().enumerate() {
            *e = w.get(&[k, l]).substitute(base, g.unit.comps())?;
        }
    }
    let mut sigma = ExprMatrix::zeros(base, dm, a.rank());
    for i in 0..dm {
        let ti: Vec<Expr> = te.iter().map(|row| row[i].clone()).collect();
        let wt = super::mat_vec(&wm, &ti);
        for (col, e) in frame.iter().enumerate() {
            sigma.set(i, col, dot(e, &wt, base));
        }
    }
    Ok((a, IMTwoForm { sigma }))
}

/// Structure constants of `g*` from the linearization of a multiplicative
/// bivector at the unit: `c*^k_{ab} = d_k pi^{ab}(e)`.
pub fn induced_dual_bracket(g: &GroupoidPatch, p: &Bivector) -> Result<AlgebroidPatch> {
    let rep = check_multiplicative_bivector(g, p)?;
    if let Some(w) = rep.witness_text() {
        return Err(Error::NotMultiplicative(w));
    }
    let n = g.total.dim();
    let e = g.unit.comps();
    let pt = Patch::point();
    let mut c = vec![vec![vec![BigRational::from_integer(0.into()); n]; n]; n];
    for (k, ck) in c.iter_mut().enumerate() {
        for a in 0..n {
            for b in 0..n {
                let v = p.get(a, b).diff(k).substitute(&pt, e)?;
                ck[a][b] = v.constant_value().expect("constant at a point");
            }
        }
    }
    AlgebroidPatch::lie_algebra(&c)
}

fn independent(p: &Patch, vs: impl IntoIterator<Item = Vec<Expr>>) -> Vec<Vec<Expr>> {
    let mut out: Vec<Vec<Expr>> = Vec::new();
    for v in vs {
        let mut ext = out.clone();
        ext.push(v);
        if span_rank(p, &ext) > out.len() {
            out = ext;
        }
    }
    out
}

/// `(F_M, K, nabla)` induced by a multiplicative foliation of `G`, given by
/// spanning vector fields. `K = F ∩ A` and `F_M = F ∩ Te(TM)` along the
/// units, with `nabla_{rho(k)}(u + K) = [k, u] + K`.
pub fn induced_im_foliation(
    g: &GroupoidPatch,
    fields: &[VField],
) -> Result<(AlgebroidPatch, IMFoliation)> {
    let a = lie_algebroid_of(g)?;
    let base = &g.base;
    let r = a.rank();
    let dm = base.dim();
    let frame = g.unit_frame()?;
    let f_units: Vec<Vec<Expr>> = fields
        .iter()
        .map(|f| {
            g.total.ensure_same(f.patch())?;
            subst_all(f.comps(), base, g.unit.comps())
        })
        .collect::<Result<_>>()?;
    let neg: Vec<Vec<Expr>> = f_units
        .iter()
        .map(|v| v.iter().map(|e| -e).collect())
        .collect();
    let intersect = |left: Vec<Vec<Expr>>, keep: usize| -> Result<Vec<Vec<Expr>>> {
        let mut cols = left;
        cols.extend(neg.iter().cloned());
        if cols.is_empty() {
            return Ok(Vec::new());
        }
        let ns = ExprMatrix::from_cols(base, cols)?.nullspace();
        Ok(independent(base, ns.into_iter().map(|v| v[..keep].to_vec())))
    };
    let kernel = intersect(frame.clone(), r)?;
    let te = g.unit_jacobian_at(&vars(base), base)?;
    let te_cols: Vec<Vec<Expr>> = (0..dm)
        .map(|i| te.iter().map(|row| row[i].clone()).collect())
        .collect();
    let f_m = intersect(te_cols, dm)?;
    let rho_k: Vec<Vec<Expr>> = kernel.iter().map(|k| a.anchor_of(k).comps().to_vec()).collect();
    let mut leaves = Vec::new();
    let mut lifts: Vec<ASection> = Vec::new();
    for f in &f_m {
        if rho_k.is_empty() {
            return Err(Error::HypothesisFails("rho(K) does not span F_M".into()));
        }
        let (num, den) = ExprMatrix::from_cols(base, rho_k.clone())?
            .solve_cleared(f)
            .map_err(|_| Error::HypothesisFails("rho(K) does not span F_M".into()))?;
        leaves.push(VField::new(base, f.iter().map(|e| e * &den).collect())?);
        let mut k = vec![Expr::zero(base); r];
        for (kj, nj) in kernel.iter().zip(&num) {
            for (ki, c) in k.iter_mut().zip(kj) {
                *ki = &*ki + c * nj;
            }
        }
        lifts.push(k);
    }
    let mut reps: Vec<ASection> = Vec::new();
    for b in 0..r {
        let mut ext = kernel.clone();
        ext.extend(reps.iter().cloned());
        let before = span_rank(base, &ext);
        ext.push(a.frame(b));
        if span_rank(base, &ext) > before {
            reps.push(a.frame(b));
        }
    }
    let mut basis = reps.clone();
    basis.extend(kernel.iter().cloned());
    let q = reps.len();
    let mut connection = vec![vec![vec![Expr::zero(base); q]; q]; lifts.len()];
    for (m, k) in lifts.iter().enumerate() {
        for (s, u) in reps.iter().enumerate() {
            let coords = poly_solve(base, &basis, &a.bracket(k, u))?;
            connection[m][s].clone_from_slice(&coords[..q]);
        }
    }
    let f = IMFoliation {
        leaves,
        kernel,
        quotient_frame: reps,
        connection,
        parallel: None,
    };
    Ok((a, f))
}

/// Two triples of generalized sections `(x1, x2, x)` on `G` with
/// `x(gh) = x1(g) o x2(h)` for every composable pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaFamily {
    pub a: [GSec; 3],
    pub b: [GSec; 3],
}

impl CaFamily {
    /// Sections that are related to themselves, `a(gh) = a(g) o a(h)`.
    pub fn uniform(a: GSec, b: GSec) -> Self {
        CaFamily {
            a: [a.clone(), a.clone(), a],
            b: [b.clone(), b.clone(), b],
        }
    }
}

/// Linear vector field `x -> M x + v` with a constant form on `(R^n, +)`.
pub fn abelian_invariant_section(
    g: &GroupoidPatch,
    m: &[Vec<BigRational>],
    v: &[BigRational],
    alpha: &[BigRational],
) -> Result<GSec> {
    if !g.is_group() {
        return Err(Error::NotAGroup(g.base.dim()));
    }
    let p = &g.total;
    let n = p.dim();
    if m.len() != n || m.iter().any(|r| r.len() != n) || v.len() != n || alpha.len() != n {
        return Err(Error::DimensionMismatch(format!("expected size {n}")));
    }
    let comps = (0..n)
        .map(|i| {
            let mut acc = Expr::constant(p, v[i].clone());
            for (j, c) in m[i].iter().enumerate() {
                acc = acc + Expr::var(p, j).scale(c);
            }
            acc
        })
        .collect();
    let form = alpha.iter().map(|c| Expr::constant(p, c.clone())).collect();
    GSec::new(VField::new(p, comps)?, KForm::one_form(p, form)?)
}

/// `(X + X, t* beta - s* beta)` on a pair groupoid: the vector field projects
/// to `X` under both `t` and `s`.
pub fn pair_section(g: &GroupoidPatch, x: &VField, beta: &KForm) -> Result<GSec> {
    let total = &g.total;
    let dm = g.base.dim();
    if total.dim() != 2 * dm {
        return Err(Error::WrongShape("not a pair groupoid".into()));
    }
    let mut rows = jacobian_at(&g.tgt, &vars(total))?;
    rows.extend(jacobian_at(&g.src, &vars(total))?);
    let mut rhs = subst_all(x.comps(), total, g.tgt.comps())?;
    rhs.extend(subst_all(x.comps(), total, g.src.comps())?);
    let cols = transpose(&rows, total);
    let v = poly_solve(total, &cols, &rhs)?;
    GSec::new(VField::new(total, v)?, coboundary(g, beta)?)
}

/// Why `(x1, x2, x)` is not related by the multiplication, if it is not.
fn related(g: &GroupoidPatch, t: &[GSec; 3]) -> Result<Option<String>> {
    let comp = g.comp_chart();
    let n = g.total.dim();
    let c = vars(comp);
    let at = |s: &GSec, m: &crate::cartan::PolyMap| subst_all(&s.coefficients(), comp, m.comps());
    let u1 = at(&t[0], &g.g_of)?;
    let u2 = at(&t[1], &g.h_of)?;
    let u = at(&t[2], &g.mul)?;
    let (x1, a1) = u1.split_at(n);
    let (x2, a2) = u2.split_at(n);
    let (x, a) = u.split_at(n);
    let Some(prod) = g.tangent_product(&c, x1, x2)? else {
        return Ok(Some("vector parts are not composable".into()));
    };
    if let Some((i, d)) = first_diff(&prod, x) {
        return Ok(Some(format!(
            "X1 . X2 - X on D{}: {d}",
            g.total.coords()[i]
        )));
    }
    let gp = g.g_of.comps().to_vec();
    let hp = g.h_of.comps().to_vec();
    if let Some((i, d)) = first_diff(
        &g.cotangent_source(&gp, a1, comp)?,
        &g.cotangent_target(&hp, a2, comp)?,
    ) {
        return Ok(Some(format!("source(a1) - target(a2), component {}: {d}", i + 1)));
    }
    let jm = jacobian_at(&g.mul, &c)?;
    let jg = jacobian_at(&g.g_of, &c)?;
    let jh = jacobian_at(&g.h_of, &c)?;
    let lhs = mat_t_vec(&jm, a, comp);
    let rhs: Vec<Expr> = mat_t_vec(&jg, a1, comp)
        .iter()
        .zip(mat_t_vec(&jh, a2, comp))
        .map(|(p, q)| p + q)
        .collect();
    if let Some((i, d)) = first_diff(&lhs, &rhs) {
        return Ok(Some(format!(
            "form parts are not related, on d{}: {d}",
            comp.coords()[i]
        )));
    }
    Ok(None)
}

/// Pairing and bracket compatibility with the groupoid structure on
/// `TG + T*G`, for each family of related sections.
pub fn check_ca_identities(g: &GroupoidPatch, families: &[CaFamily]) -> Result<MultReport> {
    let mut pair_w = None;
    let mut br_w = None;
    for (k, f) in families.iter().enumerate() {
        for (name, t) in [("a", &f.a), ("b", &f.b)] {
            if let Some(why) = related(g, t)? {
                return Err(Error::HypothesisFails(format!(
                    "family {}, sections {name}: {why}",
                    k + 1
                )));
            }
        }
        if pair_w.is_none() {
            let p = |i: usize, m: &crate::cartan::PolyMap| -> Result<Expr> {
                m.pull_expr(&pairing(&f.a[i], &f.b[i])?)
            };
            let d = p(2, &g.mul)? - p(0, &g.g_of)? - p(1, &g.h_of)?;
            if !d.is_zero() {
                pair_w = Some(Witness::Value {
                    at: format!("family {}: <a,b>(gh) - <a1,b1>(g) - <a2,b2>(h)", k + 1),
                    value: d,
                });
            }
        }
        if br_w.is_none() {
            let br = [
                courant_bracket(&f.a[0], &f.b[0])?,
                courant_bracket(&f.a[1], &f.b[1])?,
                courant_bracket(&f.a[2], &f.b[2])?,
            ];
            if let Some(why) = related(g, &br)? {
                br_w = Some(Witness::Text(format!("family {}: {why}", k + 1)));
            }
        }
    }
    let mut r = Report::new();
    r.push(Finding::from_option("pairing is multiplicative", pair_w));
    r.push(Finding::from_option("bracket of related sections is related", br_w));
    Ok(r)
}
