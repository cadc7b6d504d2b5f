//! Tangent and cotangent patches, vertical and tangent lifts, the canonical
//! involution, the Tulczyjew and Legendre maps, and tangent lifts of frames.
//!
//! On `TM` the velocity of coordinate `x` is named `x_dot`. When the base
//! already carries `_dot` names (so the result is a double tangent patch) the
//! new block is prefixed with `d_` instead: `TTM = (x, x_dot, d_x, d_x_dot)`.
//! Momenta on `T*M` are named `p_x`.

use crate::cartan::{KForm, PolyMap, VField};
use crate::courant::{
    check_dirac, courant_bracket, courant_tensor_unchecked, lagrangian_finding, pairing, Frame,
    GSec,
};
use crate::error::{Error, Result};
use crate::report::{label, Finding, Report, Witness};
use crate::symalg::{Expr, Patch};

fn lifted_name(base: &Patch, c: &str) -> String {
    if base.coords().iter().any(|n| n.ends_with("_dot")) {
        format!("d_{c}")
    } else {
        format!("{c}_dot")
    }
}

pub(crate) fn make_patch(name: String, coords: Vec<String>) -> Result<Patch> {
    if coords.is_empty() {
        Ok(Patch::point())
    } else {
        Patch::new(name, coords)
    }
}

/// `TM` over a base patch: coordinates `(x^i, x^i_dot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentPatch {
    base: Patch,
    total: Patch,
}

impl TangentPatch {
    pub fn new(base: &Patch) -> Result<Self> {
        let mut coords: Vec<String> = base.coords().to_vec();
        coords.extend(base.coords().iter().map(|c| lifted_name(base, c)));
        let total = make_patch(format!("T{}", base.name()), coords)?;
        Ok(TangentPatch {
            base: base.clone(),
            total,
        })
    }

    pub fn base(&self) -> &Patch {
        &self.base
    }

    pub fn total(&self) -> &Patch {
        &self.total
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Index in `total` of the velocity of base coordinate `i`.
    pub fn velocity(&self, i: usize) -> usize {
        self.base.dim() + i
    }

    fn embed(&self, f: &Expr) -> Result<Expr> {
        f.embed(&self.total)
    }
}

/// `T*M` over a base patch: coordinates `(x^i, p_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotangentPatch {
    base: Patch,
    total: Patch,
}

impl CotangentPatch {
    pub fn new(base: &Patch) -> Result<Self> {
        let mut coords: Vec<String> = base.coords().to_vec();
        coords.extend(base.coords().iter().map(|c| format!("p_{c}")));
        let total = make_patch(format!("Tstar{}", base.name()), coords)?;
        Ok(CotangentPatch {
            base: base.clone(),
            total,
        })
    }

    pub fn base(&self) -> &Patch {
        &self.base
    }

    pub fn total(&self) -> &Patch {
        &self.total
    }

    pub fn momentum(&self, i: usize) -> usize {
        self.base.dim() + i
    }
}

/// `sum_i dx^i ^ dp_i`.
pub fn canonical_symplectic(cp: &CotangentPatch) -> KForm {
    let n = cp.base.dim();
    let mut w = KForm::zero(&cp.total, 2).expect("degree 2");
    for i in 0..n {
        let t = KForm::coord(&cp.total, i)
            .wedge(&KForm::coord(&cp.total, n + i))
            .expect("same patch");
        w = w.add(&t).expect("same patch");
    }
    w
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftKind {
    Vertical,
    Tangent,
}

/// `f^v = f o p`, `f^T = sum_i x^i_dot d_i f`.
pub fn lift_function(tp: &TangentPatch, f: &Expr, kind: LiftKind) -> Result<Expr> {
    tp.base.ensure_same(f.patch())?;
    match kind {
        LiftKind::Vertical => tp.embed(f),
        LiftKind::Tangent => {
            let mut acc = Expr::zero(&tp.total);
            for i in 0..tp.dim() {
                let d = f.diff(i);
                if !d.is_zero() {
                    acc = acc + Expr::var(&tp.total, tp.velocity(i)) * tp.embed(&d)?;
                }
            }
            Ok(acc)
        }
    }
}

/// `X^v = sum X^i d/dx_dot^i`, `X^T = (X^i, (X^i)^T)`.
pub fn lift_vector_field(tp: &TangentPatch, x: &VField, kind: LiftKind) -> Result<VField> {
    tp.base.ensure_same(x.patch())?;
    let n = tp.dim();
    let mut comps = vec![Expr::zero(&tp.total); 2 * n];
    for i in 0..n {
        let xi = x.comp(i);
        match kind {
            LiftKind::Vertical => comps[n + i] = tp.embed(xi)?,
            LiftKind::Tangent => {
                comps[i] = tp.embed(xi)?;
                comps[n + i] = lift_function(tp, xi, LiftKind::Tangent)?;
            }
        }
    }
    VField::new(&tp.total, comps)
}

/// `a^v = sum a_i dx^i`, `a^T = sum (a_i)^T dx^i + sum a_i dx_dot^i`.
pub fn lift_one_form(tp: &TangentPatch, a: &KForm, kind: LiftKind) -> Result<KForm> {
    tp.base.ensure_same(a.patch())?;
    if a.degree() != 1 {
        return Err(Error::DimensionMismatch("lift of a non-1-form".into()));
    }
    let n = tp.dim();
    let mut comps = vec![Expr::zero(&tp.total); 2 * n];
    for i in 0..n {
        let ai = a.get(&[i]);
        match kind {
            LiftKind::Vertical => comps[i] = tp.embed(&ai)?,
            LiftKind::Tangent => {
                comps[i] = lift_function(tp, &ai, LiftKind::Tangent)?;
                comps[n + i] = tp.embed(&ai)?;
            }
        }
    }
    KForm::one_form(&tp.total, comps)
}

pub fn lift_gsec(tp: &TangentPatch, s: &GSec, kind: LiftKind) -> Result<GSec> {
    GSec::new(
        lift_vector_field(tp, s.vf(), kind)?,
        lift_one_form(tp, s.of(), kind)?,
    )
}

/// `Tf : TM -> TN`, `(x, x_dot) -> (f^v, f^T)`.
pub fn tangent_map(f: &PolyMap, src: &TangentPatch, tgt: &TangentPatch) -> Result<PolyMap> {
    src.base.ensure_same(f.source())?;
    tgt.base.ensure_same(f.target())?;
    let mut comps: Vec<Expr> = f
        .comps()
        .iter()
        .map(|c| lift_function(src, c, LiftKind::Vertical))
        .collect::<Result<_>>()?;
    for c in f.comps() {
        comps.push(lift_function(src, c, LiftKind::Tangent)?);
    }
    PolyMap::new(&src.total, &tgt.total, comps)
}

/// Recover the base of a double tangent patch.
fn inner_tangent(tt: &TangentPatch) -> Result<TangentPatch> {
    let b = tt.base.coords();
    if !b.len().is_multiple_of(2) {
        return Err(Error::WrongShape(format!("{} is not a tangent patch", tt.base)));
    }
    let m = Patch::new("M", b[..b.len() / 2].to_vec())
        .map_err(|e| Error::WrongShape(e.to_string()))?;
    let t = TangentPatch::new(&m)?;
    if t.total != tt.base {
        return Err(Error::WrongShape(format!("{} is not a tangent patch", tt.base)));
    }
    Ok(t)
}

/// `J(x, x_dot, dx, dx_dot) = (x, dx, x_dot, dx_dot)` on `TTM`.
pub fn canonical_involution(tt: &TangentPatch) -> Result<PolyMap> {
    let t = inner_tangent(tt)?;
    let n = t.dim();
    let v = |i| Expr::var(&tt.total, i);
    let mut comps = Vec::with_capacity(4 * n);
    comps.extend((0..n).map(v));
    comps.extend((2 * n..3 * n).map(v));
    comps.extend((n..2 * n).map(v));
    comps.extend((3 * n..4 * n).map(v));
    PolyMap::new(&tt.total, &tt.total, comps)
}

/// Base `M` and its cotangent patch, recovered from a patch on `TT*M`.
fn inner_cotangent(tt: &TangentPatch) -> Result<CotangentPatch> {
    let b = tt.base.coords();
    if !b.len().is_multiple_of(2) {
        return Err(Error::WrongShape(format!("{} is not a cotangent patch", tt.base)));
    }
    let m = Patch::new("M", b[..b.len() / 2].to_vec())
        .map_err(|e| Error::WrongShape(e.to_string()))?;
    let c = CotangentPatch::new(&m)?;
    if c.total != tt.base {
        return Err(Error::WrongShape(format!("{} is not a cotangent patch", tt.base)));
    }
    Ok(c)
}

/// The patch `T*TM` receiving the Tulczyjew map.
pub fn tulczyjew_target(tt: &TangentPatch) -> Result<CotangentPatch> {
    let c = inner_cotangent(tt)?;
    CotangentPatch::new(TangentPatch::new(&c.base)?.total())
}

/// `Theta(x, p, x_dot, p_dot) = (x, x_dot, p_dot, p)` from `TT*M` to `T*TM`.
pub fn tulczyjew_map(tt: &TangentPatch) -> Result<PolyMap> {
    let c = inner_cotangent(tt)?;
    let target = tulczyjew_target(tt)?;
    let n = c.base.dim();
    let v = |i| Expr::var(&tt.total, i);
    let mut comps = Vec::with_capacity(4 * n);
    comps.extend((0..n).map(v));
    comps.extend((2 * n..3 * n).map(v));
    comps.extend((3 * n..4 * n).map(v));
    comps.extend((n..2 * n).map(v));
    PolyMap::new(&tt.total, &target.total, comps)
}

/// The Legendre-type map `R : T*A* -> T*A` of a vector bundle `A` of rank `r`.
///
/// Fibers of `A` are `u1..ur`, fibers of `A*` are `xi1..xir`.
/// `T*A* = (x, xi, p_x, u)` and `T*A = (x, u, p_x, xi)`, where the momentum
/// dual to `xi` is named `u` and vice versa. `R(x, xi, p, u) = (x, u, -p, xi)`.
#[derive(Clone, Debug)]
pub struct Legendre {
    pub source: CotangentPatch,
    pub target: CotangentPatch,
    pub map: PolyMap,
}

pub fn legendre_map(base: &Patch, rank: usize) -> Result<Legendre> {
    let us: Vec<String> = (1..=rank).map(|a| format!("u{a}")).collect();
    let xis: Vec<String> = (1..=rank).map(|a| format!("xi{a}")).collect();
    for c in base.coords() {
        if us.contains(c) || xis.contains(c) || c.starts_with("p_") {
            return Err(Error::WrongShape(format!(
                "base coordinate `{c}` clashes with bundle coordinates"
            )));
        }
    }
    let n = base.dim();
    let ps: Vec<String> = base.coords().iter().map(|c| format!("p_{c}")).collect();
    let chain = |fib: &[String], mom: &[String]| -> Vec<String> {
        base.coords()
            .iter()
            .chain(fib)
            .chain(&ps)
            .chain(mom)
            .cloned()
            .collect()
    };
    let dual_total = make_patch("Astar".into(), base.coords().iter().chain(&xis).cloned().collect())?;
    let a_total = make_patch("A".into(), base.coords().iter().chain(&us).cloned().collect())?;
    let src = make_patch("TstarAstar".into(), chain(&xis, &us))?;
    let tgt = make_patch("TstarA".into(), chain(&us, &xis))?;
    let source = CotangentPatch {
        base: dual_total,
        total: src.clone(),
    };
    let target = CotangentPatch {
        base: a_total,
        total: tgt.clone(),
    };
    let v = |i| Expr::var(&src, i);
    let r = rank;
    let mut comps = Vec::with_capacity(2 * (n + r));
    comps.extend((0..n).map(v));
    comps.extend((2 * n + r..2 * n + 2 * r).map(v));
    comps.extend((n + r..2 * n + r).map(|i| -v(i)));
    comps.extend((n..n + r).map(v));
    let map = PolyMap::new(&src, &tgt, comps)?;
    Ok(Legendre { source, target, map })
}

/// Tangent lifts of every section, then vertical lifts of every section.
pub fn tangent_lift_dirac(l: &Frame) -> Result<Frame> {
    let tp = TangentPatch::new(l.patch())?;
    let mut secs = Vec::with_capacity(2 * l.len());
    for s in l.secs() {
        secs.push(lift_gsec(&tp, s, LiftKind::Tangent)?);
    }
    for s in l.secs() {
        secs.push(lift_gsec(&tp, s, LiftKind::Vertical)?);
    }
    Frame::new(tp.total(), secs)
}

/// Compares the Courant tensor of the lifted frame with lifts of the base
/// tensor: all-tangent entries with the tangent lift, entries with exactly one
/// vertical generator with the vertical lift, and the rest with zero.
pub fn check_tangent_mu_identity(l: &Frame) -> Result<Report> {
    let lag = lagrangian_finding(l)?;
    if let Some(w) = lag.witness {
        return Err(Error::NotLagrangian(w.to_string()));
    }
    let tp = TangentPatch::new(l.patch())?;
    let n = l.len();
    let mu = courant_tensor_unchecked(l.secs())?;
    let lifted = tangent_lift_dirac(l)?;
    let big = courant_tensor_unchecked(lifted.secs())?;
    let mut tangent = None;
    let mut one_vertical = None;
    let mut vertical = None;
    for i in 0..2 * n {
        for j in 0..2 * n {
            for k in 0..2 * n {
                let verticals = [i, j, k].iter().filter(|&&t| t >= n).count();
                let lhs = big.get(i, j, k);
                let (slot, expected) = match verticals {
                    0 => (
                        &mut tangent,
                        lift_function(&tp, mu.get(i, j, k), LiftKind::Tangent)?,
                    ),
                    1 => (
                        &mut one_vertical,
                        lift_function(&tp, mu.get(i % n, j % n, k % n), LiftKind::Vertical)?,
                    ),
                    _ => (&mut vertical, Expr::zero(tp.total())),
                };
                if slot.is_none() {
                    let diff = lhs - &expected;
                    if !diff.is_zero() {
                        *slot = Some(Witness::Value {
                            at: format!("{} - expected", label("mu_T", &[i, j, k])),
                            value: diff,
                        });
                    }
                }
            }
        }
    }
    let mut r = Report::new();
    r.push(Finding::from_option("tangent entries", tangent));
    r.push(Finding::from_option("one vertical entry", one_vertical));
    r.push(Finding::from_option("two or more vertical entries", vertical));
    r.note(format!(
        "lifted generators 1..{n} are tangent lifts, {}..{} vertical lifts",
        n + 1,
        2 * n
    ));
    Ok(r)
}

fn eq_finding(name: &str, lhs: &Expr, rhs: &Expr) -> Finding {
    let d = lhs - rhs;
    if d.is_zero() {
        Finding::pass(name)
    } else {
        Finding::fail(
            name,
            Witness::Value {
                at: "lhs - rhs".into(),
                value: d,
            },
        )
    }
}

fn map_finding(name: &str, lhs: &PolyMap, rhs: &PolyMap) -> Finding {
    for (k, (a, b)) in lhs.comps().iter().zip(rhs.comps()).enumerate() {
        let d = a - b;
        if !d.is_zero() {
            return Finding::fail(
                name,
                Witness::Value {
                    at: format!("component {}", k + 1),
                    value: d,
                },
            );
        }
    }
    Finding::pass(name)
}

fn sec_finding(name: &str, lhs: &GSec, rhs: &GSec) -> Result<Finding> {
    let d = lhs.sub(rhs)?;
    Ok(match d.coefficients().into_iter().enumerate().find(|(_, c)| !c.is_zero()) {
        None => Finding::pass(name),
        Some((k, c)) => Finding::fail(
            name,
            Witness::Value {
                at: format!("coefficient {}", k + 1),
                value: c,
            },
        ),
    })
}

/// Defining identities of the lifts for one field, one form and one function.
pub fn check_lift_identities(x: &VField, a: &KForm, f: &Expr) -> Result<Report> {
    let tp = TangentPatch::new(x.patch())?;
    use LiftKind::*;
    let xv = lift_vector_field(&tp, x, Vertical)?;
    let xt = lift_vector_field(&tp, x, Tangent)?;
    let av = lift_one_form(&tp, a, Vertical)?;
    let at = lift_one_form(&tp, a, Tangent)?;
    let fv = lift_function(&tp, f, Vertical)?;
    let ft = lift_function(&tp, f, Tangent)?;
    let xf = x.apply(f);
    let ax = a.eval_on(&[x])?;
    let zero = Expr::zero(tp.total());
    let mut r = Report::new();
    r.push(eq_finding("Xv(fv) = 0", &xv.apply(&fv), &zero));
    r.push(eq_finding("Xv(fT) = (Xf)v", &xv.apply(&ft), &lift_function(&tp, &xf, Vertical)?));
    r.push(eq_finding("XT(fv) = (Xf)v", &xt.apply(&fv), &lift_function(&tp, &xf, Vertical)?));
    r.push(eq_finding("XT(fT) = (Xf)T", &xt.apply(&ft), &lift_function(&tp, &xf, Tangent)?));
    r.push(eq_finding("av(Xv) = 0", &av.eval_on(&[&xv])?, &zero));
    r.push(eq_finding("av(XT) = (a(X))v", &av.eval_on(&[&xt])?, &lift_function(&tp, &ax, Vertical)?));
    r.push(eq_finding("aT(Xv) = (a(X))v", &at.eval_on(&[&xv])?, &lift_function(&tp, &ax, Vertical)?));
    r.push(eq_finding("aT(XT) = (a(X))T", &at.eval_on(&[&xt])?, &lift_function(&tp, &ax, Tangent)?));
    Ok(r)
}

/// Bracket identities of lifted sections.
pub fn check_lift_bracket_identities(s1: &GSec, s2: &GSec) -> Result<Report> {
    let tp = TangentPatch::new(s1.patch())?;
    use LiftKind::*;
    let b = courant_bracket(s1, s2)?;
    let (t1, v1) = (lift_gsec(&tp, s1, Tangent)?, lift_gsec(&tp, s1, Vertical)?);
    let (t2, v2) = (lift_gsec(&tp, s2, Tangent)?, lift_gsec(&tp, s2, Vertical)?);
    let mut r = Report::new();
    r.push(sec_finding(
        "[[s1v, s2v]] = 0",
        &courant_bracket(&v1, &v2)?,
        &GSec::zero(tp.total()),
    )?);
    r.push(sec_finding(
        "[[s1T, s2v]] = [[s1, s2]]v",
        &courant_bracket(&t1, &v2)?,
        &lift_gsec(&tp, &b, Vertical)?,
    )?);
    r.push(sec_finding(
        "[[s1T, s2T]] = [[s1, s2]]T",
        &courant_bracket(&t1, &t2)?,
        &lift_gsec(&tp, &b, Tangent)?,
    )?);
    let p = pairing(s1, s2)?;
    r.push(eq_finding(
        "<s1T, s2T> = <s1, s2>T",
        &pairing(&t1, &t2)?,
        &lift_function(&tp, &p, Tangent)?,
    ));
    r.push(eq_finding(
        "<s1T, s2v> = <s1, s2>v",
        &pairing(&t1, &v2)?,
        &lift_function(&tp, &p, Vertical)?,
    ));
    Ok(r)
}

/// `J o J = id`, `J(TX) = X^T` and `J(X^) = X^v` for a vector field `X`.
pub fn check_involution_identities(x: &VField) -> Result<Report> {
    let m = x.patch();
    let tm = TangentPatch::new(m)?;
    let ttm = TangentPatch::new(tm.total())?;
    let j = canonical_involution(&ttm)?;
    let n = m.dim();
    let mut r = Report::new();
    r.push(map_finding("J o J = id", &j.then(&j)?, &PolyMap::identity(ttm.total())));

    // X as a section M -> TM, then its tangent map TM -> TTM.
    let mut sec = (0..n).map(|i| Expr::var(m, i)).collect::<Vec<_>>();
    sec.extend(x.comps().iter().cloned());
    let xmap = PolyMap::new(m, tm.total(), sec)?;
    let tx = tangent_map(&xmap, &tm, &ttm)?;
    let xt = lift_vector_field(&tm, x, LiftKind::Tangent)?;
    let as_section = |v: &VField| -> Result<PolyMap> {
        let mut c: Vec<Expr> = (0..2 * n).map(|i| Expr::var(tm.total(), i)).collect();
        c.extend(v.comps().iter().cloned());
        PolyMap::new(tm.total(), ttm.total(), c)
    };
    r.push(map_finding("J(TX) = XT", &tx.then(&j)?, &as_section(&xt)?));

    // Core section X^(x, x_dot) = (x, 0, x_dot, X(x)).
    let mut core: Vec<Expr> = (0..n).map(|i| Expr::var(tm.total(), i)).collect();
    core.extend((0..n).map(|_| Expr::zero(tm.total())));
    core.extend((0..n).map(|i| Expr::var(tm.total(), n + i)));
    for c in x.comps() {
        core.push(c.embed(tm.total())?);
    }
    let core = PolyMap::new(tm.total(), ttm.total(), core)?;
    let xv = lift_vector_field(&tm, x, LiftKind::Vertical)?;
    r.push(map_finding("J(X^) = Xv", &core.then(&j)?, &as_section(&xv)?));
    Ok(r)
}

/// `Theta(T a) = a^T` and `Theta(a^) = a^v` for a 1-form `a`.
pub fn check_tulczyjew_identities(a: &KForm) -> Result<Report> {
    let m = a.patch();
    let n = m.dim();
    let tm = TangentPatch::new(m)?;
    let cm = CotangentPatch::new(m)?;
    let tcm = TangentPatch::new(cm.total())?;
    let theta = tulczyjew_map(&tcm)?;
    let target = tulczyjew_target(&tcm)?;
    let mut r = Report::new();

    let mut sec: Vec<Expr> = (0..n).map(|i| Expr::var(m, i)).collect();
    sec.extend(a.one_form_comps());
    let amap = PolyMap::new(m, cm.total(), sec)?;
    let ta = tangent_map(&amap, &tm, &tcm)?;
    let as_section = |w: &KForm| -> Result<PolyMap> {
        let mut c: Vec<Expr> = (0..2 * n).map(|i| Expr::var(tm.total(), i)).collect();
        c.extend(w.one_form_comps());
        PolyMap::new(tm.total(), target.total(), c)
    };
    let at = lift_one_form(&tm, a, LiftKind::Tangent)?;
    r.push(map_finding("Theta(Ta) = aT", &ta.then(&theta)?, &as_section(&at)?));

    // Core section a^(x, x_dot) = (x, 0, x_dot, a(x)).
    let mut core: Vec<Expr> = (0..n).map(|i| Expr::var(tm.total(), i)).collect();
    core.extend((0..n).map(|_| Expr::zero(tm.total())));
    core.extend((0..n).map(|i| Expr::var(tm.total(), n + i)));
    for c in a.one_form_comps() {
        core.push(c.embed(tm.total())?);
    }
    let core = PolyMap::new(tm.total(), tcm.total(), core)?;
    let av = lift_one_form(&tm, a, LiftKind::Vertical)?;
    r.push(map_finding("Theta(a^) = av", &core.then(&theta)?, &as_section(&av)?));
    Ok(r)
}

/// `R^* w_can = -w_can`.
pub fn check_legendre_antisymplectic(base: &Patch, rank: usize) -> Result<Report> {
    let lg = legendre_map(base, rank)?;
    let pulled = crate::cartan::pullback_form(&lg.map, &canonical_symplectic(&lg.target))?;
    let sum = pulled.add(&canonical_symplectic(&lg.source))?;
    let mut r = Report::new();
    r.push(match sum.terms().next() {
        None => Finding::pass("R*w = -w"),
        Some((idx, c)) => Finding::fail(
            "R*w = -w",
            Witness::Value {
                at: label("(R*w + w)", idx),
                value: c.clone(),
            },
        ),
    });
    Ok(r)
}

/// Tangent lift of a frame, checked as a Dirac structure on `TM`.
pub fn check_tangent_dirac(l: &Frame) -> Result<Report> {
    Ok(check_dirac(&tangent_lift_dirac(l)?)?.to_report())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::Bivector;
    use crate::courant::{foliation_frame, graph_bivector, graph_two_form};
    use crate::symalg::parse_expr;

    fn e(p: &Patch, s: &str) -> Expr {
        parse_expr(s, p).unwrap()
    }

    fn xy() -> Patch {
        Patch::new("M", ["x", "y"]).unwrap()
    }

    fn same_span(a: &Frame, b: &Frame) -> bool {
        let ra = a.rank();
        let mut all = a.secs().to_vec();
        all.extend(b.secs().iter().cloned());
        ra == b.rank() && Frame::new(a.patch(), all).unwrap().rank() == ra
    }

    #[test]
    fn naming() {
        let tm = TangentPatch::new(&xy()).unwrap();
        assert_eq!(tm.total().coords(), ["x", "y", "x_dot", "y_dot"]);
        let ttm = TangentPatch::new(tm.total()).unwrap();
        assert_eq!(
            ttm.total().coords(),
            ["x", "y", "x_dot", "y_dot", "d_x", "d_y", "d_x_dot", "d_y_dot"]
        );
        let cm = CotangentPatch::new(&xy()).unwrap();
        assert_eq!(cm.total().coords(), ["x", "y", "p_x", "p_y"]);
    }

    #[test]
    fn function_lifts() {
        let p = Patch::new("M", ["x"]).unwrap();
        let tp = TangentPatch::new(&p).unwrap();
        let t = tp.total();
        assert_eq!(lift_function(&tp, &e(&p, "x"), LiftKind::Tangent).unwrap(), e(t, "x_dot"));
        assert_eq!(
            lift_function(&tp, &e(&p, "x^2"), LiftKind::Tangent).unwrap(),
            e(t, "2*x*x_dot")
        );
        assert!(lift_function(&tp, &e(&p, "7"), LiftKind::Tangent).unwrap().is_zero());
    }

    #[test]
    fn field_and_form_lifts() {
        let p = xy();
        let tp = TangentPatch::new(&p).unwrap();
        let t = tp.total();
        let dx = VField::coord(&p, 0);
        assert_eq!(
            lift_vector_field(&tp, &dx, LiftKind::Vertical).unwrap(),
            VField::coord(t, 2)
        );
        let xdx = VField::new(&p, vec![e(&p, "x"), e(&p, "0")]).unwrap();
        assert_eq!(
            lift_vector_field(&tp, &xdx, LiftKind::Tangent).unwrap(),
            VField::new(t, vec![e(t, "x"), e(t, "0"), e(t, "x_dot"), e(t, "0")]).unwrap()
        );
        assert_eq!(lift_vector_field(&tp, &dx, LiftKind::Tangent).unwrap(), VField::coord(t, 0));

        let a = KForm::coord(&p, 0);
        assert_eq!(lift_one_form(&tp, &a, LiftKind::Tangent).unwrap(), KForm::coord(t, 2));
        assert_eq!(lift_one_form(&tp, &a, LiftKind::Vertical).unwrap(), KForm::coord(t, 0));
        let xdy = KForm::one_form(&p, vec![e(&p, "0"), e(&p, "x")]).unwrap();
        assert_eq!(
            lift_one_form(&tp, &xdy, LiftKind::Tangent).unwrap(),
            KForm::one_form(t, vec![e(t, "0"), e(t, "x_dot"), e(t, "0"), e(t, "x")]).unwrap()
        );
    }

    #[test]
    fn involution_examples() {
        let p = Patch::new("M", ["x"]).unwrap();
        let tm = TangentPatch::new(&p).unwrap();
        let ttm = TangentPatch::new(tm.total()).unwrap();
        let j = canonical_involution(&ttm).unwrap();
        let t = ttm.total();
        assert_eq!(
            j.comps(),
            [e(t, "x"), e(t, "d_x"), e(t, "x_dot"), e(t, "d_x_dot")]
        );
        let xdx = VField::new(&p, vec![e(&p, "x")]).unwrap();
        assert!(check_involution_identities(&xdx).unwrap().passed());
        assert!(matches!(canonical_involution(&tm), Err(Error::WrongShape(_))));
    }

    #[test]
    fn tulczyjew_examples() {
        let p = Patch::new("M", ["x"]).unwrap();
        let cm = CotangentPatch::new(&p).unwrap();
        let tcm = TangentPatch::new(cm.total()).unwrap();
        let th = tulczyjew_map(&tcm).unwrap();
        let s = tcm.total();
        assert_eq!(th.comps(), [e(s, "x"), e(s, "x_dot"), e(s, "p_x_dot"), e(s, "p_x")]);
        assert_eq!(th.target().coords(), ["x", "x_dot", "p_x", "p_x_dot"]);
        let q = xy();
        let xdy = KForm::one_form(&q, vec![e(&q, "0"), e(&q, "x")]).unwrap();
        assert!(check_tulczyjew_identities(&xdy).unwrap().passed());
        assert!(check_tulczyjew_identities(&KForm::coord(&q, 0)).unwrap().passed());
        let tm = TangentPatch::new(&p).unwrap();
        assert!(matches!(tulczyjew_map(&tm), Err(Error::WrongShape(_))));
    }

    #[test]
    fn legendre_examples() {
        let p = Patch::new("M", ["x"]).unwrap();
        let lg = legendre_map(&p, 1).unwrap();
        let s = lg.source.total();
        assert_eq!(s.coords(), ["x", "xi1", "p_x", "u1"]);
        assert_eq!(lg.target.total().coords(), ["x", "u1", "p_x", "xi1"]);
        assert_eq!(lg.map.comps(), [e(s, "x"), e(s, "u1"), e(s, "-p_x"), e(s, "xi1")]);
        assert!(check_legendre_antisymplectic(&xy(), 2).unwrap().passed());
        let bad = Patch::new("M", ["u1"]).unwrap();
        assert!(matches!(legendre_map(&bad, 1), Err(Error::WrongShape(_))));
    }

    #[test]
    fn dirac_lift_examples() {
        let p = xy();
        let tp = TangentPatch::new(&p).unwrap();
        let t = tp.total();
        let tm = foliation_frame(&p, &[VField::coord(&p, 0), VField::coord(&p, 1)]).unwrap();
        let lifted = tangent_lift_dirac(&tm).unwrap();
        let expected = foliation_frame(t, &(0..4).map(|i| VField::coord(t, i)).collect::<Vec<_>>())
            .unwrap();
        assert!(same_span(&lifted, &expected));

        let w = KForm::from_terms(&p, 2, [(vec![0, 1], e(&p, "1"))]).unwrap();
        let lifted = tangent_lift_dirac(&graph_two_form(&w).unwrap()).unwrap();
        // dx_dot^dy + dx^dy_dot
        let wt = KForm::from_terms(t, 2, [(vec![2, 1], e(t, "1")), (vec![0, 3], e(t, "1"))])
            .unwrap();
        assert!(same_span(&lifted, &graph_two_form(&wt).unwrap()));

        let pi = Bivector::from_terms(&p, [((0, 1), e(&p, "1"))]).unwrap();
        let lifted = tangent_lift_dirac(&graph_bivector(&pi).unwrap()).unwrap();
        let pit = Bivector::from_terms(t, [((0, 3), e(t, "1")), ((2, 1), e(t, "1"))]).unwrap();
        assert!(same_span(&lifted, &graph_bivector(&pit).unwrap()));
    }

    #[test]
    fn mu_identity_examples() {
        let p = Patch::new("M", ["x", "y", "z"]).unwrap();
        let closed = KForm::from_terms(&p, 2, [(vec![0, 1], e(&p, "x + 1"))]).unwrap();
        let r = check_tangent_mu_identity(&graph_two_form(&closed).unwrap()).unwrap();
        assert!(r.passed());
        let w = KForm::from_terms(&p, 2, [(vec![0, 1], e(&p, "z"))]).unwrap();
        let l = graph_two_form(&w).unwrap();
        assert!(check_tangent_mu_identity(&l).unwrap().passed());
        let big = courant_tensor_unchecked(tangent_lift_dirac(&l).unwrap().secs()).unwrap();
        assert!(!big.is_zero());
        let bad = Bivector::from_terms(
            &p,
            [((0, 1), e(&p, "x")), ((1, 2), e(&p, "y")), ((2, 0), e(&p, "z"))],
        )
        .unwrap();
        assert!(check_tangent_mu_identity(&graph_bivector(&bad).unwrap()).unwrap().passed());
        let notlag = Frame::new(&p, vec![GSec::vector(VField::coord(&p, 0))]).unwrap();
        assert!(matches!(check_tangent_mu_identity(&notlag), Err(Error::NotLagrangian(_))));
    }
}
