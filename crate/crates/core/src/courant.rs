//! Sections of `TM + T*M`, the pairing and bracket, Lagrangian frames and the
//! Courant 3-tensor.
//!
//! The bracket is the non-skew (Dorfman) form `([X,Y], L_X b - i_Y da)`. On
//! isotropic frames it yields the same 3-tensor as the skew-symmetric one.

use std::fmt;

use crate::cartan::{
    exterior_derivative, interior_product, lie_bracket, lie_derivative, sharp_bivector, Bivector,
    KForm, VField,
};
use crate::error::{Error, Result};
use crate::report::{label, Finding, Report, Witness};
use crate::symalg::{Expr, ExprMatrix, Patch};

pub const BRACKET_CONVENTION: &str =
    "bracket convention: ([X,Y], L_X b - i_Y da), non-skew; same 3-tensor as the skew form on isotropic frames";

/// A section `X + a` of the generalized tangent bundle.
#[derive(Clone, PartialEq, Eq)]
pub struct GSec {
    vf: VField,
    of: KForm,
}

impl GSec {
    pub fn new(vf: VField, of: KForm) -> Result<Self> {
        vf.patch().ensure_same(of.patch())?;
        if of.degree() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "form part must be a 1-form, got degree {}",
                of.degree()
            )));
        }
        Ok(GSec { vf, of })
    }

    pub fn vector(vf: VField) -> Self {
        let of = KForm::zero(vf.patch(), 1).expect("degree 1");
        GSec { vf, of }
    }

    pub fn form(of: KForm) -> Result<Self> {
        GSec::new(VField::zero(of.patch()), of)
    }

    pub fn zero(patch: &Patch) -> Self {
        GSec::vector(VField::zero(patch))
    }

    pub fn patch(&self) -> &Patch {
        self.vf.patch()
    }

    pub fn vf(&self) -> &VField {
        &self.vf
    }

    pub fn of(&self) -> &KForm {
        &self.of
    }

    pub fn is_zero(&self) -> bool {
        self.vf.is_zero() && self.of.is_zero()
    }

    pub fn add(&self, other: &GSec) -> Result<GSec> {
        Ok(GSec {
            vf: self.vf.add(&other.vf)?,
            of: self.of.add(&other.of)?,
        })
    }

    pub fn sub(&self, other: &GSec) -> Result<GSec> {
        Ok(GSec {
            vf: self.vf.sub(&other.vf)?,
            of: self.of.sub(&other.of)?,
        })
    }

    pub fn scale(&self, f: &Expr) -> GSec {
        GSec {
            vf: self.vf.scale(f),
            of: self.of.scale(f),
        }
    }

    /// Coefficients `(X^1..X^n, a_1..a_n)`.
    pub fn coefficients(&self) -> Vec<Expr> {
        self.vf
            .comps()
            .iter()
            .cloned()
            .chain(self.of.one_form_comps())
            .collect()
    }

    pub fn from_coefficients(patch: &Patch, c: &[Expr]) -> Result<GSec> {
        let n = patch.dim();
        if c.len() != 2 * n {
            return Err(Error::DimensionMismatch(format!(
                "section needs {} coefficients, got {}",
                2 * n,
                c.len()
            )));
        }
        GSec::new(
            VField::new(patch, c[..n].to_vec())?,
            KForm::one_form(patch, c[n..].to_vec())?,
        )
    }
}

impl fmt::Display for GSec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.vf, self.of)
    }
}

impl fmt::Debug for GSec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `<(X,a),(Y,b)> = a(Y) + b(X)`.
pub fn pairing(a: &GSec, b: &GSec) -> Result<Expr> {
    a.patch().ensure_same(b.patch())?;
    Ok(a.of.eval_on(&[&b.vf])? + b.of.eval_on(&[&a.vf])?)
}

pub fn courant_bracket(a: &GSec, b: &GSec) -> Result<GSec> {
    a.patch().ensure_same(b.patch())?;
    let vf = lie_bracket(&a.vf, &b.vf)?;
    let of = lie_derivative(&a.vf, &b.of)?.sub(&interior_product(
        &b.vf,
        &exterior_derivative(&a.of)?,
    )?)?;
    GSec::new(vf, of)
}

/// An ordered list of sections, standing for the subbundle they span.
///
/// Construction does not enforce the section count or the rank;
/// `check_lagrangian` reports both.
#[derive(Clone, PartialEq, Eq)]
pub struct Frame {
    patch: Patch,
    secs: Vec<GSec>,
}

impl Frame {
    pub fn new(patch: &Patch, secs: Vec<GSec>) -> Result<Self> {
        for s in &secs {
            patch.ensure_same(s.patch())?;
        }
        Ok(Frame {
            patch: patch.clone(),
            secs,
        })
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    pub fn secs(&self) -> &[GSec] {
        &self.secs
    }

    pub fn len(&self) -> usize {
        self.secs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.secs.is_empty()
    }

    /// The `2n x m` coefficient matrix, one column per section.
    pub fn matrix(&self) -> ExprMatrix {
        let cols: Vec<Vec<Expr>> = self.secs.iter().map(GSec::coefficients).collect();
        if cols.is_empty() {
            return ExprMatrix::zeros(&self.patch, 2 * self.patch.dim(), 0);
        }
        ExprMatrix::from_cols(&self.patch, cols).expect("uniform columns")
    }

    pub fn rank(&self) -> usize {
        self.matrix().generic_rank()
    }

    /// Does `s` lie in the span of the frame at a generic point?
    pub fn contains(&self, s: &GSec) -> Result<bool> {
        self.patch.ensure_same(s.patch())?;
        let base = self.rank();
        let mut ext = self.secs.clone();
        ext.push(s.clone());
        Ok(Frame::new(&self.patch, ext)?.rank() == base)
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.secs.iter().map(ToString::to_string).collect();
        write!(f, "frame({})", parts.join(", "))
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `{(d_i, i_{d_i} w)}`.
pub fn graph_two_form(w: &KForm) -> Result<Frame> {
    if w.degree() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "graph of a {}-form",
            w.degree()
        )));
    }
    let p = w.patch();
    let secs = (0..p.dim())
        .map(|i| {
            let x = VField::coord(p, i);
            let a = interior_product(&x, w)?;
            GSec::new(x, a)
        })
        .collect::<Result<_>>()?;
    Frame::new(p, secs)
}

/// `{(p#(dx^i), dx^i)}`.
pub fn graph_bivector(pi: &Bivector) -> Result<Frame> {
    let p = pi.patch();
    let secs = (0..p.dim())
        .map(|i| {
            let a = KForm::coord(p, i);
            GSec::new(sharp_bivector(pi, &a)?, a)
        })
        .collect::<Result<_>>()?;
    Frame::new(p, secs)
}

/// The fields themselves followed by a basis of their annihilator.
pub fn foliation_frame(patch: &Patch, fields: &[VField]) -> Result<Frame> {
    let n = patch.dim();
    for f in fields {
        patch.ensure_same(f.patch())?;
    }
    let rows: Vec<Vec<Expr>> = fields.iter().map(|f| f.comps().to_vec()).collect();
    let a = if rows.is_empty() {
        ExprMatrix::zeros(patch, 0, n)
    } else {
        ExprMatrix::from_rows(patch, rows)?
    };
    let r = a.generic_rank();
    if r != fields.len() {
        return Err(Error::RankDeficient {
            expected: fields.len(),
            found: r,
        });
    }
    let mut secs: Vec<GSec> = fields.iter().cloned().map(GSec::vector).collect();
    let ann = if fields.is_empty() {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Expr::one(patch) } else { Expr::zero(patch) })
                    .collect()
            })
            .collect()
    } else {
        a.nullspace()
    };
    for v in ann {
        secs.push(GSec::form(KForm::one_form(patch, v)?)?);
    }
    Frame::new(patch, secs)
}

/// `(X, a) -> (X, a + i_X b)`.
pub fn bfield_transform(l: &Frame, b: &KForm) -> Result<Frame> {
    l.patch.ensure_same(b.patch())?;
    if b.degree() != 2 {
        return Err(Error::DimensionMismatch("B-field must be a 2-form".into()));
    }
    let secs = l
        .secs
        .iter()
        .map(|s| GSec::new(s.vf.clone(), s.of.add(&interior_product(&s.vf, b)?)?))
        .collect::<Result<_>>()?;
    Frame::new(&l.patch, secs)
}

/// Isotropy and maximality of a frame.
pub fn lagrangian_finding(l: &Frame) -> Result<Finding> {
    const NAME: &str = "lagrangian";
    let n = l.patch.dim();
    if l.secs.len() != n {
        return Ok(Finding::fail(
            NAME,
            Witness::Text(format!(
                "{} sections on a {n}-dimensional patch",
                l.secs.len()
            )),
        ));
    }
    for i in 0..n {
        for j in i..n {
            let v = pairing(&l.secs[i], &l.secs[j])?;
            if !v.is_zero() {
                return Ok(Finding::fail(
                    NAME,
                    Witness::Value {
                        at: format!("<s{},s{}>", i + 1, j + 1),
                        value: v,
                    },
                ));
            }
        }
    }
    let r = l.rank();
    if r != n {
        return Ok(Finding::fail(
            NAME,
            Witness::Rank {
                what: "frame".into(),
                expected: n,
                found: r,
            },
        ));
    }
    Ok(Finding::pass(NAME))
}

pub fn check_lagrangian(l: &Frame) -> Result<DiracReport> {
    let lagrangian = lagrangian_finding(l)?;
    Ok(DiracReport {
        integrable: Finding::fail(
            "integrable",
            Witness::Text("not evaluated".into()),
        ),
        lagrangian,
        lagrangian_only: true,
    })
}

/// `mu[i][j][k] = <[[s_i, s_j]], s_k>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CourantTensor {
    n: usize,
    entries: Vec<Expr>,
}

impl CourantTensor {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Expr {
        &self.entries[(i * self.n + j) * self.n + k]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Expr::is_zero)
    }

    pub fn first_nonzero(&self) -> Option<([usize; 3], &Expr)> {
        let n = self.n;
        self.entries
            .iter()
            .enumerate()
            .find(|(_, e)| !e.is_zero())
            .map(|(t, e)| ([t / (n * n), (t / n) % n, t % n], e))
    }

    pub fn witness(&self) -> Option<Witness> {
        self.first_nonzero().map(|(idx, e)| Witness::Value {
            at: label("mu", &idx),
            value: e.clone(),
        })
    }
}

/// Courant tensor of an arbitrary list of sections, without checks.
pub fn courant_tensor_unchecked(secs: &[GSec]) -> Result<CourantTensor> {
    let n = secs.len();
    let mut entries = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            let b = courant_bracket(&secs[i], &secs[j])?;
            for s in secs {
                entries.push(pairing(&b, s)?);
            }
        }
    }
    Ok(CourantTensor { n, entries })
}

pub fn courant_tensor(l: &Frame) -> Result<CourantTensor> {
    let f = lagrangian_finding(l)?;
    if let Some(w) = f.witness {
        return Err(Error::NotLagrangian(w.to_string()));
    }
    courant_tensor_unchecked(&l.secs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracReport {
    pub lagrangian: Finding,
    pub integrable: Finding,
    lagrangian_only: bool,
}

impl DiracReport {
    /// Overall verdict: both sub-checks pass. For a report produced by
    /// `check_lagrangian` only the Lagrangian part counts.
    pub fn passed(&self) -> bool {
        self.lagrangian.passed() && (self.lagrangian_only || self.integrable.passed())
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.push(self.lagrangian.clone());
        if !self.lagrangian_only {
            r.push(self.integrable.clone());
            r.note(BRACKET_CONVENTION);
            r.note("ranks are generic-point ranks");
        }
        r
    }
}

pub fn check_dirac(l: &Frame) -> Result<DiracReport> {
    let lagrangian = lagrangian_finding(l)?;
    let integrable = if lagrangian.passed() {
        let mu = courant_tensor_unchecked(&l.secs)?;
        Finding::from_option("integrable", mu.witness())
    } else {
        Finding::fail(
            "integrable",
            Witness::Text("not evaluated: frame is not Lagrangian".into()),
        )
    };
    Ok(DiracReport {
        lagrangian,
        integrable,
        lagrangian_only: false,
    })
}
