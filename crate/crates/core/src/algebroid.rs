//! Lie algebroids in a trivializing chart: anchor matrix plus structure
//! functions `c^k_{ab}` with `[e_a, e_b] = sum_k c^k_{ab} e_k`.
//!
//! Sections are coefficient vectors in the frame `e_1..e_r`. The total space
//! of `A` has fiber coordinates `u1..ur`, the dual `A*` has `xi1..xir`.

use crate::cartan::{
    exterior_derivative, lie_bracket, lie_derivative, Bivector, KForm, VField,
};
use crate::courant::{lagrangian_finding, Frame};
use crate::error::{Error, Result};
use crate::report::{label, Finding, Report, Witness};
use crate::symalg::{span_contains, span_rank, BigRational, Expr, ExprMatrix, Patch};

pub const MAX_BIALGEBROID_RANK: usize = 4;

/// A section: coefficients in the algebroid frame.
pub type ASection = Vec<Expr>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebroidPatch {
    base: Patch,
    rank: usize,
    anchor: ExprMatrix,
    structure: Vec<Vec<Vec<Expr>>>,
}

impl AlgebroidPatch {
    /// `anchor` is `n x r` with columns `rho(e_a)`; `structure[k][a][b] = c^k_{ab}`.
    pub fn new(
        base: &Patch,
        rank: usize,
        anchor: ExprMatrix,
        structure: Vec<Vec<Vec<Expr>>>,
    ) -> Result<Self> {
        if anchor.rows() != base.dim() || anchor.cols() != rank {
            return Err(Error::DimensionMismatch(format!(
                "anchor is {}x{}, expected {}x{rank}",
                anchor.rows(),
                anchor.cols(),
                base.dim()
            )));
        }
        base.ensure_same(anchor.patch())?;
        if structure.len() != rank
            || structure
                .iter()
                .any(|m| m.len() != rank || m.iter().any(|row| row.len() != rank))
        {
            return Err(Error::DimensionMismatch(format!(
                "structure functions must be {rank}x{rank}x{rank}"
            )));
        }
        for (k, m) in structure.iter().enumerate() {
            for a in 0..rank {
                for b in a..rank {
                    base.ensure_same(m[a][b].patch())?;
                    if !(&m[a][b] + &m[b][a]).is_zero() {
                        return Err(Error::NotAntisymmetric(format!(
                            "c^{}_{{{}{}}}",
                            k + 1,
                            a + 1,
                            b + 1
                        )));
                    }
                }
            }
        }
        Ok(AlgebroidPatch {
            base: base.clone(),
            rank,
            anchor,
            structure,
        })
    }

    /// Zero structure functions and zero anchor, to be filled by `with_bracket`.
    pub fn trivial(base: &Patch, rank: usize) -> Self {
        AlgebroidPatch {
            base: base.clone(),
            rank,
            anchor: ExprMatrix::zeros(base, base.dim(), rank),
            structure: vec![vec![vec![Expr::zero(base); rank]; rank]; rank],
        }
    }

    /// `TM` in the coordinate frame.
    pub fn tangent(base: &Patch) -> Self {
        let n = base.dim();
        AlgebroidPatch {
            base: base.clone(),
            rank: n,
            anchor: ExprMatrix::identity(base, n),
            structure: vec![vec![vec![Expr::zero(base); n]; n]; n],
        }
    }

    /// A Lie algebra (algebroid over a point) from structure constants.
    pub fn lie_algebra(constants: &[Vec<Vec<BigRational>>]) -> Result<Self> {
        let pt = Patch::point();
        let r = constants.len();
        let structure = constants
            .iter()
            .map(|m| {
                m.iter()
                    .map(|row| row.iter().map(|c| Expr::constant(&pt, c.clone())).collect())
                    .collect()
            })
            .collect();
        AlgebroidPatch::new(&pt, r, ExprMatrix::zeros(&pt, 0, r), structure)
    }

    /// Set `[e_a, e_b] = sum_k coeffs[k] e_k` (and the antisymmetric entry).
    pub fn with_bracket(mut self, a: usize, b: usize, coeffs: Vec<Expr>) -> Result<Self> {
        if a >= self.rank || b >= self.rank || coeffs.len() != self.rank {
            return Err(Error::DimensionMismatch("bracket index".into()));
        }
        if a == b {
            if coeffs.iter().any(|c| !c.is_zero()) {
                return Err(Error::NotAntisymmetric(format!("[e{0}, e{0}]", a + 1)));
            }
            return Ok(self);
        }
        for (k, c) in coeffs.into_iter().enumerate() {
            self.base.ensure_same(c.patch())?;
            self.structure[k][b][a] = -&c;
            self.structure[k][a][b] = c;
        }
        Ok(self)
    }

    pub fn with_anchor_column(mut self, a: usize, field: &VField) -> Result<Self> {
        self.base.ensure_same(field.patch())?;
        for i in 0..self.base.dim() {
            self.anchor.set(i, a, field.comp(i).clone());
        }
        Ok(self)
    }

    pub fn base(&self) -> &Patch {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn anchor(&self) -> &ExprMatrix {
        &self.anchor
    }

    pub fn c(&self, k: usize, a: usize, b: usize) -> &Expr {
        &self.structure[k][a][b]
    }

    pub fn structure(&self) -> &[Vec<Vec<Expr>>] {
        &self.structure
    }

    pub fn frame(&self, a: usize) -> ASection {
        (0..self.rank)
            .map(|b| {
                if a == b {
                    Expr::one(&self.base)
                } else {
                    Expr::zero(&self.base)
                }
            })
            .collect()
    }

    pub fn anchor_field(&self, a: usize) -> VField {
        VField::new(&self.base, self.anchor.col(a)).expect("anchor column")
    }

    pub fn anchor_of(&self, u: &[Expr]) -> VField {
        let mut comps = vec![Expr::zero(&self.base); self.base.dim()];
        for (a, ua) in u.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            for (i, c) in comps.iter_mut().enumerate() {
                let r = self.anchor.get(i, a);
                if !r.is_zero() {
                    *c = &*c + r * ua;
                }
            }
        }
        VField::new(&self.base, comps).expect("anchor image")
    }

    /// `[u,v]^k = sum u^a v^b c^k_{ab} + rho(u) v^k - rho(v) u^k`.
    pub fn bracket(&self, u: &[Expr], v: &[Expr]) -> ASection {
        let ru = self.anchor_of(u);
        let rv = self.anchor_of(v);
        (0..self.rank)
            .map(|k| {
                let mut acc = ru.apply(&v[k]) - rv.apply(&u[k]);
                for a in 0..self.rank {
                    if u[a].is_zero() {
                        continue;
                    }
                    for b in 0..self.rank {
                        let c = &self.structure[k][a][b];
                        if c.is_zero() || v[b].is_zero() {
                            continue;
                        }
                        acc = acc + &u[a] * &v[b] * c;
                    }
                }
                acc
            })
            .collect()
    }

    /// Total space of `A`: `(x, u1..ur)`.
    pub fn total_patch(&self) -> Result<Patch> {
        fiber_patch(&self.base, "u", self.rank, "A")
    }

    /// Total space of `A*`: `(x, xi1..xir)`.
    pub fn dual_total_patch(&self) -> Result<Patch> {
        fiber_patch(&self.base, "xi", self.rank, "Astar")
    }

    fn section_label(&self, u: &[Expr]) -> String {
        let parts: Vec<String> = u
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| {
                if c.is_constant() && c.constant_value() == Some(num_traits::One::one()) {
                    format!("e{}", a + 1)
                } else {
                    format!("({c})*e{}", a + 1)
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn fiber_patch(base: &Patch, prefix: &str, rank: usize, name: &str) -> Result<Patch> {
    let mut coords: Vec<String> = base.coords().to_vec();
    for a in 1..=rank {
        let c = format!("{prefix}{a}");
        if coords.contains(&c) {
            return Err(Error::WrongShape(format!(
                "base coordinate `{c}` clashes with fiber coordinates"
            )));
        }
        coords.push(c);
    }
    if coords.is_empty() {
        return Ok(Patch::point());
    }
    Patch::new(name, coords)
}

fn first_nonzero(v: &[Expr]) -> Option<(usize, Expr)> {
    v.iter()
        .enumerate()
        .find(|(_, e)| !e.is_zero())
        .map(|(i, e)| (i, e.clone()))
}

fn add_vec(a: &[Expr], b: &[Expr]) -> Vec<Expr> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn check_lie_algebroid(a: &AlgebroidPatch) -> Report {
    let r = a.rank;
    let mut report = Report::new();
    let mut anchor = None;
    'anchor: for i in 0..r {
        for j in i + 1..r {
            let lhs = a.anchor_of(&a.bracket(&a.frame(i), &a.frame(j)));
            let rhs = lie_bracket(&a.anchor_field(i), &a.anchor_field(j)).expect("same patch");
            if let Some((c, v)) = first_nonzero(lhs.sub(&rhs).expect("same patch").comps()) {
                anchor = Some(Witness::Value {
                    at: format!(
                        "(rho[e{},e{}] - [rho e{},rho e{}])^{}",
                        i + 1,
                        j + 1,
                        i + 1,
                        j + 1,
                        a.base.coords()[c]
                    ),
                    value: v,
                });
                break 'anchor;
            }
        }
    }
    report.push(Finding::from_option("anchor preserves brackets", anchor));
    let mut jacobi = None;
    'jac: for i in 0..r {
        for j in i + 1..r {
            for k in j + 1..r {
                let (ei, ej, ek) = (a.frame(i), a.frame(j), a.frame(k));
                let t1 = a.bracket(&a.bracket(&ei, &ej), &ek);
                let t2 = a.bracket(&a.bracket(&ej, &ek), &ei);
                let t3 = a.bracket(&a.bracket(&ek, &ei), &ej);
                let jac = add_vec(&add_vec(&t1, &t2), &t3);
                if let Some((c, v)) = first_nonzero(&jac) {
                    jacobi = Some(Witness::Value {
                        at: format!("{}^{}", label("Jac", &[i, j, k]), c + 1),
                        value: v,
                    });
                    break 'jac;
                }
            }
        }
    }
    report.push(Finding::from_option("jacobi", jacobi));
    report.note("identities checked on frame sections with the Leibniz extension");
    report
}

fn require_algebroid(a: &AlgebroidPatch) -> Result<()> {
    let r = check_lie_algebroid(a);
    match r.witness_text() {
        None => Ok(()),
        Some(w) => Err(Error::NotAlgebroid(w)),
    }
}

/// `{x^i, x^j} = 0`, `{x^i, xi_a} = rho^i_a`, `{xi_a, xi_b} = sum_k c^k_{ab} xi_k`.
pub fn dual_linear_poisson(a: &AlgebroidPatch) -> Result<Bivector> {
    require_algebroid(a)?;
    let p = a.dual_total_patch()?;
    let n = a.base.dim();
    let mut terms = Vec::new();
    for i in 0..n {
        for b in 0..a.rank {
            terms.push(((i, n + b), a.anchor.get(i, b).embed(&p)?));
        }
    }
    for x in 0..a.rank {
        for y in x + 1..a.rank {
            let mut acc = Expr::zero(&p);
            for k in 0..a.rank {
                acc = acc + a.structure[k][x][y].embed(&p)? * Expr::var(&p, n + k);
            }
            terms.push(((n + x, n + y), acc));
        }
    }
    Bivector::from_terms(&p, terms)
}

type Biv = Vec<Vec<Expr>>;

/// `(d_* u)^{ab} = rho_*^a(u^b) - rho_*^b(u^a) - sum_k c_*^k_{ab} u^k`.
fn d_star(dual: &AlgebroidPatch, u: &[Expr]) -> Biv {
    let r = dual.rank;
    let mut m = vec![vec![Expr::zero(&dual.base); r]; r];
    for a in 0..r {
        for b in 0..r {
            if a == b {
                continue;
            }
            let mut acc = dual.anchor_field(a).apply(&u[b]) - dual.anchor_field(b).apply(&u[a]);
            for k in 0..r {
                let c = &dual.structure[k][a][b];
                if !c.is_zero() {
                    acc = acc - c * &u[k];
                }
            }
            m[a][b] = acc;
        }
    }
    m
}

/// `(L_v P)^{ab} = rho(v) P^{ab} + sum_c (P^{cb} [v,e_c]^a + P^{ac} [v,e_c]^b)`.
fn lie_derivative_biv(a: &AlgebroidPatch, v: &[Expr], p: &Biv) -> Biv {
    let r = a.rank;
    let rv = a.anchor_of(v);
    let bv: Vec<ASection> = (0..r).map(|c| a.bracket(v, &a.frame(c))).collect();
    let mut out = vec![vec![Expr::zero(&a.base); r]; r];
    for x in 0..r {
        for y in 0..r {
            let mut acc = rv.apply(&p[x][y]);
            for c in 0..r {
                if !p[c][y].is_zero() {
                    acc = acc + &p[c][y] * &bv[c][x];
                }
                if !p[x][c].is_zero() {
                    acc = acc + &p[x][c] * &bv[c][y];
                }
            }
            out[x][y] = acc;
        }
    }
    out
}

/// Derivation condition `d_*[u,v] = [d_* u, v] + [u, d_* v]` on frame pairs
/// and on pairs `(x^i e_a, e_b)`.
pub fn check_lie_bialgebroid(a: &AlgebroidPatch, dual: &AlgebroidPatch) -> Result<Report> {
    if a.rank > MAX_BIALGEBROID_RANK {
        return Err(Error::RankTooLarge(a.rank));
    }
    a.base.ensure_same(&dual.base)?;
    if a.rank != dual.rank {
        return Err(Error::DimensionMismatch(format!(
            "ranks {} and {} differ",
            a.rank, dual.rank
        )));
    }
    require_algebroid(a)?;
    require_algebroid(dual)?;
    let r = a.rank;
    let mut pairs: Vec<(ASection, ASection)> = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            pairs.push((a.frame(i), a.frame(j)));
        }
    }
    for i in 0..a.base.dim() {
        let xi = Expr::var(&a.base, i);
        for s in 0..r {
            for t in 0..r {
                let u: ASection = a.frame(s).iter().map(|c| c * &xi).collect();
                pairs.push((u, a.frame(t)));
            }
        }
    }
    let mut witness = None;
    'outer: for (u, v) in &pairs {
        let lhs = d_star(dual, &a.bracket(u, v));
        let t1 = lie_derivative_biv(a, u, &d_star(dual, v));
        let t2 = lie_derivative_biv(a, v, &d_star(dual, u));
        for x in 0..r {
            for y in x + 1..r {
                let d = &lhs[x][y] - (&t1[x][y] - &t2[x][y]);
                if !d.is_zero() {
                    witness = Some(Witness::Value {
                        at: format!(
                            "(d*[u,v] - [d*u,v] - [u,d*v])^{{{}{}}} at u = {}, v = {}",
                            x + 1,
                            y + 1,
                            a.section_label(u),
                            a.section_label(v)
                        ),
                        value: d,
                    });
                    break 'outer;
                }
            }
        }
    }
    let mut report = Report::new();
    report.push(Finding::from_option("derivation condition", witness));
    Ok(report)
}

/// `sigma(e_a) = sum_i sigma_{ia} dx^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IMTwoForm {
    pub sigma: ExprMatrix,
}

impl IMTwoForm {
    /// `sigma = beta^flat` on `TM`: `sigma(X) = i_X beta`.
    pub fn from_two_form(beta: &KForm) -> Result<Self> {
        if beta.degree() != 2 {
            return Err(Error::DimensionMismatch("sigma from a non-2-form".into()));
        }
        let p = beta.patch();
        let n = p.dim();
        let mut m = ExprMatrix::zeros(p, n, n);
        for i in 0..n {
            for a in 0..n {
                m.set(i, a, beta.get(&[a, i]));
            }
        }
        Ok(IMTwoForm { sigma: m })
    }

    fn of(&self, u: &[Expr]) -> KForm {
        let p = self.sigma.patch();
        let comps = (0..self.sigma.rows())
            .map(|i| {
                let mut acc = Expr::zero(p);
                for (a, ua) in u.iter().enumerate() {
                    if !ua.is_zero() {
                        acc = acc + self.sigma.get(i, a) * ua;
                    }
                }
                acc
            })
            .collect();
        KForm::one_form(p, comps).expect("sigma column")
    }
}

pub fn check_im_two_form(a: &AlgebroidPatch, s: &IMTwoForm) -> Result<Report> {
    a.base.ensure_same(s.sigma.patch())?;
    if s.sigma.rows() != a.base.dim() || s.sigma.cols() != a.rank {
        return Err(Error::DimensionMismatch("sigma shape".into()));
    }
    require_algebroid(a)?;
    let r = a.rank;
    let pair = |u: &[Expr], v: &[Expr]| -> Result<Expr> {
        s.of(u).eval_on(&[&a.anchor_of(v)])
    };
    let mut sym = None;
    'sym: for i in 0..r {
        for j in i..r {
            let v = pair(&a.frame(i), &a.frame(j))? + pair(&a.frame(j), &a.frame(i))?;
            if !v.is_zero() {
                sym = Some(Witness::Value {
                    at: format!("<sigma(e{}),rho(e{})> + <sigma(e{}),rho(e{})>", i + 1, j + 1, j + 1, i + 1),
                    value: v,
                });
                break 'sym;
            }
        }
    }
    let mut pairs: Vec<(ASection, ASection)> = Vec::new();
    for i in 0..r {
        for j in 0..r {
            if i != j {
                pairs.push((a.frame(i), a.frame(j)));
            }
        }
    }
    for i in 0..a.base.dim() {
        let xi = Expr::var(&a.base, i);
        for s_ in 0..r {
            for t in 0..r {
                pairs.push((a.frame(s_).iter().map(|c| c * &xi).collect(), a.frame(t)));
            }
        }
    }
    let mut br = None;
    for (u, v) in &pairs {
        let lhs = s.of(&a.bracket(u, v));
        let rhs = lie_derivative(&a.anchor_of(u), &s.of(v))?
            .sub(&lie_derivative(&a.anchor_of(v), &s.of(u))?)?
            .add(&exterior_derivative(&KForm::function(pair(u, v)?))?)?;
        let d = lhs.sub(&rhs)?;
        let first = d.terms().next().map(|(idx, c)| (idx[0], c.clone()));
        if let Some((i0, c)) = first {
            br = Some(Witness::Value {
                at: format!(
                    "(sigma[u,v] - rhs) on d{} at u = {}, v = {}",
                    a.base.coords()[i0],
                    a.section_label(u),
                    a.section_label(v)
                ),
                value: c,
            });
            break;
        }
    }
    let mut report = Report::new();
    report.push(Finding::from_option("skew pairing", sym));
    report.push(Finding::from_option("bracket compatibility", br));
    Ok(report)
}

/// Data `(F_M, K, nabla)` of an IM-foliation.
///
/// `connection[m][q][p]` is the coefficient of `r_p + K` in
/// `nabla_{f_m}(r_q + K)`, where `r_q` are the quotient representatives.
/// `parallel` lists sections whose classes are flat and span `A/K`; when
/// absent the representatives themselves are used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IMFoliation {
    pub leaves: Vec<VField>,
    pub kernel: Vec<ASection>,
    pub quotient_frame: Vec<ASection>,
    pub connection: Vec<Vec<Vec<Expr>>>,
    pub parallel: Option<Vec<ASection>>,
}

impl IMFoliation {
    /// Trivial connection (all coefficients zero).
    pub fn with_trivial_connection(
        leaves: Vec<VField>,
        kernel: Vec<ASection>,
        quotient_frame: Vec<ASection>,
        patch: &Patch,
    ) -> Self {
        let q = quotient_frame.len();
        let connection = vec![vec![vec![Expr::zero(patch); q]; q]; leaves.len()];
        IMFoliation {
            leaves,
            kernel,
            quotient_frame,
            connection,
            parallel: None,
        }
    }
}

struct QuotientCoords<'a> {
    a: &'a AlgebroidPatch,
    f: &'a IMFoliation,
    basis: ExprMatrix,
}

impl QuotientCoords<'_> {
    /// Numerators of the quotient coordinates of `w`, and their denominator.
    fn coords(&self, w: &[Expr]) -> Result<(Vec<Expr>, Expr)> {
        let (x, d) = self.basis.solve_cleared(w)?;
        Ok((x[..self.f.quotient_frame.len()].to_vec(), d))
    }

    /// `D^2 * nabla_{f_m}(w + K)` in the quotient frame.
    fn nabla(&self, m: usize, w: &[Expr]) -> Result<Vec<Expr>> {
        let (n, d) = self.coords(w)?;
        let fm = &self.f.leaves[m];
        let fd = fm.apply(&d);
        let q = n.len();
        Ok((0..q)
            .map(|p| {
                let mut acc = fm.apply(&n[p]) * &d - &n[p] * &fd;
                for (s, ns) in n.iter().enumerate() {
                    let g = &self.f.connection[m][s][p];
                    if !g.is_zero() && !ns.is_zero() {
                        acc = acc + &d * ns * g;
                    }
                }
                acc
            })
            .collect())
    }

    fn parallel_witness(&self, w: &[Expr], what: &str) -> Result<Option<Witness>> {
        for m in 0..self.f.leaves.len() {
            if let Some((p, v)) = first_nonzero(&self.nabla(m, w)?) {
                return Ok(Some(Witness::Value {
                    at: format!("nabla_f{}({what} + K) on r{} (scaled)", m + 1, p + 1),
                    value: v,
                }));
            }
        }
        let _ = self.a;
        Ok(None)
    }
}

pub fn check_im_foliation(a: &AlgebroidPatch, f: &IMFoliation) -> Result<Report> {
    let base = &a.base;
    let n = base.dim();
    let r = a.rank;
    let fm: Vec<Vec<Expr>> = f.leaves.iter().map(|v| v.comps().to_vec()).collect();
    for v in &f.leaves {
        base.ensure_same(v.patch())?;
    }
    if f.kernel.iter().chain(&f.quotient_frame).any(|s| s.len() != r) {
        return Err(Error::DimensionMismatch("section length".into()));
    }
    let q = f.quotient_frame.len();
    if f.connection.len() != f.leaves.len()
        || f
            .connection
            .iter()
            .any(|m| m.len() != q || m.iter().any(|row| row.len() != q))
    {
        return Err(Error::DimensionMismatch(format!(
            "connection must be {}x{q}x{q}",
            f.leaves.len()
        )));
    }
    let rank_fm = span_rank(base, &fm);
    if rank_fm != fm.len() {
        return Err(Error::RankJump(format!(
            "F_M spanned by {} fields has rank {rank_fm}",
            fm.len()
        )));
    }
    let rank_k = span_rank(base, &f.kernel);
    if rank_k != f.kernel.len() {
        return Err(Error::RankJump(format!(
            "K spanned by {} sections has rank {rank_k}",
            f.kernel.len()
        )));
    }
    let mut all: Vec<ASection> = f.quotient_frame.clone();
    all.extend(f.kernel.iter().cloned());
    if all.len() != r || span_rank(base, &all) != r {
        return Err(Error::RankJump(
            "quotient representatives and K do not form a frame of A".into(),
        ));
    }
    for (j, k) in f.kernel.iter().enumerate() {
        let rk = a.anchor_of(k);
        if !span_contains(base, &fm, rk.comps()) {
            return Err(Error::AnchorNotTangent(format!("rho(k{}) = {rk}", j + 1)));
        }
    }
    let basis = if r == 0 {
        ExprMatrix::zeros(base, 0, 0)
    } else {
        ExprMatrix::from_cols(base, all.clone())?
    };
    let qc = QuotientCoords { a, f, basis };
    let mut report = Report::new();

    let mut inv = None;
    'inv: for i in 0..fm.len() {
        for j in i + 1..fm.len() {
            let b = lie_bracket(&f.leaves[i], &f.leaves[j])?;
            if !span_contains(base, &fm, b.comps()) {
                inv = Some(Witness::Text(format!("[f{},f{}] = {b} is not in F_M", i + 1, j + 1)));
                break 'inv;
            }
        }
    }
    report.push(Finding::from_option("F_M involutive", inv));

    let mut sub = None;
    'sub: for i in 0..f.kernel.len() {
        for j in i + 1..f.kernel.len() {
            let b = a.bracket(&f.kernel[i], &f.kernel[j]);
            if !span_contains(base, &f.kernel, &b) {
                sub = Some(Witness::Text(format!(
                    "[k{},k{}] = {} is not in K",
                    i + 1,
                    j + 1,
                    a.section_label(&b)
                )));
                break 'sub;
            }
        }
    }
    report.push(Finding::from_option("K subalgebroid", sub));

    // Curvature, scaled by the denominator of [f_m, f_l] in the F_M frame.
    let mut flat = None;
    if n > 0 && !fm.is_empty() {
        let fmat = ExprMatrix::from_cols(base, fm.clone())?;
        'flat: for m in 0..fm.len() {
            for l in m + 1..fm.len() {
                let br = lie_bracket(&f.leaves[m], &f.leaves[l])?;
                let Ok((h, e)) = fmat.solve_cleared(br.comps()) else {
                    continue;
                };
                let g = &f.connection;
                for qq in 0..q {
                    for p in 0..q {
                        let mut acc = f.leaves[m].apply(&g[l][qq][p]) - f.leaves[l].apply(&g[m][qq][p]);
                        for s in 0..q {
                            acc = acc + &g[l][qq][s] * &g[m][s][p] - &g[m][qq][s] * &g[l][s][p];
                        }
                        let mut tot = &e * &acc;
                        for (s, hs) in h.iter().enumerate() {
                            if !hs.is_zero() {
                                tot = tot - hs * &g[s][qq][p];
                            }
                        }
                        if !tot.is_zero() {
                            flat = Some(Witness::Value {
                                at: format!("curvature(f{},f{}) r{} on r{} (scaled)", m + 1, l + 1, qq + 1, p + 1),
                                value: tot,
                            });
                            break 'flat;
                        }
                    }
                }
            }
        }
    }
    report.push(Finding::from_option("connection flat", flat));

    let gens = f.parallel.clone().unwrap_or_else(|| f.quotient_frame.clone());
    let mut par = None;
    for (j, u) in gens.iter().enumerate() {
        if u.len() != r {
            return Err(Error::DimensionMismatch("parallel section length".into()));
        }
        if let Some(w) = qc.parallel_witness(u, &format!("u{}", j + 1))? {
            par = Some(w);
            break;
        }
    }
    if par.is_none() {
        let mut span = gens.clone();
        span.extend(f.kernel.iter().cloned());
        let found = span_rank(base, &span);
        if found != r {
            par = Some(Witness::Rank {
                what: "parallel sections together with K".into(),
                expected: r,
                found,
            });
        }
    }
    report.push(Finding::from_option("parallel generators", par));

    let mut stab = None;
    'stab: for (j, u) in gens.iter().enumerate() {
        for (i, k) in f.kernel.iter().enumerate() {
            let b = a.bracket(u, k);
            if !span_contains(base, &f.kernel, &b) {
                stab = Some(Witness::Text(format!(
                    "[u{},k{}] = {} is not in K",
                    j + 1,
                    i + 1,
                    a.section_label(&b)
                )));
                break 'stab;
            }
        }
    }
    report.push(Finding::from_option("bracket with K stays in K", stab));

    let mut closed = None;
    'closed: for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let b = a.bracket(&gens[i], &gens[j]);
            if let Some(w) = qc.parallel_witness(&b, &format!("[u{},u{}]", i + 1, j + 1))? {
                closed = Some(w);
                break 'closed;
            }
        }
    }
    report.push(Finding::from_option("flat sections closed under bracket", closed));

    let mut tang = None;
    'tang: for (j, u) in gens.iter().enumerate() {
        let ru = a.anchor_of(u);
        for (m, x) in f.leaves.iter().enumerate() {
            let b = lie_bracket(&ru, x)?;
            if !span_contains(base, &fm, b.comps()) {
                tang = Some(Witness::Text(format!(
                    "[rho(u{}),f{}] = {b} is not in F_M",
                    j + 1,
                    m + 1
                )));
                break 'tang;
            }
        }
    }
    report.push(Finding::from_option("anchor of flat sections preserves F_M", tang));
    report.note("ranks are generic-point ranks");
    Ok(report)
}

/// A Lie algebra `g` together with a bracket on `g*`, both as constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieBialgebraData {
    pub g: AlgebroidPatch,
    pub dual: AlgebroidPatch,
}

impl LieBialgebraData {
    pub fn new(g: AlgebroidPatch, dual: AlgebroidPatch) -> Result<Self> {
        if g.base.dim() != 0 || dual.base.dim() != 0 {
            return Err(Error::WrongShape("Lie bialgebra data must live over a point".into()));
        }
        if g.rank != dual.rank {
            return Err(Error::DimensionMismatch(format!(
                "ranks {} and {} differ",
                g.rank, dual.rank
            )));
        }
        Ok(LieBialgebraData { g, dual })
    }
}

fn constants(a: &AlgebroidPatch) -> Vec<Vec<Vec<BigRational>>> {
    a.structure
        .iter()
        .map(|m| {
            m.iter()
                .map(|row| row.iter().map(|c| c.constant_value().expect("constant")).collect())
                .collect()
        })
        .collect()
}

/// Solve a square rational system, returning the unique solution.
fn rational_solve(cols: &[Vec<BigRational>], rhs: &[BigRational]) -> Result<Vec<BigRational>> {
    let pt = Patch::point();
    let to_e = |v: &[BigRational]| -> Vec<Expr> {
        v.iter().map(|c| Expr::constant(&pt, c.clone())).collect()
    };
    let m = ExprMatrix::from_cols(&pt, cols.iter().map(|c| to_e(c)).collect())?;
    let sol = m.solve_linear(&to_e(rhs))?;
    sol.iter()
        .map(|s| Ok(s.to_expr()?.constant_value().expect("constant")))
        .collect()
}

fn rational_rank_of(vecs: &[Vec<BigRational>]) -> usize {
    crate::symalg::rational_rank(vecs)
}

fn bracket_const(c: &[Vec<Vec<BigRational>>], x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
    let r = c.len();
    (0..r)
        .map(|k| {
            let mut acc = BigRational::from_integer(0.into());
            for a in 0..r {
                for b in 0..r {
                    acc += &x[a] * &y[b] * &c[k][a][b];
                }
            }
            acc
        })
        .collect()
}

fn unit(r: usize, i: usize) -> Vec<BigRational> {
    (0..r)
        .map(|j| BigRational::from_integer(if i == j { 1 } else { 0 }.into()))
        .collect()
}

type Constants = Vec<Vec<Vec<BigRational>>>;

/// Quotient `g/h` and `(g/h)* = h°`, as constants on chosen bases.
fn quotient_bialgebra(
    c: &[Vec<Vec<BigRational>>],
    cd: &[Vec<Vec<BigRational>>],
    h: &[Vec<BigRational>],
    report: &mut Report,
) -> Result<(Constants, Constants)> {
    let r = c.len();
    let hr = rational_rank_of(h);
    if hr != h.len() {
        return Err(Error::NotIdeal(format!("{} vectors of rank {hr}", h.len())));
    }
    for a in 0..r {
        for (j, hj) in h.iter().enumerate() {
            let b = bracket_const(c, &unit(r, a), hj);
            let mut ext = h.to_vec();
            ext.push(b.clone());
            if rational_rank_of(&ext) != hr {
                return Err(Error::NotIdeal(format!("[e{}, h{}] is not in h", a + 1, j + 1)));
            }
        }
    }
    // complement basis from standard vectors
    let mut comp: Vec<Vec<BigRational>> = Vec::new();
    for a in 0..r {
        let mut ext = h.to_vec();
        ext.extend(comp.iter().cloned());
        let before = rational_rank_of(&ext);
        ext.push(unit(r, a));
        if rational_rank_of(&ext) > before {
            comp.push(unit(r, a));
        }
    }
    let s = comp.len();
    let mut cols = comp.clone();
    cols.extend(h.iter().cloned());
    // quotient constants
    let mut qc = vec![vec![vec![BigRational::from_integer(0.into()); s]; s]; s];
    for i in 0..s {
        for j in 0..s {
            let b = bracket_const(c, &comp[i], &comp[j]);
            let x = rational_solve(&cols, &b)?;
            for l in 0..s {
                qc[l][i][j] = x[l].clone();
            }
        }
    }
    // dual basis phi_l of h°: phi_l(comp_i) = delta, phi_l(h_j) = 0
    let mut phis: Vec<Vec<BigRational>> = Vec::new();
    let rows_t: Vec<Vec<BigRational>> = (0..r)
        .map(|a| cols.iter().map(|v| v[a].clone()).collect())
        .collect();
    for l in 0..s {
        // solve cols^T phi = unit(l)
        phis.push(rational_solve(&rows_t, &unit(r, l))?);
    }
    let mut closed = None;
    let mut qd = vec![vec![vec![BigRational::from_integer(0.into()); s]; s]; s];
    'outer: for p in 0..s {
        for q in 0..s {
            let b = bracket_const(cd, &phis[p], &phis[q]);
            for (j, hj) in h.iter().enumerate() {
                let v: BigRational = b.iter().zip(hj).map(|(x, y)| x * y).sum();
                if v != BigRational::from_integer(0.into()) {
                    closed = Some(Witness::Text(format!(
                        "[phi{},phi{}]* is nonzero on h{}",
                        p + 1,
                        q + 1,
                        j + 1
                    )));
                    break 'outer;
                }
            }
            for l in 0..s {
                qd[l][p][q] = b.iter().zip(&comp[l]).map(|(x, y)| x * y).sum();
            }
        }
    }
    report.push(Finding::from_option("annihilator closed under dual bracket", closed));
    Ok((qc, qd))
}

fn jacobi_const(c: &[Vec<Vec<BigRational>>]) -> Option<Witness> {
    let r = c.len();
    let pt = Patch::point();
    for i in 0..r {
        for j in i + 1..r {
            for k in j + 1..r {
                let (ei, ej, ek) = (unit(r, i), unit(r, j), unit(r, k));
                let t1 = bracket_const(c, &bracket_const(c, &ei, &ej), &ek);
                let t2 = bracket_const(c, &bracket_const(c, &ej, &ek), &ei);
                let t3 = bracket_const(c, &bracket_const(c, &ek, &ei), &ej);
                for l in 0..r {
                    let v = &t1[l] + &t2[l] + &t3[l];
                    if v != BigRational::from_integer(0.into()) {
                        return Some(Witness::Value {
                            at: format!("{}^{}", label("Jac", &[i, j, k]), l + 1),
                            value: Expr::constant(&pt, v),
                        });
                    }
                }
            }
        }
    }
    None
}

/// `delta[x,y] = ad_x delta(y) - ad_y delta(x)`, with
/// `delta(e_k)^{ab} = c_*^k_{ab}`.
fn cocycle_witness(c: &[Vec<Vec<BigRational>>], cd: &[Vec<Vec<BigRational>>]) -> Option<Witness> {
    let r = c.len();
    let zero = BigRational::from_integer(0.into());
    let delta = |x: &[BigRational]| -> Vec<Vec<BigRational>> {
        let mut m = vec![vec![zero.clone(); r]; r];
        for (k, xk) in x.iter().enumerate() {
            for a in 0..r {
                for b in 0..r {
                    m[a][b] += xk * &cd[k][a][b];
                }
            }
        }
        m
    };
    // ad_x P: (ad_x P)^{ab} = sum_c (P^{cb} [x,e_c]^a + P^{ac} [x,e_c]^b)
    let ad = |x: &[BigRational], p: &Vec<Vec<BigRational>>| -> Vec<Vec<BigRational>> {
        let bx: Vec<Vec<BigRational>> = (0..r).map(|cc| bracket_const(c, x, &unit(r, cc))).collect();
        let mut m = vec![vec![zero.clone(); r]; r];
        for a in 0..r {
            for b in 0..r {
                for cc in 0..r {
                    m[a][b] += &p[cc][b] * &bx[cc][a] + &p[a][cc] * &bx[cc][b];
                }
            }
        }
        m
    };
    let pt = Patch::point();
    for i in 0..r {
        for j in i + 1..r {
            let (ei, ej) = (unit(r, i), unit(r, j));
            let lhs = delta(&bracket_const(c, &ei, &ej));
            let t1 = ad(&ei, &delta(&ej));
            let t2 = ad(&ej, &delta(&ei));
            for a in 0..r {
                for b in a + 1..r {
                    let d = &lhs[a][b] - (&t1[a][b] - &t2[a][b]);
                    if d != zero {
                        return Some(Witness::Value {
                            at: format!(
                                "(delta[e{},e{}] - ad_e{} delta(e{}) + ad_e{} delta(e{}))^{{{}{}}}",
                                i + 1,
                                j + 1,
                                i + 1,
                                j + 1,
                                j + 1,
                                i + 1,
                                a + 1,
                                b + 1
                            ),
                            value: Expr::constant(&pt, d),
                        });
                    }
                }
            }
        }
    }
    None
}

/// Lie bialgebra conditions on `(g, g*)`, or on `(g/h, (g/h)*)` when an ideal
/// `h` is given, with `(g/h)*` identified with the annihilator of `h`.
pub fn check_lie_bialgebra(
    d: &LieBialgebraData,
    ideal: Option<&[Vec<BigRational>]>,
) -> Result<Report> {
    let c = constants(&d.g);
    let cd = constants(&d.dual);
    if let Some(w) = jacobi_const(&c) {
        return Err(Error::NotLie(w.to_string()));
    }
    let mut report = Report::new();
    let (qc, qd) = match ideal {
        None => (c, cd),
        Some(h) => {
            if h.iter().any(|v| v.len() != d.g.rank) {
                return Err(Error::DimensionMismatch("ideal vector length".into()));
            }
            let out = quotient_bialgebra(&c, &cd, h, &mut report)?;
            report.note(format!("quotient of dimension {}", out.0.len()));
            out
        }
    };
    report.push(Finding::from_option("dual jacobi", jacobi_const(&qd)));
    report.push(Finding::from_option("cocycle", cocycle_witness(&qc, &qd)));
    Ok(report)
}

/// Homogeneity test under `Psi_t(X_x, X_u, a_x, a_u) = (X_x, t X_u, t a_x, a_u)`
/// against the frame at `(x, t u)`. The first `base_dim` coordinates are base
/// coordinates, the rest fiber coordinates.
pub fn check_linearity(l: &Frame, base_dim: usize) -> Result<Report> {
    let lag = lagrangian_finding(l)?;
    if let Some(w) = lag.witness {
        return Err(Error::NotLagrangian(w.to_string()));
    }
    let p = l.patch();
    let dim = p.dim();
    if base_dim > dim {
        return Err(Error::WrongShape(format!("base dimension {base_dim} exceeds {dim}")));
    }
    let mut tname = "t".to_string();
    while p.index_of(&tname).is_some() {
        tname.push('_');
    }
    let mut coords: Vec<String> = p.coords().to_vec();
    coords.push(tname);
    let ext = Patch::new(format!("{}t", p.name()), coords)?;
    let t = Expr::var(&ext, dim);
    let scaled: Vec<Expr> = (0..dim)
        .map(|i| {
            let v = Expr::var(&ext, i);
            if i < base_dim {
                v
            } else {
                &t * v
            }
        })
        .collect();
    let mut psi_cols = Vec::new();
    let mut moved_cols = Vec::new();
    for s in l.secs() {
        let c = s.coefficients();
        let emb: Vec<Expr> = c.iter().map(|e| e.embed(&ext)).collect::<Result<_>>()?;
        let psi: Vec<Expr> = emb
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let (is_form, i) = if k < dim { (false, k) } else { (true, k - dim) };
                let fiber = i >= base_dim;
                if is_form != fiber {
                    // fiber vector component or base form component
                    &t * e
                } else {
                    e.clone()
                }
            })
            .collect();
        let moved: Vec<Expr> = c
            .iter()
            .map(|e| e.substitute(&ext, &scaled))
            .collect::<Result<_>>()?;
        psi_cols.push(psi);
        moved_cols.push(moved);
    }
    let ra = span_rank(&ext, &psi_cols);
    let rb = span_rank(&ext, &moved_cols);
    let mut both = psi_cols.clone();
    both.extend(moved_cols);
    let rab = span_rank(&ext, &both);
    let mut report = Report::new();
    report.push(if ra == rab && rb == rab {
        Finding::pass("homogeneous")
    } else {
        Finding::fail(
            "homogeneous",
            Witness::Rank {
                what: "Psi_t(L) + L(x, t u)".into(),
                expected: ra.max(rb),
                found: rab,
            },
        )
    });
    report.note("span equality decided by generic rank over the field extended by t");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::schouten_jacobiator;
    use crate::courant::{check_dirac, graph_bivector, graph_two_form};
    use crate::symalg::{parse_expr, rat};

    fn e(p: &Patch, s: &str) -> Expr {
        parse_expr(s, p).unwrap()
    }

    fn lie(r: usize, brackets: &[(usize, usize, usize, i64)]) -> AlgebroidPatch {
        let mut c = vec![vec![vec![rat(0); r]; r]; r];
        for &(a, b, k, v) in brackets {
            c[k][a][b] = rat(v);
            c[k][b][a] = rat(-v);
        }
        AlgebroidPatch::lie_algebra(&c).unwrap()
    }

    fn so3() -> AlgebroidPatch {
        lie(3, &[(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)])
    }

    #[test]
    fn algebroid_examples() {
        let p = Patch::new("M", ["x", "y"]).unwrap();
        assert!(check_lie_algebroid(&AlgebroidPatch::tangent(&p)).passed());
        assert!(check_lie_algebroid(&so3()).passed());
        let bad = lie(3, &[(0, 1, 0, 1), (1, 2, 1, 1), (2, 0, 2, 1)]);
        let r = check_lie_algebroid(&bad);
        assert!(!r.passed());
        assert!(!r.finding("jacobi").unwrap().passed());
    }

    #[test]
    fn antisymmetry_enforced() {
        let pt = Patch::point();
        let mut c = vec![vec![vec![Expr::zero(&pt); 2]; 2]; 2];
        c[0][0][1] = Expr::one(&pt);
        assert!(matches!(
            AlgebroidPatch::new(&pt, 2, ExprMatrix::zeros(&pt, 0, 2), c),
            Err(Error::NotAntisymmetric(_))
        ));
    }

    #[test]
    fn anchor_failure_is_reported() {
        // rho(e1) = d_x, rho(e2) = x d_y, [e1,e2] = 0 but [d_x, x d_y] = d_y
        let p = Patch::new("M", ["x", "y"]).unwrap();
        let a = AlgebroidPatch::trivial(&p, 2)
            .with_anchor_column(0, &VField::coord(&p, 0))
            .unwrap()
            .with_anchor_column(1, &VField::new(&p, vec![e(&p, "0"), e(&p, "x")]).unwrap())
            .unwrap();
        let r = check_lie_algebroid(&a);
        assert!(!r.finding("anchor preserves brackets").unwrap().passed());
    }

    #[test]
    fn dual_poisson_examples() {
        let pi = dual_linear_poisson(&so3()).unwrap();
        let q = pi.patch().clone();
        assert_eq!(q.coords(), ["xi1", "xi2", "xi3"]);
        assert_eq!(pi.get(0, 1), e(&q, "xi3"));
        assert_eq!(pi.get(1, 2), e(&q, "xi1"));
        assert_eq!(pi.get(2, 0), e(&q, "xi2"));
        assert!(schouten_jacobiator(&pi).is_zero());
        assert!(dual_linear_poisson(&lie(2, &[])).unwrap().is_zero());
        let p = Patch::new("M", ["x", "y"]).unwrap();
        let can = dual_linear_poisson(&AlgebroidPatch::tangent(&p)).unwrap();
        let t = can.patch().clone();
        assert_eq!(can.get(0, 2), e(&t, "1"));
        assert_eq!(can.get(1, 3), e(&t, "1"));
        assert!(can.get(0, 3).is_zero());
        assert!(can.get(0, 1).is_zero());
        let bad = lie(3, &[(0, 1, 0, 1), (1, 2, 1, 1), (2, 0, 2, 1)]);
        assert!(matches!(dual_linear_poisson(&bad), Err(Error::NotAlgebroid(_))));
    }

    #[test]
    fn bialgebroid_examples() {
        let p = Patch::new("M", ["x"]).unwrap();
        let tm = AlgebroidPatch::tangent(&p);
        let zero = AlgebroidPatch::trivial(&p, 1);
        assert!(check_lie_bialgebroid(&tm, &zero).unwrap().passed());
        let abelian = lie(2, &[]);
        let affine = lie(2, &[(0, 1, 0, 1)]);
        assert!(check_lie_bialgebroid(&abelian, &affine).unwrap().passed());
        assert!(check_lie_bialgebroid(&affine, &abelian).unwrap().passed());
        assert!(!check_lie_bialgebroid(&so3(), &so3()).unwrap().passed());
        let big = lie(5, &[]);
        assert_eq!(check_lie_bialgebroid(&big, &big).unwrap_err(), Error::RankTooLarge(5));
    }

    // Independent oracle: the cocycle condition via the coadjoint action on
    // the dual bracket, [x, y]_* compatibility written with explicit sums.
    fn bialgebra_oracle(c: &[Vec<Vec<BigRational>>], cd: &[Vec<Vec<BigRational>>]) -> bool {
        let r = c.len();
        // condition: c*^k_{ab} c^m... expanded form of delta[e_i,e_j]
        for i in 0..r {
            for j in 0..r {
                for a in 0..r {
                    for b in 0..r {
                        let mut lhs = rat(0);
                        for k in 0..r {
                            lhs += &c[k][i][j] * &cd[k][a][b];
                        }
                        let mut rhs = rat(0);
                        for s in 0..r {
                            // ad_{e_i} delta(e_j): [e_i, e_s] = c^a_{is} e_a
                            rhs += &cd[j][s][b] * &c[a][i][s] + &cd[j][a][s] * &c[b][i][s];
                            rhs -= &cd[i][s][b] * &c[a][j][s] + &cd[i][a][s] * &c[b][j][s];
                        }
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn bialgebra_examples() {
        let abelian = lie(2, &[]);
        let affine = lie(2, &[(0, 1, 0, 1)]);
        let d = LieBialgebraData::new(abelian.clone(), affine.clone()).unwrap();
        assert!(check_lie_bialgebra(&d, None).unwrap().passed());
        let full = vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]];
        let r = check_lie_bialgebra(&d, Some(&full)).unwrap();
        assert!(r.passed());
        let s = LieBialgebraData::new(so3(), so3()).unwrap();
        let r = check_lie_bialgebra(&s, None).unwrap();
        assert!(!r.finding("cocycle").unwrap().passed());
        assert!(!bialgebra_oracle(&constants(&so3()), &constants(&so3())));
        assert!(bialgebra_oracle(&constants(&abelian), &constants(&affine)));
        // agreement with the bialgebroid derivation condition over a point
        for (g, gs) in [(&abelian, &affine), (&affine, &abelian), (&so3(), &so3())] {
            let a = check_lie_bialgebra(&LieBialgebraData::new(g.clone(), gs.clone()).unwrap(), None)
                .unwrap()
                .passed();
            let b = check_lie_bialgebroid(g, gs).unwrap().passed();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn bialgebra_ideal_checks() {
        // affine algebra [e1,e2] = e1: span{e1} is an ideal, span{e2} is not
        let affine = lie(2, &[(0, 1, 0, 1)]);
        let d = LieBialgebraData::new(affine.clone(), lie(2, &[])).unwrap();
        let h1 = vec![vec![rat(1), rat(0)]];
        assert!(check_lie_bialgebra(&d, Some(&h1)).unwrap().passed());
        let h2 = vec![vec![rat(0), rat(1)]];
        assert!(matches!(check_lie_bialgebra(&d, Some(&h2)), Err(Error::NotIdeal(_))));
        let bad = LieBialgebraData::new(lie(3, &[(0, 1, 0, 1), (1, 2, 1, 1), (2, 0, 2, 1)]), lie(3, &[]))
            .unwrap();
        assert!(matches!(check_lie_bialgebra(&bad, None), Err(Error::NotLie(_))));
    }

    #[test]
    fn im_two_form_examples() {
        let p = Patch::new("M", ["x", "y", "z"]).unwrap();
        let tm = AlgebroidPatch::tangent(&p);
        let closed = KForm::from_terms(&p, 2, [(vec![0, 1], e(&p, "1"))]).unwrap();
        let r = check_im_two_form(&tm, &IMTwoForm::from_two_form(&closed).unwrap()).unwrap();
        assert!(r.passed());
        let open = KForm::from_terms(&p, 2, [(vec![0, 1], e(&p, "z"))]).unwrap();
        let r = check_im_two_form(&tm, &IMTwoForm::from_two_form(&open).unwrap()).unwrap();
        assert!(r.finding("skew pairing").unwrap().passed());
        assert!(!r.finding("bracket compatibility").unwrap().passed());
        let zero = IMTwoForm { sigma: ExprMatrix::zeros(&p, 3, 3) };
        assert!(check_im_two_form(&tm, &zero).unwrap().passed());
    }

    fn tr2() -> (Patch, AlgebroidPatch) {
        let p = Patch::new("M", ["x", "y"]).unwrap();
        let a = AlgebroidPatch::tangent(&p);
        (p, a)
    }

    #[test]
    fn im_foliation_examples() {
        let (p, a) = tr2();
        let ex = vec![e(&p, "1"), e(&p, "0")];
        let ey = vec![e(&p, "0"), e(&p, "1")];
        let f = IMFoliation::with_trivial_connection(
            vec![VField::coord(&p, 0)],
            vec![ex.clone()],
            vec![ey.clone()],
            &p,
        );
        assert!(check_im_foliation(&a, &f).unwrap().passed());

        // K = span{d_x + x d_y} with F_M = span{d_x} breaks rho(K) in F_M.
        let k = vec![e(&p, "1"), e(&p, "x")];
        let f = IMFoliation::with_trivial_connection(
            vec![VField::coord(&p, 0)],
            vec![k.clone()],
            vec![ey.clone()],
            &p,
        );
        assert!(matches!(check_im_foliation(&a, &f), Err(Error::AnchorNotTangent(_))));

        // F_M = K = span{d_x + x d_y}: [d_x, d_x + x d_y] = d_y leaves K.
        let f = IMFoliation::with_trivial_connection(
            vec![VField::new(&p, k.clone()).unwrap()],
            vec![k.clone()],
            vec![ex.clone()],
            &p,
        );
        let r = check_im_foliation(&a, &f).unwrap();
        assert!(!r.passed());
        assert!(!r.finding("bracket with K stays in K").unwrap().passed());

        let f = IMFoliation::with_trivial_connection(
            vec![VField::coord(&p, 0), VField::coord(&p, 1)],
            vec![ex, ey],
            vec![],
            &p,
        );
        assert!(check_im_foliation(&a, &f).unwrap().passed());
    }

    #[test]
    fn im_foliation_curvature_and_rank() {
        let (p, a) = tr2();
        let ex = vec![e(&p, "1"), e(&p, "0")];
        let ey = vec![e(&p, "0"), e(&p, "1")];
        // F_M = TM, K = 0, quotient A with a curved connection nabla_{d_x} e_1 = y e_2
        let mut conn = vec![vec![vec![Expr::zero(&p); 2]; 2]; 2];
        conn[0][0][1] = e(&p, "y");
        let f = IMFoliation {
            leaves: vec![VField::coord(&p, 0), VField::coord(&p, 1)],
            kernel: vec![],
            quotient_frame: vec![ex.clone(), ey.clone()],
            connection: conn,
            parallel: None,
        };
        let r = check_im_foliation(&a, &f).unwrap();
        assert!(!r.finding("connection flat").unwrap().passed());
        assert!(!r.finding("parallel generators").unwrap().passed());
        let dup = IMFoliation::with_trivial_connection(
            vec![VField::coord(&p, 0), VField::coord(&p, 0)],
            vec![],
            vec![ex, ey],
            &p,
        );
        assert!(matches!(check_im_foliation(&a, &dup), Err(Error::RankJump(_))));
    }

    #[test]
    fn linearity_examples() {
        let lp = dual_linear_poisson(&so3()).unwrap();
        let l = graph_bivector(&lp).unwrap();
        assert!(check_dirac(&l).unwrap().passed());
        assert!(check_linearity(&l, 0).unwrap().passed());
        let q = Patch::new("A", ["u1", "u2"]).unwrap();
        let c = Bivector::from_terms(&q, [((0, 1), e(&q, "1"))]).unwrap();
        assert!(!check_linearity(&graph_bivector(&c).unwrap(), 0).unwrap().passed());
        // canonical form on T*Q with Q = (q), fiber p
        let tq = Patch::new("TQ", ["q", "p"]).unwrap();
        let w = KForm::from_terms(&tq, 2, [(vec![0, 1], e(&tq, "-1"))]).unwrap();
        assert!(check_linearity(&graph_two_form(&w).unwrap(), 1).unwrap().passed());
        let shifted = KForm::from_terms(&tq, 2, [(vec![0, 1], e(&tq, "p + 1"))]).unwrap();
        assert!(!check_linearity(&graph_two_form(&shifted).unwrap(), 1).unwrap().passed());
    }
}
