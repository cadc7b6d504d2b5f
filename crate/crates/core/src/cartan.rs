//! Vector fields, differential forms of degree at most 3, bivectors and
//! polynomial maps on a coordinate patch.
//!
//! Conventions: `(X^Y)(a,b) = a(X)b(Y) - a(Y)b(X)` and `p#(a) = p(a, .)`, so
//! `(p#a)^i = sum_j p^{ji} a_j`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::symalg::{BigRational, Expr, ExprMatrix, Patch};

pub const MAX_DEGREE: usize = 3;

pub(crate) fn fmt_combination(
    f: &mut fmt::Formatter<'_>,
    terms: impl IntoIterator<Item = (Expr, String)>,
) -> fmt::Result {
    let mut first = true;
    for (c, basis) in terms {
        if c.is_zero() {
            continue;
        }
        let one = BigRational::one();
        let body = match c.constant_value() {
            _ if c.num_terms() > 1 => format!("({c})*{basis}"),
            Some(v) if v == one => basis,
            Some(v) if v == -one => format!("-{basis}"),
            _ => format!("{c}*{basis}"),
        };
        if first {
            f.write_str(&body)?;
        } else if let Some(rest) = body.strip_prefix('-') {
            write!(f, " - {rest}")?;
        } else {
            write!(f, " + {body}")?;
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// A vector field `sum_i X^i d/dx^i`.
#[derive(Clone, PartialEq, Eq)]
pub struct VField {
    patch: Patch,
    comps: Vec<Expr>,
}

impl VField {
    pub fn new(patch: &Patch, comps: Vec<Expr>) -> Result<Self> {
        if comps.len() != patch.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector field needs {} components, got {}",
                patch.dim(),
                comps.len()
            )));
        }
        for c in &comps {
            patch.ensure_same(c.patch())?;
        }
        Ok(VField {
            patch: patch.clone(),
            comps,
        })
    }

    pub fn zero(patch: &Patch) -> Self {
        VField {
            patch: patch.clone(),
            comps: vec![Expr::zero(patch); patch.dim()],
        }
    }

    /// The coordinate field `d/dx^i`.
    pub fn coord(patch: &Patch, i: usize) -> Self {
        let mut v = Self::zero(patch);
        v.comps[i] = Expr::one(patch);
        v
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    pub fn comps(&self) -> &[Expr] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &Expr {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Expr::is_zero)
    }

    /// Derivative of a function along the field.
    pub fn apply(&self, f: &Expr) -> Expr {
        let mut acc = Expr::zero(&self.patch);
        for (i, c) in self.comps.iter().enumerate() {
            if !c.is_zero() {
                acc = acc + c * f.diff(i);
            }
        }
        acc
    }

    pub fn add(&self, other: &VField) -> Result<VField> {
        self.patch.ensure_same(&other.patch)?;
        Ok(VField {
            patch: self.patch.clone(),
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &VField) -> Result<VField> {
        self.add(&other.scale(&Expr::int(&self.patch, -1)))
    }

    pub fn scale(&self, f: &Expr) -> VField {
        VField {
            patch: self.patch.clone(),
            comps: self.comps.iter().map(|c| c * f).collect(),
        }
    }

    pub fn embed(&self, target: &Patch, map: &[usize]) -> Result<VField> {
        let mut comps = vec![Expr::zero(target); target.dim()];
        for (i, c) in self.comps.iter().enumerate() {
            comps[map[i]] = c.embed(target)?;
        }
        VField::new(target, comps)
    }
}

impl fmt::Display for VField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_combination(
            f,
            self.comps
                .iter()
                .zip(self.patch.coords())
                .map(|(c, n)| (c.clone(), format!("D{n}"))),
        )
    }
}

impl fmt::Debug for VField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `[X,Y]^i = sum_j (X^j d_j Y^i - Y^j d_j X^i)`.
pub fn lie_bracket(x: &VField, y: &VField) -> Result<VField> {
    x.patch.ensure_same(&y.patch)?;
    let comps = (0..x.patch.dim())
        .map(|i| x.apply(&y.comps[i]) - y.apply(&x.comps[i]))
        .collect();
    Ok(VField {
        patch: x.patch.clone(),
        comps,
    })
}

/// Sign of the permutation sorting `idx`, or `None` on a repeated index.
fn sort_sign(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, odd))
    }
}

/// A differential form of degree `k <= 3`, stored on increasing multi-indices.
#[derive(Clone, PartialEq, Eq)]
pub struct KForm {
    patch: Patch,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Expr>,
}

impl KForm {
    pub fn zero(patch: &Patch, degree: usize) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeTooHigh(degree));
        }
        Ok(KForm {
            patch: patch.clone(),
            degree,
            comps: BTreeMap::new(),
        })
    }

    pub fn function(f: Expr) -> Self {
        let mut w = KForm {
            patch: f.patch().clone(),
            degree: 0,
            comps: BTreeMap::new(),
        };
        w.add_comp(Vec::new(), f);
        w
    }

    /// The coordinate differential `dx^i`.
    pub fn coord(patch: &Patch, i: usize) -> Self {
        let mut w = KForm::zero(patch, 1).expect("degree 1");
        w.add_comp(vec![i], Expr::one(patch));
        w
    }

    /// One-form with the given coefficients `a_i dx^i`.
    pub fn one_form(patch: &Patch, comps: Vec<Expr>) -> Result<Self> {
        if comps.len() != patch.dim() {
            return Err(Error::DimensionMismatch(format!(
                "one-form needs {} components, got {}",
                patch.dim(),
                comps.len()
            )));
        }
        let mut w = KForm::zero(patch, 1)?;
        for (i, c) in comps.into_iter().enumerate() {
            patch.ensure_same(c.patch())?;
            w.add_comp(vec![i], c);
        }
        Ok(w)
    }

    /// Form from coefficients on arbitrary (not necessarily sorted) index lists.
    pub fn from_terms<I>(patch: &Patch, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Expr)>,
    {
        let mut w = KForm::zero(patch, degree)?;
        for (idx, c) in terms {
            if idx.len() != degree || idx.iter().any(|&i| i >= patch.dim()) {
                return Err(Error::DimensionMismatch(format!(
                    "index {idx:?} for a {degree}-form"
                )));
            }
            patch.ensure_same(c.patch())?;
            if let Some((sorted, odd)) = sort_sign(&idx) {
                w.add_comp(sorted, if odd { -c } else { c });
            }
        }
        Ok(w)
    }

    fn add_comp(&mut self, idx: Vec<usize>, c: Expr) {
        if c.is_zero() {
            return;
        }
        let v = match self.comps.remove(&idx) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.comps.insert(idx, v);
        }
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Nonzero coefficients on increasing multi-indices.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Expr)> {
        self.comps.iter()
    }

    /// Coefficient on an arbitrary index list, with antisymmetry applied.
    pub fn get(&self, idx: &[usize]) -> Expr {
        match sort_sign(idx) {
            None => Expr::zero(&self.patch),
            Some((sorted, odd)) => match self.comps.get(&sorted) {
                None => Expr::zero(&self.patch),
                Some(c) if odd => -c,
                Some(c) => c.clone(),
            },
        }
    }

    /// The function of a 0-form.
    pub fn scalar(&self) -> Expr {
        self.get(&[])
    }

    /// Coefficients of a one-form.
    pub fn one_form_comps(&self) -> Vec<Expr> {
        (0..self.patch.dim()).map(|i| self.get(&[i])).collect()
    }

    pub fn add(&self, other: &KForm) -> Result<KForm> {
        self.patch.ensure_same(&other.patch)?;
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch(format!(
                "adding forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (i, c) in &other.comps {
            out.add_comp(i.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &KForm) -> Result<KForm> {
        self.add(&other.scale(&Expr::int(&self.patch, -1)))
    }

    pub fn scale(&self, f: &Expr) -> KForm {
        let mut out = KForm {
            patch: self.patch.clone(),
            degree: self.degree,
            comps: BTreeMap::new(),
        };
        for (i, c) in &self.comps {
            out.add_comp(i.clone(), c * f);
        }
        out
    }

    pub fn wedge(&self, other: &KForm) -> Result<KForm> {
        self.patch.ensure_same(&other.patch)?;
        let mut out = KForm::zero(&self.patch, self.degree + other.degree)?;
        for (i, a) in &self.comps {
            for (j, b) in &other.comps {
                let idx: Vec<usize> = i.iter().chain(j).copied().collect();
                if let Some((sorted, odd)) = sort_sign(&idx) {
                    let c = a * b;
                    out.add_comp(sorted, if odd { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Value on `k` vector fields.
    pub fn eval_on(&self, vs: &[&VField]) -> Result<Expr> {
        if vs.len() != self.degree {
            return Err(Error::DimensionMismatch(format!(
                "{}-form evaluated on {} vectors",
                self.degree,
                vs.len()
            )));
        }
        let mut w = self.clone();
        for v in vs {
            w = interior_product(v, &w)?;
        }
        Ok(w.scalar())
    }

    pub fn embed(&self, target: &Patch, map: &[usize]) -> Result<KForm> {
        let mut out = KForm::zero(target, self.degree)?;
        for (i, c) in &self.comps {
            let idx: Vec<usize> = i.iter().map(|&k| map[k]).collect();
            let (sorted, odd) = sort_sign(&idx).expect("injective map");
            let c = c.embed(target)?;
            out.add_comp(sorted, if odd { -c } else { c });
        }
        Ok(out)
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "{}", self.scalar());
        }
        let names = self.patch.coords();
        fmt_combination(
            f,
            self.comps.iter().map(|(i, c)| {
                let basis: Vec<String> = i.iter().map(|&k| format!("d{}", names[k])).collect();
                (c.clone(), basis.join("^"))
            }),
        )
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-form[{}]", self.degree, self)
    }
}

/// Increasing multi-indices of length `k` in `0..n`.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn exterior_derivative(w: &KForm) -> Result<KForm> {
    if w.degree >= MAX_DEGREE {
        return Err(Error::DegreeTooHigh(w.degree));
    }
    let mut out = KForm::zero(&w.patch, w.degree + 1)?;
    for (idx, c) in &w.comps {
        for j in 0..w.patch.dim() {
            let dc = c.diff(j);
            if dc.is_zero() {
                continue;
            }
            let full: Vec<usize> = std::iter::once(j).chain(idx.iter().copied()).collect();
            if let Some((sorted, odd)) = sort_sign(&full) {
                out.add_comp(sorted, if odd { -dc } else { dc });
            }
        }
    }
    Ok(out)
}

pub fn interior_product(x: &VField, w: &KForm) -> Result<KForm> {
    x.patch.ensure_same(&w.patch)?;
    if w.degree == 0 {
        return Err(Error::DegreeZero);
    }
    let mut out = KForm::zero(&w.patch, w.degree - 1)?;
    for (idx, c) in &w.comps {
        for (pos, &i) in idx.iter().enumerate() {
            let xi = &x.comps[i];
            if xi.is_zero() {
                continue;
            }
            let mut rest = idx.clone();
            rest.remove(pos);
            let t = xi * c;
            out.add_comp(rest, if pos % 2 == 1 { -t } else { t });
        }
    }
    Ok(out)
}

/// Lie derivative via the Cartan formula `i_X d + d i_X`; for 3-forms, whose
/// differential exceeds the degree cap, the coordinate formula is used.
pub fn lie_derivative(x: &VField, w: &KForm) -> Result<KForm> {
    x.patch.ensure_same(&w.patch)?;
    if w.degree == 0 {
        return Ok(KForm::function(x.apply(&w.scalar())));
    }
    if w.degree == MAX_DEGREE {
        return lie_derivative_coordinates(x, w);
    }
    let a = interior_product(x, &exterior_derivative(w)?)?;
    let b = exterior_derivative(&interior_product(x, w)?)?;
    a.add(&b)
}

/// `(L_X w)_I = X(w_I) + sum_l sum_j w_{I[l := j]} d_{i_l} X^j`.
pub fn lie_derivative_coordinates(x: &VField, w: &KForm) -> Result<KForm> {
    x.patch.ensure_same(&w.patch)?;
    let n = w.patch.dim();
    let mut out = KForm::zero(&w.patch, w.degree)?;
    for idx in combinations(n, w.degree) {
        let mut acc = x.apply(&w.get(&idx));
        for l in 0..idx.len() {
            for j in 0..n {
                let dx = x.comps[j].diff(idx[l]);
                if dx.is_zero() {
                    continue;
                }
                let mut sub = idx.clone();
                sub[l] = j;
                let c = w.get(&sub);
                if !c.is_zero() {
                    acc = acc + c * dx;
                }
            }
        }
        out.add_comp(idx, acc);
    }
    Ok(out)
}

/// An antisymmetric bivector `p^{ij}`, stored for `i < j`.
#[derive(Clone, PartialEq, Eq)]
pub struct Bivector {
    patch: Patch,
    comps: BTreeMap<(usize, usize), Expr>,
}

impl Bivector {
    pub fn zero(patch: &Patch) -> Self {
        Bivector {
            patch: patch.clone(),
            comps: BTreeMap::new(),
        }
    }

    /// From `p^{ij}` given on arbitrary ordered pairs.
    pub fn from_terms<I>(patch: &Patch, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Expr)>,
    {
        let mut b = Self::zero(patch);
        for ((i, j), c) in terms {
            if i >= patch.dim() || j >= patch.dim() {
                return Err(Error::DimensionMismatch(format!("bivector index ({i},{j})")));
            }
            patch.ensure_same(c.patch())?;
            b.add_comp(i, j, c);
        }
        Ok(b)
    }

    /// From a full matrix, which must be antisymmetric.
    pub fn from_matrix(m: &ExprMatrix) -> Result<Self> {
        let n = m.patch().dim();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch("bivector matrix shape".into()));
        }
        let mut b = Self::zero(m.patch());
        for i in 0..n {
            for j in i..n {
                if !(m.get(i, j) + m.get(j, i)).is_zero() {
                    return Err(Error::NotAntisymmetric(format!("entries ({i},{j})")));
                }
                if i < j {
                    b.add_comp(i, j, m.get(i, j).clone());
                }
            }
        }
        Ok(b)
    }

    /// `X ^ Y`.
    pub fn wedge(x: &VField, y: &VField) -> Result<Self> {
        x.patch.ensure_same(&y.patch)?;
        let n = x.patch.dim();
        let mut b = Self::zero(&x.patch);
        for i in 0..n {
            for j in i + 1..n {
                b.add_comp(i, j, &x.comps[i] * &y.comps[j] - &x.comps[j] * &y.comps[i]);
            }
        }
        Ok(b)
    }

    fn add_comp(&mut self, i: usize, j: usize, c: Expr) {
        if i == j || c.is_zero() {
            return;
        }
        let (key, c) = if i < j { ((i, j), c) } else { ((j, i), -c) };
        let v = match self.comps.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.comps.insert(key, v);
        }
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    pub fn get(&self, i: usize, j: usize) -> Expr {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Expr::zero(&self.patch),
            Less => self
                .comps
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| Expr::zero(&self.patch)),
            Greater => self
                .comps
                .get(&(j, i))
                .map(|c| -c)
                .unwrap_or_else(|| Expr::zero(&self.patch)),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Expr)> {
        self.comps.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add(&self, other: &Bivector) -> Result<Bivector> {
        self.patch.ensure_same(&other.patch)?;
        let mut out = self.clone();
        for (&(i, j), c) in &other.comps {
            out.add_comp(i, j, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Bivector) -> Result<Bivector> {
        self.add(&other.scale(&Expr::int(&self.patch, -1)))
    }

    pub fn scale(&self, f: &Expr) -> Bivector {
        let mut out = Self::zero(&self.patch);
        for (&(i, j), c) in &self.comps {
            out.add_comp(i, j, c * f);
        }
        out
    }

    pub fn matrix(&self) -> ExprMatrix {
        let n = self.patch.dim();
        let mut m = ExprMatrix::zeros(&self.patch, n, n);
        for (&(i, j), c) in &self.comps {
            m.set(i, j, c.clone());
            m.set(j, i, -c);
        }
        m
    }

    /// `p(a, b) = sum_{ij} p^{ij} a_i b_j`.
    pub fn pair(&self, a: &KForm, b: &KForm) -> Result<Expr> {
        let v = sharp_bivector(self, a)?;
        b.eval_on(&[&v])
    }
}

impl fmt::Display for Bivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.patch.coords();
        fmt_combination(
            f,
            self.comps
                .iter()
                .map(|(&(i, j), c)| (c.clone(), format!("D{}^D{}", names[i], names[j]))),
        )
    }
}

impl fmt::Debug for Bivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn sharp_bivector(p: &Bivector, a: &KForm) -> Result<VField> {
    p.patch.ensure_same(&a.patch)?;
    if a.degree != 1 {
        return Err(Error::DimensionMismatch(format!(
            "sharp needs a 1-form, got degree {}",
            a.degree
        )));
    }
    let n = p.patch.dim();
    let comps = (0..n)
        .map(|i| {
            let mut acc = Expr::zero(&p.patch);
            for j in 0..n {
                let aj = a.get(&[j]);
                if !aj.is_zero() {
                    acc = acc + p.get(j, i) * aj;
                }
            }
            acc
        })
        .collect();
    VField::new(&p.patch, comps)
}

/// Totally antisymmetric 3-index array, stored for `i < j < k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Trivector {
    patch: Patch,
    comps: BTreeMap<[usize; 3], Expr>,
}

impl Trivector {
    pub fn get(&self, i: usize, j: usize, k: usize) -> Expr {
        match sort_sign(&[i, j, k]) {
            None => Expr::zero(&self.patch),
            Some((s, odd)) => match self.comps.get(&[s[0], s[1], s[2]]) {
                None => Expr::zero(&self.patch),
                Some(c) if odd => -c,
                Some(c) => c.clone(),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize; 3], &Expr)> {
        self.comps.iter()
    }

    /// First nonzero entry, if any.
    pub fn first_nonzero(&self) -> Option<([usize; 3], Expr)> {
        self.comps.iter().next().map(|(k, v)| (*k, v.clone()))
    }
}

/// `Jac(i,j,k) = sum_b (p^{ib} d_b p^{jk} + p^{jb} d_b p^{ki} + p^{kb} d_b p^{ij})`.
pub fn schouten_jacobiator(p: &Bivector) -> Trivector {
    let n = p.patch.dim();
    let mut comps = BTreeMap::new();
    for idx in combinations(n, 3) {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let mut acc = Expr::zero(&p.patch);
        for b in 0..n {
            for (a, (c, d)) in [(i, (j, k)), (j, (k, i)), (k, (i, j))] {
                let pab = p.get(a, b);
                if pab.is_zero() {
                    continue;
                }
                let dp = p.get(c, d).diff(b);
                if !dp.is_zero() {
                    acc = acc + pab * dp;
                }
            }
        }
        if !acc.is_zero() {
            comps.insert([i, j, k], acc);
        }
    }
    Trivector {
        patch: p.patch.clone(),
        comps,
    }
}

/// A polynomial map between patches.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMap {
    source: Patch,
    target: Patch,
    comps: Vec<Expr>,
}

impl PolyMap {
    pub fn new(source: &Patch, target: &Patch, comps: Vec<Expr>) -> Result<Self> {
        if comps.len() != target.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map into {} needs {} components, got {}",
                target,
                target.dim(),
                comps.len()
            )));
        }
        for c in &comps {
            source.ensure_same(c.patch())?;
        }
        Ok(PolyMap {
            source: source.clone(),
            target: target.clone(),
            comps,
        })
    }

    pub fn identity(patch: &Patch) -> Self {
        PolyMap {
            source: patch.clone(),
            target: patch.clone(),
            comps: (0..patch.dim()).map(|i| Expr::var(patch, i)).collect(),
        }
    }

    pub fn source(&self) -> &Patch {
        &self.source
    }

    pub fn target(&self) -> &Patch {
        &self.target
    }

    pub fn comps(&self) -> &[Expr] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &Expr {
        &self.comps[i]
    }

    /// `f o self`, for `f` a function on the target.
    pub fn pull_expr(&self, f: &Expr) -> Result<Expr> {
        self.target.ensure_same(f.patch())?;
        f.substitute(&self.source, &self.comps)
    }

    /// `other o self`.
    pub fn then(&self, other: &PolyMap) -> Result<PolyMap> {
        self.target.ensure_same(&other.source)?;
        let comps = other
            .comps
            .iter()
            .map(|c| c.substitute(&self.source, &self.comps))
            .collect::<Result<_>>()?;
        PolyMap::new(&self.source, &other.target, comps)
    }

    /// Jacobian, rows indexed by target coordinates.
    pub fn jacobian(&self) -> ExprMatrix {
        let mut m = ExprMatrix::zeros(&self.source, self.target.dim(), self.source.dim());
        for (a, c) in self.comps.iter().enumerate() {
            for i in 0..self.source.dim() {
                m.set(a, i, c.diff(i));
            }
        }
        m
    }

    /// Pushforward of a tangent vector field along the map, as components on
    /// the source patch: `(Df . X)^a = X(f^a)`.
    pub fn push_vector(&self, x: &VField) -> Result<Vec<Expr>> {
        self.source.ensure_same(x.patch())?;
        Ok(self.comps.iter().map(|c| x.apply(c)).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && *self == PolyMap::identity(&self.source)
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps: Vec<String> = self.comps.iter().map(ToString::to_string).collect();
        write!(f, "({}) -> ({})", self.source.coords().join(", "), comps.join(", "))
    }
}

impl fmt::Debug for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn pullback_form(f: &PolyMap, w: &KForm) -> Result<KForm> {
    f.target.ensure_same(&w.patch)?;
    let src = &f.source;
    let mut out = KForm::zero(src, w.degree)?;
    let dfs: Vec<KForm> = f
        .comps
        .iter()
        .map(|c| KForm::one_form(src, (0..src.dim()).map(|i| c.diff(i)).collect()))
        .collect::<Result<_>>()?;
    for (idx, c) in &w.comps {
        let mut t = KForm::function(f.pull_expr(c)?);
        for &i in idx {
            t = t.wedge(&dfs[i])?;
        }
        out = out.add(&t)?;
    }
    Ok(out)
}

/// `f_* p` expressed on the target, given a polynomial inverse `g` of `f`.
pub fn pushforward_bivector(f: &PolyMap, inverse: &PolyMap, p: &Bivector) -> Result<Bivector> {
    f.source.ensure_same(&p.patch)?;
    if !f.then(inverse)?.is_identity() {
        return Err(Error::NotInverse("g o f is not the identity".into()));
    }
    if !inverse.then(f)?.is_identity() {
        return Err(Error::NotInverse("f o g is not the identity".into()));
    }
    let jac = f.jacobian();
    let pushed = jac.mul(&p.matrix())?.mul(&jac.transpose())?;
    let n = f.target.dim();
    let mut out = Bivector::zero(&f.target);
    for a in 0..n {
        for b in a + 1..n {
            let c = inverse.pull_expr(pushed.get(a, b))?;
            out.add_comp(a, b, c);
        }
    }
    Ok(out)
}
