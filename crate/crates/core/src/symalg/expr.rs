use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::patch::Patch;
use crate::error::{Error, Result};

/// Exponent vector, ordered graded-lexicographically by coordinate index.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub(crate) Vec<u32>);

impl Monomial {
    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    pub fn var(dim: usize, i: usize) -> Self {
        let mut m = vec![0; dim];
        m[i] = 1;
        Monomial(m)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with rational coefficients on a coordinate patch.
#[derive(Clone)]
pub struct Expr {
    patch: Patch,
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Expr {
    pub fn zero(patch: &Patch) -> Self {
        Expr {
            patch: patch.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(patch: &Patch) -> Self {
        Self::constant(patch, BigRational::one())
    }

    pub fn constant(patch: &Patch, c: BigRational) -> Self {
        let mut e = Self::zero(patch);
        if !c.is_zero() {
            e.terms.insert(Monomial::one(patch.dim()), c);
        }
        e
    }

    pub fn int(patch: &Patch, n: i64) -> Self {
        Self::constant(patch, rat(n))
    }

    /// The `i`-th coordinate function.
    pub fn var(patch: &Patch, i: usize) -> Self {
        assert!(i < patch.dim(), "coordinate index out of range");
        let mut e = Self::zero(patch);
        e.terms
            .insert(Monomial::var(patch.dim(), i), BigRational::one());
        e
    }

    pub fn coord(patch: &Patch, name: &str) -> Result<Self> {
        Ok(Self::var(patch, patch.require_index(name)?))
    }

    pub fn from_terms<I>(patch: &Patch, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut e = Self::zero(patch);
        for (m, c) in terms {
            assert_eq!(m.0.len(), patch.dim(), "monomial length");
            e.add_term(m, c);
        }
        e
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, Monomial::degree)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn checked_add(&self, other: &Expr) -> Result<Expr> {
        self.patch.ensure_same(&other.patch)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Expr) -> Result<Expr> {
        self.patch.ensure_same(&other.patch)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Expr) -> Result<Expr> {
        self.patch.ensure_same(&other.patch)?;
        let mut out = Expr::zero(&self.patch);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Expr {
        if c.is_zero() {
            return Expr::zero(&self.patch);
        }
        Expr {
            patch: self.patch.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Expr {
        let mut acc = Expr::one(&self.patch);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to the coordinate at index `i`.
    pub fn diff(&self, i: usize) -> Expr {
        let mut out = Expr::zero(&self.patch);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c * rat(e as i64));
        }
        out
    }

    pub fn differentiate(&self, coord: &str) -> Result<Expr> {
        Ok(self.diff(self.patch.require_index(coord)?))
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.patch.dim(), "point dimension");
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Replace each coordinate of this patch by an expression on `target`.
    pub fn substitute(&self, target: &Patch, values: &[Expr]) -> Result<Expr> {
        if values.len() != self.patch.dim() {
            return Err(Error::DimensionMismatch(format!(
                "substitution needs {} values, got {}",
                self.patch.dim(),
                values.len()
            )));
        }
        for v in values {
            target.ensure_same(&v.patch)?;
        }
        let mut cache: Vec<Vec<Expr>> = values
            .iter()
            .map(|v| vec![Expr::one(target), v.clone()])
            .collect();
        let mut out = Expr::zero(target);
        for (m, c) in &self.terms {
            let mut t = Expr::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while cache[i].len() <= e {
                    let next = &cache[i][cache[i].len() - 1] * &values[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e];
            }
            for (m2, c2) in t.terms {
                out.add_term(m2, c2);
            }
        }
        Ok(out)
    }

    /// Re-express on a patch containing every coordinate of this one, matched by name.
    pub fn embed(&self, target: &Patch) -> Result<Expr> {
        let map: Vec<usize> = self
            .patch
            .coords()
            .iter()
            .map(|c| target.require_index(c))
            .collect::<Result<_>>()?;
        let mut out = Expr::zero(target);
        for (m, c) in &self.terms {
            let mut m2 = vec![0; target.dim()];
            for (i, &e) in m.0.iter().enumerate() {
                m2[map[i]] += e;
            }
            out.add_term(Monomial(m2), c.clone());
        }
        Ok(out)
    }

    /// Same polynomial on a patch with identical coordinates.
    pub fn relabel(&self, target: &Patch) -> Result<Expr> {
        self.patch.ensure_same(target)?;
        Ok(Expr {
            patch: target.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Expr) -> Option<Expr> {
        assert!(self.patch == d.patch, "patch mismatch in division");
        let (dm, dc) = d.leading_term()?;
        if d.terms.len() == 1 {
            let mut out = Expr::zero(&self.patch);
            for (m, c) in &self.terms {
                if !dm.divides(m) {
                    return None;
                }
                out.terms.insert(m.div(dm), c / dc);
            }
            return Some(out);
        }
        let mut rem = self.clone();
        let mut q = Expr::zero(&self.patch);
        while let Some((rm, rc)) = rem.leading_term() {
            if !dm.divides(rm) {
                return None;
            }
            let m = rm.div(dm);
            let c = rc / dc;
            for (tm, tc) in &d.terms {
                rem.add_term(tm.mul(&m), -(tc * &c));
            }
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Greatest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.patch.dim()),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    /// Leading coefficient, or zero.
    pub fn leading_coefficient(&self) -> BigRational {
        self.leading_term()
            .map_or_else(BigRational::zero, |(_, c)| c.clone())
    }

    /// Does the expression involve the coordinate at `i`?
    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.patch == other.patch && self.terms == other.terms
    }
}

impl Eq for Expr {}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                self.$checked(rhs).expect("patch mismatch")
            }
        }
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$checked(&rhs).expect("patch mismatch")
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                (&self).$checked(rhs).expect("patch mismatch")
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                self.$checked(&rhs).expect("patch mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale(&-BigRational::one())
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, patch: &Patch, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(&patch.coords()[i])?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, &self.patch, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr[{}]({})", self.patch.name(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::parse_expr;

    fn p() -> Patch {
        Patch::new("M", ["x", "y", "z"]).unwrap()
    }

    #[test]
    fn display_is_descending_grlex() {
        let e = parse_expr("3 - 1/2*z + 2*x*y^2", &p()).unwrap();
        assert_eq!(e.to_string(), "2*x*y^2 - 1/2*z + 3");
        let e = parse_expr("-x + y^3 - x^2", &p()).unwrap();
        assert_eq!(e.to_string(), "y^3 - x^2 - x");
    }

    #[test]
    fn differentiate_examples() {
        let pt = p();
        let e = parse_expr("x^2*y", &pt).unwrap();
        assert_eq!(e.differentiate("x").unwrap(), parse_expr("2*x*y", &pt).unwrap());
        let e = parse_expr("x^2", &pt).unwrap();
        assert!(e.differentiate("y").unwrap().is_zero());
        let e = parse_expr("x + y^2", &pt).unwrap();
        assert_eq!(e.differentiate("x").unwrap(), Expr::one(&pt));
        assert!(matches!(e.differentiate("w"), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn is_zero_examples() {
        let pt = p();
        assert!(parse_expr("(x+y)^2 - x^2 - 2*x*y - y^2", &pt).unwrap().is_zero());
        assert!(!parse_expr("x - y", &pt).unwrap().is_zero());
        assert!(parse_expr("0", &pt).unwrap().is_zero());
    }

    #[test]
    fn exact_division() {
        let pt = p();
        let a = parse_expr("x^2 - y^2", &pt).unwrap();
        let b = parse_expr("x + y", &pt).unwrap();
        assert_eq!(a.div_exact(&b).unwrap(), parse_expr("x - y", &pt).unwrap());
        assert!(parse_expr("x^2 + y", &pt).unwrap().div_exact(&b).is_none());
    }

    #[test]
    fn substitute_and_embed() {
        let pt = p();
        let q = Patch::new("N", ["u", "v"]).unwrap();
        let e = parse_expr("x*y + z^2", &pt).unwrap();
        let vals = vec![
            parse_expr("u + v", &q).unwrap(),
            parse_expr("u - v", &q).unwrap(),
            parse_expr("v", &q).unwrap(),
        ];
        assert_eq!(
            e.substitute(&q, &vals).unwrap(),
            parse_expr("u^2", &q).unwrap()
        );
        let big = Patch::new("B", ["w", "z", "y", "x"]).unwrap();
        let emb = e.embed(&big).unwrap();
        assert_eq!(emb, parse_expr("x*y + z^2", &big).unwrap());
    }

    #[test]
    fn mixed_patches_are_rejected() {
        let a = Expr::var(&p(), 0);
        let b = Expr::var(&Patch::new("N", ["x"]).unwrap(), 0);
        assert!(matches!(a.checked_add(&b), Err(Error::PatchMismatch(..))));
    }
}
