use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::expr::{Expr, Monomial};
use super::patch::Patch;
use crate::error::{Error, Result};

/// Element of the fraction field of the coordinate ring.
///
/// Only partially reduced: common monomial factors and exact polynomial
/// quotients are cancelled, and the denominator has leading coefficient 1.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: Expr,
    den: Expr,
}

impl RatFunc {
    pub fn new(num: Expr, den: Expr) -> Result<Self> {
        num.patch().ensure_same(den.patch())?;
        if den.is_zero() {
            return Err(Error::DimensionMismatch("zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_expr(e: Expr) -> Self {
        let den = Expr::one(e.patch());
        RatFunc { num: e, den }
    }

    fn normalized(num: Expr, den: Expr) -> Self {
        if num.is_zero() {
            let one = Expr::one(den.patch());
            return RatFunc { num, den: one };
        }
        if let Some(q) = num.div_exact(&den) {
            let one = Expr::one(den.patch());
            return RatFunc { num: q, den: one };
        }
        let g = num.monomial_content();
        let h = den.monomial_content();
        let common: Vec<u32> = g
            .exponents()
            .iter()
            .zip(h.exponents())
            .map(|(a, b)| *a.min(b))
            .collect();
        let (mut num, mut den) = (num, den);
        if common.iter().any(|&e| e > 0) {
            let m = Expr::from_terms(
                den.patch(),
                [(Monomial(common), BigRational::one())],
            );
            num = num.div_exact(&m).expect("monomial divides");
            den = den.div_exact(&m).expect("monomial divides");
        }
        let lc = den.leading_coefficient();
        if !lc.is_one() {
            let inv = BigRational::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn patch(&self) -> &Patch {
        self.num.patch()
    }

    pub fn numer(&self) -> &Expr {
        &self.num
    }

    pub fn denom(&self) -> &Expr {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value, if this element is one.
    pub fn to_expr(&self) -> Result<Expr> {
        if self.den.is_constant() {
            let c = self.den.constant_value().expect("constant");
            return Ok(self.num.scale(&(BigRational::one() / c)));
        }
        self.num
            .div_exact(&self.den)
            .ok_or_else(|| Error::NotPolynomial(self.to_string()))
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            return Self::normalized(&self.num + &other.num, self.den.clone());
        }
        Self::normalized(
            &self.num * &other.den + &other.num * &self.den,
            &self.den * &other.den,
        )
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        Self::normalized(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn mul_expr(&self, e: &Expr) -> RatFunc {
        Self::normalized(&self.num * e, self.den.clone())
    }

    pub fn diff(&self, i: usize) -> RatFunc {
        let n = &self.num.diff(i) * &self.den - &self.num * &self.den.diff(i);
        Self::normalized(n, &self.den * &self.den)
    }

    /// Value at a point, or `None` when the denominator vanishes there.
    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        (&self.num * &other.den - &other.num * &self.den).is_zero()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::parse_expr;

    #[test]
    fn reduces_exact_quotients() {
        let p = Patch::new("M", ["x", "y"]).unwrap();
        let r = RatFunc::new(
            parse_expr("x^2 - y^2", &p).unwrap(),
            parse_expr("2*x - 2*y", &p).unwrap(),
        )
        .unwrap();
        assert_eq!(r.to_expr().unwrap(), parse_expr("1/2*x + 1/2*y", &p).unwrap());
        let s = RatFunc::new(parse_expr("x*y", &p).unwrap(), parse_expr("x^2 + x", &p).unwrap())
            .unwrap();
        assert_eq!(s.denom(), &parse_expr("x + 1", &p).unwrap());
        assert!(s.to_expr().is_err());
        let sum = s.add(&RatFunc::from_expr(Expr::one(&p)));
        assert_eq!(
            sum,
            RatFunc::new(parse_expr("y + x + 1", &p).unwrap(), parse_expr("x + 1", &p).unwrap())
                .unwrap()
        );
    }
}
