use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::expr::Expr;
use super::patch::Patch;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// Rectangular matrix of polynomials on one patch, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct ExprMatrix {
    patch: Patch,
    rows: usize,
    cols: usize,
    entries: Vec<Expr>,
}

impl ExprMatrix {
    pub fn zeros(patch: &Patch, rows: usize, cols: usize) -> Self {
        ExprMatrix {
            patch: patch.clone(),
            rows,
            cols,
            entries: vec![Expr::zero(patch); rows * cols],
        }
    }

    pub fn identity(patch: &Patch, n: usize) -> Self {
        let mut m = Self::zeros(patch, n, n);
        for i in 0..n {
            m.set(i, i, Expr::one(patch));
        }
        m
    }

    pub fn from_rows(patch: &Patch, rows: Vec<Vec<Expr>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged matrix rows".into()));
            }
            for e in row {
                patch.ensure_same(e.patch())?;
                entries.push(e);
            }
        }
        Ok(ExprMatrix {
            patch: patch.clone(),
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn from_cols(patch: &Patch, cols: Vec<Vec<Expr>>) -> Result<Self> {
        Ok(Self::from_rows(patch, cols)?.transpose())
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Expr {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: Expr) {
        assert!(e.patch() == &self.patch, "patch mismatch");
        self.entries[i * self.cols + j] = e;
    }

    pub fn row(&self, i: usize) -> &[Expr] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Expr> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.patch, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &ExprMatrix) -> Result<Self> {
        self.patch.ensure_same(&other.patch)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.patch, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Expr::zero(&self.patch);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc + a * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Expr]) -> Result<Vec<Expr>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("matrix-vector length".into()));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = Expr::zero(&self.patch);
            for (a, b) in self.row(i).iter().zip(v) {
                acc = acc + a.checked_mul(b)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Expr::is_zero)
    }

    pub fn eval(&self, point: &[BigRational]) -> Vec<Vec<BigRational>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.eval(point)).collect())
            .collect()
    }

    /// Rank over the fraction field of the coordinate ring.
    pub fn generic_rank(&self) -> usize {
        Echelon::new(self, self.cols).pivots.len()
    }

    pub fn determinant(&self) -> Result<Expr> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let ech = Echelon::new(self, self.cols);
        if ech.pivots.len() < self.rows {
            return Ok(Expr::zero(&self.patch));
        }
        let d = ech.last_pivot();
        Ok(if ech.odd { -d } else { d })
    }

    /// Solve `self * x = b` over the fraction field, free unknowns set to zero.
    pub fn solve_linear(&self, b: &[Expr]) -> Result<Vec<RatFunc>> {
        let (num, den) = self.solve_cleared(b)?;
        num.into_iter().map(|n| RatFunc::new(n, den.clone())).collect()
    }

    /// Like `solve_linear`, returning numerators and a common denominator.
    pub fn solve_cleared(&self, b: &[Expr]) -> Result<(Vec<Expr>, Expr)> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} entries, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = Self::zeros(&self.patch, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            self.patch.ensure_same(b[i].patch())?;
            aug.set(i, self.cols, b[i].clone());
        }
        let ech = Echelon::new(&aug, self.cols);
        let r = ech.pivots.len();
        for i in r..self.rows {
            if !ech.m.get(i, self.cols).is_zero() {
                return Err(Error::Inconsistent);
            }
        }
        let d = ech.last_pivot();
        let rhs: Vec<Expr> = (0..r).map(|k| ech.m.get(k, self.cols).clone()).collect();
        let num = ech.back_substitute(&d, &rhs);
        let mut x = vec![Expr::zero(&self.patch); self.cols];
        for (k, &(_, c)) in ech.pivots.iter().enumerate() {
            x[c] = num[k].clone();
        }
        Ok((x, d))
    }

    /// Polynomial basis of the right kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Expr>> {
        let ech = Echelon::new(self, self.cols);
        let d = ech.last_pivot();
        let pivot_cols: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|c| !pivot_cols.contains(c)) {
            let rhs: Vec<Expr> = (0..ech.pivots.len()).map(|k| -ech.m.get(k, f)).collect();
            let num = ech.back_substitute(&d, &rhs);
            let mut v = vec![Expr::zero(&self.patch); self.cols];
            v[f] = d.clone();
            for (k, &c) in pivot_cols.iter().enumerate() {
                v[c] = num[k].clone();
            }
            basis.push(reduce_vector(v));
        }
        basis
    }
}

/// Generic rank of a list of equal-length vectors.
pub fn span_rank(patch: &Patch, vecs: &[Vec<Expr>]) -> usize {
    if vecs.is_empty() || vecs[0].is_empty() {
        return 0;
    }
    ExprMatrix::from_rows(patch, vecs.to_vec())
        .expect("uniform vectors")
        .generic_rank()
}

/// Does `v` lie in the span of `basis` at a generic point?
pub fn span_contains(patch: &Patch, basis: &[Vec<Expr>], v: &[Expr]) -> bool {
    if v.iter().all(Expr::is_zero) {
        return true;
    }
    let mut all = basis.to_vec();
    all.push(v.to_vec());
    span_rank(patch, basis) == span_rank(patch, &all)
}

/// Divide a polynomial vector by common monomial and constant factors, and by
/// any single entry that divides every other entry.
pub fn reduce_vector(v: Vec<Expr>) -> Vec<Expr> {
    let nonzero: Vec<&Expr> = v.iter().filter(|e| !e.is_zero()).collect();
    if nonzero.is_empty() {
        return v;
    }
    let patch = nonzero[0].patch().clone();
    let mut candidates: Vec<Expr> = nonzero.iter().map(|e| (*e).clone()).collect();
    candidates.sort_by_key(|e| (e.degree(), e.num_terms()));
    let mut v = v;
    for c in candidates {
        if c.is_constant() {
            break;
        }
        if let Some(q) = v
            .iter()
            .map(|e| e.div_exact(&c))
            .collect::<Option<Vec<Expr>>>()
        {
            v = q;
            break;
        }
    }
    let mut mono: Option<Vec<u32>> = None;
    for e in v.iter().filter(|e| !e.is_zero()) {
        let m = e.monomial_content();
        mono = Some(match mono {
            None => m.exponents().to_vec(),
            Some(acc) => acc.iter().zip(m.exponents()).map(|(a, b)| *a.min(b)).collect(),
        });
    }
    if let Some(m) = mono.filter(|m| m.iter().any(|&e| e > 0)) {
        let me = Expr::from_terms(&patch, [(super::expr::Monomial(m), BigRational::one())]);
        v = v.iter().map(|e| e.div_exact(&me).expect("monomial divides")).collect();
    }
    let lead = v
        .iter()
        .rev()
        .find(|e| !e.is_zero())
        .map(Expr::leading_coefficient)
        .expect("nonzero vector");
    if !lead.is_one() {
        let inv = BigRational::one() / lead;
        v = v.iter().map(|e| e.scale(&inv)).collect();
    }
    v
}

struct Echelon {
    m: ExprMatrix,
    pivots: Vec<(usize, usize)>,
    odd: bool,
}

impl Echelon {
    /// Fraction-free (Bareiss) row echelon form; pivots taken only in the
    /// first `pivot_cols` columns.
    fn new(a: &ExprMatrix, pivot_cols: usize) -> Self {
        let mut m = a.clone();
        let mut pivots = Vec::new();
        let mut odd = false;
        let mut prev = Expr::one(&a.patch);
        let mut r = 0;
        for c in 0..pivot_cols {
            if r == m.rows {
                break;
            }
            let best = (r..m.rows)
                .filter(|&i| !m.get(i, c).is_zero())
                .min_by_key(|&i| {
                    let e = m.get(i, c);
                    (e.degree(), e.num_terms(), i)
                });
            let Some(p) = best else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.entries.swap(p * m.cols + j, r * m.cols + j);
                }
                odd = !odd;
            }
            let piv = m.get(r, c).clone();
            for i in r + 1..m.rows {
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    if j == c {
                        continue;
                    }
                    let v = &piv * m.get(i, j) - &f * m.get(r, j);
                    let v = v.div_exact(&prev).expect("Bareiss division is exact");
                    m.set(i, j, v);
                }
                m.set(i, c, Expr::zero(&a.patch));
            }
            pivots.push((r, c));
            prev = piv;
            r += 1;
        }
        Echelon { m, pivots, odd }
    }

    fn last_pivot(&self) -> Expr {
        match self.pivots.last() {
            Some(&(r, c)) => self.m.get(r, c).clone(),
            None => Expr::one(&self.m.patch),
        }
    }

    /// Numerators `N` with `x_{pivot k} = N_k / d` solving the triangular
    /// pivot system with right-hand side `rhs`.
    fn back_substitute(&self, d: &Expr, rhs: &[Expr]) -> Vec<Expr> {
        let r = self.pivots.len();
        let mut num = vec![Expr::zero(&self.m.patch); r];
        for k in (0..r).rev() {
            let (row, c) = self.pivots[k];
            let mut acc = d * &rhs[k];
            for (j, &(_, cj)) in self.pivots.iter().enumerate().skip(k + 1) {
                let a = self.m.get(row, cj);
                if !a.is_zero() {
                    acc = acc - a * &num[j];
                }
            }
            num[k] = acc
                .div_exact(self.m.get(row, c))
                .expect("back substitution is exact");
        }
        num
    }
}

/// Rank of a rational matrix.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let piv = m[r][c].clone();
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &piv;
            for j in c..ncols {
                let t = &f * &m[r][j];
                m[i][j] -= t;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

impl fmt::Debug for ExprMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            f.write_str(&row.join(", "))?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::parse_expr;

    fn m(p: &Patch, rows: &[&[&str]]) -> ExprMatrix {
        ExprMatrix::from_rows(
            p,
            rows.iter()
                .map(|r| r.iter().map(|s| parse_expr(s, p).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn xy() -> Patch {
        Patch::new("M", ["x", "y"]).unwrap()
    }

    #[test]
    fn rank_examples() {
        let p = xy();
        assert_eq!(m(&p, &[&["x", "0"], &["0", "x"]]).generic_rank(), 2);
        assert_eq!(m(&p, &[&["x", "y"], &["2*x", "2*y"]]).generic_rank(), 1);
        assert_eq!(ExprMatrix::zeros(&p, 2, 2).generic_rank(), 0);
    }

    #[test]
    fn solve_examples() {
        let p = xy();
        let a = m(&p, &[&["1", "0"], &["0", "x"]]);
        let b = vec![parse_expr("y", &p).unwrap(), parse_expr("x^2", &p).unwrap()];
        let sol = a.solve_linear(&b).unwrap();
        let sol: Vec<Expr> = sol.iter().map(|s| s.to_expr().unwrap()).collect();
        assert_eq!(sol, vec![parse_expr("y", &p).unwrap(), parse_expr("x", &p).unwrap()]);
        // residual check
        assert!(a
            .mul_vec(&sol)
            .unwrap()
            .iter()
            .zip(&b)
            .all(|(l, r)| (l - r).is_zero()));

        let a = m(&p, &[&["1"], &["1"]]);
        let b = vec![Expr::zero(&p), Expr::one(&p)];
        assert_eq!(a.solve_linear(&b).unwrap_err(), Error::Inconsistent);

        let id = ExprMatrix::identity(&p, 3);
        let b: Vec<Expr> = ["x*y", "3", "y^2 - x"]
            .iter()
            .map(|s| parse_expr(s, &p).unwrap())
            .collect();
        let sol: Vec<Expr> = id
            .solve_linear(&b)
            .unwrap()
            .iter()
            .map(|s| s.to_expr().unwrap())
            .collect();
        assert_eq!(sol, b);
    }

    #[test]
    fn determinant_matches_expansion() {
        let p = xy();
        let a = m(&p, &[&["x", "y", "1"], &["y", "x", "0"], &["1", "0", "x"]]);
        let expected = parse_expr("x^3 - x*y^2 - x", &p).unwrap();
        assert_eq!(a.determinant().unwrap(), expected);
        let swapped = m(&p, &[&["0", "1"], &["1", "0"]]);
        assert_eq!(swapped.determinant().unwrap(), Expr::int(&p, -1));
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let p = xy();
        let a = m(&p, &[&["x", "y", "x*y"], &["y", "x", "x^2"]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&ns[0]).unwrap().iter().all(Expr::is_zero));
        assert!(ns[0].iter().any(|e| !e.is_zero()));
    }

    #[test]
    fn rational_rank_basic() {
        use crate::symalg::expr::rat;
        assert_eq!(
            rational_rank(&[vec![rat(1), rat(2)], vec![rat(2), rat(4)]]),
            1
        );
        assert_eq!(rational_rank(&[vec![rat(0), rat(1)], vec![rat(1), rat(0)]]), 2);
    }
}
