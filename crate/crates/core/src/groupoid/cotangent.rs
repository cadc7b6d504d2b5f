//! Translations, the algebroid frame along units, and the cotangent groupoid
//! `T*G => A*G`.
//!
//! Unit convention on `T*G`: the unit over `xi` in `A*_x G` is the covector at
//! `e(x)` that kills `Te(T_x M)` and restricts to `xi` on `Ker(Ts)`.

use super::{first_diff, jacobian_at, mat_t_vec, mat_vec, subst_all, GroupoidPatch};
use crate::algebroid::AlgebroidPatch;
use crate::cartan::PolyMap;
use crate::error::{Error, Result};
use crate::symalg::{Expr, ExprMatrix, Patch};
use crate::tanlift::CotangentPatch;

impl GroupoidPatch {
    /// Rank of the Lie algebroid, `dim G - dim M`.
    pub fn algebroid_rank(&self) -> usize {
        self.total.dim() - self.base.dim()
    }

    /// Frame of `Ker(Ts)` along the units, as vectors in `T_{e(x)} G` with
    /// entries on the base patch.
    pub fn unit_frame(&self) -> Result<Vec<Vec<Expr>>> {
        let base = &self.base;
        let n = self.total.dim();
        if base.dim() == 0 {
            return Ok((0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| if a == b { Expr::one(base) } else { Expr::zero(base) })
                        .collect()
                })
                .collect());
        }
        let js = ExprMatrix::from_rows(base, jacobian_at(&self.src, self.unit.comps())?)?;
        let r = js.generic_rank();
        if r != base.dim() {
            return Err(Error::RankJump(format!(
                "Ts along the units has rank {r}, expected {}",
                base.dim()
            )));
        }
        Ok(js.nullspace())
    }

    /// `Te` as a matrix (rows: coordinates of `G`) at the base point `x`.
    pub(crate) fn unit_jacobian_at(&self, x: &[Expr], p: &Patch) -> Result<Vec<Vec<Expr>>> {
        if x.is_empty() {
            return Ok(vec![Vec::new(); self.total.dim()]);
        }
        let _ = p;
        jacobian_at(&self.unit, x)
    }

    fn frame_at(&self, x: &[Expr], p: &Patch) -> Result<Vec<Vec<Expr>>> {
        self.unit_frame()?
            .iter()
            .map(|e| subst_all(e, p, x))
            .collect()
    }

    /// `Tl_g(e_a - Te Tt e_a)` for the frame at `s(g)`: the vectors whose
    /// pairing with a covector at `g` gives its source in `A*G`.
    pub(crate) fn left_frame_at(&self, g: &[Expr], p: &Patch) -> Result<Vec<Vec<Expr>>> {
        let y = subst_all(self.src.comps(), p, g)?;
        let h = subst_all(self.unit.comps(), p, &y)?;
        let c = self.pair_point(g, &h)?.ok_or_else(|| {
            Error::TranslationNotDerivable("(g, e(s(g))) is not on the chart".into())
        })?;
        let te = self.unit_jacobian_at(&y, p)?;
        let jt = if y.is_empty() {
            Vec::new()
        } else {
            jacobian_at(&self.tgt, &h)?
        };
        let zero_g = vec![Expr::zero(p); self.total.dim()];
        let jm = jacobian_at(&self.mul, &c)?;
        let mut out = Vec::new();
        for e in self.frame_at(&y, p)? {
            let w = if y.is_empty() {
                e
            } else {
                let down = mat_vec(&jt, &e);
                let up = mat_vec(&te, &down);
                e.iter().zip(&up).map(|(a, b)| a - b).collect()
            };
            let zeta = self.lift_pair(&c, &zero_g, &w)?.ok_or_else(|| {
                Error::TranslationNotDerivable("left translation of a t-vertical vector".into())
            })?;
            out.push(mat_vec(&jm, &zeta));
        }
        Ok(out)
    }

    /// `Tr_g(e_a)` for the frame at `t(g)`. As vector fields in `g` these are
    /// the right-invariant extensions of the frame.
    pub(crate) fn right_frame_at(&self, g: &[Expr], p: &Patch) -> Result<Vec<Vec<Expr>>> {
        let y = subst_all(self.tgt.comps(), p, g)?;
        let u = subst_all(self.unit.comps(), p, &y)?;
        let c = self.pair_point(&u, g)?.ok_or_else(|| {
            Error::TranslationNotDerivable("(e(t(g)), g) is not on the chart".into())
        })?;
        let zero_g = vec![Expr::zero(p); self.total.dim()];
        let jm = jacobian_at(&self.mul, &c)?;
        let mut out = Vec::new();
        for e in self.frame_at(&y, p)? {
            let zeta = self.lift_pair(&c, &e, &zero_g)?.ok_or_else(|| {
                Error::TranslationNotDerivable("right translation of an s-vertical vector".into())
            })?;
            out.push(mat_vec(&jm, &zeta));
        }
        Ok(out)
    }

    /// Source of a covector `a` at `g`, as a vector of `A*G` components.
    pub(crate) fn cotangent_source(&self, g: &[Expr], a: &[Expr], p: &Patch) -> Result<Vec<Expr>> {
        Ok(self
            .left_frame_at(g, p)?
            .iter()
            .map(|v| dot(a, v, p))
            .collect())
    }

    pub(crate) fn cotangent_target(&self, g: &[Expr], a: &[Expr], p: &Patch) -> Result<Vec<Expr>> {
        Ok(self
            .right_frame_at(g, p)?
            .iter()
            .map(|v| dot(a, v, p))
            .collect())
    }

    /// Unit covector over `xi` at the base point `x`, scaled to clear
    /// denominators: returns `(D * unit, D)`.
    pub(crate) fn unit_covector(&self, x: &[Expr], xi: &[Expr], p: &Patch) -> Result<(Vec<Expr>, Expr)> {
        let n = self.total.dim();
        let te = self.unit_jacobian_at(x, p)?;
        let mut cols: Vec<Vec<Expr>> = (0..x.len())
            .map(|i| te.iter().map(|row| row[i].clone()).collect())
            .collect();
        cols.extend(self.frame_at(x, p)?);
        // B^T gamma = (0, xi)
        let bt = ExprMatrix::from_rows(p, cols)?;
        let mut rhs = vec![Expr::zero(p); x.len()];
        rhs.extend(xi.iter().cloned());
        if bt.generic_rank() != n {
            return Err(Error::RankJump("Te(TM) and Ker(Ts) do not span TG along units".into()));
        }
        bt.solve_cleared(&rhs)
    }

    /// Product `a o b` of covectors at the composable chart point `c`,
    /// cleared of denominators: returns `(D * (a o b), D)`.
    pub(crate) fn compose_cleared(&self, c: &[Expr], a: &[Expr], b: &[Expr], p: &Patch) -> Result<(Vec<Expr>, Expr)> {
        let jm = jacobian_at(&self.mul, c)?;
        let jg = jacobian_at(&self.g_of, c)?;
        let jh = jacobian_at(&self.h_of, c)?;
        let rhs: Vec<Expr> = mat_t_vec(&jg, a, p)
            .iter()
            .zip(mat_t_vec(&jh, b, p))
            .map(|(x, y)| x + y)
            .collect();
        let jmt = ExprMatrix::from_rows(p, transpose(&jm, p))?;
        if jmt.generic_rank() < self.total.dim() {
            return Err(Error::UnderdeterminedSpan(
                "the product is not determined by composable tangent pairs".into(),
            ));
        }
        jmt.solve_cleared(&rhs).map_err(|e| match e {
            Error::Inconsistent => Error::NotComposable("no covector satisfies the composition identity".into()),
            other => other,
        })
    }
}

pub(crate) fn dot(a: &[Expr], b: &[Expr], p: &Patch) -> Expr {
    let mut acc = Expr::zero(p);
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc + x * y;
        }
    }
    acc
}

pub(crate) fn transpose(m: &[Vec<Expr>], p: &Patch) -> Vec<Vec<Expr>> {
    let cols = m.first().map_or(0, Vec::len);
    let _ = p;
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// The cotangent groupoid's source and target as polynomial maps
/// `T*G -> A*G`.
#[derive(Clone, Debug)]
pub struct CotangentStructure {
    pub cotangent: CotangentPatch,
    pub dual: Patch,
    pub s_tilde: PolyMap,
    pub t_tilde: PolyMap,
}

pub fn cotangent_source_target(g: &GroupoidPatch) -> Result<CotangentStructure> {
    let cp = CotangentPatch::new(&g.total)?;
    let tot = cp.total().clone();
    let dual = AlgebroidPatch::trivial(&g.base, g.algebroid_rank()).dual_total_patch()?;
    let n = g.total.dim();
    let pt: Vec<Expr> = (0..n).map(|i| Expr::var(&tot, i)).collect();
    let mom: Vec<Expr> = (0..n).map(|i| Expr::var(&tot, cp.momentum(i))).collect();
    let mut s = subst_all(g.src.comps(), &tot, &pt)?;
    s.extend(g.cotangent_source(&pt, &mom, &tot)?);
    let mut t = subst_all(g.tgt.comps(), &tot, &pt)?;
    t.extend(g.cotangent_target(&pt, &mom, &tot)?);
    Ok(CotangentStructure {
        s_tilde: PolyMap::new(&tot, &dual, s)?,
        t_tilde: PolyMap::new(&tot, &dual, t)?,
        cotangent: cp,
        dual,
    })
}

/// `a o b` for a covector `a` at `g` and `b` at `h`. All entries live on one
/// patch, so the points may be symbolic or rational.
pub fn cotangent_compose(
    g: &GroupoidPatch,
    gpt: &[Expr],
    hpt: &[Expr],
    a: &[Expr],
    b: &[Expr],
) -> Result<Vec<Expr>> {
    let n = g.total.dim();
    if gpt.len() != n || hpt.len() != n || a.len() != n || b.len() != n {
        return Err(Error::DimensionMismatch(format!("points and covectors need {n} entries")));
    }
    let p = gpt
        .first()
        .map(|e| e.patch().clone())
        .unwrap_or_else(Patch::point);
    let c = g
        .pair_point(gpt, hpt)?
        .ok_or_else(|| Error::NotComposable("s(g) != t(h)".into()))?;
    let sa = g.cotangent_source(gpt, a, &p)?;
    let tb = g.cotangent_target(hpt, b, &p)?;
    if let Some((i, d)) = first_diff(&sa, &tb) {
        return Err(Error::NotComposable(format!(
            "source of a and target of b differ in component {}: {d}",
            i + 1
        )));
    }
    let (num, den) = g.compose_cleared(&c, a, b, &p)?;
    num.into_iter()
        .map(|x| {
            x.div_exact(&den).ok_or_else(|| {
                Error::NotPolynomial(format!("({x})/({den})"))
            })
        })
        .collect()
}
