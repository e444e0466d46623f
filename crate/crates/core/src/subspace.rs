//! Subspaces of F_{q^n} over F_q (or over F_p), kept in reduced row echelon
//! form so that equal subspaces have identical bases.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linalg::Matrix;
use crate::linearized::{LinPoly, Linearity};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceBasis {
    lin: Linearity,
    ambient: usize,
    scalar_order: u32,
    rows: Vec<Vec<Elem>>,
}

impl SubspaceBasis {
    /// Span of coordinate vectors over the scalar field of `lin`.
    pub fn from_coord_rows(t: &FieldTower, lin: Linearity, rows: &[Vec<Elem>]) -> Self {
        let ambient = lin.len(t);
        let mut out = SubspaceBasis {
            lin,
            ambient,
            scalar_order: lin.scalar_order(t),
            rows: Vec::new(),
        };
        if rows.is_empty() {
            return out;
        }
        let mut m = Matrix::from_rows(rows);
        let rank = m.rref(t).len();
        out.rows = (0..rank).map(|i| m.row(i).to_vec()).collect();
        out
    }

    /// Span of field elements.
    pub fn span(t: &FieldTower, lin: Linearity, elems: &[Elem]) -> Self {
        let rows: Vec<Vec<Elem>> = elems.iter().map(|&e| lin.coords(t, e)).collect();
        Self::from_coord_rows(t, lin, &rows)
    }

    pub fn zero(t: &FieldTower, lin: Linearity) -> Self {
        Self::from_coord_rows(t, lin, &[])
    }

    pub fn full(t: &FieldTower, lin: Linearity) -> Self {
        let n = lin.len(t);
        let rows: Vec<Vec<Elem>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }).collect())
            .collect();
        Self::from_coord_rows(t, lin, &rows)
    }

    pub fn linearity(&self) -> Linearity {
        self.lin
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// RREF rows as coordinate vectors.
    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    fn code_of(&self, coords: &[Elem]) -> Elem {
        let mut r: u64 = 0;
        for c in coords.iter().rev() {
            r = r * self.scalar_order as u64 + c.0 as u64;
        }
        Elem(r as u32)
    }

    /// Basis vectors as field elements.
    pub fn basis(&self) -> Vec<Elem> {
        self.rows.iter().map(|r| self.code_of(r)).collect()
    }

    /// Number of elements, s^dim.
    pub fn size(&self) -> u64 {
        (self.scalar_order as u64).saturating_pow(self.dim() as u32)
    }

    /// All elements, in the order of their coefficient vectors over the basis.
    pub fn elements(&self, t: &FieldTower) -> Result<Vec<Elem>> {
        let size = self.size();
        if size > t.exhaustive_limit() {
            return Err(Error::DeskScaleExceeded {
                order: size,
                limit: t.exhaustive_limit(),
            });
        }
        let basis = self.basis();
        let s = self.scalar_order;
        let mut out = Vec::with_capacity(size as usize);
        for idx in 0..size {
            let mut x = idx;
            let mut e = Elem::ZERO;
            for &b in &basis {
                let c = Elem((x % s as u64) as u32);
                x /= s as u64;
                if !c.is_zero() {
                    e = t.add(e, t.mul(c, b));
                }
            }
            out.push(e);
        }
        Ok(out)
    }

    fn same_shape(&self, other: &SubspaceBasis) -> Result<()> {
        if self.lin != other.lin || self.ambient != other.ambient {
            return Err(Error::TowerMismatch(
                "subspaces live at different linearity levels".into(),
            ));
        }
        Ok(())
    }

    fn reduce(&self, t: &FieldTower, mut v: Vec<Elem>) -> Vec<Elem> {
        for row in &self.rows {
            let pc = row.iter().position(|c| !c.is_zero()).unwrap();
            let f = v[pc];
            if !f.is_zero() {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = t.sub(*x, t.mul(f, r));
                }
            }
        }
        v
    }

    pub fn contains(&self, t: &FieldTower, e: Elem) -> bool {
        self.reduce(t, self.lin.coords(t, e))
            .iter()
            .all(|c| c.is_zero())
    }

    pub fn is_subspace_of(&self, t: &FieldTower, other: &SubspaceBasis) -> Result<bool> {
        self.same_shape(other)?;
        Ok(self.basis().into_iter().all(|b| other.contains(t, b)))
    }

    pub fn sum(&self, t: &FieldTower, other: &SubspaceBasis) -> Result<SubspaceBasis> {
        self.same_shape(other)?;
        let rows: Vec<Vec<Elem>> = self.rows.iter().chain(&other.rows).cloned().collect();
        Ok(Self::from_coord_rows(t, self.lin, &rows))
    }

    pub fn intersect(&self, t: &FieldTower, other: &SubspaceBasis) -> Result<SubspaceBasis> {
        self.same_shape(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(t, self.lin));
        }
        // z [A; B] = 0 gives x A = -y B, which is in both spaces.
        let stacked: Vec<Vec<Elem>> = self.rows.iter().chain(&other.rows).cloned().collect();
        let st = Matrix::from_rows(&stacked).transpose();
        let k = self.rows.len();
        let vecs: Vec<Vec<Elem>> = st
            .nullspace(t)
            .into_iter()
            .map(|z| {
                let a = Matrix::from_rows(&self.rows);
                a.vec_mul(t, &z[..k])
            })
            .collect();
        Ok(Self::from_coord_rows(t, self.lin, &vecs))
    }

    /// Image of the subspace under a linear map of the same level.
    pub fn map(&self, t: &FieldTower, l: &LinPoly) -> Result<SubspaceBasis> {
        if l.linearity() != self.lin {
            return Err(Error::TowerMismatch("map and subspace levels differ".into()));
        }
        let imgs: Vec<Elem> = self.basis().into_iter().map(|b| l.eval(t, b)).collect();
        Ok(Self::span(t, self.lin, &imgs))
    }

    /// The same set viewed as a subspace over F_p.
    pub fn to_prime_level(&self, t: &FieldTower) -> SubspaceBasis {
        match self.lin {
            Linearity::P => self.clone(),
            Linearity::Q => {
                let gens: Vec<Elem> = self
                    .basis()
                    .into_iter()
                    .flat_map(|b| (0..t.m()).map(move |i| (b, i)))
                    .map(|(b, i)| t.mul(t.p_basis(i as usize), b))
                    .collect();
                Self::span(t, Linearity::P, &gens)
            }
        }
    }
}

impl fmt::Display for SubspaceBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let es: Vec<String> = self.basis().iter().map(|e| e.to_string()).collect();
        let prefix = match self.lin {
            Linearity::Q => "span",
            Linearity::P => "pspan",
        };
        write!(f, "{prefix}{{{}}}", es.join(","))
    }
}

/// K with K∘K = K and kernel V, projecting onto the complement spanned by
/// standard basis vectors added greedily in index order.
pub fn projection_idempotent(t: &FieldTower, v: &SubspaceBasis) -> Result<LinPoly> {
    projection_idempotent_along(t, v, &SubspaceBasis::zero(t, v.lin))
}

/// Like [`projection_idempotent`], with the image of K containing `w`.
/// Requires V ∩ W = {0}.
pub fn projection_idempotent_along(
    t: &FieldTower,
    v: &SubspaceBasis,
    w: &SubspaceBasis,
) -> Result<LinPoly> {
    v.same_shape(w)?;
    let lin = v.lin;
    let n = v.ambient;
    let mut basis: Vec<Vec<Elem>> = v.rows.clone();
    let k = basis.len();
    let mut cur = v.sum(t, w)?;
    if cur.dim() != v.dim() + w.dim() {
        return Err(Error::hypothesis("V and W intersect trivially", None));
    }
    basis.extend(w.rows.iter().cloned());
    for j in 0..n {
        if basis.len() == n {
            break;
        }
        let e = lin.basis(t, j);
        if !cur.contains(t, e) {
            let mut row = vec![Elem::ZERO; n];
            row[j] = Elem::ONE;
            basis.push(row);
            cur = SubspaceBasis::from_coord_rows(t, lin, &basis);
        }
    }
    let b = Matrix::from_rows(&basis);
    let binv = b.inverse(t)?;
    let d = Matrix::from_fn(n, n, |i, j| {
        if i == j && i >= k {
            Elem::ONE
        } else {
            Elem::ZERO
        }
    });
    // Row-vector action x ↦ x B^{-1} D B; column convention wants the transpose.
    let act = binv.mul(t, &d).mul(t, &b);
    crate::linearized::matrix_to_linpoly(t, &act.transpose(), lin)
}
