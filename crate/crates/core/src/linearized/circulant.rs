//! Fast solve of c̄·D_φ = v(id - K) when φ has scalar coefficients.
//!
//! D_φ is then circulant, so the system is the cyclic convolution c * a = v.
//! Each coordinate slice of v over the scalar field is transformed with a
//! mixed-radix DFT in an extension F_{s^k} holding an N-th root of unity.

use std::fmt;

use super::{check_subspace_bijection, kernel, subspace_inverse, LinPoly, Linearity};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::subspace::{projection_idempotent_along, SubspaceBasis};

/// Largest extension degree searched for a root of unity.
pub const ROOT_SEARCH_BOUND: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Gauss,
    Ntt,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Gauss => "gauss",
            Strategy::Ntt => "ntt",
        })
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gauss" => Ok(Strategy::Gauss),
            "ntt" => Ok(Strategy::Ntt),
            _ => Err(Error::parse(s, "expected gauss or ntt")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CirculantSolve {
    pub inverse: LinPoly,
    /// Gauss when a transform bin of φ vanished and elimination took over.
    pub strategy: Strategy,
}

/// Auxiliary field and root of unity for one (tower, level), reusable
/// across solves.
#[derive(Clone, Debug)]
pub struct CirculantPlan {
    lin: Linearity,
    len: usize,
    aux: FieldTower,
    omega: Elem,
    omega_inv: Elem,
    len_inv: Elem,
}

fn smallest_factor(n: usize) -> usize {
    (2..=n).find(|d| n.is_multiple_of(*d)).unwrap_or(n)
}

fn dft(aux: &FieldTower, x: &[Elem], w: Elem) -> Vec<Elem> {
    let n = x.len();
    if n == 1 {
        return x.to_vec();
    }
    let r = smallest_factor(n);
    if r == n {
        return (0..n)
            .map(|k| {
                let wk = aux.pow(w, k as u64);
                x.iter()
                    .rev()
                    .fold(Elem::ZERO, |acc, &c| aux.add(aux.mul(acc, wk), c))
            })
            .collect();
    }
    let m = n / r;
    let wr = aux.pow(w, r as u64);
    let subs: Vec<Vec<Elem>> = (0..r)
        .map(|s| {
            let xs: Vec<Elem> = x.iter().skip(s).step_by(r).copied().collect();
            dft(aux, &xs, wr)
        })
        .collect();
    (0..n)
        .map(|k| {
            let wk = aux.pow(w, k as u64);
            let mut tw = Elem::ONE;
            let mut acc = Elem::ZERO;
            for sub in &subs {
                acc = aux.add(acc, aux.mul(tw, sub[k % m]));
                tw = aux.mul(tw, wk);
            }
            acc
        })
        .collect()
}

impl CirculantPlan {
    pub fn new(t: &FieldTower, lin: Linearity) -> Result<Self> {
        let len = lin.len(t);
        if (len as u64).is_multiple_of(t.p() as u64) {
            return Err(Error::hypothesis(
                "characteristic does not divide the transform length",
                None,
            ));
        }
        let s = lin.scalar_order(t) as u128;
        let k = (1..=ROOT_SEARCH_BOUND)
            .find(|&k| (s.pow(k) - 1) % len as u128 == 0)
            .ok_or(Error::NoSuitableRoot {
                len,
                bound: ROOT_SEARCH_BOUND,
            })?;
        let aux = match lin {
            Linearity::Q => t.sibling(k),
            Linearity::P => FieldTower::new(t.p(), 1, k),
        }
        .map_err(|_| Error::NoSuitableRoot {
            len,
            bound: ROOT_SEARCH_BOUND,
        })?;
        let g = aux.primitive_element();
        let omega = aux.pow(g, (aux.order() - 1) / len as u64);
        let omega_inv = aux.inv(omega)?;
        let len_inv = aux.inv(aux.int(len as i64))?;
        Ok(CirculantPlan {
            lin,
            len,
            aux,
            omega,
            omega_inv,
            len_inv,
        })
    }

    /// Solves c * a = v for scalar a and v over the scalar field, or None
    /// when some transform bin of a is zero.
    fn convolve_solve(&self, a: &[Elem], slices: &[Vec<Elem>]) -> Option<Vec<Vec<Elem>>> {
        let aux = &self.aux;
        let ah = dft(aux, a, self.omega);
        if ah.iter().any(|x| x.is_zero()) {
            return None;
        }
        let ah_inv: Vec<Elem> = ah.iter().map(|&x| aux.safe_inv(x)).collect();
        Some(
            slices
                .iter()
                .map(|v| {
                    let vh = dft(aux, v, self.omega);
                    let ch: Vec<Elem> = vh.iter().zip(&ah_inv).map(|(&x, &y)| aux.mul(x, y)).collect();
                    dft(aux, &ch, self.omega_inv)
                        .into_iter()
                        .map(|c| aux.mul(c, self.len_inv))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn solve(
        &self,
        t: &FieldTower,
        phi: &LinPoly,
        v: &SubspaceBasis,
        vbar: &SubspaceBasis,
    ) -> Result<CirculantSolve> {
        if phi.linearity() != self.lin || phi.coeffs().len() != self.len {
            return Err(Error::TowerMismatch("plan built for another level".into()));
        }
        if let Some(&c) = phi.coeffs().iter().find(|&&c| !self.lin.is_scalar(t, c)) {
            return Err(Error::hypothesis(
                "coefficients lie in the scalar field",
                Some(c),
            ));
        }
        check_subspace_bijection(t, phi, v, vbar)?;
        let k = projection_idempotent_along(t, v, &kernel(t, phi))?;
        let rhs = LinPoly::identity(t, self.lin).sub(t, &k)?;
        let coords: Vec<Vec<Elem>> = rhs.coeffs().iter().map(|&e| self.lin.coords(t, e)).collect();
        let slices: Vec<Vec<Elem>> = (0..self.len)
            .map(|j| coords.iter().map(|c| c[j]).collect())
            .collect();
        let Some(sol) = self.convolve_solve(phi.coeffs(), &slices) else {
            return Ok(CirculantSolve {
                inverse: subspace_inverse(t, phi, v, vbar)?,
                strategy: Strategy::Gauss,
            });
        };
        let coeffs: Vec<Elem> = (0..self.len)
            .map(|i| {
                let c: Vec<Elem> = sol.iter().map(|s| s[i]).collect();
                debug_assert!(c.iter().all(|&x| self.lin.is_scalar(t, x)));
                self.lin.from_coords(t, &c)
            })
            .collect();
        Ok(CirculantSolve {
            inverse: LinPoly::new(t, self.lin, coeffs)?,
            strategy: Strategy::Ntt,
        })
    }
}

/// Same contract as [`subspace_inverse`], solved through the convolution theorem.
pub fn circulant_subspace_inverse(
    t: &FieldTower,
    phi: &LinPoly,
    v: &SubspaceBasis,
    vbar: &SubspaceBasis,
) -> Result<CirculantSolve> {
    CirculantPlan::new(t, phi.linearity())?.solve(t, phi, v, vbar)
}
