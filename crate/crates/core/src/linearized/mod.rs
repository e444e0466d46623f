//! Linearized polynomials Σ a_i x^{r^i} with r = q (q-polynomials) or r = p
//! (p-polynomials), their Dickson matrices, and inverses on the whole field
//! or restricted to subspaces.

mod circulant;
mod idempotent;
mod kernel_trace;

use std::fmt;

use rayon::prelude::*;

pub use circulant::{circulant_subspace_inverse, CirculantPlan, CirculantSolve, Strategy};
pub use idempotent::{count_idempotents, enumerate_idempotents};
pub use kernel_trace::{ker_trace_alpha_inverse, p_c, p_c_determinant, pc_kernel_inverse, KerTCase};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::subspace::SubspaceBasis;

/// Which Frobenius the polynomial is built from, and hence over which
/// subfield it is linear.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Linearity {
    /// x^{q^i}, n coefficients, F_q-linear.
    Q,
    /// x^{p^i}, mn coefficients, F_p-linear.
    P,
}

impl Linearity {
    /// Number of coefficients, equal to the dimension of F_{q^n} over the scalars.
    pub fn len(self, t: &FieldTower) -> usize {
        match self {
            Linearity::Q => t.n() as usize,
            Linearity::P => t.mn() as usize,
        }
    }

    pub fn scalar_order(self, t: &FieldTower) -> u32 {
        match self {
            Linearity::Q => t.q(),
            Linearity::P => t.p(),
        }
    }

    /// a^{r^i}.
    pub fn frob(self, t: &FieldTower, a: Elem, i: u32) -> Elem {
        match self {
            Linearity::Q => t.frobenius(a, i),
            Linearity::P => t.frob_p(a, i),
        }
    }

    pub fn coords(self, t: &FieldTower, e: Elem) -> Vec<Elem> {
        match self {
            Linearity::Q => t.coords_q(e),
            Linearity::P => t.coords_p(e),
        }
    }

    pub fn from_coords(self, t: &FieldTower, c: &[Elem]) -> Elem {
        match self {
            Linearity::Q => t.from_coords_q(c),
            Linearity::P => t.from_coords_p(c),
        }
    }

    /// j-th standard basis vector over the scalars.
    pub fn basis(self, t: &FieldTower, j: usize) -> Elem {
        match self {
            Linearity::Q => t.q_basis(j),
            Linearity::P => t.p_basis(j),
        }
    }

    pub fn is_scalar(self, t: &FieldTower, e: Elem) -> bool {
        e.0 < self.scalar_order(t)
    }

    pub fn tag(self) -> &'static str {
        match self {
            Linearity::Q => "lin",
            Linearity::P => "plin",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinPoly {
    lin: Linearity,
    coeffs: Vec<Elem>,
}

impl LinPoly {
    pub fn new(t: &FieldTower, lin: Linearity, coeffs: Vec<Elem>) -> Result<Self> {
        let n = lin.len(t);
        if coeffs.len() != n {
            return Err(Error::TowerMismatch(format!(
                "{} needs {n} coefficients, got {}",
                lin.tag(),
                coeffs.len()
            )));
        }
        for &c in &coeffs {
            t.check(c)?;
        }
        Ok(LinPoly { lin, coeffs })
    }

    pub fn from_codes(t: &FieldTower, lin: Linearity, codes: &[u32]) -> Result<Self> {
        Self::new(t, lin, codes.iter().map(|&c| Elem(c)).collect())
    }

    pub fn zero(t: &FieldTower, lin: Linearity) -> Self {
        LinPoly {
            lin,
            coeffs: vec![Elem::ZERO; lin.len(t)],
        }
    }

    /// c·x.
    pub fn scalar(t: &FieldTower, lin: Linearity, c: Elem) -> Self {
        let mut l = Self::zero(t, lin);
        l.coeffs[0] = c;
        l
    }

    pub fn identity(t: &FieldTower, lin: Linearity) -> Self {
        Self::scalar(t, lin, Elem::ONE)
    }

    /// c·x^{r^i}.
    pub fn monomial(t: &FieldTower, lin: Linearity, i: usize, c: Elem) -> Self {
        let mut l = Self::zero(t, lin);
        let n = l.coeffs.len();
        l.coeffs[i % n] = c;
        l
    }

    /// T(x) = Σ x^{q^i}.
    pub fn trace(t: &FieldTower) -> Self {
        LinPoly {
            lin: Linearity::Q,
            coeffs: vec![Elem::ONE; t.n() as usize],
        }
    }

    /// Q(x) = x^q - x.
    pub fn frob_minus_id(t: &FieldTower) -> Self {
        let mut l = Self::monomial(t, Linearity::Q, 1, Elem::ONE);
        l.coeffs[0] = t.sub(l.coeffs[0], Elem::ONE);
        l
    }

    pub fn linearity(&self) -> Linearity {
        self.lin
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs[i]
    }

    pub fn eval(&self, t: &FieldTower, a: Elem) -> Elem {
        if a.is_zero() {
            return Elem::ZERO;
        }
        let mut s = Elem::ZERO;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                s = t.add(s, t.mul(c, self.lin.frob(t, a, i as u32)));
            }
        }
        s
    }

    fn same_level(&self, other: &LinPoly) -> Result<()> {
        if self.lin != other.lin || self.coeffs.len() != other.coeffs.len() {
            return Err(Error::TowerMismatch(
                "linearized polynomials at different levels".into(),
            ));
        }
        Ok(())
    }

    /// self ∘ other, with coefficient vector v(self)·D_other.
    pub fn compose(&self, t: &FieldTower, other: &LinPoly) -> Result<LinPoly> {
        self.same_level(other)?;
        let d = dickson_matrix(t, other);
        Ok(LinPoly {
            lin: self.lin,
            coeffs: d.vec_mul(t, &self.coeffs),
        })
    }

    pub fn add(&self, t: &FieldTower, other: &LinPoly) -> Result<LinPoly> {
        self.same_level(other)?;
        Ok(LinPoly {
            lin: self.lin,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| t.add(a, b))
                .collect(),
        })
    }

    pub fn sub(&self, t: &FieldTower, other: &LinPoly) -> Result<LinPoly> {
        self.same_level(other)?;
        Ok(LinPoly {
            lin: self.lin,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| t.sub(a, b))
                .collect(),
        })
    }

    /// c·L(x).
    pub fn scale(&self, t: &FieldTower, c: Elem) -> LinPoly {
        LinPoly {
            lin: self.lin,
            coeffs: self.coeffs.iter().map(|&a| t.mul(a, c)).collect(),
        }
    }

    pub fn has_scalar_coeffs(&self, t: &FieldTower) -> bool {
        self.coeffs.iter().all(|&c| self.lin.is_scalar(t, c))
    }

    /// All coefficients lie in F_q.
    pub fn has_fq_coeffs(&self, t: &FieldTower) -> bool {
        self.coeffs.iter().all(|&c| t.in_fq(c))
    }

    /// The same map as a p-polynomial.
    pub fn to_p_poly(&self, t: &FieldTower) -> LinPoly {
        match self.lin {
            Linearity::P => self.clone(),
            Linearity::Q => {
                let mut out = Self::zero(t, Linearity::P);
                for (i, &c) in self.coeffs.iter().enumerate() {
                    out.coeffs[i * t.m() as usize] = c;
                }
                out
            }
        }
    }

    /// The same map as a q-polynomial, when it is F_q-linear.
    pub fn to_q_poly(&self, t: &FieldTower) -> Option<LinPoly> {
        match self.lin {
            Linearity::Q => Some(self.clone()),
            Linearity::P => {
                let m = t.m() as usize;
                if self
                    .coeffs
                    .iter()
                    .enumerate()
                    .any(|(i, c)| i % m != 0 && !c.is_zero())
                {
                    return None;
                }
                Some(LinPoly {
                    lin: Linearity::Q,
                    coeffs: self.coeffs.iter().step_by(m).copied().collect(),
                })
            }
        }
    }

    /// The dense polynomial Σ a_i x^{r^i}.
    pub fn to_poly(&self, t: &FieldTower) -> Poly {
        let r = self.lin.scalar_order(t) as usize;
        let deg = r.pow(self.coeffs.len() as u32 - 1);
        let mut v = vec![Elem::ZERO; deg + 1];
        let mut e = 1usize;
        for &c in &self.coeffs {
            v[e] = t.add(v[e], c);
            e = e.saturating_mul(r);
        }
        Poly::new(v)
    }

    pub fn is_idempotent(&self, t: &FieldTower) -> bool {
        self.compose(t, self).is_ok_and(|k| k == *self)
    }
}

impl fmt::Display for LinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}:[{}]", self.lin.tag(), cs.join(","))
    }
}

/// Entry (i,k) = a_{k-i mod N}^{r^i}.
pub fn dickson_matrix(t: &FieldTower, l: &LinPoly) -> Matrix {
    let n = l.coeffs.len();
    Matrix::from_fn(n, n, |i, k| {
        l.lin.frob(t, l.coeffs[(k + n - i) % n], i as u32)
    })
}

/// Column j holds the coordinates of L applied to the j-th basis vector.
pub fn linmap_matrix(t: &FieldTower, l: &LinPoly) -> Matrix {
    let n = l.coeffs.len();
    let cols: Vec<Vec<Elem>> = (0..n)
        .map(|j| l.lin.coords(t, l.eval(t, l.lin.basis(t, j))))
        .collect();
    Matrix::from_rows(&cols).transpose()
}

/// The linearized polynomial whose matrix is `m`, via the Moore matrix of the basis.
pub fn matrix_to_linpoly(t: &FieldTower, m: &Matrix, lin: Linearity) -> Result<LinPoly> {
    let n = lin.len(t);
    if m.rows() != n || m.cols() != n {
        return Err(Error::TowerMismatch(format!("matrix must be {n}x{n}")));
    }
    let moore = Matrix::from_fn(n, n, |i, j| lin.frob(t, lin.basis(t, j), i as u32));
    let w: Vec<Elem> = (0..n).map(|j| lin.from_coords(t, &m.column(j))).collect();
    let a = moore
        .solve_left(t, &w)
        .map_err(|_| Error::SingularBasisSystem)?;
    LinPoly::new(t, lin, a)
}

pub fn kernel(t: &FieldTower, l: &LinPoly) -> SubspaceBasis {
    let ns = linmap_matrix(t, l).nullspace(t);
    SubspaceBasis::from_coord_rows(t, l.lin, &ns)
}

pub fn image(t: &FieldTower, l: &LinPoly) -> SubspaceBasis {
    let cols = linmap_matrix(t, l).transpose();
    let rows: Vec<Vec<Elem>> = (0..cols.rows()).map(|i| cols.row(i).to_vec()).collect();
    SubspaceBasis::from_coord_rows(t, l.lin, &rows)
}

/// S_ψ = {x - ψ(x)}.
pub fn s_psi(t: &FieldTower, psi: &LinPoly) -> SubspaceBasis {
    let id = LinPoly::identity(t, psi.lin);
    image(t, &id.sub(t, psi).expect("same level"))
}

/// L^{-1} from the cofactors of the first column of D_L.
pub fn lin_inverse_full(t: &FieldTower, l: &LinPoly) -> Result<LinPoly> {
    let d = dickson_matrix(t, l);
    let det = d.determinant(t);
    if det.is_zero() {
        return Err(Error::SingularDickson);
    }
    let dinv = t.inv(det)?;
    let n = l.coeffs.len();
    let coeffs: Vec<Elem> = (0..n)
        .into_par_iter()
        .map(|i| {
            let minor = d.minor(i, 0).determinant(t);
            let c = if i % 2 == 0 { minor } else { t.neg(minor) };
            t.mul(c, dinv)
        })
        .collect();
    LinPoly::new(t, l.lin, coeffs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BijectionMode {
    /// φ permutes F_{q^n}.
    FullField,
    /// φ maps S_ψ bijectively onto S_ψ̄.
    SPsi,
}

/// Brings a list of maps to a common level (P if any of them is P).
pub fn common_level(t: &FieldTower, ls: &[&LinPoly]) -> Vec<LinPoly> {
    if ls.iter().all(|l| l.lin == Linearity::Q) {
        ls.iter().map(|l| (*l).clone()).collect()
    } else {
        ls.iter().map(|l| l.to_p_poly(t)).collect()
    }
}

/// Kernel-intersection criteria for φ to permute the field or to biject
/// S_ψ onto S_ψ̄, given φ∘ψ = ψ̄∘φ.
pub fn check_lin_bijection_criteria(
    t: &FieldTower,
    phi: &LinPoly,
    psi: &LinPoly,
    psibar: &LinPoly,
    mode: BijectionMode,
) -> Result<bool> {
    let v = common_level(t, &[phi, psi, psibar]);
    let (phi, psi, psibar) = (&v[0], &v[1], &v[2]);
    if phi.compose(t, psi)? != psibar.compose(t, phi)? {
        return Err(Error::hypothesis("phi∘psi = psibar∘phi", None));
    }
    let im = image(t, psi);
    if im.dim() != image(t, psibar).dim() {
        return Err(Error::hypothesis("|psi(F)| = |psibar(F)|", None));
    }
    let kphi = kernel(t, phi);
    let trivial = |s: &SubspaceBasis| kphi.intersect(t, s).map(|x| x.is_zero());
    let verdict = match mode {
        BijectionMode::FullField => trivial(&kernel(t, psi))? && trivial(&im)?,
        BijectionMode::SPsi => {
            let sp = s_psi(t, psi);
            if sp.dim() != s_psi(t, psibar).dim() {
                return Err(Error::hypothesis("|S_psi| = |S_psibar|", None));
            }
            trivial(&kernel(t, psi))? && trivial(&sp.map(t, psi)?)?
        }
    };
    if t.check_desk().is_ok() {
        let exhaustive = match mode {
            BijectionMode::FullField => crate::poly::is_permutation(t, &phi.to_poly(t))?,
            BijectionMode::SPsi => {
                let sp = s_psi(t, psi);
                let spb = s_psi(t, psibar);
                crate::poly::invert_on(&sp.elements(t)?, &spb.elements(t)?, |x| phi.eval(t, x))
                    .is_ok()
            }
        };
        debug_assert_eq!(verdict, exhaustive, "kernel criterion disagrees with enumeration");
    }
    Ok(verdict)
}

/// Checks that φ maps V bijectively onto V̄.
pub fn check_subspace_bijection(
    t: &FieldTower,
    phi: &LinPoly,
    v: &SubspaceBasis,
    vbar: &SubspaceBasis,
) -> Result<()> {
    if v.linearity() != phi.lin || vbar.linearity() != phi.lin {
        return Err(Error::TowerMismatch("map and subspace levels differ".into()));
    }
    let basis = v.basis();
    let imgs: Vec<Elem> = basis.iter().map(|&b| phi.eval(t, b)).collect();
    if let Some(&w) = imgs.iter().find(|&&w| !vbar.contains(t, w)) {
        let idx = imgs.iter().position(|&x| x == w).unwrap();
        return Err(Error::NotBijectiveOnSubspace {
            witness: Some(basis[idx]),
        });
    }
    let rows: Vec<Vec<Elem>> = imgs.iter().map(|&w| phi.lin.coords(t, w)).collect();
    if !rows.is_empty() {
        let ns = Matrix::from_rows(&rows).transpose().nullspace(t);
        if let Some(z) = ns.first() {
            let w = t.sum(z.iter().zip(&basis).map(|(&c, &b)| t.mul(c, b)));
            return Err(Error::NotBijectiveOnSubspace { witness: Some(w) });
        }
    }
    if v.dim() != vbar.dim() {
        return Err(Error::NotBijectiveOnSubspace { witness: None });
    }
    Ok(())
}

/// R with R(φ(v)) = v on V, from c̄·D_φ = v(id - K) where K is an
/// idempotent with kernel V. The image of K must contain ker(φ), otherwise
/// R(φ(u)) = u - K(u) is not well defined and the system can be inconsistent.
pub fn subspace_inverse(
    t: &FieldTower,
    phi: &LinPoly,
    v: &SubspaceBasis,
    vbar: &SubspaceBasis,
) -> Result<LinPoly> {
    check_subspace_bijection(t, phi, v, vbar)?;
    let k = crate::subspace::projection_idempotent_along(t, v, &kernel(t, phi))?;
    let rhs = LinPoly::identity(t, phi.lin).sub(t, &k)?;
    let c = dickson_matrix(t, phi).solve_left(t, &rhs.coeffs)?;
    LinPoly::new(t, phi.lin, c)
}
