//! Inverses of two linearized maps restricted to ker(T): P_c = x^p + cx and
//! x^q - x on ker(T_α).

use super::{LinPoly, Linearity};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};

/// Classification of c for P_c(x) = x^p + cx on ker(T).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KerTCase {
    /// N_{q|p}(c) = (-1)^m and p ∤ n; the inverse holds on ker(T) only.
    Case1(LinPoly),
    /// P_c permutes the whole field; this is its full inverse.
    Case2(LinPoly),
    NotPermutationOfKerT,
}

impl KerTCase {
    pub fn inverse(&self) -> Option<&LinPoly> {
        match self {
            KerTCase::Case1(l) | KerTCase::Case2(l) => Some(l),
            KerTCase::NotPermutationOfKerT => None,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            KerTCase::Case1(_) => "case1",
            KerTCase::Case2(_) => "case2",
            KerTCase::NotPermutationOfKerT => "none",
        }
    }
}

fn sign(t: &FieldTower, k: u64) -> Elem {
    if k.is_multiple_of(2) {
        Elem::ONE
    } else {
        t.neg(Elem::ONE)
    }
}

/// x^p + cx as a p-polynomial.
pub fn p_c(t: &FieldTower, c: Elem) -> LinPoly {
    let mut l = LinPoly::scalar(t, Linearity::P, c);
    if t.mn() == 1 {
        l.coeffs[0] = t.add(c, Elem::ONE);
    } else {
        l.coeffs[1] = Elem::ONE;
    }
    l
}

/// c^{n(p^m - 1)/(p - 1)} + (-1)^{mn-1}, the determinant of D_{P_c}.
pub fn p_c_determinant(t: &FieldTower, c: Elem) -> Elem {
    let e = t.n() as u64 * ((t.q() as u64 - 1) / (t.p() as u64 - 1));
    t.add(t.pow(c, e), sign(t, t.mn() as u64 - 1))
}

pub fn pc_kernel_inverse(t: &FieldTower, c: Elem) -> Result<KerTCase> {
    if c.is_zero() {
        return Err(Error::ZeroScalar);
    }
    if !t.in_fq(c) {
        return Err(Error::TowerMismatch(format!("{c} is not in F_q")));
    }
    let (p, m, n) = (t.p() as u64, t.m() as u64, t.n() as u64);
    let mn = (m * n) as usize;
    if t.norm_q_to_p(c) == sign(t, m) && n % p != 0 {
        let ninv = t.inv(t.int(n as i64))?;
        let cinv = t.inv(c)?;
        let mut coeffs = vec![Elem::ZERO; mn];
        for j in 0..m {
            let e: u64 = (0..=j).map(|i| p.pow(i as u32)).sum();
            let aj = t.mul(sign(t, j), t.pow(cinv, e));
            for k in 0..n {
                let v = t.mul(t.mul(ninv, aj), t.neg(t.int(k as i64)));
                coeffs[(k * m + j) as usize] = v;
            }
        }
        return Ok(KerTCase::Case1(LinPoly::new(t, Linearity::P, coeffs)?));
    }
    let e = n * ((t.q() as u64 - 1) / (p - 1));
    if t.pow(c, e) != sign(t, m * n) {
        let den = t.inv(p_c_determinant(t, c))?;
        let coeffs: Vec<Elem> = (0..mn)
            .map(|i| {
                let s: u128 = (i + 1..mn).map(|j| (p as u128).pow(j as u32)).sum();
                t.mul(t.mul(sign(t, i as u64), t.pow_u128(c, s)), den)
            })
            .collect();
        return Ok(KerTCase::Case2(LinPoly::new(t, Linearity::P, coeffs)?));
    }
    Ok(KerTCase::NotPermutationOfKerT)
}

/// R with R(x^q - x) = x on ker(T_α), T_α(x) = T(αx):
/// R = T(α)^{-1} Σ_k (Σ_{j≤k} α^{q^j}) x^{q^k}.
pub fn ker_trace_alpha_inverse(t: &FieldTower, alpha: Elem) -> Result<LinPoly> {
    t.check(alpha)?;
    let ta = t.trace(alpha);
    if ta.is_zero() {
        return Err(Error::TraceZero);
    }
    let tinv = t.inv(ta)?;
    let mut acc = Elem::ZERO;
    let coeffs: Vec<Elem> = (0..t.n())
        .map(|k| {
            acc = t.add(acc, t.frobenius(alpha, k));
            t.mul(tinv, acc)
        })
        .collect();
    LinPoly::new(t, Linearity::Q, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linearized::{dickson_matrix, kernel};

    #[test]
    fn f8_case1_is_squaring() {
        let t = FieldTower::new(2, 1, 3).unwrap();
        let r = pc_kernel_inverse(&t, Elem::ONE).unwrap();
        assert_eq!(
            r,
            KerTCase::Case1(LinPoly::from_codes(&t, Linearity::P, &[0, 1, 0]).unwrap())
        );
    }

    #[test]
    fn zero_c_rejected() {
        let t = FieldTower::new(2, 1, 3).unwrap();
        assert_eq!(pc_kernel_inverse(&t, Elem::ZERO), Err(Error::ZeroScalar));
    }

    #[test]
    fn p_divides_n_is_not_permutation() {
        // q = 3, n = 3: N(c) = c, (-1)^1 = 2.
        let t = FieldTower::new(3, 1, 3).unwrap();
        assert_eq!(
            pc_kernel_inverse(&t, Elem(2)).unwrap(),
            KerTCase::NotPermutationOfKerT
        );
    }

    #[test]
    fn case2_determinant() {
        let t = FieldTower::new(5, 1, 2).unwrap();
        let c = Elem(2);
        assert!(matches!(pc_kernel_inverse(&t, c).unwrap(), KerTCase::Case2(_)));
        let d = dickson_matrix(&t, &p_c(&t, c)).determinant(&t);
        assert_eq!(d, p_c_determinant(&t, c));
    }

    #[test]
    fn kernel_trace_alpha_f8() {
        let t = FieldTower::new(2, 1, 3).unwrap();
        let r = ker_trace_alpha_inverse(&t, Elem::ONE).unwrap();
        assert_eq!(r, LinPoly::from_codes(&t, Linearity::Q, &[1, 0, 1]).unwrap());
        let kt = kernel(&t, &LinPoly::trace(&t));
        let q = LinPoly::frob_minus_id(&t);
        for x in kt.elements(&t).unwrap() {
            assert_eq!(r.eval(&t, q.eval(&t, x)), x);
        }
        let g = t.gamma();
        assert_eq!(ker_trace_alpha_inverse(&t, g), Err(Error::TraceZero));
    }
}
