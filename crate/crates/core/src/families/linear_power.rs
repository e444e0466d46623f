//! f(x) = G(L1(x))^s + L2(x) where L1 is a q^d-polynomial killing 1 and
//! s(q^k - 1) ≡ 0 mod (q^n - 1).

use std::sync::Arc;

use super::{
    add_cross_check, certify, permutation_table, require_fq_lin, Family, Formula,
    InverseCertificate,
};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linearized::{lin_inverse_full, LinPoly, Linearity};
use crate::poly::Poly;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// s(q^k - 1) mod (q^n - 1), using q^k ≡ q^{k mod n}.
fn exponent_ok(t: &FieldTower, s: u64, k: u32) -> bool {
    let q = t.q() as u128;
    let modulus = q.pow(t.n()) - 1;
    let qk = q.pow(k % t.n()) - 1;
    ((s as u128 % modulus) * qk).is_multiple_of(modulus)
}

/// f⁻¹(x) = L2⁻¹(x - G(L2⁻¹(L1(x)))^s).
pub fn invert_l1l2(
    t: &FieldTower,
    l1: &LinPoly,
    l2: &LinPoly,
    big_g: &Poly,
    s: u64,
    k: u32,
) -> Result<InverseCertificate> {
    big_g.check(t)?;
    if l1.linearity() != Linearity::Q || l2.linearity() != Linearity::Q {
        return Err(Error::hypothesis("L1 and L2 are q-polynomials", None));
    }
    let d = gcd(t.n() as u64, k as u64);
    if d <= 1 {
        return Err(Error::hypothesis("gcd(n, k) > 1", None));
    }
    require_fq_lin(t, "L1", l1)?;
    require_fq_lin(t, "L2", l2)?;
    if let Some(i) = (0..l1.coeffs().len()).find(|&i| !(i as u64).is_multiple_of(d) && !l1.coeff(i).is_zero()) {
        return Err(Error::hypothesis(
            format!("L1 is a q^{d}-polynomial"),
            Some(l1.coeff(i)),
        ));
    }
    if !l1.eval(t, Elem::ONE).is_zero() {
        return Err(Error::hypothesis("L1(1) = 0", Some(Elem::ONE)));
    }
    if s == 0 || !exponent_ok(t, s, k) {
        return Err(Error::BadExponent { s, k });
    }
    let fwd = permutation_table(t, |x| {
        t.add(t.pow(big_g.eval(t, l1.eval(t, x)), s), l2.eval(t, x))
    })?;
    let l2_inv = lin_inverse_full(t, l2).map_err(|e| match e {
        Error::SingularDickson => Error::hypothesis("L2 permutes the field", None),
        other => other,
    })?;
    let formula: Formula = {
        let (l1, big_g) = (l1.clone(), big_g.clone());
        Arc::new(move |t: &FieldTower, x: Elem| {
            let inner = t.pow(big_g.eval(t, l2_inv.eval(t, l1.eval(t, x))), s);
            l2_inv.eval(t, t.sub(x, inner))
        })
    };
    certify(t, Family::LinearPower, &fwd, formula, vec![])
}

/// x + (x^{q^k} - x + δ)^s, whose inverse is x - (x^{q^k} - x + δ)^s.
pub fn invert_frobenius_difference_power(
    t: &FieldTower,
    k: u32,
    s: u64,
    delta: Elem,
) -> Result<InverseCertificate> {
    t.check(delta)?;
    let n = t.n() as usize;
    let mut c = vec![Elem::ZERO; n];
    c[k as usize % n] = t.add(c[k as usize % n], Elem::ONE);
    c[0] = t.sub(c[0], Elem::ONE);
    let l1 = LinPoly::new(t, Linearity::Q, c)?;
    let g = Poly::new(vec![delta, Elem::ONE]);
    let mut cert = invert_l1l2(t, &l1, &LinPoly::identity(t, Linearity::Q), &g, s, k)?;
    cert.family = Family::FrobeniusDifferencePower;
    add_cross_check(t, &mut cert, "closed-form", |x| {
        t.sub(x, t.pow(t.add(l1.eval(t, x), delta), s))
    });
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f16_all_deltas() {
        let t = FieldTower::new(2, 1, 4).unwrap();
        for s in [5, 10] {
            for d in t.elements() {
                let c = invert_frobenius_difference_power(&t, 2, s, d).unwrap();
                assert!(c.verified && c.cross_checks_agree(), "s={s} delta={d}");
            }
        }
    }

    #[test]
    fn bad_exponent_and_gcd() {
        let t = FieldTower::new(2, 1, 4).unwrap();
        assert_eq!(
            invert_frobenius_difference_power(&t, 2, 3, Elem::ONE).unwrap_err(),
            Error::BadExponent { s: 3, k: 2 }
        );
        assert!(matches!(
            invert_frobenius_difference_power(&t, 1, 5, Elem::ONE),
            Err(Error::HypothesisViolated { .. })
        ));
    }

    #[test]
    fn zero_l1_is_a_shift() {
        let t = FieldTower::new(2, 1, 4).unwrap();
        let l1 = LinPoly::zero(&t, Linearity::Q);
        let l2 = LinPoly::from_codes(&t, Linearity::Q, &[0, 1, 0, 0]).unwrap();
        let g = Poly::new(vec![Elem(3)]);
        let c = invert_l1l2(&t, &l1, &l2, &g, 5, 2).unwrap();
        assert!(c.verified);
        let l2i = lin_inverse_full(&t, &l2).unwrap();
        let shift = t.pow(Elem(3), 5);
        for x in t.elements() {
            assert_eq!(c.eval(&t, x), l2i.eval(&t, t.sub(x, shift)));
        }
    }
}
