//! f(x) = φ(x) + γG(T(x)) with φ a q-polynomial over F_q.

use std::sync::Arc;

use super::decomposition::binomial;
use super::{
    add_cross_check, certify, permutation_table, require_fq_lin, require_fq_poly, Family,
    Formula, InverseCertificate,
};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linearized::{lin_inverse_full, LinPoly, Linearity};
use crate::poly::{invert_on, Poly};

/// f⁻¹(x) = φ⁻¹(x - γG(f̄⁻¹(T(x)))) where f̄(x) = T(γ)G(x) + φ(1)x on F_q.
pub fn invert_trace_translate(
    t: &FieldTower,
    phi: &LinPoly,
    gamma: Elem,
    big_g: &Poly,
) -> Result<InverseCertificate> {
    if phi.linearity() != Linearity::Q {
        return Err(Error::hypothesis("phi is a q-polynomial", None));
    }
    require_fq_lin(t, "phi", phi)?;
    require_fq_poly(t, "G", big_g)?;
    t.check(gamma)?;
    let phi_inv = lin_inverse_full(t, phi).map_err(|e| match e {
        Error::SingularDickson => Error::hypothesis("phi permutes the field", None),
        other => other,
    })?;
    let c = t.trace(gamma);
    let phi1 = phi.eval(t, Elem::ONE);
    let fq: Vec<Elem> = t.fq_elements().collect();
    let fbar_inv = invert_on(&fq, &fq, |x| {
        t.add(t.mul(c, big_g.eval(t, x)), t.mul(phi1, x))
    })
    .map_err(|e| match e {
        Error::NotBijectiveOnDomain { witness } => {
            Error::hypothesis("T(gamma)G(x) + phi(1)x permutes F_q", witness)
        }
        other => other,
    })?;
    let fwd = permutation_table(t, |x| {
        t.add(phi.eval(t, x), t.mul(gamma, big_g.eval(t, t.trace(x))))
    })?;
    let primary: Formula = {
        let phi_inv = phi_inv.clone();
        let big_g = big_g.clone();
        Arc::new(move |t: &FieldTower, x: Elem| {
            let y = fbar_inv[&t.trace(x)];
            phi_inv.eval(t, t.sub(x, t.mul(gamma, big_g.eval(t, y))))
        })
    };
    let mut alternates = Vec::new();
    if big_g.reduce(t) == Poly::x() {
        let den = t.inv(t.add(c, phi1))?;
        let closed: Formula = Arc::new(move |t: &FieldTower, x: Elem| {
            phi_inv.eval(t, t.sub(x, t.mul(t.mul(gamma, t.trace(x)), den)))
        });
        alternates.push(("trace-closed-form", closed));
    }
    certify(t, Family::TraceTranslate, &fwd, primary, alternates)
}

/// (ax^q + bx) + γT(x) over F_{q^2}, additionally compared with
/// (ax^q - bx)/(a²-b²) - (aγ^q - bγ)T(x)/((a²-b²)(a+b+T(γ))).
pub fn invert_binomial_translate(
    t: &FieldTower,
    a: Elem,
    b: Elem,
    gamma: Elem,
) -> Result<InverseCertificate> {
    let phi = binomial(t, a, b)?;
    let c = t.trace(gamma);
    let abc = t.add(t.add(a, b), c);
    if abc.is_zero() {
        return Err(Error::hypothesis("a + b + T(gamma) ≠ 0", Some(gamma)));
    }
    let mut cert = invert_trace_translate(t, &phi, gamma, &Poly::x())?;
    cert.family = Family::BinomialTranslate;
    let d = t.inv(t.sub(t.mul(a, a), t.mul(b, b)))?;
    let d2 = t.mul(d, t.inv(abc)?);
    let k = t.sub(t.mul(a, t.frobenius(gamma, 1)), t.mul(b, gamma));
    add_cross_check(t, &mut cert, "binomial-closed-form", |x| {
        let lin = t.mul(t.sub(t.mul(a, t.frobenius(x, 1)), t.mul(b, x)), d);
        t.sub(lin, t.mul(t.mul(k, t.trace(x)), d2))
    });
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::functions_equal;

    #[test]
    fn zero_translate_is_lin_inverse() {
        let t = FieldTower::new(2, 1, 3).unwrap();
        let phi = LinPoly::from_codes(&t, Linearity::Q, &[0, 1, 0]).unwrap();
        let cert = invert_trace_translate(&t, &phi, Elem::ZERO, &Poly::x()).unwrap();
        assert!(cert.verified);
        let li = lin_inverse_full(&t, &phi).unwrap().to_poly(&t);
        assert!(functions_equal(&t, &cert.inverse, &li));
    }

    #[test]
    fn binomial_translate_all_gammas_f9() {
        let t = FieldTower::new(3, 1, 2).unwrap();
        let mut ok = 0;
        for g in t.elements() {
            match invert_binomial_translate(&t, Elem(1), Elem(0), g) {
                Ok(c) => {
                    assert!(c.verified && c.cross_checks_agree(), "gamma={g}");
                    ok += 1;
                }
                Err(Error::HypothesisViolated { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
        assert!(ok >= 3);
    }

    #[test]
    fn power_g_with_table_inverse() {
        // G = x^3 on F_9 over F_3 with c = phi(1): fbar = c(x^3 + x).
        let t = FieldTower::new(3, 1, 2).unwrap();
        let phi = LinPoly::from_codes(&t, Linearity::Q, &[1, 0]).unwrap();
        let gamma = t.elements().find(|&g| t.trace(g) == Elem::ONE).unwrap();
        let r = invert_trace_translate(&t, &phi, gamma, &Poly::monomial(Elem::ONE, 3));
        // x^3 + x = 2x on F_3, a permutation.
        assert!(r.unwrap().verified);
    }
}
