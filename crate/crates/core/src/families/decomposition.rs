//! f(x) = h(ψ(x))φ(x) + g(ψ(x)) with φ∘ψ = ψ̄∘φ, inverted through the
//! splitting x = ψ-part + S_ψ-part.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{
    add_cross_check, certify, permutation_table, poly_of, require_fq, Family, Formula,
    InverseCertificate,
};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linearized::{
    check_subspace_bijection, common_level, image, kernel, lin_inverse_full, s_psi,
    subspace_inverse, LinPoly, Linearity,
};
use crate::poly::{invert_on, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitInstance {
    pub phi: LinPoly,
    pub psi: LinPoly,
    pub psibar: LinPoly,
    pub g: Poly,
    pub h: Poly,
}

impl SplitInstance {
    /// Checks φ∘ψ = ψ̄∘φ, |ψ(F)| = |ψ̄(F)| and h(ψ(F)) ⊆ F_q \ {0}. The maps
    /// are stored at a common linearity level.
    pub fn new(
        t: &FieldTower,
        phi: LinPoly,
        psi: LinPoly,
        psibar: LinPoly,
        g: Poly,
        h: Poly,
    ) -> Result<Self> {
        g.check(t)?;
        h.check(t)?;
        let v = common_level(t, &[&phi, &psi, &psibar]);
        let (phi, psi, psibar) = (v[0].clone(), v[1].clone(), v[2].clone());
        let lin = phi.linearity();
        if let Some(b) = (0..lin.len(t))
            .map(|j| lin.basis(t, j))
            .find(|&b| phi.eval(t, psi.eval(t, b)) != psibar.eval(t, phi.eval(t, b)))
        {
            return Err(Error::hypothesis("phi∘psi = psibar∘phi", Some(b)));
        }
        let im = image(t, &psi);
        if im.size() != image(t, &psibar).size() {
            return Err(Error::hypothesis("|psi(F)| = |psibar(F)|", None));
        }
        for y in im.elements(t)? {
            let v = h.eval(t, y);
            if v.is_zero() || !t.in_fq(v) {
                return Err(Error::hypothesis("h(psi(F)) lies in F_q \\ {0}", Some(y)));
            }
        }
        Ok(SplitInstance {
            phi,
            psi,
            psibar,
            g,
            h,
        })
    }

    /// ψ = ψ̄ = T, g = Q∘G.
    pub fn qt(t: &FieldTower, phi: LinPoly, h: Poly, big_g: &Poly) -> Result<Self> {
        let tr = LinPoly::trace(t);
        let q = LinPoly::frob_minus_id(t);
        let g = poly_of(t, |x| q.eval(t, big_g.eval(t, x)))?;
        Self::new(t, phi, tr.clone(), tr, g, h)
    }

    /// ψ = ψ̄ = Q, g = T∘G.
    pub fn tq(t: &FieldTower, phi: LinPoly, h: Poly, big_g: &Poly) -> Result<Self> {
        let q = LinPoly::frob_minus_id(t);
        let g = poly_of(t, |x| t.trace(big_g.eval(t, x)))?;
        Self::new(t, phi, q.clone(), q, g, h)
    }

    /// ψ = ψ̄ = Q, g = N∘G.
    pub fn nq(t: &FieldTower, phi: LinPoly, h: Poly, big_g: &Poly) -> Result<Self> {
        let q = LinPoly::frob_minus_id(t);
        let g = poly_of(t, |x| t.norm(big_g.eval(t, x)))?;
        Self::new(t, phi, q.clone(), q, g, h)
    }

    pub fn eval(&self, t: &FieldTower, x: Elem) -> Elem {
        let y = self.psi.eval(t, x);
        t.add(
            t.mul(self.h.eval(t, y), self.phi.eval(t, x)),
            self.g.eval(t, y),
        )
    }

    /// f̄(y) = h(y)φ(y) + ψ̄(g(y)).
    pub fn fbar(&self, t: &FieldTower, y: Elem) -> Elem {
        t.add(
            t.mul(self.h.eval(t, y), self.phi.eval(t, y)),
            self.psibar.eval(t, self.g.eval(t, y)),
        )
    }

    pub fn forward(&self, t: &FieldTower) -> Result<Poly> {
        poly_of(t, |x| self.eval(t, x))
    }

    fn fbar_inverse_table(
        &self,
        t: &FieldTower,
        fbar: impl Fn(Elem) -> Elem,
    ) -> Result<BTreeMap<Elem, Elem>> {
        let dom = image(t, &self.psi).elements(t)?;
        let cod = image(t, &self.psibar).elements(t)?;
        invert_on(&dom, &cod, fbar).map_err(|e| match e {
            Error::NotBijectiveOnDomain { witness } => {
                Error::hypothesis("fbar maps psi(F) bijectively onto psibar(F)", witness)
            }
            other => other,
        })
    }
}

/// ker(φ) ∩ ker(ψ) = {0} and f̄ bijects ψ(F) onto ψ̄(F); together these are
/// equivalent to f permuting the field.
pub fn check_split_conditions(t: &FieldTower, inst: &SplitInstance) -> Result<bool> {
    let kk = kernel(t, &inst.phi).intersect(t, &kernel(t, &inst.psi))?;
    if !kk.is_zero() {
        return Ok(false);
    }
    let dom = image(t, &inst.psi).elements(t)?;
    let cod = image(t, &inst.psibar).elements(t)?;
    Ok(invert_on(&dom, &cod, |y| inst.fbar(t, y)).is_ok())
}

/// f⁻¹(x) = y + R((x - ψ̄(x) - g(y) + ψ̄(g(y))) / h(y)) with y = f̄⁻¹(ψ̄(x))
/// and R inverting φ from S_ψ onto S_ψ̄.
pub fn invert_split_general(t: &FieldTower, inst: &SplitInstance) -> Result<InverseCertificate> {
    let sp = s_psi(t, &inst.psi);
    let spb = s_psi(t, &inst.psibar);
    if sp.size() != spb.size() {
        return Err(Error::hypothesis("|S_psi| = |S_psibar|", None));
    }
    let meet = kernel(t, &inst.phi).intersect(t, &sp.map(t, &inst.psi)?)?;
    if !meet.is_zero() {
        return Err(Error::hypothesis(
            "ker(phi) ∩ psi(S_psi) = {0}",
            meet.basis().first().copied(),
        ));
    }
    let fwd = permutation_table(t, |x| inst.eval(t, x))?;
    let fbar_inv = Arc::new(inst.fbar_inverse_table(t, |y| inst.fbar(t, y))?);
    let r = subspace_inverse(t, &inst.phi, &sp, &spb)?;

    let lookup = {
        let inst = inst.clone();
        let fbar_inv = fbar_inv.clone();
        move |t: &FieldTower, x: Elem| fbar_inv[&inst.psibar.eval(t, x)]
    };
    let primary: Formula = {
        let inst = inst.clone();
        let lookup = lookup.clone();
        Arc::new(move |t: &FieldTower, x: Elem| {
            let y = lookup(t, x);
            let gy = inst.g.eval(t, y);
            let u = t.add(
                t.sub(t.sub(x, inst.psibar.eval(t, x)), gy),
                inst.psibar.eval(t, gy),
            );
            t.add(y, r.eval(t, t.mul(u, t.safe_inv(inst.h.eval(t, y)))))
        })
    };
    let mut alternates = Vec::new();
    let im = image(t, &inst.psi);
    let imb = image(t, &inst.psibar);
    if check_subspace_bijection(t, &inst.phi, &im, &imb).is_ok() {
        let phi_inv = lin_inverse_full(t, &inst.phi)?;
        let inst = inst.clone();
        let full: Formula = Arc::new(move |t: &FieldTower, x: Elem| {
            let y = lookup(t, x);
            let u = t.sub(x, inst.g.eval(t, y));
            phi_inv.eval(t, t.mul(u, t.safe_inv(inst.h.eval(t, y))))
        });
        alternates.push(("full-inverse", full));
    }
    certify(t, Family::SplitLinear, &fwd, primary, alternates)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AdditivePreset {
    General,
    /// h constant on ψ(F).
    ConstantH,
    Qt,
    Tq,
    Nq,
}

impl AdditivePreset {
    fn family(self) -> Family {
        match self {
            AdditivePreset::General => Family::SplitAdditive,
            AdditivePreset::ConstantH => Family::ConstantH,
            AdditivePreset::Qt => Family::Qt,
            AdditivePreset::Tq => Family::Tq,
            AdditivePreset::Nq => Family::Nq,
        }
    }
}

fn check_preset_shape(t: &FieldTower, inst: &SplitInstance, preset: AdditivePreset) -> Result<()> {
    let want = match preset {
        AdditivePreset::Qt => LinPoly::trace(t),
        AdditivePreset::Tq | AdditivePreset::Nq => LinPoly::frob_minus_id(t),
        _ => return Ok(()),
    };
    let want = if inst.psi.linearity() == Linearity::P {
        want.to_p_poly(t)
    } else {
        want
    };
    if inst.psi != want || inst.psibar != want {
        return Err(Error::hypothesis(
            format!("psi and psibar have the {preset:?} shape"),
            None,
        ));
    }
    Ok(())
}

/// Inverse when ψ̄∘g vanishes on ψ(F): φ then permutes the field and
/// f⁻¹(x) = φ⁻¹(x - g(φ⁻¹(ψ̄(x))/h(y)))/h(y) with y = f̄⁻¹(ψ̄(x)).
pub fn invert_additive_case(
    t: &FieldTower,
    inst: &SplitInstance,
    preset: AdditivePreset,
) -> Result<InverseCertificate> {
    check_preset_shape(t, inst, preset)?;
    let im = image(t, &inst.psi).elements(t)?;
    if let Some(&y) = im
        .iter()
        .find(|&&y| !inst.psibar.eval(t, inst.g.eval(t, y)).is_zero())
    {
        return Err(Error::hypothesis("psibar(g(y)) = 0 on psi(F)", Some(y)));
    }
    let constant = if preset == AdditivePreset::ConstantH {
        let c = inst.h.eval(t, Elem::ZERO);
        if let Some(&y) = im.iter().find(|&&y| inst.h.eval(t, y) != c) {
            return Err(Error::hypothesis("h is constant on psi(F)", Some(y)));
        }
        Some(c)
    } else {
        None
    };
    let fwd = permutation_table(t, |x| inst.eval(t, x))?;
    let phi_inv = lin_inverse_full(t, &inst.phi).map_err(|e| match e {
        Error::SingularDickson => Error::hypothesis("phi permutes the field", None),
        other => other,
    })?;
    let fbar_inv = Arc::new(inst.fbar_inverse_table(t, |y| {
        t.mul(inst.h.eval(t, y), inst.phi.eval(t, y))
    })?);
    let general: Formula = {
        let inst = inst.clone();
        let phi_inv = phi_inv.clone();
        Arc::new(move |t: &FieldTower, x: Elem| {
            let yb = inst.psibar.eval(t, x);
            let hi = t.safe_inv(inst.h.eval(t, fbar_inv[&yb]));
            let inner = inst.g.eval(t, t.mul(phi_inv.eval(t, yb), hi));
            t.mul(phi_inv.eval(t, t.sub(x, inner)), hi)
        })
    };
    match constant {
        Some(c) => {
            let ci = t.inv(c)?;
            let inst = inst.clone();
            let closed: Formula = Arc::new(move |t: &FieldTower, x: Elem| {
                let yb = inst.psibar.eval(t, x);
                let inner = inst.g.eval(t, t.mul(ci, phi_inv.eval(t, yb)));
                t.mul(ci, phi_inv.eval(t, t.sub(x, inner)))
            });
            certify(t, preset.family(), &fwd, closed, vec![("general", general)])
        }
        None => certify(t, preset.family(), &fwd, general, vec![]),
    }
}

pub(crate) fn binomial(t: &FieldTower, a: Elem, b: Elem) -> Result<LinPoly> {
    if t.n() != 2 {
        return Err(Error::hypothesis("n = 2", None));
    }
    require_fq(t, "a", a)?;
    require_fq(t, "b", b)?;
    if a == b || a == t.neg(b) {
        return Err(Error::hypothesis("a ≠ ±b", Some(a)));
    }
    LinPoly::new(t, Linearity::Q, vec![b, a])
}

/// c(ax^q + bx) + T(G(Q(x))) over F_{q^2}, with the closed form
/// (ax^q - bx)/(c(a²-b²)) - T(G(Q(x)/(c(b-a))))/(c(a+b)) as a cross-check.
pub fn invert_binomial_tq(
    t: &FieldTower,
    a: Elem,
    b: Elem,
    c: Elem,
    big_g: &Poly,
) -> Result<InverseCertificate> {
    let phi = binomial(t, a, b)?;
    require_fq(t, "c", c)?;
    if c.is_zero() {
        return Err(Error::ZeroScalar);
    }
    let inst = SplitInstance::tq(t, phi, Poly::constant(c), big_g)?;
    let mut cert = invert_additive_case(t, &inst, AdditivePreset::Tq)?;
    cert.family = Family::BinomialTq;
    let a2b2 = t.inv(t.mul(c, t.sub(t.mul(a, a), t.mul(b, b))))?;
    let cba = t.inv(t.mul(c, t.sub(b, a)))?;
    let cab = t.inv(t.mul(c, t.add(a, b)))?;
    add_cross_check(t, &mut cert, "closed-form", |x| {
        let lin = t.mul(t.sub(t.mul(a, t.frobenius(x, 1)), t.mul(b, x)), a2b2);
        let q = t.sub(t.frobenius(x, 1), x);
        let tail = t.trace(big_g.eval(t, t.mul(q, cba)));
        t.sub(lin, t.mul(tail, cab))
    });
    Ok(cert)
}

/// ax^q + bx + (x^q - x)^k over F_{q^2} for even k:
/// f⁻¹(x) = (ax^q - bx)/(a²-b²) - (Q(x)/(a-b))^k/(a+b).
pub fn invert_binomial_power(t: &FieldTower, a: Elem, b: Elem, k: u64) -> Result<InverseCertificate> {
    let l = binomial(t, a, b)?;
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::hypothesis("k is even and at least 2", None));
    }
    let fwd = permutation_table(t, |x| {
        t.add(l.eval(t, x), t.pow(t.sub(t.frobenius(x, 1), x), k))
    })?;
    let a2b2 = t.inv(t.sub(t.mul(a, a), t.mul(b, b)))?;
    let amb = t.inv(t.sub(a, b))?;
    let apb = t.inv(t.add(a, b))?;
    let closed: Formula = Arc::new(move |t: &FieldTower, x: Elem| {
        let lin = t.mul(t.sub(t.mul(a, t.frobenius(x, 1)), t.mul(b, x)), a2b2);
        let q = t.sub(t.frobenius(x, 1), x);
        t.sub(lin, t.mul(apb, t.pow(t.mul(q, amb), k)))
    });
    let l_inv = lin_inverse_full(t, &l)?;
    let route: Formula = Arc::new(move |t: &FieldTower, x: Elem| {
        let q = t.sub(t.frobenius(x, 1), x);
        l_inv.eval(t, t.sub(x, t.pow(l_inv.eval(t, q), k)))
    });
    certify(t, Family::BinomialPower, &fwd, closed, vec![("decomposition", route)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{brute_inverse, functions_equal, is_permutation};

    fn q(t: &FieldTower, c: &[u32]) -> LinPoly {
        LinPoly::from_codes(t, Linearity::Q, c).unwrap()
    }

    #[test]
    fn trivial_split_is_lin_inverse() {
        let t = FieldTower::new(3, 1, 2).unwrap();
        let phi = q(&t, &[0, 1]);
        let zero = LinPoly::zero(&t, Linearity::Q);
        let inst = SplitInstance::new(
            &t,
            phi.clone(),
            zero.clone(),
            zero,
            Poly::zero(),
            Poly::constant(Elem::ONE),
        )
        .unwrap();
        assert!(check_split_conditions(&t, &inst).unwrap());
        let cert = invert_split_general(&t, &inst).unwrap();
        assert!(cert.verified && cert.cross_checks_agree());
        let li = lin_inverse_full(&t, &phi).unwrap().to_poly(&t);
        assert!(functions_equal(&t, &cert.inverse, &li));
    }

    #[test]
    fn kernel_meeting_image_is_reported() {
        let t = FieldTower::new(2, 1, 2).unwrap();
        let tr = LinPoly::trace(&t);
        let inst = SplitInstance::new(
            &t,
            tr.clone(),
            tr.clone(),
            tr,
            Poly::zero(),
            Poly::constant(Elem::ONE),
        )
        .unwrap();
        assert!(!check_split_conditions(&t, &inst).unwrap());
        match invert_split_general(&t, &inst) {
            Err(Error::HypothesisViolated { witness, .. }) => assert_eq!(witness, Some(Elem::ONE)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn conditions_match_enumeration_on_f9() {
        let t = FieldTower::new(3, 1, 2).unwrap();
        let qq = LinPoly::frob_minus_id(&t);
        let mut seen = 0;
        for a in 0..3u32 {
            for b in 0..3u32 {
                for gc in [0u32, 1, 4] {
                    let phi = q(&t, &[b, a]);
                    let g = Poly::from_codes(&[0, gc]);
                    let Ok(inst) = SplitInstance::new(
                        &t,
                        phi,
                        qq.clone(),
                        qq.clone(),
                        g,
                        Poly::constant(Elem::ONE),
                    ) else {
                        continue;
                    };
                    seen += 1;
                    let f = inst.forward(&t).unwrap();
                    assert_eq!(
                        check_split_conditions(&t, &inst).unwrap(),
                        is_permutation(&t, &f).unwrap()
                    );
                }
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn binomial_tq_on_f9() {
        let t = FieldTower::new(3, 1, 2).unwrap();
        let cert = invert_binomial_tq(&t, Elem(1), Elem(0), Elem(1), &Poly::x()).unwrap();
        assert!(cert.verified && cert.cross_checks_agree());
        assert_eq!(cert.forward, Poly::monomial(Elem::ONE, 3));
        let f = cert.forward.clone();
        assert_eq!(cert.inverse, brute_inverse(&t, &f).unwrap());
        let g2 = Poly::from_codes(&[1, 0, 3]);
        let cert = invert_binomial_tq(&t, Elem(1), Elem(0), Elem(2), &g2).unwrap();
        assert!(cert.verified && cert.cross_checks_agree());
    }

    #[test]
    fn presets_and_constant_h_agree() {
        let t = FieldTower::new(2, 1, 3).unwrap();
        let inst = SplitInstance::qt(&t, q(&t, &[1, 0, 0]), Poly::constant(Elem::ONE), &Poly::x())
            .unwrap();
        assert_eq!(inst.forward(&t).unwrap(), Poly::x());
        let cert = invert_additive_case(&t, &inst, AdditivePreset::Qt).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.inverse, Poly::x());
        let c = invert_additive_case(&t, &inst, AdditivePreset::ConstantH).unwrap();
        assert!(c.verified && c.cross_checks_agree());
        let s = invert_split_general(&t, &inst).unwrap();
        assert!(functions_equal(&t, &s.inverse, &c.inverse));
        assert!(invert_additive_case(&t, &inst, AdditivePreset::Tq).is_err());
    }

    #[test]
    fn nq_preset() {
        let t = FieldTower::new(3, 1, 2).unwrap();
        let inst =
            SplitInstance::nq(&t, q(&t, &[0, 1]), Poly::constant(Elem(2)), &Poly::from_codes(&[1, 1]))
                .unwrap();
        let cert = invert_additive_case(&t, &inst, AdditivePreset::Nq).unwrap();
        assert!(cert.verified);
    }

    #[test]
    fn binomial_power_on_f9() {
        let t = FieldTower::new(3, 1, 2).unwrap();
        for k in [2, 4] {
            let cert = invert_binomial_power(&t, Elem(1), Elem(0), k).unwrap();
            assert!(cert.verified && cert.cross_checks_agree(), "k={k}");
        }
        assert!(invert_binomial_power(&t, Elem(1), Elem(0), 3).is_err());
        assert!(invert_binomial_power(&t, Elem(1), Elem(1), 2).is_err());
    }
}
