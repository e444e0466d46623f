//! f(x) = ax^p + x g(T(x)) with a ∈ F_q^* and g over F_q, inverted by the
//! three-branch step function keyed on c_x = g(f̄⁻¹(T(x)))/a.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::multiterm::MultitermInstance;
use super::{certify, permutation_table, require_fq, require_fq_poly, CrossCheck, Family, Formula, InverseCertificate};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linearized::{check_subspace_bijection, kernel, pc_kernel_inverse, KerTCase, LinPoly, Linearity};
use crate::poly::{invert_on, Poly};

/// Branch indicators at one point; exactly one of them is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BilinearIndicators {
    /// g(y) = 0: f⁻¹(x) = (x/a)^{q^n/p}.
    pub zero: Elem,
    /// φ_y permutes the whole field.
    pub full: Elem,
    /// N_{q|p}(c_x) = (-1)^m: φ_y inverted on ker(T) only.
    pub kernel: Elem,
}

struct Setup {
    a: Elem,
    g: Poly,
    fbar_inv: BTreeMap<Elem, Elem>,
}

fn sign(t: &FieldTower, k: u64) -> Elem {
    if k.is_multiple_of(2) {
        Elem::ONE
    } else {
        t.neg(Elem::ONE)
    }
}

/// Σ_{j=lo}^{hi-1} p^j.
fn pow_sum(p: u64, lo: u32, hi: u32) -> u128 {
    (lo..hi).map(|j| (p as u128).pow(j)).sum()
}

/// ax^p + bx as a p-polynomial.
fn binomial_p(t: &FieldTower, a: Elem, b: Elem) -> LinPoly {
    if t.mn() == 1 {
        LinPoly::scalar(t, Linearity::P, t.add(a, b))
    } else {
        LinPoly::scalar(t, Linearity::P, b)
            .add(t, &LinPoly::monomial(t, Linearity::P, 1, a))
            .expect("same level")
    }
}

fn setup(t: &FieldTower, a: Elem, g: &Poly) -> Result<Setup> {
    require_fq(t, "a", a)?;
    if a.is_zero() {
        return Err(Error::hypothesis("a is nonzero", None));
    }
    require_fq_poly(t, "g", g)?;
    let fq: Vec<Elem> = t.fq_elements().collect();
    let fbar_inv = invert_on(&fq, &fq, |y| {
        t.add(t.mul(a, t.frob_p(y, 1)), t.mul(y, g.eval(t, y)))
    })
    .map_err(|e| match e {
        Error::NotBijectiveOnDomain { witness } => {
            Error::hypothesis("ax^p + xg(x) permutes F_q", witness)
        }
        other => other,
    })?;
    let kt = kernel(t, &LinPoly::trace(t)).to_prime_level(t);
    for &y in &fq {
        let phi = binomial_p(t, a, g.eval(t, y));
        check_subspace_bijection(t, &phi, &kt, &kt)
            .map_err(|_| Error::hypothesis("ax^p + xg(y) permutes ker(T) for every y in F_q", Some(y)))?;
    }
    Ok(Setup {
        a,
        g: g.clone(),
        fbar_inv,
    })
}

impl Setup {
    fn y_of(&self, t: &FieldTower, x: Elem) -> Elem {
        self.fbar_inv[&t.trace(x)]
    }

    fn indicators(&self, t: &FieldTower, x: Elem) -> Result<BilinearIndicators> {
        let gy = self.g.eval(t, self.y_of(t, x));
        let e = (t.q() as u64 - 1) / (t.p() as u64 - 1);
        let cx = t.div(gy, self.a)?;
        let gq = t.pow(gy, t.q() as u64 - 1);
        let d = t.pow(t.sub(t.pow(cx, e), sign(t, t.m() as u64)), t.p() as u64 - 1);
        let ind = BilinearIndicators {
            zero: t.sub(Elem::ONE, gq),
            full: t.mul(gq, d),
            kernel: t.sub(Elem::ONE, d),
        };
        let vals = [ind.zero, ind.full, ind.kernel];
        let binary = vals.iter().all(|&v| v == Elem::ZERO || v == Elem::ONE);
        if !binary || vals.iter().filter(|&&v| v == Elem::ONE).count() != 1 {
            return Err(Error::hypothesis("exactly one branch indicator is 1", Some(x)));
        }
        Ok(ind)
    }

    fn step(&self, t: &FieldTower, x: Elem) -> Result<Elem> {
        let ind = self.indicators(t, x)?;
        let (p, m, n) = (t.p() as u64, t.m(), t.n());
        let mn = t.mn();
        let a = self.a;
        let y = self.y_of(t, x);
        let gy = self.g.eval(t, y);
        let e = (t.q() as u64 - 1) / (p - 1);
        let xa = t.div(x, a)?;
        let term1 = t.frob_p(xa, mn - 1);

        let ne = n as u64 * e;
        let den = t.sub(t.pow(gy, ne), t.pow(t.neg(a), ne));
        if ind.full == Elem::ONE && den.is_zero() {
            return Err(Error::hypothesis("full-field branch denominator is nonzero", Some(x)));
        }
        let num = t.sum((0..mn).map(|i| {
            let coef = t.mul(
                t.mul(sign(t, i as u64), t.pow_u128(a, pow_sum(p, 0, i))),
                t.pow_u128(gy, pow_sum(p, i + 1, mn)),
            );
            t.mul(coef, t.frob_p(x, i))
        }));
        let term2 = t.mul(num, t.safe_inv(den));

        let nn = t.pow(t.int(n as i64), p - 2);
        let tx = t.trace(x);
        let inner = t.sum((1..n).map(|k| {
            t.mul(t.int(k as i64), t.sub(t.frobenius(x, k), t.mul(nn, tx)))
        }));
        let corr = t.sum((0..m).map(|j| {
            let coef = t.mul(
                t.mul(sign(t, j as u64), t.pow_u128(a, pow_sum(p, 0, j))),
                t.safe_inv(t.pow_u128(gy, pow_sum(p, 0, j + 1))),
            );
            t.mul(coef, t.frob_p(inner, j))
        }));
        let term3 = t.mul(nn, t.sub(y, corr));

        Ok(t.add(
            t.add(t.mul(ind.zero, term1), t.mul(ind.full, term2)),
            t.mul(ind.kernel, term3),
        ))
    }
}

/// Branch indicators at every element, indexed by element code.
pub fn bilinear_indicators(t: &FieldTower, a: Elem, g: &Poly) -> Result<Vec<BilinearIndicators>> {
    t.check_desk()?;
    let s = setup(t, a, g)?;
    t.elements().map(|x| s.indicators(t, x)).collect()
}

/// Certifies the step-function inverse; a second route goes through the
/// ker(T) inverses of x^p + cx and a third through the per-point multiterm
/// preimage.
pub fn invert_bilinear_general(t: &FieldTower, a: Elem, g: &Poly) -> Result<InverseCertificate> {
    let s = setup(t, a, g)?;
    let fwd = permutation_table(t, |x| {
        t.add(t.mul(a, t.frob_p(x, 1)), t.mul(x, g.eval(t, t.trace(x))))
    })?;
    let table = t.elements().map(|x| s.step(t, x)).collect::<Result<Vec<_>>>()?;
    let table = Arc::new(table);
    let formula: Formula = Arc::new(move |_: &FieldTower, x: Elem| table[x.0 as usize]);

    let mut cases: BTreeMap<Elem, KerTCase> = BTreeMap::new();
    for c in t.fq_elements().filter(|c| !c.is_zero()) {
        cases.insert(c, pc_kernel_inverse(t, c)?);
    }
    let n_inv = t.inv(t.int(t.n() as i64)).ok();
    let fbar_inv = s.fbar_inv.clone();
    let g2 = g.clone();
    let route: Formula = Arc::new(move |t: &FieldTower, x: Elem| {
        let y = fbar_inv[&t.trace(x)];
        let xa = t.mul(x, t.safe_inv(a));
        let c = t.mul(g2.eval(t, y), t.safe_inv(a));
        if c.is_zero() {
            return t.frob_p(xa, t.mn() - 1);
        }
        match (&cases[&c], n_inv) {
            (KerTCase::Case2(l), _) => l.eval(t, xa),
            (KerTCase::Case1(l), Some(ni)) => {
                let u = t.sub(x, t.mul(ni, t.trace(x)));
                t.add(t.mul(ni, y), l.eval(t, t.mul(u, t.safe_inv(a))))
            }
            _ => x,
        }
    });
    let mut cert = certify(t, Family::Bilinear, &fwd, formula, vec![("kernel-trace-route", route)])?;

    let h = LinPoly::monomial(t, Linearity::P, 1 % t.mn() as usize, a);
    let agrees = MultitermInstance::additive_trace(t, h, g.clone())
        .and_then(|inst| inst.preimage_all(t))
        .map(|pre| pre.iter().enumerate().all(|(i, p)| p.value == cert.eval(t, Elem(i as u32))))
        .unwrap_or(false);
    cert.cross_checks.push(CrossCheck {
        name: "multiterm".into(),
        agrees,
    });
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_g_is_monomial() {
        let t = FieldTower::new(3, 1, 2).unwrap();
        let cert = invert_bilinear_general(&t, Elem(2), &Poly::zero()).unwrap();
        assert!(cert.verified && cert.cross_checks_agree(), "{cert}");
    }

    #[test]
    fn random_small_instances() {
        for (p, m, n) in [(2u32, 1u32, 3u32), (3, 1, 3), (2, 2, 3), (3, 1, 2)] {
            let t = FieldTower::new(p, m, n).unwrap();
            let mut hits = 0;
            for a in t.fq_elements().filter(|a| !a.is_zero()) {
                for c0 in t.fq_elements() {
                    for c1 in t.fq_elements() {
                        let g = Poly::new(vec![c0, c1]);
                        if let Ok(cert) = invert_bilinear_general(&t, a, &g) {
                            assert!(cert.verified && cert.cross_checks_agree(), "{p}:{m}:{n} {cert}");
                            hits += 1;
                        }
                    }
                }
            }
            assert!(hits > 0, "{p}:{m}:{n}");
        }
    }

    #[test]
    fn indicators_partition() {
        let t = FieldTower::new(3, 1, 2).unwrap();
        let ind = bilinear_indicators(&t, Elem::ONE, &Poly::zero()).unwrap();
        assert!(ind.iter().all(|i| i.zero == Elem::ONE));
    }
}
