//! F(x) = c(x^q - x + T(αx)) + G(T(αx))^q - G(T(αx)).

use std::sync::Arc;

use super::{add_cross_check, certify, permutation_table, Family, Formula, InverseCertificate};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::poly::{find_collision, tabulate, Poly};

/// b_k = Σ_{j=1}^{n-1} j α^{q^j} - n Σ_{l=k+1}^{n-1} α^{q^l}.
pub fn shifted_b_coeffs(t: &FieldTower, alpha: Elem) -> Vec<Elem> {
    let n = t.n();
    let pw: Vec<Elem> = (0..n).map(|j| t.frobenius(alpha, j)).collect();
    let base = t.sum((1..n).map(|j| t.mul(t.int(j as i64), pw[j as usize])));
    let nn = t.int(n as i64);
    (0..n)
        .map(|k| {
            let tail = t.sum(pw[(k + 1) as usize..].iter().copied());
            t.sub(base, t.mul(nn, tail))
        })
        .collect()
}

/// The parity split of b_k for q = 2 and odd n:
/// b_0 sums α^{2^l} over even l ≥ 2; odd k adds odd j ≤ k and l = k+1, k+3, ..;
/// even k ≥ 2 adds odd j ≤ k-1 and l = k+2, k+4, ...
pub fn wu_b_coeffs(t: &FieldTower, alpha: Elem) -> Result<Vec<Elem>> {
    let n = t.n();
    if t.q() != 2 || n.is_multiple_of(2) {
        return Err(Error::hypothesis("q = 2 and n odd", None));
    }
    let pw = |i: u32| t.frobenius(alpha, i);
    let odd_upto = |k: u32| t.sum((1..=k).step_by(2).map(pw));
    let from = |l0: u32| t.sum((l0..n).step_by(2).map(pw));
    Ok((0..n)
        .map(|k| match k {
            0 => from(2),
            k if k % 2 == 1 => t.add(odd_upto(k), from(k + 1)),
            k => t.add(odd_upto(k - 1), from(k + 2)),
        })
        .collect())
}

/// Decides permutability from T(α) ≠ 0 and p ∤ n and, when it holds,
/// certifies the assembled inverse.
pub fn invert_shifted_frobenius(
    t: &FieldTower,
    alpha: Elem,
    c: Elem,
    big_g: &Poly,
) -> Result<InverseCertificate> {
    t.check(alpha)?;
    t.check(c)?;
    big_g.check(t)?;
    if c.is_zero() || !t.in_fq(c) {
        return Err(Error::hypothesis("c lies in F_q^*", Some(c)));
    }
    let forward = |x: Elem| {
        let s = t.trace(t.mul(alpha, x));
        let gs = big_g.eval(t, s);
        let lin = t.add(t.sub(t.frobenius(x, 1), x), s);
        t.add(t.mul(c, lin), t.sub(t.frobenius(gs, 1), gs))
    };
    let ta = t.trace(alpha);
    if ta.is_zero() || t.n().is_multiple_of(t.p()) {
        t.check_desk()?;
        let vals = tabulate(t, forward);
        return match find_collision(&vals) {
            Some((a, b)) => Err(Error::NotPermutation { a, b }),
            None => Err(Error::hypothesis(
                "T(alpha) = 0 or p | n yet the map permutes",
                None,
            )),
        };
    }
    let fwd = permutation_table(t, forward)?;
    let b = shifted_b_coeffs(t, alpha);
    let ta_inv = t.inv(ta)?;
    let n_inv = t.inv(t.int(t.n() as i64))?;
    let c_inv = t.inv(c)?;
    let formula: Formula = {
        let b = b.clone();
        let big_g = big_g.clone();
        Arc::new(move |t: &FieldTower, x: Elem| {
            let tx = t.trace(x);
            let bx = t.sum(b.iter().enumerate().map(|(k, &bk)| t.mul(bk, t.frobenius(x, k as u32))));
            let u = t.mul(t.mul(c_inv, n_inv), tx);
            let gu = big_g.eval(t, u);
            let lin = t.mul(t.mul(ta_inv, n_inv), t.add(tx, bx));
            let corr = t.mul(ta_inv, t.trace(t.mul(alpha, gu)));
            t.mul(c_inv, t.sub(t.add(lin, corr), gu))
        })
    };
    let mut cert = certify(t, Family::ShiftedFrobenius, &fwd, formula, vec![])?;
    if t.q() == 2 && t.n() % 2 == 1 && c == Elem::ONE && ta == Elem::ONE && big_g.reduce(t) == Poly::x() {
        let agrees = wu_b_coeffs(t, alpha)? == b;
        cert.cross_checks.push(super::CrossCheck {
            name: "wu-coefficients".into(),
            agrees,
        });
        let b2 = b.clone();
        add_cross_check(t, &mut cert, "trace-plus-b", move |x| {
            t.add(
                t.trace(x),
                t.sum(b2.iter().enumerate().map(|(k, &bk)| t.mul(bk, t.frobenius(x, k as u32)))),
            )
        });
    }
    Ok(cert)
}
