//! Counting and listing q-polynomials that induce idempotent maps.

use rayon::prelude::*;

use super::{matrix_to_linpoly, LinPoly, Linearity};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linalg::Matrix;

/// |GL(k, q)| = Π_{i<k} (q^k - q^i).
fn gl_order(k: u32, q: u128) -> Result<u128> {
    let qk = q.checked_pow(k).ok_or(Error::Overflow)?;
    (0..k).try_fold(1u128, |acc, i| {
        acc.checked_mul(qk - q.pow(i)).ok_or(Error::Overflow)
    })
}

/// Σ_k |GL(n,q)| / (|GL(k,q)| |GL(n-k,q)|), the number of idempotent
/// n×n matrices over F_q.
pub fn count_idempotents(n: u32, q: u64) -> Result<u128> {
    crate::field::prime_power(q)?;
    let q = q as u128;
    let g = gl_order(n, q)?;
    (0..=n).try_fold(0u128, |acc, k| {
        let den = gl_order(k, q)?
            .checked_mul(gl_order(n - k, q)?)
            .ok_or(Error::Overflow)?;
        acc.checked_add(g / den).ok_or(Error::Overflow)
    })
}

/// Every idempotent F_q-linear map of F_{q^n}, in the order of its matrix
/// entries read as a base-q counter.
pub fn enumerate_idempotents(t: &FieldTower) -> Result<Vec<LinPoly>> {
    let n = t.n() as usize;
    let q = t.q() as u64;
    let total = q.checked_pow((n * n) as u32).unwrap_or(u64::MAX);
    if total > t.exhaustive_limit() {
        return Err(Error::DeskScaleExceeded {
            order: total,
            limit: t.exhaustive_limit(),
        });
    }
    let mats: Vec<Matrix> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let mut x = idx;
            let m = Matrix::from_fn(n, n, |_, _| {
                let d = Elem((x % q) as u32);
                x /= q;
                d
            });
            m.is_idempotent(t).then_some(m)
        })
        .collect();
    mats.iter()
        .map(|m| matrix_to_linpoly(t, m, Linearity::Q))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_for_two_by_two() {
        let got: Vec<u128> = [2, 3, 4, 5]
            .iter()
            .map(|&q| count_idempotents(2, q).unwrap())
            .collect();
        assert_eq!(got, vec![8, 14, 22, 32]);
        assert_eq!(count_idempotents(1, 7).unwrap(), 2);
        assert_eq!(count_idempotents(2, 6), Err(Error::NotPrimePower(6)));
    }

    #[test]
    fn enumeration_matches_count_for_three_by_three() {
        let t = FieldTower::new(2, 1, 3).unwrap();
        let all = enumerate_idempotents(&t).unwrap();
        assert_eq!(all.len() as u128, count_idempotents(3, 2).unwrap());
        assert!(all.iter().all(|k| k.is_idempotent(&t)));
    }
}
