//! Dense polynomials over F_{q^n} and exhaustive ground truth: evaluation,
//! interpolation, permutation tests and brute-force inverses.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};

/// Fields at least this large are evaluated in parallel.
const PAR_THRESHOLD: u64 = 1024;

/// Coefficients in ascending degree, without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Elem) -> Self {
        Poly::new(vec![c])
    }

    pub fn x() -> Self {
        Poly::new(vec![Elem::ZERO, Elem::ONE])
    }

    pub fn monomial(c: Elem, d: usize) -> Self {
        let mut v = vec![Elem::ZERO; d + 1];
        v[d] = c;
        Poly::new(v)
    }

    pub fn from_codes(codes: &[u32]) -> Self {
        Poly::new(codes.iter().map(|&c| Elem(c)).collect())
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn check(&self, t: &FieldTower) -> Result<()> {
        for &c in &self.coeffs {
            t.check(c)?;
        }
        Ok(())
    }

    pub fn eval(&self, t: &FieldTower, a: Elem) -> Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| t.add(t.mul(acc, a), c))
    }

    pub fn add(&self, t: &FieldTower, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| t.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, t: &FieldTower, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| t.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, t: &FieldTower, c: Elem) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| t.mul(a, c)).collect())
    }

    pub fn mul(&self, t: &FieldTower, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = t.add(out[i + j], t.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Canonical representative of the induced function: degree below Q,
    /// using x^Q = x.
    pub fn reduce(&self, t: &FieldTower) -> Poly {
        let q = t.order() as usize;
        if self.coeffs.len() <= q {
            return self.clone();
        }
        let mut out = self.coeffs[..q].to_vec();
        for (e, &c) in self.coeffs.iter().enumerate().skip(q) {
            let r = (e - 1) % (q - 1) + 1;
            out[r] = t.add(out[r], c);
        }
        Poly::new(out)
    }

    /// The value table f(0), f(1), ..., f(Q-1).
    pub fn values(&self, t: &FieldTower) -> Result<Vec<Elem>> {
        t.check_desk()?;
        let f = self.reduce(t);
        Ok(tabulate(t, |a| f.eval(t, a)))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("poly:[0]");
        }
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "poly:[{}]", cs.join(","))
    }
}

/// Evaluates `f` on every field element, in parallel for larger fields.
pub fn tabulate<F>(t: &FieldTower, f: F) -> Vec<Elem>
where
    F: Fn(Elem) -> Elem + Sync,
{
    let q = t.order() as u32;
    if t.order() >= PAR_THRESHOLD {
        (0..q).into_par_iter().map(|a| f(Elem(a))).collect()
    } else {
        (0..q).map(|a| f(Elem(a))).collect()
    }
}

/// Newton interpolation through arbitrary distinct nodes.
pub fn interpolate(t: &FieldTower, points: &[(Elem, Elem)]) -> Result<Poly> {
    let k = points.len();
    let xs: Vec<Elem> = points.iter().map(|p| p.0).collect();
    let mut seen = std::collections::HashSet::new();
    for &(x, y) in points {
        t.check(x)?;
        t.check(y)?;
        if !seen.insert(x) {
            return Err(Error::DuplicateNode(x));
        }
    }
    let mut dd: Vec<Elem> = points.iter().map(|p| p.1).collect();
    for level in 1..k {
        for i in (level..k).rev() {
            let num = t.sub(dd[i], dd[i - 1]);
            let den = t.sub(xs[i], xs[i - level]);
            dd[i] = t.mul(num, t.safe_inv(den));
        }
    }
    // Horner on the Newton form.
    let mut acc = Poly::zero();
    for i in (0..k).rev() {
        let lin = Poly::new(vec![t.neg(xs[i]), Elem::ONE]);
        acc = acc.mul(t, &lin).add(t, &Poly::constant(dd[i]));
    }
    Ok(acc)
}

/// Interpolates a full value table indexed by element code.
///
/// With ω primitive: c_0 = F(0), c_i = -Σ_{a≠0} F(a) a^{Q-1-i} for
/// 1 ≤ i ≤ Q-2, and c_{Q-1} = -Σ_a F(a).
pub fn interpolate_values(t: &FieldTower, values: &[Elem]) -> Result<Poly> {
    t.check_desk()?;
    let q = t.order() as usize;
    if values.len() != q {
        return Err(Error::TowerMismatch(format!(
            "value table has {} entries, field has {q}",
            values.len()
        )));
    }
    for &v in values {
        t.check(v)?;
    }
    let (exp, log) = t.tables().expect("desk-scale fields have tables");
    let n = q - 1;
    let mut coeffs = vec![Elem::ZERO; q];
    coeffs[0] = values[0];
    coeffs[n] = t.neg(t.sum(values.iter().copied()));
    // log of F(ω^t), or u32::MAX when F(ω^t) = 0.
    let lf: Vec<u32> = (0..n)
        .map(|k| {
            let v = values[exp[k] as usize];
            if v.is_zero() {
                u32::MAX
            } else {
                log[v.0 as usize]
            }
        })
        .collect();
    let coeff = |i: usize| -> Elem {
        let mut s = Elem::ZERO;
        let mut ti = 0usize;
        for &l in &lf {
            if l != u32::MAX {
                let idx = (l as usize + n - ti) % n;
                s = t.add(s, Elem(exp[idx]));
            }
            ti += i;
            if ti >= n {
                ti -= n;
            }
        }
        t.neg(s)
    };
    let mids: Vec<Elem> = if q as u64 >= PAR_THRESHOLD {
        (1..n).into_par_iter().map(coeff).collect()
    } else {
        (1..n).map(coeff).collect()
    };
    coeffs[1..n].copy_from_slice(&mids);
    Ok(Poly::new(coeffs))
}

/// First pair of distinct inputs with equal images.
pub fn find_collision(values: &[Elem]) -> Option<(Elem, Elem)> {
    let mut seen: Vec<Option<u32>> = vec![None; values.len()];
    for (a, &v) in values.iter().enumerate() {
        match seen.get(v.0 as usize).copied().flatten() {
            Some(b) => return Some((Elem(b), Elem(a as u32))),
            None => seen[v.0 as usize] = Some(a as u32),
        }
    }
    None
}

pub fn is_permutation(t: &FieldTower, f: &Poly) -> Result<bool> {
    Ok(find_collision(&f.values(t)?).is_none())
}

/// Inverse of a permutation value table.
pub fn invert_table(values: &[Elem]) -> Result<Vec<Elem>> {
    if let Some((a, b)) = find_collision(values) {
        return Err(Error::NotPermutation { a, b });
    }
    let mut inv = vec![Elem::ZERO; values.len()];
    for (a, &v) in values.iter().enumerate() {
        inv[v.0 as usize] = Elem(a as u32);
    }
    Ok(inv)
}

/// The compositional inverse of a permutation polynomial, of degree below Q.
pub fn brute_inverse(t: &FieldTower, f: &Poly) -> Result<Poly> {
    let inv = invert_table(&f.values(t)?)?;
    interpolate_values(t, &inv)
}

/// Inverse of `f` restricted to a bijection `domain → codomain`, as a table
/// keyed by codomain element.
pub fn restricted_inverse_table(
    t: &FieldTower,
    f: &Poly,
    domain: &[Elem],
    codomain: &[Elem],
) -> Result<BTreeMap<Elem, Elem>> {
    invert_on(domain, codomain, |x| f.eval(t, x))
}

/// Same as [`restricted_inverse_table`] for an arbitrary map.
pub fn invert_on(
    domain: &[Elem],
    codomain: &[Elem],
    f: impl Fn(Elem) -> Elem,
) -> Result<BTreeMap<Elem, Elem>> {
    let target: std::collections::BTreeSet<Elem> = codomain.iter().copied().collect();
    let mut table = BTreeMap::new();
    for &x in domain {
        let y = f(x);
        if !target.contains(&y) || table.insert(y, x).is_some() {
            return Err(Error::NotBijectiveOnDomain { witness: Some(x) });
        }
    }
    if table.len() != target.len() {
        let missing = target.iter().find(|y| !table.contains_key(y)).copied();
        return Err(Error::NotBijectiveOnDomain { witness: missing });
    }
    Ok(table)
}

/// f ∘ g reduced modulo x^Q - x.
pub fn compose_mod(t: &FieldTower, f: &Poly, g: &Poly) -> Result<Poly> {
    let fr = f.reduce(t);
    let gv = g.values(t)?;
    let vals: Vec<Elem> = gv.iter().map(|&y| fr.eval(t, y)).collect();
    interpolate_values(t, &vals)
}

/// Whether f and g induce the same function on the field.
pub fn functions_equal(t: &FieldTower, f: &Poly, g: &Poly) -> bool {
    f.reduce(t) == g.reduce(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_inverse_over_f8() {
        let t = FieldTower::new(2, 1, 3).unwrap();
        let x4 = Poly::monomial(Elem::ONE, 4);
        assert_eq!(brute_inverse(&t, &x4).unwrap(), Poly::monomial(Elem::ONE, 2));
        let f = Poly::from_codes(&[0, 1, 1]);
        assert!(!is_permutation(&t, &f).unwrap());
        assert!(matches!(
            brute_inverse(&t, &f),
            Err(Error::NotPermutation { .. })
        ));
    }

    #[test]
    fn interpolation_agrees_with_newton() {
        let t = FieldTower::new(3, 1, 2).unwrap();
        let f = Poly::from_codes(&[4, 0, 7, 1, 0, 2, 8]);
        let vals = f.values(&t).unwrap();
        let full = interpolate_values(&t, &vals).unwrap();
        let pts: Vec<_> = t.elements().map(|a| (a, vals[a.0 as usize])).collect();
        assert_eq!(full, interpolate(&t, &pts).unwrap());
        assert_eq!(full, f);
    }

    #[test]
    fn duplicate_nodes_are_rejected() {
        let t = FieldTower::new(2, 1, 2).unwrap();
        let pts = [(Elem(1), Elem(2)), (Elem(1), Elem(3))];
        assert_eq!(interpolate(&t, &pts), Err(Error::DuplicateNode(Elem(1))));
    }

    #[test]
    fn reduce_folds_high_powers() {
        let t = FieldTower::new(2, 1, 2).unwrap();
        let f = Poly::monomial(Elem::ONE, 4);
        assert_eq!(f.reduce(&t), Poly::x());
        let g = Poly::monomial(Elem::ONE, 7);
        assert_eq!(g.reduce(&t), Poly::monomial(Elem::ONE, 1));
    }

    #[test]
    fn restricted_inverse_requires_bijection() {
        let t = FieldTower::new(2, 1, 3).unwrap();
        let f = Poly::monomial(Elem::ONE, 2);
        let dom = [Elem(0), Elem(1)];
        let tab = restricted_inverse_table(&t, &f, &dom, &dom).unwrap();
        assert_eq!(tab[&Elem(1)], Elem(1));
        assert!(restricted_inverse_table(&t, &f, &dom, &[Elem(0), Elem(2)]).is_err());
    }

    #[test]
    fn desk_scale_enforced() {
        let t = FieldTower::new(2, 1, 8).unwrap().with_exhaustive_limit(64);
        assert!(matches!(
            Poly::x().values(&t),
            Err(Error::DeskScaleExceeded { .. })
        ));
    }
}
