//! Tower arithmetic for F_p ⊂ F_q = F_{p^m} ⊂ F_{q^n}.
//!
//! An element of F_{q^n} is stored as its integer code: with digits d_i in F_q
//! of the polynomial basis {1, γ, ..., γ^{n-1}}, the code is Σ d_i q^i, and
//! each F_q digit is itself Σ c_j p^j over the basis {1, β, ..., β^{m-1}}.
//! Hence F_q embeds as the codes below q and F_p as the codes below p.

use std::fmt;

use crate::error::{Error, Result};

/// Fields up to this order get log/exp tables.
pub const TABLE_LIMIT: u32 = 1 << 21;
/// Default bound on the order of fields we enumerate exhaustively.
pub const DEFAULT_EXHAUSTIVE_LIMIT: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for Elem {
    fn from(v: u32) -> Self {
        Elem(v)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits q into (p, m) with q = p^m.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    let fs = prime_factors(q);
    if fs.len() != 1 || q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let p = fs[0];
    let mut m = 0;
    let mut t = q;
    while t > 1 {
        t /= p;
        m += 1;
    }
    Ok((p as u32, m))
}

fn digit_add(p: u32, a: u32, b: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let (mut x, mut y) = (a, b);
    let mut r: u64 = 0;
    let mut place: u64 = 1;
    while x > 0 || y > 0 {
        let d = (x % p + y % p) % p;
        r += d as u64 * place;
        place *= p as u64;
        x /= p;
        y /= p;
    }
    r as u32
}

fn digit_neg(p: u32, a: u32) -> u32 {
    if p == 2 {
        return a;
    }
    let mut x = a;
    let mut r: u64 = 0;
    let mut place: u64 = 1;
    while x > 0 {
        let d = x % p;
        r += ((p - d) % p) as u64 * place;
        place *= p as u64;
        x /= p;
    }
    r as u32
}

/// Scalar arithmetic on integer codes.
pub(crate) trait Arith {
    fn size(&self) -> u32;
    fn char_p(&self) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;

    fn add(&self, a: u32, b: u32) -> u32 {
        digit_add(self.char_p(), a, b)
    }
    fn neg(&self, a: u32) -> u32 {
        digit_neg(self.char_p(), a)
    }
    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Prime {
    p: u32,
}

impl Arith for Prime {
    fn size(&self) -> u32 {
        self.p
    }
    fn char_p(&self) -> u32 {
        self.p
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: u32) -> u32 {
        (self.p - a) % self.p
    }
}

#[derive(Clone, Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Simple extension B[x]/(modulus) with codes Σ d_i |B|^i.
#[derive(Clone, Debug)]
pub(crate) struct Ext<B> {
    base: B,
    degree: u32,
    order: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

impl<B: Arith> Ext<B> {
    fn new(base: B, degree: u32, modulus: Vec<u32>) -> Self {
        let order = (base.size() as u64).pow(degree) as u32;
        let mut ext = Ext {
            base,
            degree,
            order,
            modulus,
            tables: None,
        };
        if order <= TABLE_LIMIT {
            ext.build_tables();
        }
        ext
    }

    fn digits(&self, a: u32) -> Vec<u32> {
        let b = self.base.size();
        let mut x = a;
        (0..self.degree)
            .map(|_| {
                let d = x % b;
                x /= b;
                d
            })
            .collect()
    }

    fn pack_digits(&self, ds: &[u32]) -> u32 {
        let b = self.base.size() as u64;
        let mut r: u64 = 0;
        for &d in ds.iter().rev() {
            r = r * b + d as u64;
        }
        r as u32
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let d = self.degree as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; 2 * d - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = self.base.add(prod[i + j], self.base.mul(x, y));
                }
            }
        }
        for k in (d..prod.len()).rev() {
            let t = prod[k];
            if t == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..d {
                let c = self.modulus[i];
                if c != 0 {
                    prod[k - d + i] = self.base.sub(prod[k - d + i], self.base.mul(t, c));
                }
            }
        }
        prod.truncate(d);
        self.pack_digits(&prod)
    }

    fn mul_x(&self, a: u32) -> u32 {
        let d = self.degree as usize;
        let ds = self.digits(a);
        let top = ds[d - 1];
        let mut out = vec![0u32; d];
        out[1..d].copy_from_slice(&ds[..d - 1]);
        if top != 0 {
            for (i, o) in out.iter_mut().enumerate() {
                *o = self.base.sub(*o, self.base.mul(top, self.modulus[i]));
            }
        }
        self.pack_digits(&out)
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    fn primitive_element(&self) -> u32 {
        if let Some(t) = &self.tables {
            return t.exp[if self.order > 2 { 1 } else { 0 }];
        }
        let n = self.order as u64 - 1;
        let fs = prime_factors(n);
        // The class of x is tried first so that table construction can use
        // the cheap shift-and-reduce multiplication.
        let x_code = if self.degree > 1 {
            self.base.size()
        } else {
            self.base.neg(self.modulus[0])
        };
        let is_prim = |g: u32| g != 0 && fs.iter().all(|&r| self.pow_slow(g, n / r) != 1);
        if is_prim(x_code) {
            return x_code;
        }
        (1..self.order)
            .find(|&g| is_prim(g))
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&mut self) {
        let g = self.primitive_element();
        let size = self.order as usize;
        let mut exp = Vec::with_capacity(size - 1);
        let mut log = vec![0u32; size];
        let fast = self.degree > 1 && g == self.base.size();
        let mut cur = 1u32;
        for i in 0..size - 1 {
            exp.push(cur);
            log[cur as usize] = i as u32;
            cur = if fast { self.mul_x(cur) } else { self.mul_slow(cur, g) };
        }
        self.tables = Some(Tables { exp, log });
    }
}

impl<B: Arith> Arith for Ext<B> {
    fn size(&self) -> u32 {
        self.order
    }
    fn char_p(&self) -> u32 {
        self.base.char_p()
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Some(t) => {
                if a == 0 || b == 0 {
                    return 0;
                }
                let n = self.order as u64 - 1;
                let s = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % n;
                t.exp[s as usize]
            }
            None => self.mul_slow(a, b),
        }
    }
    fn pow(&self, a: u32, e: u64) -> u32 {
        match &self.tables {
            Some(t) => {
                if a == 0 {
                    return if e == 0 { 1 } else { 0 };
                }
                let n = self.order as u64 - 1;
                let s = (t.log[a as usize] as u64 * (e % n)) % n;
                t.exp[s as usize]
            }
            None => {
                if a == 0 {
                    return if e == 0 { 1 } else { 0 };
                }
                self.pow_slow(a, e % (self.order as u64 - 1))
            }
        }
    }
}

/// Remainder of `a` modulo the monic polynomial `m` (coefficients low degree first).
pub(crate) fn poly_rem<B: Arith>(b: &B, a: &[u32], m: &[u32]) -> Vec<u32> {
    let d = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > d {
        let t = r.pop().unwrap();
        if t != 0 {
            let off = r.len() - d;
            for i in 0..d {
                r[off + i] = b.sub(r[off + i], b.mul(t, m[i]));
            }
        }
    }
    r
}

pub(crate) fn is_irreducible<B: Arith>(b: &B, f: &[u32]) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let s = b.size() as u64;
    for k in 1..=d / 2 {
        let count = s.pow(k as u32);
        for t in 0..count {
            let mut g = Vec::with_capacity(k + 1);
            let mut x = t;
            for _ in 0..k {
                g.push((x % s) as u32);
                x /= s;
            }
            g.push(1);
            if poly_rem(b, f, &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree `d` whose coefficient code Σ c_i |B|^i is smallest.
pub(crate) fn smallest_irreducible<B: Arith>(b: &B, d: u32) -> Vec<u32> {
    let s = b.size() as u64;
    let mut t: u64 = 0;
    loop {
        let mut f = Vec::with_capacity(d as usize + 1);
        let mut x = t;
        for _ in 0..d {
            f.push((x % s) as u32);
            x /= s;
        }
        f.push(1);
        if is_irreducible(b, &f) {
            return f;
        }
        t += 1;
    }
}

fn check_modulus<B: Arith>(b: &B, f: &[u32], d: u32, what: &str) -> Result<()> {
    if f.len() != d as usize + 1 {
        return Err(Error::DegreeMismatch(format!(
            "{what} has degree {} but must have degree {d}",
            f.len() as i64 - 1
        )));
    }
    if let Some(&c) = f.iter().find(|&&c| c >= b.size()) {
        return Err(Error::TowerMismatch(format!(
            "{what} coefficient {c} is outside the base field"
        )));
    }
    if f[d as usize] != 1 {
        return Err(Error::NotIrreducible(format!("{what} is not monic")));
    }
    if !is_irreducible(b, f) {
        return Err(Error::NotIrreducible(format!("{what} {f:?}")));
    }
    Ok(())
}

/// The tower F_p ⊂ F_q ⊂ F_{q^n} with chosen moduli.
#[derive(Clone, Debug)]
pub struct FieldTower {
    p: u32,
    m: u32,
    n: u32,
    q: u32,
    fq: Ext<Prime>,
    top: Ext<Ext<Prime>>,
    exhaustive_limit: u64,
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.m == other.m
            && self.n == other.n
            && self.fq.modulus == other.fq.modulus
            && self.top.modulus == other.top.modulus
    }
}

impl Eq for FieldTower {}

impl FieldTower {
    /// Tower with the default (smallest-code) irreducible moduli.
    pub fn new(p: u32, m: u32, n: u32) -> Result<Self> {
        Self::with_moduli(p, m, n, None, None)
    }

    pub fn with_moduli(
        p: u32,
        m: u32,
        n: u32,
        mod_q: Option<&[u32]>,
        mod_qn: Option<&[u32]>,
    ) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 || n == 0 {
            return Err(Error::DegreeMismatch("extension degrees must be positive".into()));
        }
        let order = (p as u128).checked_pow(m * n).unwrap_or(u128::MAX);
        if order > u32::MAX as u128 {
            return Err(Error::FieldTooLarge { order });
        }
        let prime = Prime { p };
        let mq = match mod_q {
            Some(f) => {
                check_modulus(&prime, f, m, "mod_q")?;
                f.to_vec()
            }
            None => smallest_irreducible(&prime, m),
        };
        let fq = Ext::new(prime, m, mq);
        let mqn = match mod_qn {
            Some(f) => {
                check_modulus(&fq, f, n, "mod_qn")?;
                f.to_vec()
            }
            None => smallest_irreducible(&fq, n),
        };
        let q = fq.order;
        let top = Ext::new(fq.clone(), n, mqn);
        Ok(FieldTower {
            p,
            m,
            n,
            q,
            fq,
            top,
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
        })
    }

    /// Tower of degree `n` over F_q for a prime power q.
    pub fn for_prime_power(q: u64, n: u32) -> Result<Self> {
        let (p, m) = prime_power(q)?;
        Self::new(p, m, n)
    }

    /// Tower of degree `n` over F_q sharing this tower's F_q modulus.
    pub fn sibling(&self, n: u32) -> Result<Self> {
        Self::with_moduli(self.p, self.m, n, Some(&self.fq.modulus), None)
    }

    pub fn with_exhaustive_limit(mut self, limit: u64) -> Self {
        self.exhaustive_limit = limit;
        self
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Absolute degree mn over F_p.
    pub fn mn(&self) -> u32 {
        self.m * self.n
    }
    pub fn order(&self) -> u64 {
        self.top.order as u64
    }
    pub fn mod_q(&self) -> &[u32] {
        &self.fq.modulus
    }
    pub fn mod_qn(&self) -> &[u32] {
        &self.top.modulus
    }
    pub fn exhaustive_limit(&self) -> u64 {
        self.exhaustive_limit
    }

    /// Fails unless the field is small enough to enumerate.
    pub fn check_desk(&self) -> Result<()> {
        if self.order() > self.exhaustive_limit || self.top.tables.is_none() {
            return Err(Error::DeskScaleExceeded {
                order: self.order(),
                limit: self.exhaustive_limit.min(TABLE_LIMIT as u64),
            });
        }
        Ok(())
    }

    pub fn contains(&self, e: Elem) -> bool {
        (e.0 as u64) < self.order()
    }

    pub fn check(&self, e: Elem) -> Result<Elem> {
        if self.contains(e) {
            Ok(e)
        } else {
            Err(Error::TowerMismatch(format!(
                "{e} is not an element of a field of order {}",
                self.order()
            )))
        }
    }

    pub fn in_fq(&self, e: Elem) -> bool {
        e.0 < self.q
    }

    pub fn in_fp(&self, e: Elem) -> bool {
        e.0 < self.p
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.top.order).map(Elem)
    }

    pub fn fq_elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q).map(Elem)
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// Image of an integer in F_p.
    pub fn int(&self, k: i64) -> Elem {
        Elem(k.rem_euclid(self.p as i64) as u32)
    }

    /// The class of x in F_q[x]/(mod_qn).
    pub fn gamma(&self) -> Elem {
        if self.n > 1 {
            Elem(self.q)
        } else {
            Elem(self.fq.neg(self.top.modulus[0]))
        }
    }

    /// The class of x in F_p[x]/(mod_q).
    pub fn beta(&self) -> Elem {
        if self.m > 1 {
            Elem(self.p)
        } else {
            Elem(digit_neg(self.p, self.fq.modulus[0]))
        }
    }

    /// γ^j, the j-th polynomial-basis vector over F_q.
    pub fn q_basis(&self, j: usize) -> Elem {
        Elem(self.q.pow(j as u32))
    }

    /// β^i γ^k with j = k m + i, the j-th basis vector over F_p.
    pub fn p_basis(&self, j: usize) -> Elem {
        Elem(self.p.pow(j as u32))
    }

    /// Coordinates over F_q (n digits, each below q).
    pub fn coords_q(&self, e: Elem) -> Vec<Elem> {
        self.top.digits(e.0).into_iter().map(Elem).collect()
    }

    /// Coordinates over F_p (mn digits, each below p).
    pub fn coords_p(&self, e: Elem) -> Vec<Elem> {
        let mut x = e.0;
        (0..self.mn())
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                Elem(d)
            })
            .collect()
    }

    pub fn from_coords_q(&self, c: &[Elem]) -> Elem {
        let v: Vec<u32> = c.iter().map(|e| e.0).collect();
        Elem(self.top.pack_digits(&v))
    }

    pub fn from_coords_p(&self, c: &[Elem]) -> Elem {
        let mut r: u64 = 0;
        for d in c.iter().rev() {
            r = r * self.p as u64 + d.0 as u64;
        }
        Elem(r as u32)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(digit_add(self.p, a.0, b.0))
    }

    pub fn neg(&self, a: Elem) -> Elem {
        Elem(digit_neg(self.p, a.0))
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.top.mul(a.0, b.0))
    }

    /// a^e, with a^0 = 1 for every a.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        Elem(self.top.pow(a.0, e))
    }

    /// a^e for exponents beyond u64.
    pub fn pow_u128(&self, a: Elem, e: u128) -> Elem {
        if a.is_zero() {
            return if e == 0 { Elem::ONE } else { Elem::ZERO };
        }
        let r = (e % (self.order() as u128 - 1)) as u64;
        self.pow(a, r)
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order() - 2))
    }

    /// a^{Q-2}, which is a^{-1} for a ≠ 0 and 0 at 0.
    pub fn safe_inv(&self, a: Elem) -> Elem {
        if a.is_zero() {
            Elem::ZERO
        } else {
            self.pow(a, self.order() - 2)
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^{q^i}, with i taken modulo n.
    pub fn frobenius(&self, a: Elem, i: u32) -> Elem {
        let e = (self.q as u64).pow(i % self.n);
        self.pow(a, e)
    }

    /// a^{p^j}, with j taken modulo mn.
    pub fn frob_p(&self, a: Elem, j: u32) -> Elem {
        let e = (self.p as u64).pow(j % self.mn());
        self.pow(a, e)
    }

    /// Relative trace to F_q.
    pub fn trace(&self, a: Elem) -> Elem {
        (0..self.n).fold(Elem::ZERO, |s, i| self.add(s, self.frobenius(a, i)))
    }

    /// Relative norm to F_q.
    pub fn norm(&self, a: Elem) -> Elem {
        self.pow(a, (self.order() - 1) / (self.q as u64 - 1))
    }

    /// Norm from F_q to F_p of an element of F_q.
    pub fn norm_q_to_p(&self, a: Elem) -> Elem {
        self.pow(a, (self.q as u64 - 1) / (self.p as u64 - 1))
    }

    /// Absolute trace F_{q^n} → F_p.
    pub fn abs_trace(&self, a: Elem) -> Elem {
        (0..self.mn()).fold(Elem::ZERO, |s, j| self.add(s, self.frob_p(a, j)))
    }

    pub fn primitive_element(&self) -> Elem {
        Elem(self.top.primitive_element())
    }

    /// (exp, log) tables when the field is small enough to have them.
    pub(crate) fn tables(&self) -> Option<(&[u32], &[u32])> {
        self.top.tables.as_ref().map(|t| (&t.exp[..], &t.log[..]))
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem::ZERO, |s, x| self.add(s, x))
    }

    /// Canonical spec string `p:m:n:modq=...:modqn=...`.
    pub fn spec_string(&self) -> String {
        let join = |v: &[u32]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        format!(
            "{}:{}:{}:modq={}:modqn={}",
            self.p,
            self.m,
            self.n,
            join(&self.fq.modulus),
            join(&self.top.modulus)
        )
    }
}

impl fmt::Display for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}
