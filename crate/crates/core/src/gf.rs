//! Finite fields `F_{p^{2m}}` and the Galois rings `GR(p^N, 2m)` lifting them.
//!
//! Field elements are dense indices: the index of `c_0 + c_1 x + ... + c_{n-1} x^{n-1}`
//! is `sum c_i p^i`. All arithmetic goes through a shared [`Field`] context holding
//! log/Zech tables. Galois-ring elements are coefficient vectors modulo `p^N` over the
//! Hensel lift of the field modulus.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported extension degree `2m`.
pub const MAX_DEGREE: usize = 8;
/// Largest supported Galois-ring precision.
pub const MAX_PRECISION: u32 = 31;
const MAX_ORDER: u64 = 1 << 22;
const NO_LOG: u32 = u32::MAX;

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// Dense polynomials over `F_p`, low degree first, trailing zeros trimmed.
mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out = vec![0; n];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + p - y) % p;
        }
        trim(out)
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p) as u64;
        while r.len() > dm {
            let dr = r.len() - 1;
            let c = (r[dr] as u64 * lead_inv % p as u64) as u32;
            for (j, &mj) in m.iter().enumerate() {
                let idx = dr - dm + j;
                r[idx] = ((r[idx] as u64 + (p - c) as u64 * mj as u64) % p as u64) as u32;
            }
            r = trim(r);
        }
        r
    }

    pub fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        rem(&out.into_iter().map(|v| v as u32).collect::<Vec<_>>(), m, p)
    }

    pub fn pow_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut r = vec![1];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = mul_mod(&r, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        r
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or: `f` of degree n is irreducible iff `gcd(f, x^{p^i} - x) = 1` for `i <= n/2`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let n = f.len() - 1;
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        if f[0] == 0 {
            return false;
        }
        let x = vec![0, 1];
        let mut xp = x.clone();
        for _ in 1..=n / 2 {
            xp = pow_mod(&xp, p as u64, f, p);
            let g = gcd(f, &sub(&xp, &x, p), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

/// Prime, extension parameter and defining polynomial of `F_{p^{2m}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldParams {
    p: u32,
    m: u32,
    modulus: Vec<u32>,
}

impl FieldParams {
    /// Uses the lexicographically least monic irreducible polynomial of degree `2m`,
    /// comparing coefficient vectors from `c_{2m-1}` down to `c_0`.
    pub fn new(p: u32, m: u32) -> Result<Self> {
        let n = Self::check(p, m)?;
        let count = (p as u64).pow(n as u32);
        for k in 0..count {
            let mut f = Vec::with_capacity(n + 1);
            let mut t = k;
            for _ in 0..n {
                f.push((t % p as u64) as u32);
                t /= p as u64;
            }
            f.push(1);
            if poly::is_irreducible(&f, p) {
                return Ok(Self { p, m, modulus: f });
            }
        }
        Err(Error::ReducibleModulus(n))
    }

    /// `modulus` is monic, low degree first.
    pub fn with_modulus(p: u32, m: u32, modulus: Vec<u32>) -> Result<Self> {
        let n = Self::check(p, m)?;
        if modulus.len() != n + 1
            || modulus[n] != 1
            || modulus.iter().any(|&c| c >= p)
            || !poly::is_irreducible(&modulus, p)
        {
            return Err(Error::ReducibleModulus(n));
        }
        Ok(Self { p, m, modulus })
    }

    fn check(p: u32, m: u32) -> Result<usize> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let n = 2 * m;
        if m == 0 || n as usize > MAX_DEGREE {
            return Err(Error::UnsupportedDegree { got: n, max: MAX_DEGREE as u32 });
        }
        match (p as u64).checked_pow(n) {
            Some(q) if q <= MAX_ORDER => Ok(n as usize),
            _ => Err(Error::FieldTooLarge { p, n }),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn degree(&self) -> usize {
        2 * self.m as usize
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
}

/// An element of a [`Field`], stored as its dense index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn index(self) -> u32 {
        self.0
    }
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
    /// Caller guarantees `i` is below the field order.
    pub(crate) fn from_index(i: u32) -> FieldElem {
        FieldElem(i)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arithmetic context for `F_{p^{2m}}`.
pub struct Field {
    params: FieldParams,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg: Vec<u32>,
    frob: [Vec<u32>; 4],
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field").field("params", &self.params).finish()
    }
}

impl Field {
    pub fn new(p: u32, m: u32) -> Result<Self> {
        Self::from_params(FieldParams::new(p, m)?)
    }

    pub fn from_params(params: FieldParams) -> Result<Self> {
        let p = params.p;
        let n = params.degree();
        let q = p.pow(n as u32);
        let qm1 = (q - 1) as u64;
        let to_poly = |idx: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(n);
            let mut t = idx;
            for _ in 0..n {
                v.push(t % p);
                t /= p;
            }
            poly::trim(v)
        };
        let from_poly = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let slow_pow = |g: u32, e: u64| from_poly(&poly::pow_mod(&to_poly(g), e, &params.modulus, p));

        let factors = prime_factors(qm1);
        let gen = (1..q)
            .find(|&g| factors.iter().all(|&r| slow_pow(g, qm1 / r) != 1))
            .ok_or(Error::ReducibleModulus(n))?;

        let gpoly = to_poly(gen);
        let mut exp = Vec::with_capacity(qm1 as usize);
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = vec![1u32];
        for k in 0..qm1 {
            let idx = from_poly(&cur);
            exp.push(idx);
            log[idx as usize] = k as u32;
            cur = poly::mul_mod(&cur, &gpoly, &params.modulus, p);
        }

        let digit_add = |a: u32, b: u32| -> u32 {
            let (mut a, mut b, mut out, mut place) = (a, b, 0u32, 1u32);
            for _ in 0..n {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place *= p;
            }
            out
        };
        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let (mut a, mut out, mut place) = (a, 0u32, 1u32);
                for _ in 0..n {
                    out += ((p - a % p) % p) * place;
                    a /= p;
                    place *= p;
                }
                out
            })
            .collect();
        let zech: Vec<u32> = exp
            .iter()
            .map(|&e| {
                let s = digit_add(e, 1);
                if s == 0 {
                    NO_LOG
                } else {
                    log[s as usize]
                }
            })
            .collect();

        let pow_table = |e: u64| -> Vec<u32> {
            (0..q)
                .map(|a| if a == 0 { 0 } else { exp[((log[a as usize] as u64 * e) % qm1) as usize] })
                .collect()
        };
        let pn = |k: usize| (p as u64).pow(k as u32) % qm1;
        let frob = [pow_table(pn(1)), pow_table(pn(2 % n)), pow_table(pn(n - 1)), pow_table(pn((2 * n - 2) % n))];

        Ok(Self { params, q, exp, log, zech, neg, frob })
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }
    pub fn p(&self) -> u32 {
        self.params.p
    }
    pub fn m(&self) -> u32 {
        self.params.m
    }
    pub fn degree(&self) -> usize {
        self.params.degree()
    }
    pub fn order(&self) -> u32 {
        self.q
    }
    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }
    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    pub fn elem(&self, index: u32) -> Option<FieldElem> {
        (index < self.q).then_some(FieldElem(index))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    pub fn from_int(&self, c: i64) -> FieldElem {
        FieldElem(c.rem_euclid(self.p() as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElem {
        let p = self.p();
        FieldElem(coeffs.iter().take(self.degree()).rev().fold(0, |acc, &c| acc * p + c % p))
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        let p = self.p();
        let mut t = a.0;
        (0..self.degree())
            .map(|_| {
                let c = t % p;
                t /= p;
                c
            })
            .collect()
    }

    /// A fixed primitive element.
    pub fn generator(&self) -> FieldElem {
        FieldElem(self.exp[1 % self.exp.len()])
    }

    pub fn log(&self, a: FieldElem) -> Option<u32> {
        let l = self.log[a.0 as usize];
        (l != NO_LOG).then_some(l)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let qm1 = self.q - 1;
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let d = if lb >= la { lb - la } else { lb + qm1 - la };
        let z = self.zech[d as usize];
        if z == NO_LOG {
            return FieldElem::ZERO;
        }
        let s = la + z;
        FieldElem(self.exp[(if s >= qm1 { s - qm1 } else { s }) as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let qm1 = self.q - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElem(self.exp[(if s >= qm1 { s - qm1 } else { s }) as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.0 == 0 {
            return None;
        }
        let qm1 = self.q - 1;
        let l = self.log[a.0 as usize];
        Some(FieldElem(self.exp[((qm1 - l) % qm1) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.0 == 0 {
            return FieldElem::ZERO;
        }
        let qm1 = (self.q - 1) as u64;
        FieldElem(self.exp[((self.log[a.0 as usize] as u64 * (e % qm1)) % qm1) as usize])
    }

    /// `sigma^k(a) = a^{p^k}`; `k` may be negative.
    pub fn frobenius(&self, a: FieldElem, k: i64) -> FieldElem {
        let n = self.degree() as i64;
        let k = k.rem_euclid(n);
        match k {
            0 => a,
            1 => FieldElem(self.frob[0][a.0 as usize]),
            _ if k == n - 1 => FieldElem(self.frob[2][a.0 as usize]),
            2 => FieldElem(self.frob[1][a.0 as usize]),
            _ if k == n - 2 => FieldElem(self.frob[3][a.0 as usize]),
            _ => self.pow(a, (self.p() as u64).pow(k as u32)),
        }
    }

    #[inline]
    pub fn sigma(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.frob[0][a.0 as usize])
    }

    #[inline]
    pub fn sigma_inv(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.frob[2][a.0 as usize])
    }

    /// `tau = sigma^2`.
    #[inline]
    pub fn tau(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.frob[1][a.0 as usize])
    }

    #[inline]
    pub fn tau_inv(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.frob[3][a.0 as usize])
    }

    /// Whether `a` lies in `F_{p^d}`.
    pub fn in_subfield(&self, a: FieldElem, d: u32) -> bool {
        self.frobenius(a, d as i64) == a
    }

    /// `a^{p+1}`.
    pub fn norm_p1(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.p() as u64 + 1)
    }
}

/// An element of a [`GaloisRing`]: coefficients modulo `p^N`, low degree first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem([u64; MAX_DEGREE]);

impl RingElem {
    pub const ZERO: RingElem = RingElem([0; MAX_DEGREE]);

    pub fn coeffs(&self) -> &[u64; MAX_DEGREE] {
        &self.0
    }
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// `GR(p^N, 2m) = (Z/p^N)[x]/(F)` with `F` the coefficient lift of the field modulus.
pub struct GaloisRing {
    field: Arc<Field>,
    prec: u32,
    pn: u64,
    p: u64,
    n: usize,
    modulus: [u64; MAX_DEGREE + 1],
    teich: Vec<RingElem>,
    sigma_images: Vec<[RingElem; MAX_DEGREE]>,
    /// Valuations of small residues, empty when `p^N` is large.
    val_table: Vec<u8>,
    lazy: bool,
}

impl fmt::Debug for GaloisRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisRing").field("field", &self.field).field("prec", &self.prec).finish()
    }
}

impl GaloisRing {
    pub fn new(field: Arc<Field>, prec: u32) -> Result<Self> {
        let p = field.p() as u64;
        let n = field.degree();
        let pn = match p.checked_pow(prec) {
            Some(v) if (1..=MAX_PRECISION).contains(&prec) && v < (1u64 << 32) => v,
            _ => return Err(Error::PrecisionOverflow { prec }),
        };
        let mut modulus = [0u64; MAX_DEGREE + 1];
        for (i, &c) in field.params().modulus().iter().enumerate() {
            modulus[i] = c as u64;
        }
        let lazy = (pn - 1).saturating_mul(pn - 1).saturating_mul(2 * n as u64) < u64::MAX / 2;
        let mut ring = Self {
            field,
            prec,
            pn,
            p,
            n,
            modulus,
            teich: Vec::new(),
            sigma_images: Vec::new(),
            val_table: Vec::new(),
            lazy,
        };
        if pn <= 1 << 20 {
            ring.val_table = (0..pn)
                .map(|c| if c == 0 { prec as u8 } else { (0..).find(|&k| c % p.pow(k + 1) != 0).unwrap() as u8 })
                .collect();
        }
        let q = ring.field.order() as u64;
        ring.teich = ring
            .field
            .elements()
            .map(|a| {
                let mut x = ring.lift(a);
                for _ in 1..prec {
                    x = ring.pow(x, q);
                }
                x
            })
            .collect();
        let images: Vec<[RingElem; MAX_DEGREE]> = (0..n as i64)
            .map(|k| {
                let mut row = [RingElem::ZERO; MAX_DEGREE];
                for (j, slot) in row.iter_mut().enumerate().take(n) {
                    let mut xj = RingElem::ZERO;
                    xj.0[j] = 1;
                    *slot = ring.frobenius_by_digits(xj, k);
                }
                row
            })
            .collect();
        ring.sigma_images = images;
        Ok(ring)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn precision(&self) -> u32 {
        self.prec
    }
    pub fn modulus(&self) -> u64 {
        self.pn
    }
    pub fn degree(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn zero(&self) -> RingElem {
        RingElem::ZERO
    }
    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    pub fn from_int(&self, c: i64) -> RingElem {
        let mut r = RingElem::ZERO;
        r.0[0] = c.rem_euclid(self.pn as i64) as u64;
        r
    }

    /// `p^e`, zero once `e >= N`.
    pub fn p_pow(&self, e: u32) -> RingElem {
        if e >= self.prec {
            RingElem::ZERO
        } else {
            self.from_int(self.p.pow(e) as i64)
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> RingElem {
        let mut r = RingElem::ZERO;
        for (slot, &c) in r.0.iter_mut().zip(coeffs.iter().take(self.n)) {
            *slot = c % self.pn;
        }
        r
    }

    /// Coefficient-wise lift of a residue, digits in `0..p`.
    pub fn lift(&self, a: FieldElem) -> RingElem {
        let c = self.field.coeffs(a);
        let mut r = RingElem::ZERO;
        for (slot, v) in r.0.iter_mut().zip(c) {
            *slot = v as u64;
        }
        r
    }

    pub fn reduce(&self, x: RingElem) -> FieldElem {
        let p = self.p;
        let mut idx = 0u64;
        for i in (0..self.n).rev() {
            idx = idx * p + x.0[i] % p;
        }
        FieldElem(idx as u32)
    }

    #[inline]
    pub fn add(&self, a: RingElem, b: RingElem) -> RingElem {
        let mut r = RingElem::ZERO;
        for i in 0..self.n {
            let s = a.0[i] + b.0[i];
            r.0[i] = if s >= self.pn { s - self.pn } else { s };
        }
        r
    }

    #[inline]
    pub fn sub(&self, a: RingElem, b: RingElem) -> RingElem {
        let mut r = RingElem::ZERO;
        for i in 0..self.n {
            r.0[i] = if a.0[i] >= b.0[i] { a.0[i] - b.0[i] } else { a.0[i] + self.pn - b.0[i] };
        }
        r
    }

    #[inline]
    pub fn neg(&self, a: RingElem) -> RingElem {
        self.sub(RingElem::ZERO, a)
    }

    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        let n = self.n;
        let pn = self.pn;
        let mut t = [0u64; 2 * MAX_DEGREE];
        for i in 0..n {
            let ai = a.0[i];
            if ai == 0 {
                continue;
            }
            for j in 0..n {
                if self.lazy {
                    t[i + j] += ai * b.0[j];
                } else {
                    t[i + j] = (t[i + j] + ai * b.0[j]) % pn;
                }
            }
        }
        // fold x^k for k >= n back with the modulus, highest degree first
        for k in (n..2 * n - 1).rev() {
            let c = t[k] % pn;
            if c == 0 {
                continue;
            }
            let neg_c = pn - c;
            for j in 0..n {
                if self.lazy {
                    t[k - n + j] += neg_c * self.modulus[j];
                } else {
                    t[k - n + j] = (t[k - n + j] % pn + neg_c * self.modulus[j] % pn) % pn;
                }
            }
        }
        let mut r = RingElem::ZERO;
        for i in 0..n {
            r.0[i] = t[i] % pn;
        }
        r
    }

    pub fn scale_int(&self, a: RingElem, c: u64) -> RingElem {
        let mut r = RingElem::ZERO;
        let c = c % self.pn;
        for i in 0..self.n {
            r.0[i] = a.0[i] * c % self.pn;
        }
        r
    }

    pub fn pow(&self, a: RingElem, mut e: u64) -> RingElem {
        let mut r = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// p-adic valuation; `N` for zero.
    pub fn valuation(&self, a: RingElem) -> u32 {
        let mut v = self.prec;
        for &c in &a.0[..self.n] {
            if c != 0 {
                let k = match self.val_table.get(c as usize) {
                    Some(&k) => k as u32,
                    None => {
                        let (mut c, mut k) = (c, 0);
                        while c % self.p == 0 {
                            c /= self.p;
                            k += 1;
                        }
                        k
                    }
                };
                v = v.min(k);
            }
        }
        v
    }

    pub fn is_unit(&self, a: RingElem) -> bool {
        !self.reduce(a).is_zero()
    }

    pub fn inv(&self, a: RingElem) -> Result<RingElem> {
        let r = self.field.inv(self.reduce(a)).ok_or(Error::NotUnit)?;
        let mut y = self.lift(r);
        let two = self.from_int(2);
        let mut correct = 1;
        while correct < self.prec {
            y = self.mul(y, self.sub(two, self.mul(a, y)));
            correct *= 2;
        }
        Ok(y)
    }

    /// Exact division by `p^e`; `None` unless every coefficient is divisible.
    pub fn div_p_pow(&self, a: RingElem, e: u32) -> Option<RingElem> {
        if e == 0 {
            return Some(a);
        }
        if e >= self.prec {
            return a.is_zero().then_some(RingElem::ZERO);
        }
        let d = self.p.pow(e);
        let mut r = RingElem::ZERO;
        for i in 0..self.n {
            if !a.0[i].is_multiple_of(d) {
                return None;
            }
            r.0[i] = a.0[i] / d;
        }
        Some(r)
    }

    pub fn mul_p_pow(&self, a: RingElem, e: u32) -> RingElem {
        if e >= self.prec {
            return RingElem::ZERO;
        }
        self.scale_int(a, self.p.pow(e))
    }

    /// The multiplicative representative of a residue.
    pub fn teichmuller(&self, a: FieldElem) -> RingElem {
        self.teich[a.0 as usize]
    }

    /// Residues `a_i` with `x = sum T(a_i) p^i`, `N` of them.
    pub fn digits(&self, x: RingElem) -> Vec<FieldElem> {
        self.digits_upto(x, self.prec)
    }

    fn digits_upto(&self, mut x: RingElem, k: u32) -> Vec<FieldElem> {
        let mut out = Vec::with_capacity(k as usize);
        for _ in 0..k {
            let a = self.reduce(x);
            out.push(a);
            let r = self.sub(x, self.teich[a.0 as usize]);
            x = RingElem::ZERO;
            for i in 0..self.n {
                x.0[i] = r.0[i] / self.p;
            }
        }
        out
    }

    pub fn from_digits(&self, digits: &[FieldElem]) -> RingElem {
        let mut acc = RingElem::ZERO;
        for &d in digits.iter().take(self.prec as usize).rev() {
            acc = self.add(self.scale_int(acc, self.p), self.teich[d.0 as usize]);
        }
        acc
    }

    /// Canonical representative modulo `p^k`: the Teichmuller expansion cut after `k` digits.
    /// Commutes with every power of Frobenius.
    pub fn truncate(&self, x: RingElem, k: u32) -> RingElem {
        if k >= self.prec {
            return x;
        }
        let mut rest = x;
        let mut acc = RingElem::ZERO;
        let mut scale = 1u64;
        for _ in 0..k {
            let t = self.teich[self.reduce(rest).0 as usize];
            acc = self.add(acc, self.scale_int(t, scale));
            let r = self.sub(rest, t);
            for i in 0..self.n {
                rest.0[i] = r.0[i] / self.p;
            }
            scale *= self.p;
        }
        acc
    }

    /// `sigma^k` computed through the Teichmuller expansion.
    pub fn frobenius_by_digits(&self, x: RingElem, k: i64) -> RingElem {
        let d: Vec<FieldElem> = self.digits(x).into_iter().map(|a| self.field.frobenius(a, k)).collect();
        self.from_digits(&d)
    }

    /// `sigma^k`, using cached images of the power basis (sigma is additive over `Z/p^N`).
    pub fn frobenius(&self, x: RingElem, k: i64) -> RingElem {
        let k = k.rem_euclid(self.n as i64) as usize;
        if k == 0 {
            return x;
        }
        let imgs = &self.sigma_images[k];
        let mut acc = [0u64; MAX_DEGREE];
        for j in 0..self.n {
            let c = x.0[j];
            if c == 0 {
                continue;
            }
            for i in 0..self.n {
                acc[i] = if self.lazy { acc[i] + c * imgs[j].0[i] } else { (acc[i] + c * imgs[j].0[i]) % self.pn };
            }
        }
        for v in acc.iter_mut().take(self.n) {
            *v %= self.pn;
        }
        RingElem(acc)
    }

    pub fn sigma(&self, x: RingElem) -> RingElem {
        self.frobenius(x, 1)
    }

    /// Coefficientwise transport from a ring over the same field: reduces when coming
    /// from higher precision, picks the small lift otherwise.
    pub fn embed(&self, x: RingElem) -> RingElem {
        let mut r = RingElem::ZERO;
        for i in 0..self.n {
            r.0[i] = x.0[i] % self.pn;
        }
        r
    }

    /// Transports a Teichmuller expansion from `other` into this ring.
    pub fn lift_digits_from(&self, other: &GaloisRing, x: RingElem) -> RingElem {
        self.from_digits(&other.digits(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_irreducible(f: &[u32], p: u32) -> bool {
        // no monic factor of degree 1..=deg/2
        let n = f.len() - 1;
        for d in 1..=n / 2 {
            let count = (p as u64).pow(d as u32);
            for k in 0..count {
                let mut g = Vec::new();
                let mut t = k;
                for _ in 0..d {
                    g.push((t % p as u64) as u32);
                    t /= p as u64;
                }
                g.push(1);
                if poly::rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn least_modulus_for_p3() {
        assert_eq!(FieldParams::new(3, 1).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn ben_or_agrees_with_trial_division() {
        for p in [2u32, 3, 5] {
            for n in 2..=4usize {
                let count = (p as u64).pow(n as u32);
                for k in 0..count {
                    let mut f: Vec<u32> = Vec::new();
                    let mut t = k;
                    for _ in 0..n {
                        f.push((t % p as u64) as u32);
                        t /= p as u64;
                    }
                    f.push(1);
                    assert_eq!(poly::is_irreducible(&f, p), brute_irreducible(&f, p), "{f:?} mod {p}");
                }
            }
        }
    }

    #[test]
    fn chosen_modulus_is_least_irreducible() {
        for (p, m) in [(3u32, 1u32), (3, 2), (5, 1), (5, 2), (3, 3)] {
            let params = FieldParams::new(p, m).unwrap();
            let f = params.modulus();
            assert!(brute_irreducible(f, p));
            let n = f.len() - 1;
            let key = |g: &[u32]| g[..n].iter().rev().fold(0u64, |a, &c| a * p as u64 + c as u64);
            for k in 0..key(f) {
                let mut g = Vec::new();
                let mut t = k;
                for _ in 0..n {
                    g.push((t % p as u64) as u32);
                    t /= p as u64;
                }
                g.push(1);
                assert!(!brute_irreducible(&g, p));
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(Field::new(3, 5), Err(Error::UnsupportedDegree { .. })));
        assert!(FieldParams::with_modulus(3, 1, vec![2, 0, 1]).is_err());
    }

    #[test]
    fn log_tables_match_schoolbook() {
        let f = Field::new(3, 2).unwrap();
        let m = f.params().modulus().to_vec();
        for a in f.elements().step_by(7) {
            for b in f.elements().step_by(5) {
                let pa = poly::trim(f.coeffs(a));
                let pb = poly::trim(f.coeffs(b));
                let prod = poly::mul_mod(&pa, &pb, &m, 3);
                assert_eq!(f.mul(a, b), f.from_coeffs(&prod));
                let sum: Vec<u32> = f.coeffs(a).iter().zip(f.coeffs(b)).map(|(x, y)| (x + y) % 3).collect();
                assert_eq!(f.add(a, b), f.from_coeffs(&sum));
            }
        }
    }

    #[test]
    fn frobenius_has_order_2m() {
        for (p, m) in [(3u32, 1u32), (3, 3), (5, 2)] {
            let f = Field::new(p, m).unwrap();
            for a in f.elements() {
                assert_eq!(f.frobenius(a, 2 * m as i64), a);
                assert_eq!(f.tau(f.tau_inv(a)), a);
                assert_eq!(f.sigma(f.sigma_inv(a)), a);
            }
            let fixed = f.elements().filter(|&a| f.in_subfield(a, 2)).count();
            assert_eq!(fixed as u32, p * p);
        }
    }

    fn small_field() -> Arc<Field> {
        Arc::new(Field::new(3, 2).unwrap())
    }

    proptest! {
        #[test]
        fn field_axioms(a in 0u32..81, b in 0u32..81, c in 0u32..81) {
            let f = small_field();
            let (a, b, c) = (f.elem(a).unwrap(), f.elem(b).unwrap(), f.elem(c).unwrap());
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            prop_assert_eq!(f.sigma(f.mul(a, b)), f.mul(f.sigma(a), f.sigma(b)));
            prop_assert_eq!(f.sigma(f.add(a, b)), f.add(f.sigma(a), f.sigma(b)));
            if !a.is_zero() {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
        }

        #[test]
        fn ring_frobenius_routes_agree(cs in proptest::collection::vec(0u64..81, 4), k in 0i64..4) {
            let f = small_field();
            let r = GaloisRing::new(f, 4).unwrap();
            let x = r.from_coeffs(&cs);
            prop_assert_eq!(r.frobenius(x, k), r.frobenius_by_digits(x, k));
        }

        #[test]
        fn ring_frobenius_is_a_ring_map(a in proptest::collection::vec(0u64..81, 4), b in proptest::collection::vec(0u64..81, 4)) {
            let r = GaloisRing::new(small_field(), 4).unwrap();
            let (x, y) = (r.from_coeffs(&a), r.from_coeffs(&b));
            prop_assert_eq!(r.sigma(r.mul(x, y)), r.mul(r.sigma(x), r.sigma(y)));
            prop_assert_eq!(r.sigma(r.add(x, y)), r.add(r.sigma(x), r.sigma(y)));
            prop_assert_eq!(r.frobenius(x, 4), x);
        }

        #[test]
        fn digits_roundtrip_and_truncation(a in proptest::collection::vec(0u64..81, 4), k in 0u32..5) {
            let r = GaloisRing::new(small_field(), 4).unwrap();
            let x = r.from_coeffs(&a);
            prop_assert_eq!(r.from_digits(&r.digits(x)), x);
            let t = r.truncate(x, k);
            let diff = r.sub(x, t);
            prop_assert!(r.valuation(diff) >= k);
            prop_assert_eq!(r.truncate(r.sigma(x), k), r.sigma(t));
        }

        #[test]
        fn unit_inverse(a in proptest::collection::vec(0u64..81, 4)) {
            let r = GaloisRing::new(small_field(), 4).unwrap();
            let x = r.from_coeffs(&a);
            match r.inv(x) {
                Ok(y) => prop_assert_eq!(r.mul(x, y), r.one()),
                Err(e) => { prop_assert_eq!(e, Error::NotUnit); prop_assert!(r.valuation(x) > 0); }
            }
        }
    }

    #[test]
    fn teichmuller_is_multiplicative_and_fixed() {
        let f = small_field();
        let r = GaloisRing::new(f.clone(), 4).unwrap();
        let q = f.order() as u64;
        for a in f.elements() {
            let t = r.teichmuller(a);
            assert_eq!(r.reduce(t), a);
            assert_eq!(r.pow(t, q), t);
            assert_eq!(r.frobenius(t, 1), r.teichmuller(f.sigma(a)));
        }
        let (a, b) = (f.elem(17).unwrap(), f.elem(40).unwrap());
        assert_eq!(r.mul(r.teichmuller(a), r.teichmuller(b)), r.teichmuller(f.mul(a, b)));
    }

    #[test]
    fn ring_frobenius_order() {
        let f = small_field();
        let r = GaloisRing::new(f.clone(), 5).unwrap();
        let x = r.from_coeffs(&[0, 1]);
        let mut y = x;
        for _ in 0..f.degree() {
            y = r.sigma(y);
        }
        assert_eq!(y, x);
        assert_ne!(r.sigma(x), x);
    }
}
