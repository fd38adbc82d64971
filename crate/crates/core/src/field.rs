//! Finite fields `F_{p^m}` with exact arithmetic.
//!
//! Elements are stored as their coefficient vector over `F_p` packed into a
//! single integer (`c_0 + c_1 p + ... + c_{m-1} p^{m-1}`). Fields of order at
//! most 2^20 additionally carry discrete-log / antilog tables for O(1)
//! multiplication; larger fields fall back to polynomial arithmetic and
//! baby-step/giant-step logarithms.
//!
//! When the extension degree is even the context also models `F_{q^2}` with
//! `q = p^{m/2}` and the conjugation `x -> x^q`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::conway::CONWAY;
use crate::error::{Error, Result};

/// Largest field order that gets dense log tables.
pub const TABLE_LIMIT: u64 = 1 << 20;

/// Shared handle to an immutable field context.
pub type Field = Arc<FieldCtx>;

/// Identity of a field: equal iff `p`, `m` and the modulus agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldId(u64);

/// A field element together with the identity of its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Felt {
    raw: u32,
    field: FieldId,
}

impl Felt {
    /// Packed coefficient encoding of the element.
    pub fn raw(self) -> u32 {
        self.raw
    }

    pub fn field_id(self) -> FieldId {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.raw == 0
    }
}

struct Tables {
    /// `exp[i] = zeta^i`, stored twice over so sums of two logs need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub struct FieldCtx {
    id: FieldId,
    p: u64,
    m: u32,
    order: u64,
    modulus: Vec<u64>,
    zeta: u32,
    conj_power: Option<u64>,
    group_factors: Vec<u64>,
    tables: Option<Tables>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("zeta", &self.zeta)
            .field("conj_power", &self.conj_power)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
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
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

fn conway_lookup(p: u64, m: u32) -> Option<Vec<u64>> {
    CONWAY
        .iter()
        .find(|(cp, cm, _)| *cp == p && *cm == m)
        .map(|(_, _, c)| c.to_vec())
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

/// Dense polynomials over `F_p`, low-to-high, used only during construction
/// and for table-free multiplication.
mod poly {
    use super::{mulmod, powmod};

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut r: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut r);
        r
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = powmod(m[dm], p - 2, p);
        while r.len() > dm && !r.is_empty() {
            let shift = r.len() - 1 - dm;
            let coef = mulmod(*r.last().unwrap(), lead_inv, p);
            for (i, &mc) in m.iter().enumerate() {
                let t = mulmod(coef, mc, p);
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + mulmod(x, y, p)) % p;
            }
        }
        trim(&mut r);
        r
    }

    pub fn mulmod_poly(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod_poly(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod_poly(&r, &b, m, p);
            }
            b = mulmod_poly(&b, &b, m, p);
            e >>= 1;
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }
}

/// Ben-Or test: `f` of degree `m` is irreducible iff `gcd(x^{p^i} - x, f) = 1`
/// for every `i <= m/2`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut h = x.clone();
    for _ in 1..=m / 2 {
        h = poly::powmod_poly(&h, p, f, p);
        let g = poly::gcd(f, &poly::sub(&h, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn fnv(words: impl IntoIterator<Item = u64>) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for w in words {
        for b in w.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

impl FieldCtx {
    /// Builds `F_{p^m}`. Without an explicit modulus the Conway polynomial is
    /// used, so `zeta` is the class of `x`.
    pub fn new(p: u64, m: u32, modulus: Option<Vec<u64>>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::BadModulus { m });
        }
        let order = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
        if order > u32::MAX as u128 {
            return Err(Error::FieldTooLarge { p, m });
        }
        let order = order as u64;
        let modulus = match modulus {
            Some(c) => {
                if c.len() != m as usize + 1 || c[m as usize] != 1 || c.iter().any(|&x| x >= p) {
                    return Err(Error::BadModulus { m });
                }
                c
            }
            None if m == 1 => {
                // Conway convention in degree one: x - g for the least primitive root g.
                let g = least_primitive_root(p);
                vec![(p - g) % p, 1]
            }
            None => conway_lookup(p, m).ok_or(Error::NoConwayAvailable { p, m })?,
        };
        if !is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus { p });
        }
        let id = FieldId(fnv(
            [p, m as u64].into_iter().chain(modulus.iter().copied()),
        ));
        let conj_power = if m % 2 == 0 { Some(p.pow(m / 2)) } else { None };
        let mut ctx = FieldCtx {
            id,
            p,
            m,
            order,
            modulus,
            zeta: 0,
            conj_power,
            group_factors: prime_factors(order - 1),
            tables: None,
        };
        // x itself when primitive, otherwise the least primitive element.
        let x = if m == 1 {
            // the root of x - g is g
            ((p - ctx.modulus[0]) % p) as u32
        } else {
            p as u32
        };
        ctx.zeta = if ctx.has_full_order(x) {
            x
        } else {
            (2..order as u32)
                .find(|&c| ctx.has_full_order(c))
                .ok_or(Error::NotPrimitive)?
        };
        if order <= TABLE_LIMIT {
            ctx.build_tables();
        }
        Ok(Arc::new(ctx))
    }

    /// Same field with a different designated primitive element.
    pub fn with_generator(&self, zeta: Felt) -> Result<Field> {
        self.check(zeta);
        if zeta.is_zero() || !self.has_full_order(zeta.raw) {
            return Err(Error::NotPrimitive);
        }
        let mut ctx = FieldCtx {
            id: self.id,
            p: self.p,
            m: self.m,
            order: self.order,
            modulus: self.modulus.clone(),
            zeta: zeta.raw,
            conj_power: self.conj_power,
            group_factors: self.group_factors.clone(),
            tables: None,
        };
        if ctx.order <= TABLE_LIMIT {
            ctx.build_tables();
        }
        Ok(Arc::new(ctx))
    }

    fn build_tables(&mut self) {
        let n = self.order as usize;
        let g = n - 1;
        let mut exp = vec![0u32; 2 * g];
        let mut log = vec![0u32; n];
        let mut x = 1u32;
        for i in 0..g {
            exp[i] = x;
            exp[i + g] = x;
            log[x as usize] = i as u32;
            x = self.mul_poly(x, self.zeta);
        }
        self.tables = Some(Tables { exp, log });
    }

    fn has_full_order(&self, a: u32) -> bool {
        if a == 0 {
            return false;
        }
        let g = self.order - 1;
        if self.pow_poly(a, g) != 1 {
            return false;
        }
        self.group_factors
            .iter()
            .all(|&r| self.pow_poly(a, g / r) != 1)
    }

    fn decode(&self, mut a: u32) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.m as usize);
        for _ in 0..self.m {
            v.push(a as u64 % self.p);
            a = (a as u64 / self.p) as u32;
        }
        poly::trim(&mut v);
        v
    }

    fn encode(&self, v: &[u64]) -> u32 {
        let mut r = 0u64;
        for &c in v.iter().rev() {
            r = r * self.p + c;
        }
        r as u32
    }

    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return mulmod(a as u64, b as u64, self.p) as u32;
        }
        self.encode(&poly::mulmod_poly(
            &self.decode(a),
            &self.decode(b),
            &self.modulus,
            self.p,
        ))
    }

    fn pow_poly(&self, a: u32, e: u64) -> u32 {
        if self.m == 1 {
            return powmod(a as u64, e, self.p) as u32;
        }
        self.encode(&poly::powmod_poly(&self.decode(a), e, &self.modulus, self.p))
    }

    // ---- accessors ----

    pub fn id(&self) -> FieldId {
        self.id
    }
    pub fn characteristic(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.m
    }
    pub fn order(&self) -> u64 {
        self.order
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }
    /// `q` with `x^sigma = x^q`, when the field is `F_{q^2}`.
    pub fn conj_power(&self) -> Option<u64> {
        self.conj_power
    }
    /// `q` for Case U, erroring on odd degree.
    pub fn q(&self) -> Result<u64> {
        self.conj_power.ok_or(Error::NoConjugation)
    }

    // ---- raw arithmetic (packed encodings, no identity checks) ----

    #[inline]
    pub(crate) fn radd(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        if self.m == 1 {
            let s = a as u64 + b as u64;
            return (if s >= p { s - p } else { s }) as u32;
        }
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let mut r = 0u64;
        let mut place = 1u64;
        for _ in 0..self.m {
            let s = a % p + b % p;
            r += if s >= p { s - p } else { s } * place;
            a /= p;
            b /= p;
            place *= p;
        }
        r as u32
    }

    #[inline]
    pub(crate) fn rneg(&self, a: u32) -> u32 {
        let p = self.p;
        if p == 2 {
            return a;
        }
        if self.m == 1 {
            return if a == 0 { 0 } else { (p - a as u64) as u32 };
        }
        let mut a = a as u64;
        let mut r = 0u64;
        let mut place = 1u64;
        for _ in 0..self.m {
            let c = a % p;
            r += if c == 0 { 0 } else { p - c } * place;
            a /= p;
            place *= p;
        }
        r as u32
    }

    #[inline]
    pub(crate) fn rsub(&self, a: u32, b: u32) -> u32 {
        self.radd(a, self.rneg(b))
    }

    #[inline]
    pub(crate) fn rmul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.mul_poly(a, b),
        }
    }

    pub(crate) fn rpow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let g = self.order - 1;
                let l = (t.log[a as usize] as u128 * (e % g) as u128 % g as u128) as usize;
                t.exp[l]
            }
            None => self.pow_poly(a, e),
        }
    }

    pub(crate) fn rinv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        match &self.tables {
            Some(t) => {
                let g = (self.order - 1) as u32;
                let l = t.log[a as usize];
                t.exp[((g - l) % g) as usize]
            }
            None => self.pow_poly(a, self.order - 2),
        }
    }

    /// `x^q` on Case U contexts, identity otherwise.
    #[inline]
    pub(crate) fn rconj(&self, a: u32) -> u32 {
        match self.conj_power {
            Some(q) => self.rpow(a, q),
            None => a,
        }
    }

    pub(crate) fn rlog(&self, a: u32) -> Option<u64> {
        if a == 0 {
            return None;
        }
        match &self.tables {
            Some(t) => Some(t.log[a as usize] as u64),
            None => Some(self.bsgs_log(a)),
        }
    }

    pub(crate) fn rzeta_pow(&self, k: u64) -> u32 {
        let g = self.order - 1;
        match &self.tables {
            Some(t) => t.exp[(k % g) as usize],
            None => self.pow_poly(self.zeta, k % g),
        }
    }

    fn bsgs_log(&self, a: u32) -> u64 {
        let g = self.order - 1;
        let s = (g as f64).sqrt().ceil() as u64 + 1;
        let mut baby = HashMap::with_capacity(s as usize);
        let mut x = 1u32;
        for j in 0..s {
            baby.entry(x).or_insert(j);
            x = self.mul_poly(x, self.zeta);
        }
        let giant = self.pow_poly(self.inverse_poly(self.zeta), s);
        let mut y = a;
        for i in 0..=s {
            if let Some(&j) = baby.get(&y) {
                return (i * s + j) % g;
            }
            y = self.mul_poly(y, giant);
        }
        unreachable!("zeta is primitive, every nonzero element has a log")
    }

    fn inverse_poly(&self, a: u32) -> u32 {
        self.pow_poly(a, self.order - 2)
    }

    pub(crate) fn wrap(&self, raw: u32) -> Felt {
        Felt {
            raw,
            field: self.id,
        }
    }

    #[inline]
    pub(crate) fn check(&self, a: Felt) {
        assert!(
            a.field == self.id,
            "cross-field arithmetic: element does not belong to this field"
        );
    }

    // ---- element constructors ----

    pub fn zero(&self) -> Felt {
        self.wrap(0)
    }
    pub fn one(&self) -> Felt {
        self.wrap(1)
    }
    /// The designated primitive element.
    pub fn zeta(&self) -> Felt {
        self.wrap(self.zeta)
    }
    /// `zeta^k`.
    pub fn zeta_pow(&self, k: u64) -> Felt {
        self.wrap(self.rzeta_pow(k))
    }
    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Felt {
        let p = self.p as i64;
        self.wrap(n.rem_euclid(p) as u32)
    }
    /// Element from its packed coefficient encoding.
    pub fn from_raw(&self, raw: u32) -> Result<Felt> {
        if raw as u64 >= self.order {
            return Err(Error::Invalid(format!("raw value {raw} out of range")));
        }
        Ok(self.wrap(raw))
    }
    /// Element from coefficients over `F_p`, low-to-high.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Felt> {
        if coeffs.len() > self.m as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Invalid("coefficient vector out of range".into()));
        }
        Ok(self.wrap(self.encode(coeffs)))
    }
    pub fn coeffs(&self, a: Felt) -> Vec<u64> {
        self.check(a);
        let mut v = self.decode(a.raw);
        v.resize(self.m as usize, 0);
        v
    }
    /// Uniformly random element.
    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Felt {
        self.wrap(rng.gen_range(0..self.order) as u32)
    }
    /// Uniformly random nonzero element.
    pub fn random_nonzero<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Felt {
        self.wrap(rng.gen_range(1..self.order) as u32)
    }
    /// All field elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = Felt> + '_ {
        (0..self.order as u32).map(move |r| self.wrap(r))
    }

    // ---- checked element arithmetic ----

    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        self.check(a);
        self.check(b);
        self.wrap(self.radd(a.raw, b.raw))
    }
    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        self.check(a);
        self.check(b);
        self.wrap(self.rsub(a.raw, b.raw))
    }
    pub fn neg(&self, a: Felt) -> Felt {
        self.check(a);
        self.wrap(self.rneg(a.raw))
    }
    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        self.check(a);
        self.check(b);
        self.wrap(self.rmul(a.raw, b.raw))
    }
    pub fn pow(&self, a: Felt, e: u64) -> Felt {
        self.check(a);
        self.wrap(self.rpow(a.raw, e))
    }
    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Felt) -> Option<Felt> {
        self.check(a);
        (!a.is_zero()).then(|| self.wrap(self.rinv(a.raw)))
    }
    pub fn div(&self, a: Felt, b: Felt) -> Option<Felt> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }
    /// Discrete log base `zeta`; `None` for zero.
    pub fn log(&self, a: Felt) -> Option<u64> {
        self.check(a);
        self.rlog(a.raw)
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Felt) -> u64 {
        self.check(a);
        assert!(!a.is_zero(), "zero has no multiplicative order");
        let mut ord = self.order - 1;
        for &r in &self.group_factors {
            while ord % r == 0 && self.rpow(a.raw, ord / r) == 1 {
                ord /= r;
            }
        }
        ord
    }

    /// Whether `a` is a square in this field (zero counts as a square).
    pub fn is_square(&self, a: Felt) -> bool {
        match self.log(a) {
            None => true,
            Some(l) => self.p == 2 || l % 2 == 0,
        }
    }

    /// A square root of `a` if one exists.
    pub fn sqrt(&self, a: Felt) -> Option<Felt> {
        match self.log(a) {
            None => Some(self.zero()),
            Some(l) if self.p == 2 => {
                // squaring is a bijection; sqrt(z^l) = z^(l * 2^{-1} mod (N-1))
                let g = self.order - 1;
                let half = (g + 1) / 2;
                Some(self.zeta_pow((l as u128 * half as u128 % g as u128) as u64))
            }
            Some(l) if l % 2 == 0 => Some(self.zeta_pow(l / 2)),
            Some(_) => None,
        }
    }

    // ---- Case U structure ----

    /// The order-2 automorphism `x -> x^q`.
    pub fn conj(&self, a: Felt) -> Result<Felt> {
        let q = self.q()?;
        Ok(self.pow(a, q))
    }

    /// `x^{q+1}`, the norm to the fixed subfield `F_q`.
    pub fn norm_to_base(&self, a: Felt) -> Result<Felt> {
        let q = self.q()?;
        Ok(self.pow(a, q + 1))
    }

    /// Whether `a` lies in the fixed field of the conjugation.
    pub fn in_fixed_field(&self, a: Felt) -> Result<bool> {
        Ok(self.conj(a)? == a)
    }

    /// The solution of `x^{q+1} = beta` with least discrete log.
    pub fn solve_norm(&self, beta: Felt) -> Result<Felt> {
        let q = self.q()?;
        if !self.in_fixed_field(beta)? {
            return Err(Error::NotInFixedField);
        }
        let Some(l) = self.log(beta) else {
            return Ok(self.zero());
        };
        debug_assert_eq!(l % (q + 1), 0);
        let t = l / (q + 1);
        Ok(self.zeta_pow(t % (q - 1)))
    }

    /// `zeta^{(q^2-1)/n}`, an element of exact order `n` in `T_q`.
    pub fn root_of_unity(&self, n: u64) -> Result<Felt> {
        let q = self.q()?;
        if n == 0 || (q + 1) % n != 0 {
            return Err(Error::OrderDoesNotDivide {
                n,
                q_plus_one: q + 1,
            });
        }
        Ok(self.zeta_pow((self.order - 1) / n))
    }

    /// Elements of `T_q = { x : x^{q+1} = 1 }`, in increasing discrete log.
    pub fn unit_circle(&self) -> Result<Vec<Felt>> {
        let q = self.q()?;
        let step = q - 1;
        Ok((0..=q).map(|k| self.zeta_pow(k * step)).collect())
    }

    // ---- text form ----

    /// `"0"` or `"z^k"`.
    pub fn format(&self, a: Felt) -> String {
        match self.log(a) {
            None => "0".to_string(),
            Some(k) => format!("z^{k}"),
        }
    }

    /// Parses `"0"`, `"z"`, `"z^k"`, or a plain integer in the prime subfield.
    pub fn parse(&self, s: &str) -> Result<Felt> {
        let t = s.trim();
        let bad = || Error::Invalid(format!("cannot parse field element {s:?}"));
        if let Some(rest) = t.strip_prefix('z') {
            if rest.is_empty() {
                return Ok(self.zeta());
            }
            let k = rest.strip_prefix('^').ok_or_else(bad)?;
            let k: u64 = k.trim().parse().map_err(|_| bad())?;
            return Ok(self.zeta_pow(k));
        }
        let n: i64 = t.parse().map_err(|_| bad())?;
        Ok(self.from_int(n))
    }
}

pub(crate) fn least_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let fs = prime_factors(p - 1);
    (2..p)
        .find(|&g| fs.iter().all(|&r| powmod(g, (p - 1) / r, p) != 1))
        .expect("every prime has a primitive root")
}

/// `F_{q^2}` for a prime power `q`, via the Conway polynomial.
pub fn unitary_field(q: u64) -> Result<Field> {
    let (p, e) = prime_power(q).ok_or(Error::NotPrime(q))?;
    FieldCtx::new(p, 2 * e, None)
}

/// Splits a prime power `q = p^e`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let fs = prime_factors(q);
    if fs.len() != 1 {
        return None;
    }
    let p = fs[0];
    let mut e = 0;
    let mut x = q;
    while x % p == 0 {
        x /= p;
        e += 1;
    }
    Some((p, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(f: &FieldCtx, a: Felt) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != f.one() {
            x = f.mul(x, a);
            k += 1;
        }
        k
    }

    #[test]
    fn f9_conway_and_zeta() {
        let f = FieldCtx::new(3, 2, None).unwrap();
        assert_eq!(f.modulus(), &[2, 2, 1]);
        let z = f.zeta();
        assert_eq!(brute_order(&f, z), 8);
        assert_eq!(f.mul(z, z), f.add(z, f.one()));
    }

    #[test]
    fn f5_generator_is_two() {
        let f = FieldCtx::new(5, 1, None).unwrap();
        assert_eq!(f.zeta(), f.from_int(2));
        assert_eq!(brute_order(&f, f.zeta()), 4);
    }

    #[test]
    fn composite_rejected() {
        assert_eq!(FieldCtx::new(4, 1, None).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x+2)(x+3) over F_5
        let e = FieldCtx::new(5, 2, Some(vec![1, 0, 1])).unwrap_err();
        assert_eq!(e, Error::ReducibleModulus { p: 5 });
        // x^4 + x^2 + 1 = (x^2+x+1)^2 over F_2 has no roots
        let e = FieldCtx::new(2, 4, Some(vec![1, 0, 1, 0, 1])).unwrap_err();
        assert_eq!(e, Error::ReducibleModulus { p: 2 });
    }

    #[test]
    fn missing_conway_entry() {
        assert!(matches!(
            FieldCtx::new(257, 2, None),
            Err(Error::NoConwayAvailable { .. })
        ));
        // supplying a modulus works: x^2 - 3 is irreducible mod 257
        let f = FieldCtx::new(257, 2, Some(vec![254, 0, 1])).unwrap();
        assert_eq!(f.order(), 66049);
    }

    #[test]
    fn conjugation_examples() {
        let f = FieldCtx::new(3, 2, None).unwrap();
        let z = f.zeta();
        assert_eq!(f.conj(z).unwrap(), f.zeta_pow(3));
        let z5 = f.zeta_pow(5);
        assert_eq!(f.conj(f.conj(z5).unwrap()).unwrap(), z5);
        let f5 = FieldCtx::new(5, 1, None).unwrap();
        assert_eq!(f5.conj(f5.zeta()), Err(Error::NoConjugation));
    }

    #[test]
    fn norm_examples() {
        let f = FieldCtx::new(3, 2, None).unwrap();
        assert_eq!(f.norm_to_base(f.zeta()).unwrap(), f.from_int(2));
        assert_eq!(f.norm_to_base(f.zero()).unwrap(), f.zero());
        let circle: Vec<_> = f
            .elements()
            .filter(|&x| f.norm_to_base(x).unwrap() == f.one())
            .collect();
        assert_eq!(circle.len(), 4);
        assert_eq!(f.unit_circle().unwrap().len(), 4);
    }

    #[test]
    fn solve_norm_examples() {
        let f9 = FieldCtx::new(3, 2, None).unwrap();
        assert_eq!(f9.solve_norm(f9.from_int(2)).unwrap(), f9.zeta());
        assert_eq!(f9.solve_norm(f9.zero()).unwrap(), f9.zero());
        assert_eq!(f9.solve_norm(f9.zeta()), Err(Error::NotInFixedField));

        let f25 = FieldCtx::new(5, 2, None).unwrap();
        let sols: Vec<_> = f25
            .elements()
            .filter(|&x| f25.norm_to_base(x).unwrap() == f25.one())
            .collect();
        assert_eq!(sols.len(), 6);
        let s = f25.solve_norm(f25.one()).unwrap();
        assert_eq!(s, f25.one());
        // least discrete log among the brute-force solutions
        for beta in f25.elements().filter(|&b| f25.in_fixed_field(b).unwrap() && !b.is_zero()) {
            let got = f25.solve_norm(beta).unwrap();
            let best = f25
                .elements()
                .filter(|&x| f25.norm_to_base(x).unwrap() == beta)
                .min_by_key(|&x| f25.log(x).unwrap())
                .unwrap();
            assert_eq!(got, best);
        }
    }

    #[test]
    fn roots_of_unity() {
        let f25 = FieldCtx::new(5, 2, None).unwrap();
        assert_eq!(f25.root_of_unity(3).unwrap(), f25.zeta_pow(8));
        assert_eq!(f25.root_of_unity(1).unwrap(), f25.one());
        let f9 = FieldCtx::new(3, 2, None).unwrap();
        assert_eq!(
            f9.root_of_unity(3),
            Err(Error::OrderDoesNotDivide { n: 3, q_plus_one: 4 })
        );
    }

    #[test]
    fn table_free_matches_tables() {
        // F_{2^21} has no tables; cross-check a few products against repeated addition.
        let big = FieldCtx::new(2, 21, Some({
            // x^21 + x^2 + 1 is a primitive trinomial
            let mut c = vec![0u64; 22];
            c[0] = 1;
            c[2] = 1;
            c[21] = 1;
            c
        }))
        .unwrap();
        assert!(!big.has_tables());
        let z = big.zeta();
        let a = big.zeta_pow(12345);
        let l = big.log(a).unwrap();
        assert_eq!(l, 12345);
        let inv = big.inv(a).unwrap();
        assert_eq!(big.mul(a, inv), big.one());
        assert_eq!(big.mult_order(z), (1 << 21) - 1);
    }

    #[test]
    fn parse_and_format() {
        let f = FieldCtx::new(3, 2, None).unwrap();
        assert_eq!(f.parse("z^3").unwrap(), f.zeta_pow(3));
        assert_eq!(f.parse("2").unwrap(), f.from_int(2));
        assert_eq!(f.parse("0").unwrap(), f.zero());
        assert_eq!(f.format(f.from_int(2)), "z^4");
        assert_eq!(f.format(f.zero()), "0");
        assert!(f.parse("w^2").is_err());
    }

    #[test]
    #[should_panic(expected = "cross-field")]
    fn cross_field_is_hard_error() {
        let a = FieldCtx::new(3, 2, None).unwrap();
        let b = FieldCtx::new(5, 2, None).unwrap();
        a.add(a.one(), b.one());
    }
}
