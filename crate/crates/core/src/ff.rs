//! Prime fields and their extensions `F_{p^a}` with a pinned modulus.
//!
//! Elements are stored as an index encoding the coordinate vector
//! `(c_0, ..., c_{a-1})` in the basis `1, g, ..., g^{a-1}` as
//! `c_0 + c_1 p + ... + c_{a-1} p^{a-1}`. The *pinned order* used by
//! enumeration and root selection is the lexicographic order of the
//! coordinate vector with `c_0` most significant.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::mpoly::IntMPoly;

/// Default cap on the extension degree accepted by [`FqField::new`].
pub const DEFAULT_MAX_DEGREE: u32 = 16;

/// Fields up to this size get log/Zech tables for fast enumeration.
pub const TABLE_LIMIT: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {degree} out of range (1..={cap})")]
    DegreeOutOfRange { degree: u32, cap: u32 },
    #[error("field too large: {p}^{a} does not fit the element encoding")]
    TooLarge { p: u64, a: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    ArityMismatch { expected: usize, got: usize },
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
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

// --- dense polynomials over F_p (low degree first) ---

fn fp_trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn fp_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    fp_trim(r.into_iter().map(|x| x as u32).collect())
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = fp_trim(a.to_vec());
    let dm = m.len() - 1;
    let lc_inv = fp_inv(m[dm], p) as u64;
    while r.len() > dm {
        let k = r.len() - 1 - dm;
        let c = r[r.len() - 1] as u64 * lc_inv % p as u64;
        for (i, &mi) in m.iter().enumerate() {
            let sub = c * mi as u64 % p as u64;
            r[k + i] = ((r[k + i] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        r = fp_trim(r);
    }
    r
}

fn fp_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = fp_trim(a.to_vec());
    let mut b = fp_trim(b.to_vec());
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn fp_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let v = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    fp_trim(v)
}

fn fp_powmod_x(e: &BigUint, m: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let base = fp_rem(&[0, 1], m, p);
    for i in (0..e.bits()).rev() {
        acc = fp_rem(&fp_mul(&acc, &acc, p), m, p);
        if e.bit(i) {
            acc = fp_rem(&fp_mul(&acc, &base, p), m, p);
        }
    }
    acc
}

/// Irreducibility of a monic polynomial over `F_p` (Ben-Or test).
pub fn is_irreducible_fp(f: &[u32], p: u32) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    for i in 1..=d / 2 {
        let e = BigUint::from(p).pow(i as u32);
        let h = fp_powmod_x(&e, f, p);
        let g = fp_gcd(&fp_sub(&h, &[0, 1], p), f, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// An element of some `F_{p^a}`; meaningful only together with its field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem {
    idx: u64,
    tag: u32,
}

impl FqElem {
    pub fn index(&self) -> u64 {
        self.idx
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq#{}", self.idx)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
    Inv,
    Pow(u64),
}

/// The field `F_{p^a}` with its pinned modulus.
#[derive(Clone)]
pub struct FqField {
    p: u32,
    a: u32,
    q: u64,
    /// Monic modulus, coefficients `c_0..c_a` with `c_a = 1`.
    modulus: Vec<u32>,
    tag: u32,
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag
    }
}
impl Eq for FqField {}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.a, self.modulus)
    }
}

impl FqField {
    pub fn new(p: u64, a: u32) -> Result<Self, FieldError> {
        Self::with_cap(p, a, DEFAULT_MAX_DEGREE)
    }

    pub fn with_cap(p: u64, a: u32, max_degree: u32) -> Result<Self, FieldError> {
        if !is_prime(p) || p >= 1 << 16 {
            return Err(FieldError::NotPrime(p));
        }
        if a == 0 || a > max_degree {
            return Err(FieldError::DegreeOutOfRange { degree: a, cap: max_degree });
        }
        let q = (p as u128).pow(a);
        if q > (1u128 << 48) {
            return Err(FieldError::TooLarge { p, a });
        }
        let p32 = p as u32;
        let q = q as u64;
        let modulus = least_irreducible(p32, a);
        Ok(FqField { p: p32, a, q, modulus, tag: (p32 << 8) | a })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.a
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn q_big(&self) -> BigInt {
        BigInt::from(self.q)
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The extension `F_{q^r}` of this field, as a field over `F_p` with its
    /// own pinned modulus.
    pub fn extension(&self, r: u32) -> Result<FqField, FieldError> {
        FqField::with_cap(self.p as u64, self.a * r, (self.a * r).max(DEFAULT_MAX_DEGREE))
    }

    pub fn zero(&self) -> FqElem {
        FqElem { idx: 0, tag: self.tag }
    }
    pub fn one(&self) -> FqElem {
        FqElem { idx: 1, tag: self.tag }
    }

    /// The class of the modulus root `g` (equal to `0` for the prime field,
    /// whose pinned modulus is `x`).
    pub fn generator(&self) -> FqElem {
        if self.a == 1 {
            self.zero()
        } else {
            FqElem { idx: self.p as u64, tag: self.tag }
        }
    }

    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem { idx: n.rem_euclid(self.p as i64) as u64, tag: self.tag }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FqElem {
        let r = n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap();
        FqElem { idx: r, tag: self.tag }
    }

    pub fn from_index(&self, idx: u64) -> FqElem {
        debug_assert!(idx < self.q);
        FqElem { idx, tag: self.tag }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FqElem {
        assert!(coeffs.len() <= self.a as usize);
        let mut idx = 0u64;
        for &c in coeffs.iter().rev() {
            idx = idx * self.p as u64 + (c % self.p) as u64;
        }
        FqElem { idx, tag: self.tag }
    }

    pub fn coeffs(&self, x: FqElem) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.a as usize);
        let mut i = x.idx;
        for _ in 0..self.a {
            v.push((i % self.p as u64) as u32);
            i /= self.p as u64;
        }
        v
    }

    pub fn contains(&self, x: FqElem) -> bool {
        x.tag == self.tag && x.idx < self.q
    }

    /// Position of `x` in the pinned lexicographic order.
    pub fn order_key(&self, x: FqElem) -> u64 {
        self.coeffs(x).iter().fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    fn from_order_key(&self, mut k: u64) -> FqElem {
        let mut c = vec![0u32; self.a as usize];
        for i in (0..self.a as usize).rev() {
            c[i] = (k % self.p as u64) as u32;
            k /= self.p as u64;
        }
        self.from_coeffs(&c)
    }

    pub fn is_zero(&self, x: FqElem) -> bool {
        x.idx == 0
    }

    pub fn add(&self, x: FqElem, y: FqElem) -> FqElem {
        debug_assert!(self.contains(x) && self.contains(y));
        if self.p == 2 {
            return FqElem { idx: x.idx ^ y.idx, tag: self.tag };
        }
        let p = self.p as u64;
        let (mut a, mut b) = (x.idx, y.idx);
        let mut idx = 0u64;
        let mut place = 1u64;
        for _ in 0..self.a {
            idx += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        FqElem { idx, tag: self.tag }
    }

    pub fn neg(&self, x: FqElem) -> FqElem {
        let c: Vec<u32> = self.coeffs(x).iter().map(|&c| (self.p - c) % self.p).collect();
        self.from_coeffs(&c)
    }

    pub fn sub(&self, x: FqElem, y: FqElem) -> FqElem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FqElem, y: FqElem) -> FqElem {
        debug_assert!(self.contains(x) && self.contains(y));
        if self.a == 1 {
            return FqElem { idx: x.idx * y.idx % self.p as u64, tag: self.tag };
        }
        let prod = fp_mul(&self.coeffs(x), &self.coeffs(y), self.p);
        let r = fp_rem(&prod, &self.modulus, self.p);
        self.from_coeffs(&r)
    }

    pub fn pow(&self, x: FqElem, e: u64) -> FqElem {
        let mut acc = self.one();
        let mut base = x;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, x: FqElem, e: &BigUint) -> FqElem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(acc, acc);
            if e.bit(i) {
                acc = self.mul(acc, x);
            }
        }
        acc
    }

    pub fn inv(&self, x: FqElem) -> Result<FqElem, FieldError> {
        if x.idx == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(x, self.q - 2))
    }

    /// Checked arithmetic entry point: validates field membership first.
    pub fn arith(&self, op: ArithOp, x: FqElem, y: Option<FqElem>) -> Result<FqElem, FieldError> {
        if !self.contains(x) || y.is_some_and(|y| !self.contains(y)) {
            return Err(FieldError::FieldMismatch);
        }
        let need_y = || y.ok_or(FieldError::FieldMismatch);
        match op {
            ArithOp::Add => Ok(self.add(x, need_y()?)),
            ArithOp::Mul => Ok(self.mul(x, need_y()?)),
            ArithOp::Neg => Ok(self.neg(x)),
            ArithOp::Inv => self.inv(x),
            ArithOp::Pow(e) => Ok(self.pow(x, e)),
        }
    }

    /// `x -> x^{p^s}`.
    pub fn frobenius(&self, x: FqElem, s: u32) -> FqElem {
        let s = s % self.a;
        let mut y = x;
        for _ in 0..s {
            y = self.pow(y, self.p as u64);
        }
        y
    }

    /// All `q` elements in the pinned order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q).map(move |k| self.from_order_key(k))
    }

    /// Root of `base`'s modulus in this field, least in the pinned order.
    /// Used to interpret the base generator symbol inside an extension.
    pub fn embed_generator(&self, base: &FqField) -> Option<FqElem> {
        if base.p != self.p || self.a % base.a != 0 {
            return None;
        }
        if base.a == 1 {
            return Some(self.zero());
        }
        if base == self {
            return Some(self.generator());
        }
        let m: Vec<FqElem> = base.modulus.iter().map(|&c| self.from_int(c as i64)).collect();
        self.elements().find(|&x| {
            let mut acc = self.zero();
            for &c in m.iter().rev() {
                acc = self.add(self.mul(acc, x), c);
            }
            acc.idx == 0
        })
    }

    /// Evaluates an integer polynomial at a point, mapping the reserved symbol
    /// `g` to this field's generator.
    pub fn eval(&self, f: &IntMPoly, point: &[FqElem]) -> Result<FqElem, FieldError> {
        self.eval_with_gen(f, point, self.generator())
    }

    pub fn eval_with_gen(&self, f: &IntMPoly, point: &[FqElem], gen: FqElem) -> Result<FqElem, FieldError> {
        if point.len() != f.arity() {
            return Err(FieldError::ArityMismatch { expected: f.arity(), got: point.len() });
        }
        let gi = f.gen_index();
        let mut values = Vec::with_capacity(f.nvars());
        let mut it = point.iter();
        for i in 0..f.nvars() {
            if Some(i) == gi {
                values.push(gen);
            } else {
                values.push(*it.next().unwrap());
            }
        }
        Ok(f.eval_with(
            &values,
            self.zero(),
            self.one(),
            |c| self.from_bigint(c),
            |a, b| self.add(*a, *b),
            |a, b| self.mul(*a, *b),
        ))
    }

    pub fn format(&self, x: FqElem) -> String {
        if self.a == 1 {
            return x.idx.to_string();
        }
        let c = self.coeffs(x);
        let parts: Vec<String> = c
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "g".to_string(),
                (1, c) => format!("{}*g", c),
                (i, 1) => format!("g^{}", i),
                (i, c) => format!("{}*g^{}", c, i),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn least_irreducible(p: u32, a: u32) -> Vec<u32> {
    if a == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(a);
    for k in 0..count {
        // c_0 is the most significant digit of the lex index
        let mut c = vec![0u32; a as usize + 1];
        let mut t = k;
        for i in (0..a as usize).rev() {
            c[i] = (t % p as u64) as u32;
            t /= p as u64;
        }
        c[a as usize] = 1;
        if c[0] != 0 && is_irreducible_fp(&c, p) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

// --- fast arithmetic backends for enumeration ---

/// Arithmetic interface used by the counting kernels.
pub trait FieldOps: Sync + Send {
    type E: Copy + Eq + std::hash::Hash + Send + Sync + fmt::Debug;
    fn p(&self) -> u32;
    fn q(&self) -> u64;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, x: Self::E) -> bool;
    fn add(&self, x: Self::E, y: Self::E) -> Self::E;
    fn mul(&self, x: Self::E, y: Self::E) -> Self::E;
    fn neg(&self, x: Self::E) -> Self::E;
    /// Inverse of a nonzero element.
    fn inv(&self, x: Self::E) -> Self::E;
    fn pow(&self, x: Self::E, e: u64) -> Self::E;
    fn from_index(&self, idx: u64) -> Self::E;
    fn to_index(&self, x: Self::E) -> u64;
    /// Whether a nonzero element is a square (odd characteristic).
    fn is_square(&self, x: Self::E) -> bool;
    /// Absolute trace to `F_2` (characteristic 2 only).
    fn trace_f2(&self, x: Self::E) -> u32;
    /// Some square root, if one exists.
    fn sqrt(&self, x: Self::E) -> Option<Self::E>;
    /// Some `u` with `u^2 + u = d` (characteristic 2 only).
    fn solve_artin_schreier(&self, d: Self::E) -> Option<Self::E>;
    fn sub(&self, x: Self::E, y: Self::E) -> Self::E {
        self.add(x, self.neg(y))
    }
}

pub const LOG_ZERO: u32 = u32::MAX;

/// Log/Zech-table arithmetic; elements are discrete logarithms with respect
/// to a primitive element, `LOG_ZERO` standing for zero.
pub struct LogField {
    field: FqField,
    qm1: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg_one: u32,
    trace_mask: u64,
    as_table: OnceLock<Vec<u32>>,
}

impl LogField {
    pub fn build(field: &FqField) -> LogField {
        let q = field.q;
        assert!(q <= TABLE_LIMIT);
        let qm1 = q - 1;
        let factors = prime_factors(qm1);
        let prim = (1..q)
            .map(|i| field.from_index(i))
            .find(|&x| qm1 == 1 || factors.iter().all(|&f| field.pow(x, qm1 / f).idx != 1))
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; qm1 as usize];
        let mut log = vec![LOG_ZERO; q as usize];
        let mut cur = field.one();
        for k in 0..qm1 {
            exp[k as usize] = cur.idx as u32;
            log[cur.idx as usize] = k as u32;
            cur = field.mul(cur, prim);
        }
        let one = field.one();
        let zech = (0..qm1)
            .map(|k| {
                let s = field.add(one, field.from_index(exp[k as usize] as u64));
                log[s.idx as usize]
            })
            .collect();
        let neg_one = log[field.neg(one).idx as usize];
        let mut trace_mask = 0u64;
        if field.p == 2 {
            for i in 0..field.a {
                let b = field.from_index(1u64 << i);
                let mut t = field.zero();
                let mut y = b;
                for _ in 0..field.a {
                    t = field.add(t, y);
                    y = field.mul(y, y);
                }
                if t.idx == 1 {
                    trace_mask |= 1 << i;
                }
            }
        }
        LogField { field: field.clone(), qm1, exp, log, zech, neg_one, trace_mask, as_table: OnceLock::new() }
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn q_minus_one(&self) -> u64 {
        self.qm1
    }

    /// `x^{k}` for a log-represented `x` with exponent reduction.
    #[inline]
    pub fn pow_log(&self, x: u32, e: u64) -> u32 {
        if x == LOG_ZERO {
            if e == 0 {
                0
            } else {
                LOG_ZERO
            }
        } else {
            ((x as u64 * (e % self.qm1)) % self.qm1) as u32
        }
    }
}

impl FieldOps for LogField {
    type E = u32;
    fn p(&self) -> u32 {
        self.field.p
    }
    fn q(&self) -> u64 {
        self.field.q
    }
    #[inline]
    fn zero(&self) -> u32 {
        LOG_ZERO
    }
    #[inline]
    fn one(&self) -> u32 {
        0
    }
    #[inline]
    fn is_zero(&self, x: u32) -> bool {
        x == LOG_ZERO
    }
    #[inline]
    fn add(&self, x: u32, y: u32) -> u32 {
        if x == LOG_ZERO {
            return y;
        }
        if y == LOG_ZERO {
            return x;
        }
        let d = if y >= x { y - x } else { (y as u64 + self.qm1 - x as u64) as u32 };
        let z = self.zech[d as usize];
        if z == LOG_ZERO {
            LOG_ZERO
        } else {
            self.mul(x, z)
        }
    }
    #[inline]
    fn mul(&self, x: u32, y: u32) -> u32 {
        if x == LOG_ZERO || y == LOG_ZERO {
            return LOG_ZERO;
        }
        let s = x as u64 + y as u64;
        (if s >= self.qm1 { s - self.qm1 } else { s }) as u32
    }
    #[inline]
    fn neg(&self, x: u32) -> u32 {
        self.mul(x, self.neg_one)
    }
    #[inline]
    fn inv(&self, x: u32) -> u32 {
        debug_assert!(x != LOG_ZERO);
        if x == 0 {
            0
        } else {
            (self.qm1 - x as u64) as u32
        }
    }
    fn pow(&self, x: u32, e: u64) -> u32 {
        self.pow_log(x, e)
    }
    #[inline]
    fn from_index(&self, idx: u64) -> u32 {
        self.log[idx as usize]
    }
    #[inline]
    fn to_index(&self, x: u32) -> u64 {
        if x == LOG_ZERO {
            0
        } else {
            self.exp[x as usize] as u64
        }
    }
    fn is_square(&self, x: u32) -> bool {
        x == LOG_ZERO || self.field.p == 2 || x % 2 == 0
    }
    fn trace_f2(&self, x: u32) -> u32 {
        (self.to_index(x) & self.trace_mask).count_ones() & 1
    }
    fn sqrt(&self, x: u32) -> Option<u32> {
        if x == LOG_ZERO {
            return Some(LOG_ZERO);
        }
        if self.field.p == 2 {
            // 2 * (q/2) = q = 1 mod (q - 1)
            return Some(self.pow_log(x, self.field.q / 2));
        }
        if x % 2 == 0 {
            Some(x / 2)
        } else {
            None
        }
    }
    fn solve_artin_schreier(&self, d: u32) -> Option<u32> {
        assert_eq!(self.field.p, 2);
        let table = self.as_table.get_or_init(|| {
            let mut t = vec![u32::MAX; self.field.q as usize];
            for u in 0..self.field.q {
                let e = self.from_index(u);
                let v = self.to_index(self.add(self.mul(e, e), e));
                if t[v as usize] == u32::MAX {
                    t[v as usize] = u as u32;
                }
            }
            t
        });
        let u = table[self.to_index(d) as usize];
        (u != u32::MAX).then(|| self.from_index(u as u64))
    }
}

/// Table-free arithmetic on element indices, for fields beyond
/// [`TABLE_LIMIT`].
pub struct SlowField {
    field: FqField,
    // images of the basis vectors under u -> u^2 + u, for p = 2
    as_matrix: OnceLock<Vec<u64>>,
}

impl SlowField {
    pub fn new(field: &FqField) -> Self {
        SlowField { field: field.clone(), as_matrix: OnceLock::new() }
    }
}

impl FieldOps for SlowField {
    type E = u64;
    fn p(&self) -> u32 {
        self.field.p
    }
    fn q(&self) -> u64 {
        self.field.q
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, x: u64) -> bool {
        x == 0
    }
    fn add(&self, x: u64, y: u64) -> u64 {
        self.field.add(self.field.from_index(x), self.field.from_index(y)).idx
    }
    fn mul(&self, x: u64, y: u64) -> u64 {
        self.field.mul(self.field.from_index(x), self.field.from_index(y)).idx
    }
    fn neg(&self, x: u64) -> u64 {
        self.field.neg(self.field.from_index(x)).idx
    }
    fn inv(&self, x: u64) -> u64 {
        self.field.inv(self.field.from_index(x)).map(|e| e.idx).unwrap_or(0)
    }
    fn pow(&self, x: u64, e: u64) -> u64 {
        self.field.pow(self.field.from_index(x), e).idx
    }
    fn from_index(&self, idx: u64) -> u64 {
        idx
    }
    fn to_index(&self, x: u64) -> u64 {
        x
    }
    fn is_square(&self, x: u64) -> bool {
        x == 0 || self.field.p == 2 || self.pow(x, (self.field.q - 1) / 2) == 1
    }
    fn trace_f2(&self, x: u64) -> u32 {
        let f = &self.field;
        let mut t = f.zero();
        let mut y = f.from_index(x);
        for _ in 0..f.a {
            t = f.add(t, y);
            y = f.mul(y, y);
        }
        t.idx as u32
    }
    fn sqrt(&self, x: u64) -> Option<u64> {
        let q = self.field.q;
        if x == 0 {
            return Some(0);
        }
        if self.field.p == 2 {
            return Some(self.pow(x, q / 2));
        }
        if !self.is_square(x) {
            return None;
        }
        // Tonelli-Shanks
        let mut s = 0;
        let mut t = q - 1;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let z = (2..q).find(|&z| !self.is_square(z)).unwrap();
        let mut m = s;
        let mut c = self.pow(z, t);
        let mut tt = self.pow(x, t);
        let mut r = self.pow(x, (t + 1) / 2);
        while tt != 1 {
            let mut i = 0;
            let mut u = tt;
            while u != 1 {
                u = self.mul(u, u);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(b, b);
            }
            m = i;
            c = self.mul(b, b);
            tt = self.mul(tt, c);
            r = self.mul(r, b);
        }
        Some(r)
    }
    fn solve_artin_schreier(&self, d: u64) -> Option<u64> {
        assert_eq!(self.field.p, 2);
        let dim = self.field.a as usize;
        let cols = self.as_matrix.get_or_init(|| {
            (0..dim).map(|i| self.add(self.mul(1 << i, 1 << i), 1 << i)).collect()
        });
        // Gaussian elimination over F_2 on the augmented system.
        let mut rows: Vec<(u64, u64)> = (0..dim)
            .map(|r| {
                let mut lhs = 0u64;
                for (c, col) in cols.iter().enumerate() {
                    lhs |= ((col >> r) & 1) << c;
                }
                (lhs, (d >> r) & 1)
            })
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..dim {
            if let Some(k) = (row..dim).find(|&k| (rows[k].0 >> c) & 1 == 1) {
                rows.swap(row, k);
                for k in 0..dim {
                    if k != row && (rows[k].0 >> c) & 1 == 1 {
                        rows[k].0 ^= rows[row].0;
                        rows[k].1 ^= rows[row].1;
                    }
                }
                pivots.push((row, c));
                row += 1;
            }
        }
        if rows[row..].iter().any(|r| r.1 == 1) {
            return None;
        }
        let mut u = 0u64;
        for (r, c) in pivots {
            u |= rows[r].1 << c;
        }
        Some(u)
    }
}

/// Shared log tables, built once per field.
pub fn log_tables(field: &FqField) -> Option<Arc<LogField>> {
    if field.q > TABLE_LIMIT {
        return None;
    }
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<LogField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&(field.p, field.a)) {
        return Some(t.clone());
    }
    let t = Arc::new(LogField::build(field));
    cache.lock().unwrap().insert((field.p, field.a), t.clone());
    Some(t)
}

/// Integer residue of `n` modulo `p`, as used for reducing manifest
/// coefficients at load time.
pub fn reduce_coefficient(n: &BigInt, p: u32) -> u32 {
    let r = n.mod_floor(&BigInt::from(p));
    if r.is_zero() {
        0
    } else {
        r.to_u32().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_modulus_is_x() {
        let f = FqField::new(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.q(), 2);
    }

    #[test]
    fn f4_modulus() {
        let f = FqField::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.q(), 4);
    }

    #[test]
    fn f9_modulus_matches_enumeration_oracle() {
        // oracle: first monic quadratic x^2 + c1 x + c0 in lex order of
        // (c0, c1) without a root in F_3
        let mut oracle = None;
        'outer: for c0 in 0..3u32 {
            for c1 in 0..3u32 {
                if (0..3u32).all(|x| (x * x + c1 * x + c0) % 3 != 0) {
                    oracle = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        let f = FqField::new(3, 2).unwrap();
        assert_eq!(f.modulus(), oracle.unwrap().as_slice());
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FqField::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert!(matches!(FqField::new(2, 17), Err(FieldError::DegreeOutOfRange { .. })));
        assert!(matches!(FqField::new(2, 0), Err(FieldError::DegreeOutOfRange { .. })));
    }

    #[test]
    fn small_arithmetic_examples() {
        let f4 = FqField::new(2, 2).unwrap();
        let g = f4.generator();
        assert_eq!(f4.mul(g, g), f4.add(g, f4.one()));
        let f5 = FqField::new(5, 1).unwrap();
        assert_eq!(f5.inv(f5.from_int(2)).unwrap(), f5.from_int(3));
        assert_eq!(f5.inv(f5.zero()), Err(FieldError::DivisionByZero));
        let f9 = FqField::new(3, 2).unwrap();
        assert_eq!(f9.pow(f9.generator(), 8), f9.one());
    }

    #[test]
    fn field_mismatch_is_reported() {
        let f4 = FqField::new(2, 2).unwrap();
        let f9 = FqField::new(3, 2).unwrap();
        let r = f4.arith(ArithOp::Add, f4.one(), Some(f9.one()));
        assert_eq!(r, Err(FieldError::FieldMismatch));
        let r = f4.arith(ArithOp::Inv, f4.zero(), None);
        assert_eq!(r, Err(FieldError::DivisionByZero));
    }

    #[test]
    fn frobenius_examples() {
        let f4 = FqField::new(2, 2).unwrap();
        let g = f4.generator();
        assert_eq!(f4.frobenius(g, 1), f4.add(g, f4.one()));
        assert_eq!(f4.frobenius(g, 2), g);
        let f3 = FqField::new(3, 1).unwrap();
        assert_eq!(f3.frobenius(f3.from_int(2), 1), f3.from_int(2));
    }

    #[test]
    fn enumeration_order() {
        let f2 = FqField::new(2, 1).unwrap();
        let e: Vec<u64> = f2.elements().map(|x| x.index()).collect();
        assert_eq!(e, vec![0, 1]);
        let f4 = FqField::new(2, 2).unwrap();
        let e: Vec<FqElem> = f4.elements().collect();
        assert_eq!(e.len(), 4);
        assert_eq!(e[0], f4.zero());
        assert_eq!(e[3], f4.add(f4.generator(), f4.one()));
        let f9 = FqField::new(3, 2).unwrap();
        let mut e: Vec<FqElem> = f9.elements().collect();
        e.sort();
        e.dedup();
        assert_eq!(e.len(), 9);
    }

    #[test]
    fn eval_examples() {
        let vars: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let x = IntMPoly::var(&vars, 0);
        let y = IntMPoly::var(&vars, 1);
        let f3 = FqField::new(3, 1).unwrap();
        let f = x.pow(2).add(&y);
        assert_eq!(f3.eval(&f, &[f3.from_int(1), f3.from_int(2)]).unwrap(), f3.zero());
        let f5 = FqField::new(5, 1).unwrap();
        let v1 = vec!["x".to_string()];
        let f = IntMPoly::var(&v1, 0).scale(&BigInt::from(7));
        assert_eq!(f5.eval(&f, &[f5.one()]).unwrap(), f5.from_int(2));
        assert!(matches!(f5.eval(&f, &[]), Err(FieldError::ArityMismatch { .. })));
        let vg: Vec<String> = ["x", "g"].iter().map(|s| s.to_string()).collect();
        let gx = IntMPoly::var(&vg, 1).mul(&IntMPoly::var(&vg, 0));
        let f4 = FqField::new(2, 2).unwrap();
        let g = f4.generator();
        assert_eq!(f4.eval(&gx, &[g]).unwrap(), f4.add(g, f4.one()));
    }

    #[test]
    fn generator_embedding_is_a_root_of_the_base_modulus() {
        let f4 = FqField::new(2, 2).unwrap();
        let f16 = f4.extension(2).unwrap();
        let g = f16.embed_generator(&f4).unwrap();
        // g^2 + g + 1 = 0
        assert_eq!(f16.add(f16.add(f16.mul(g, g), g), f16.one()), f16.zero());
        // and it is the least such root in pinned order
        let roots: Vec<FqElem> = f16
            .elements()
            .filter(|&x| f16.add(f16.add(f16.mul(x, x), x), f16.one()) == f16.zero())
            .collect();
        assert_eq!(roots[0], g);
    }

    #[test]
    fn log_tables_agree_with_slow_arithmetic() {
        for (p, a) in [(2, 3), (3, 2), (5, 2), (7, 1)] {
            let f = FqField::new(p, a).unwrap();
            let lf = LogField::build(&f);
            for x in 0..f.q() {
                for y in 0..f.q() {
                    let (ex, ey) = (f.from_index(x), f.from_index(y));
                    let (lx, ly) = (lf.from_index(x), lf.from_index(y));
                    assert_eq!(lf.to_index(lf.add(lx, ly)), f.add(ex, ey).index());
                    assert_eq!(lf.to_index(lf.mul(lx, ly)), f.mul(ex, ey).index());
                }
                let lx = lf.from_index(x);
                assert_eq!(lf.to_index(lf.neg(lx)), f.neg(f.from_index(x)).index());
            }
        }
    }

    #[test]
    fn square_roots_and_artin_schreier() {
        for (p, a) in [(2u64, 3u32), (2, 4), (3, 2), (5, 1), (7, 2)] {
            let f = FqField::new(p, a).unwrap();
            let lf = LogField::build(&f);
            let sf = SlowField::new(&f);
            for x in 0..f.q() {
                let l = lf.from_index(x);
                match lf.sqrt(l) {
                    Some(r) => assert_eq!(lf.mul(r, r), l),
                    None => assert!(!lf.is_square(l)),
                }
                match sf.sqrt(x) {
                    Some(r) => assert_eq!(sf.mul(r, r), x),
                    None => assert!(!sf.is_square(x)),
                }
                if p == 2 {
                    let expect = lf.trace_f2(l) == 0;
                    let u = lf.solve_artin_schreier(l);
                    assert_eq!(u.is_some(), expect);
                    if let Some(u) = u {
                        assert_eq!(lf.add(lf.mul(u, u), u), l);
                    }
                    let u = sf.solve_artin_schreier(x);
                    assert_eq!(u.is_some(), expect);
                    if let Some(u) = u {
                        assert_eq!(sf.add(sf.mul(u, u), u), x);
                    }
                }
            }
        }
    }

    #[test]
    fn trace_table_matches_definition() {
        let f = FqField::new(2, 4).unwrap();
        let lf = LogField::build(&f);
        let sf = SlowField::new(&f);
        for x in 0..f.q() {
            assert_eq!(lf.trace_f2(lf.from_index(x)), sf.trace_f2(x));
        }
    }
}
