//! Coefficient rings for Witt vectors.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::ff::{FqElem, FqField};
use crate::mpoly::IntMPoly;

/// A commutative ring given by its operations.
pub trait CoeffRing: Sync + Send {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    /// Image of an integer under `Z -> R`.
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    /// `Some(p)` when `p * 1 = 0` in this ring.
    fn char_p(&self) -> Option<u32>;
    /// True when the ring has no `p`-torsion for every prime (used by the
    /// ghost map).
    fn torsion_free(&self) -> bool {
        false
    }

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.neg(y))
    }

    fn is_zero(&self, x: &Self::Elem) -> bool {
        *x == self.zero()
    }

    fn pow(&self, x: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

impl CoeffRing for FqField {
    type Elem = FqElem;
    fn zero(&self) -> FqElem {
        FqField::zero(self)
    }
    fn one(&self) -> FqElem {
        FqField::one(self)
    }
    fn add(&self, x: &FqElem, y: &FqElem) -> FqElem {
        FqField::add(self, *x, *y)
    }
    fn neg(&self, x: &FqElem) -> FqElem {
        FqField::neg(self, *x)
    }
    fn mul(&self, x: &FqElem, y: &FqElem) -> FqElem {
        FqField::mul(self, *x, *y)
    }
    fn from_int(&self, n: &BigInt) -> FqElem {
        self.from_bigint(n)
    }
    fn char_p(&self) -> Option<u32> {
        Some(self.p())
    }
    fn pow(&self, x: &FqElem, e: u64) -> FqElem {
        FqField::pow(self, *x, e)
    }
}

/// `F_q[x]/(x^e)`, elements as coefficient vectors of length `e`.
#[derive(Clone, Debug)]
pub struct TruncPolyRing {
    pub field: FqField,
    pub e: usize,
}

impl TruncPolyRing {
    pub fn new(field: FqField, e: usize) -> Self {
        assert!(e >= 1);
        TruncPolyRing { field, e }
    }

    /// The class of `c * x^k`.
    pub fn monomial(&self, c: FqElem, k: usize) -> Vec<FqElem> {
        let mut v = vec![self.field.zero(); self.e];
        if k < self.e {
            v[k] = c;
        }
        v
    }

    /// `x`-adic valuation, `None` for zero.
    pub fn valuation(&self, a: &[FqElem]) -> Option<usize> {
        a.iter().position(|c| !self.field.is_zero(*c))
    }

    /// Membership in `(x)^k`.
    pub fn in_power_of_x(&self, a: &[FqElem], k: u32) -> bool {
        self.valuation(a).map_or(true, |v| v >= k as usize)
    }

    /// Every element, in lexicographic order of coefficient indices.
    pub fn elements(&self) -> Vec<Vec<FqElem>> {
        let q = self.field.q();
        let total = q.pow(self.e as u32);
        (0..total)
            .map(|mut k| {
                (0..self.e)
                    .map(|_| {
                        let c = self.field.from_index(k % q);
                        k /= q;
                        c
                    })
                    .collect()
            })
            .collect()
    }
}

impl CoeffRing for TruncPolyRing {
    type Elem = Vec<FqElem>;
    fn zero(&self) -> Vec<FqElem> {
        vec![self.field.zero(); self.e]
    }
    fn one(&self) -> Vec<FqElem> {
        self.monomial(self.field.one(), 0)
    }
    fn add(&self, x: &Vec<FqElem>, y: &Vec<FqElem>) -> Vec<FqElem> {
        x.iter().zip(y).map(|(a, b)| self.field.add(*a, *b)).collect()
    }
    fn neg(&self, x: &Vec<FqElem>) -> Vec<FqElem> {
        x.iter().map(|a| self.field.neg(*a)).collect()
    }
    fn mul(&self, x: &Vec<FqElem>, y: &Vec<FqElem>) -> Vec<FqElem> {
        let f = &self.field;
        let mut r = vec![f.zero(); self.e];
        for (i, a) in x.iter().enumerate() {
            if f.is_zero(*a) {
                continue;
            }
            for (j, b) in y.iter().enumerate().take(self.e - i) {
                r[i + j] = f.add(r[i + j], f.mul(*a, *b));
            }
        }
        r
    }
    fn from_int(&self, n: &BigInt) -> Vec<FqElem> {
        self.monomial(self.field.from_bigint(n), 0)
    }
    fn char_p(&self) -> Option<u32> {
        Some(self.field.p())
    }
}

/// `F_q[x]`, elements as trimmed coefficient vectors (low degree first).
#[derive(Clone, Debug)]
pub struct FqPolyRing {
    pub field: FqField,
}

impl FqPolyRing {
    pub fn new(field: FqField) -> Self {
        FqPolyRing { field }
    }

    fn trim(&self, mut v: Vec<FqElem>) -> Vec<FqElem> {
        while v.last().is_some_and(|c| self.field.is_zero(*c)) {
            v.pop();
        }
        v
    }

    pub fn monomial(&self, c: FqElem, k: usize) -> Vec<FqElem> {
        let mut v = vec![self.field.zero(); k + 1];
        v[k] = c;
        self.trim(v)
    }

    pub fn valuation(&self, a: &[FqElem]) -> Option<usize> {
        a.iter().position(|c| !self.field.is_zero(*c))
    }

    pub fn in_power_of_x(&self, a: &[FqElem], k: u32) -> bool {
        self.valuation(a).map_or(true, |v| v >= k as usize)
    }
}

impl CoeffRing for FqPolyRing {
    type Elem = Vec<FqElem>;
    fn zero(&self) -> Vec<FqElem> {
        Vec::new()
    }
    fn one(&self) -> Vec<FqElem> {
        vec![self.field.one()]
    }
    fn add(&self, x: &Vec<FqElem>, y: &Vec<FqElem>) -> Vec<FqElem> {
        let f = &self.field;
        let n = x.len().max(y.len());
        let v = (0..n)
            .map(|i| f.add(x.get(i).copied().unwrap_or(f.zero()), y.get(i).copied().unwrap_or(f.zero())))
            .collect();
        self.trim(v)
    }
    fn neg(&self, x: &Vec<FqElem>) -> Vec<FqElem> {
        x.iter().map(|a| self.field.neg(*a)).collect()
    }
    fn mul(&self, x: &Vec<FqElem>, y: &Vec<FqElem>) -> Vec<FqElem> {
        if x.is_empty() || y.is_empty() {
            return Vec::new();
        }
        let f = &self.field;
        let mut r = vec![f.zero(); x.len() + y.len() - 1];
        for (i, a) in x.iter().enumerate() {
            for (j, b) in y.iter().enumerate() {
                r[i + j] = f.add(r[i + j], f.mul(*a, *b));
            }
        }
        self.trim(r)
    }
    fn from_int(&self, n: &BigInt) -> Vec<FqElem> {
        self.trim(vec![self.field.from_bigint(n)])
    }
    fn char_p(&self) -> Option<u32> {
        Some(self.field.p())
    }
}

/// `Z[vars]`.
#[derive(Clone, Debug)]
pub struct IntPolyRing {
    pub vars: Vec<String>,
}

impl IntPolyRing {
    pub fn new(names: &[&str]) -> Self {
        IntPolyRing { vars: names.iter().map(|s| s.to_string()).collect() }
    }

    pub fn var(&self, i: usize) -> IntMPoly {
        IntMPoly::var(&self.vars, i)
    }
}

impl CoeffRing for IntPolyRing {
    type Elem = IntMPoly;
    fn zero(&self) -> IntMPoly {
        IntMPoly::zero(&self.vars)
    }
    fn one(&self) -> IntMPoly {
        IntMPoly::one(&self.vars)
    }
    fn add(&self, x: &IntMPoly, y: &IntMPoly) -> IntMPoly {
        x.add(y)
    }
    fn neg(&self, x: &IntMPoly) -> IntMPoly {
        x.neg()
    }
    fn mul(&self, x: &IntMPoly, y: &IntMPoly) -> IntMPoly {
        x.mul(y)
    }
    fn from_int(&self, n: &BigInt) -> IntMPoly {
        IntMPoly::constant(&self.vars, n.clone())
    }
    fn char_p(&self) -> Option<u32> {
        None
    }
    fn torsion_free(&self) -> bool {
        true
    }
}

/// The integers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl CoeffRing for Integers {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, x: &BigInt, y: &BigInt) -> BigInt {
        x + y
    }
    fn neg(&self, x: &BigInt) -> BigInt {
        -x
    }
    fn mul(&self, x: &BigInt, y: &BigInt) -> BigInt {
        x * y
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn char_p(&self) -> Option<u32> {
        None
    }
    fn torsion_free(&self) -> bool {
        true
    }
}
