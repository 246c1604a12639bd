//! Truncated `p`-typical Witt vectors `W_n(R)` over an abstract coefficient
//! ring.
//!
//! Addition, multiplication and negation are given by universal integer
//! polynomials obtained once per `(p, n)` by inverting the ghost map over `Z`.
//! A vector of length `l <= n` uses the first `l` polynomials of each family.

pub mod rings;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::mpoly::IntMPoly;
pub use rings::{CoeffRing, FqPolyRing, IntPolyRing, Integers, TruncPolyRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WittError {
    #[error("(p, n) = ({p}, {n}) exceeds the symbolic cap")]
    CapExceeded { p: u32, n: usize },
    #[error("universal polynomial {family}_{index} is not integral")]
    NonIntegralUniversal { family: &'static str, index: usize },
    #[error("Witt vectors from different contexts or of different lengths")]
    ContextMismatch,
    #[error("coefficient ring does not have characteristic p")]
    NotCharP,
    #[error("ghost components need a p-torsion-free coefficient ring")]
    NotTorsionFree,
    #[error("divided powers need the preimage under V")]
    NotInImageOfV,
    #[error("{0} is not prime")]
    NotPrime(u32),
}

/// Upper bounds on `n` for the symbolic computation of universal polynomials.
#[derive(Clone, Copy, Debug)]
pub struct WittCaps {
    pub max_p: u32,
    pub max_n: usize,
    pub max_n_p2: usize,
}

impl Default for WittCaps {
    fn default() -> Self {
        WittCaps { max_p: 5, max_n: 4, max_n_p2: 5 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Add,
    Mul,
    Neg,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Add => "S",
            Family::Mul => "M",
            Family::Neg => "N",
        }
    }
}

/// A polynomial flattened for repeated evaluation.
#[derive(Debug)]
struct Compiled {
    terms: Vec<(BigInt, Vec<(usize, u32)>)>,
}

impl Compiled {
    fn new(f: &IntMPoly, modulus: Option<u32>) -> Self {
        let m = modulus.map(BigInt::from);
        let terms = f
            .terms()
            .filter_map(|(e, c)| {
                let c = match &m {
                    Some(m) => c.mod_floor(m),
                    None => c.clone(),
                };
                if c.is_zero() {
                    return None;
                }
                let mono = e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (i, k)).collect();
                Some((c, mono))
            })
            .collect();
        Compiled { terms }
    }

    fn eval<R: CoeffRing>(&self, ring: &R, values: &[R::Elem]) -> R::Elem {
        let mut powers: Vec<Vec<R::Elem>> = values.iter().map(|v| vec![ring.one(), v.clone()]).collect();
        let mut acc = ring.zero();
        for (c, mono) in &self.terms {
            let mut t = ring.from_int(c);
            for &(i, k) in mono {
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = ring.mul(powers[i].last().unwrap(), &values[i]);
                    powers[i].push(next);
                }
                t = ring.mul(&t, &powers[i][k]);
            }
            acc = ring.add(&acc, &t);
        }
        acc
    }
}

struct PolyFamily {
    full: Vec<OnceLock<Result<IntMPoly, WittError>>>,
    over_z: Vec<OnceLock<Compiled>>,
    mod_p: Vec<OnceLock<Compiled>>,
}

impl PolyFamily {
    fn new(n: usize) -> Self {
        PolyFamily {
            full: (0..n).map(|_| OnceLock::new()).collect(),
            over_z: (0..n).map(|_| OnceLock::new()).collect(),
            mod_p: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }
}

/// Universal polynomials for `W_n` at a fixed prime, in the variables
/// `X0..X{n-1}, Y0..Y{n-1}`.
pub struct WittCtx {
    p: u32,
    n: usize,
    vars: Vec<String>,
    families: [PolyFamily; 3],
}

impl std::fmt::Debug for WittCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WittCtx(p={}, n={})", self.p, self.n)
    }
}

impl WittCtx {
    pub fn new(p: u32, n: usize) -> Result<Self, WittError> {
        Self::with_caps(p, n, WittCaps::default())
    }

    pub fn with_caps(p: u32, n: usize, caps: WittCaps) -> Result<Self, WittError> {
        if !crate::ff::is_prime(p as u64) {
            return Err(WittError::NotPrime(p));
        }
        let max_n = if p == 2 { caps.max_n_p2 } else { caps.max_n };
        if n == 0 || p > caps.max_p || n > max_n {
            return Err(WittError::CapExceeded { p, n });
        }
        let vars = (0..n).map(|i| format!("X{}", i)).chain((0..n).map(|i| format!("Y{}", i))).collect();
        Ok(WittCtx {
            p,
            n,
            vars,
            families: [PolyFamily::new(n), PolyFamily::new(n), PolyFamily::new(n)],
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Ghost component `w_i` of the vector whose coordinates start at
    /// variable `offset`.
    fn ghost_poly(&self, offset: usize, i: usize) -> IntMPoly {
        let mut w = IntMPoly::zero(&self.vars);
        for j in 0..=i {
            let pj = BigInt::from(self.p).pow(j as u32);
            let e = self.p.pow((i - j) as u32);
            w = w.add(&IntMPoly::var(&self.vars, offset + j).pow(e).scale(&pj));
        }
        w
    }

    fn family(&self, fam: Family) -> &PolyFamily {
        &self.families[fam as usize]
    }

    fn poly(&self, fam: Family, i: usize) -> Result<&IntMPoly, WittError> {
        self.family(fam).full[i].get_or_init(|| self.solve(fam, i)).as_ref().map_err(|e| e.clone())
    }

    fn solve(&self, fam: Family, i: usize) -> Result<IntMPoly, WittError> {
        let n = self.n;
        let mut target = match fam {
            Family::Add => self.ghost_poly(0, i).add(&self.ghost_poly(n, i)),
            Family::Mul => self.ghost_poly(0, i).mul(&self.ghost_poly(n, i)),
            Family::Neg => self.ghost_poly(0, i).neg(),
        };
        for j in 0..i {
            let pj = BigInt::from(self.p).pow(j as u32);
            let mut s = self.poly(fam, j)?.clone();
            for _ in 0..(i - j) {
                s = s.pow(self.p);
            }
            target = target.sub(&s.scale(&pj));
        }
        target
            .div_exact(&BigInt::from(self.p).pow(i as u32))
            .ok_or(WittError::NonIntegralUniversal { family: fam.name(), index: i })
    }

    /// The addition polynomial `S_i`.
    pub fn add_poly(&self, i: usize) -> Result<&IntMPoly, WittError> {
        self.poly(Family::Add, i)
    }

    /// The multiplication polynomial `M_i`.
    pub fn mul_poly(&self, i: usize) -> Result<&IntMPoly, WittError> {
        self.poly(Family::Mul, i)
    }

    /// The negation polynomial `N_i` (only `X` variables occur).
    pub fn neg_poly(&self, i: usize) -> Result<&IntMPoly, WittError> {
        self.poly(Family::Neg, i)
    }

    fn compiled(&self, fam: Family, i: usize, char_p: Option<u32>) -> Result<&Compiled, WittError> {
        let f = self.poly(fam, i)?;
        let fam_ref = self.family(fam);
        Ok(if char_p == Some(self.p) {
            fam_ref.mod_p[i].get_or_init(|| Compiled::new(f, Some(self.p)))
        } else {
            fam_ref.over_z[i].get_or_init(|| Compiled::new(f, None))
        })
    }
}

/// A Witt vector `(a_0, ..., a_{l-1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittVec<E> {
    p: u32,
    coords: Vec<E>,
}

impl<E: Clone> WittVec<E> {
    pub fn coords(&self) -> &[E] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn into_coords(self) -> Vec<E> {
        self.coords
    }
}

/// `a_0 in I^r` and `a_i in I^s` for `i >= 1`; `in_power(a, k)` decides
/// membership in `I^k`.
pub fn witt_ideal_member<E: Clone>(x: &WittVec<E>, in_power: impl Fn(&E, u32) -> bool, r: u32, s: u32) -> bool {
    x.coords.iter().enumerate().all(|(i, a)| in_power(a, if i == 0 { r } else { s }))
}

/// `W_n(R)` for a context and a coefficient ring.
pub struct WittRing<'a, R: CoeffRing> {
    ctx: &'a WittCtx,
    ring: &'a R,
    multiples: Mutex<HashMap<usize, Vec<WittVec<R::Elem>>>>,
}

impl<'a, R: CoeffRing> WittRing<'a, R> {
    pub fn new(ctx: &'a WittCtx, ring: &'a R) -> Self {
        WittRing { ctx, ring, multiples: Mutex::new(HashMap::new()) }
    }

    pub fn ctx(&self) -> &WittCtx {
        self.ctx
    }

    pub fn ring(&self) -> &R {
        self.ring
    }

    pub fn from_coords(&self, coords: Vec<R::Elem>) -> Result<WittVec<R::Elem>, WittError> {
        if coords.is_empty() || coords.len() > self.ctx.n {
            return Err(WittError::ContextMismatch);
        }
        Ok(WittVec { p: self.ctx.p, coords })
    }

    pub fn zero(&self, len: usize) -> WittVec<R::Elem> {
        WittVec { p: self.ctx.p, coords: vec![self.ring.zero(); len] }
    }

    pub fn one(&self, len: usize) -> WittVec<R::Elem> {
        self.teichmuller(&self.ring.one(), len)
    }

    /// `(a, 0, ..., 0)`.
    pub fn teichmuller(&self, a: &R::Elem, len: usize) -> WittVec<R::Elem> {
        let mut coords = vec![self.ring.zero(); len];
        coords[0] = a.clone();
        WittVec { p: self.ctx.p, coords }
    }

    fn check(&self, x: &WittVec<R::Elem>) -> Result<(), WittError> {
        if x.p != self.ctx.p || x.coords.is_empty() || x.coords.len() > self.ctx.n {
            return Err(WittError::ContextMismatch);
        }
        Ok(())
    }

    fn check2(&self, x: &WittVec<R::Elem>, y: &WittVec<R::Elem>) -> Result<usize, WittError> {
        self.check(x)?;
        self.check(y)?;
        if x.len() != y.len() {
            return Err(WittError::ContextMismatch);
        }
        Ok(x.len())
    }

    fn binary(&self, fam: Family, x: &WittVec<R::Elem>, y: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>, WittError> {
        let len = self.check2(x, y)?;
        let n = self.ctx.n;
        let mut values = vec![self.ring.zero(); 2 * n];
        values[..len].clone_from_slice(&x.coords);
        values[n..n + len].clone_from_slice(&y.coords);
        let coords = (0..len)
            .map(|i| Ok(self.ctx.compiled(fam, i, self.ring.char_p())?.eval(self.ring, &values)))
            .collect::<Result<Vec<_>, WittError>>()?;
        Ok(WittVec { p: self.ctx.p, coords })
    }

    pub fn add(&self, x: &WittVec<R::Elem>, y: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>, WittError> {
        self.binary(Family::Add, x, y)
    }

    pub fn mul(&self, x: &WittVec<R::Elem>, y: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>, WittError> {
        self.binary(Family::Mul, x, y)
    }

    pub fn neg(&self, x: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>, WittError> {
        self.check(x)?;
        let n = self.ctx.n;
        let mut values = vec![self.ring.zero(); 2 * n];
        values[..x.len()].clone_from_slice(&x.coords);
        let coords = (0..x.len())
            .map(|i| Ok(self.ctx.compiled(Family::Neg, i, self.ring.char_p())?.eval(self.ring, &values)))
            .collect::<Result<Vec<_>, WittError>>()?;
        Ok(WittVec { p: self.ctx.p, coords })
    }

    pub fn sub(&self, x: &WittVec<R::Elem>, y: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>, WittError> {
        self.add(x, &self.neg(y)?)
    }

    pub fn pow(&self, x: &WittVec<R::Elem>, e: u32) -> Result<WittVec<R::Elem>, WittError> {
        let mut acc = self.one(x.len());
        for _ in 0..e {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// `V(a_0, ..., a_{l-1}) = (0, a_0, ..., a_{l-1})`.
    pub fn verschiebung(&self, x: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>, WittError> {
        self.check(x)?;
        if x.len() + 1 > self.ctx.n {
            return Err(WittError::ContextMismatch);
        }
        let mut coords = Vec::with_capacity(x.len() + 1);
        coords.push(self.ring.zero());
        coords.extend(x.coords.iter().cloned());
        Ok(WittVec { p: self.ctx.p, coords })
    }

    /// Coordinatewise `p`-th power; the Witt vector Frobenius in
    /// characteristic `p`.
    pub fn frobenius(&self, x: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>, WittError> {
        self.check(x)?;
        if self.ring.char_p() != Some(self.ctx.p) {
            return Err(WittError::NotCharP);
        }
        let coords = x.coords.iter().map(|a| self.ring.pow(a, self.ctx.p as u64)).collect();
        Ok(WittVec { p: self.ctx.p, coords })
    }

    /// Restriction `W_l -> W_len` keeping the first `len` coordinates.
    pub fn restrict(&self, x: &WittVec<R::Elem>, len: usize) -> Result<WittVec<R::Elem>, WittError> {
        self.check(x)?;
        if len == 0 || len > x.len() {
            return Err(WittError::ContextMismatch);
        }
        Ok(WittVec { p: self.ctx.p, coords: x.coords[..len].to_vec() })
    }

    /// `m * 1` as an `m`-fold sum of the unit, memoized per length. In
    /// characteristic `p` the integer is first reduced modulo `p^len`.
    pub fn from_int(&self, m: &BigInt, len: usize) -> Result<WittVec<R::Elem>, WittError> {
        if len == 0 || len > self.ctx.n {
            return Err(WittError::ContextMismatch);
        }
        let (negate, k) = if self.ring.char_p() == Some(self.ctx.p) {
            let pn = BigInt::from(self.ctx.p).pow(len as u32);
            (false, m.mod_floor(&pn))
        } else {
            (m < &BigInt::zero(), num_traits::Signed::abs(m))
        };
        let k = k.to_usize().expect("multiple too large to build by repeated addition");
        let v = {
            let mut memo = self.multiples.lock().unwrap();
            let list = memo.entry(len).or_insert_with(|| vec![self.zero(len)]);
            while list.len() <= k {
                let next = self.add(list.last().unwrap(), &self.one(len))?;
                list.push(next);
            }
            list[k].clone()
        };
        if negate {
            self.neg(&v)
        } else {
            Ok(v)
        }
    }

    pub fn scalar_mul(&self, m: &BigInt, x: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>, WittError> {
        self.mul(&self.from_int(m, x.len())?, x)
    }

    /// Ghost components `w_i = sum_{j<=i} p^j a_j^{p^{i-j}}`.
    pub fn ghost(&self, x: &WittVec<R::Elem>) -> Result<Vec<R::Elem>, WittError> {
        self.check(x)?;
        if !self.ring.torsion_free() {
            return Err(WittError::NotTorsionFree);
        }
        let p = self.ctx.p as u64;
        Ok((0..x.len())
            .map(|i| {
                let mut w = self.ring.zero();
                for j in 0..=i {
                    let t = self.ring.pow(&x.coords[j], p.pow((i - j) as u32));
                    let pj = self.ring.from_int(&BigInt::from(p).pow(j as u32));
                    w = self.ring.add(&w, &self.ring.mul(&pj, &t));
                }
                w
            })
            .collect())
    }

    /// Divided power `gamma_i(V y) = (p^{i-1}/i!) V(y^i)`, the scalar acting
    /// through its residue modulo `p^n`.
    pub fn divided_power(&self, i: u32, y: Option<&WittVec<R::Elem>>) -> Result<WittVec<R::Elem>, WittError> {
        let y = y.ok_or(WittError::NotInImageOfV)?;
        assert!(i >= 1);
        if self.ring.char_p() != Some(self.ctx.p) {
            return Err(WittError::NotCharP);
        }
        let p = BigInt::from(self.ctx.p);
        let mut fact = BigInt::one();
        for k in 2..=i {
            fact *= k;
        }
        let mut v = 0u32;
        while fact.is_multiple_of(&p) {
            fact /= &p;
            v += 1;
        }
        assert!(v < i, "p^(i-1)/i! must be a p-adic integer");
        let len = y.len() + 1;
        let pn = p.pow(len as u32);
        let unit_inv = crate::arith::mod_inverse(&fact, &pn).expect("unit modulo p^n");
        let c = (p.pow(i - 1 - v) * unit_inv).mod_floor(&pn);
        let yi = self.pow(y, i)?;
        self.scalar_mul(&c, &self.verschiebung(&yi)?)
    }

    pub fn is_ideal_member(
        &self,
        x: &WittVec<R::Elem>,
        in_power: impl Fn(&R::Elem, u32) -> bool,
        r: u32,
        s: u32,
    ) -> bool {
        witt_ideal_member(x, in_power, r, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FqField;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn addition_polynomials_small_cases() {
        let ctx = WittCtx::new(2, 2).unwrap();
        let v = ctx.vars().to_vec();
        let x0 = IntMPoly::var(&v, 0);
        let x1 = IntMPoly::var(&v, 1);
        let y0 = IntMPoly::var(&v, 2);
        let y1 = IntMPoly::var(&v, 3);
        assert_eq!(*ctx.add_poly(0).unwrap(), x0.add(&y0));
        assert_eq!(*ctx.add_poly(1).unwrap(), x1.add(&y1).sub(&x0.mul(&y0)));

        let ctx = WittCtx::new(3, 2).unwrap();
        let expected = x1
            .add(&y1)
            .sub(&x0.pow(2).mul(&y0))
            .sub(&x0.mul(&y0.pow(2)));
        assert_eq!(*ctx.add_poly(1).unwrap(), expected);
        let _ = names(&[]);
    }

    #[test]
    fn caps() {
        assert!(WittCtx::new(2, 5).is_ok());
        assert_eq!(WittCtx::new(3, 5).unwrap_err(), WittError::CapExceeded { p: 3, n: 5 });
        assert_eq!(WittCtx::new(7, 1).unwrap_err(), WittError::CapExceeded { p: 7, n: 1 });
        assert_eq!(WittCtx::new(4, 1).unwrap_err(), WittError::NotPrime(4));
        let caps = WittCaps { max_p: 7, max_n: 2, max_n_p2: 2 };
        assert!(WittCtx::with_caps(7, 2, caps).is_ok());
    }

    #[test]
    fn unit_plus_unit_in_w2_f2() {
        let ctx = WittCtx::new(2, 2).unwrap();
        let f = FqField::new(2, 1).unwrap();
        let w = WittRing::new(&ctx, &f);
        let one = w.one(2);
        let two = w.add(&one, &one).unwrap();
        assert_eq!(two.coords(), &[f.zero(), f.one()]);
        let t = w.teichmuller(&f.one(), 2);
        assert_eq!(w.add(&t, &t).unwrap(), two);
    }

    #[test]
    fn verschiebung_and_frobenius_examples() {
        let ctx = WittCtx::new(2, 3).unwrap();
        let f = FqField::new(2, 1).unwrap();
        let w = WittRing::new(&ctx, &f);
        let x = w.from_coords(vec![f.one(), f.zero()]).unwrap();
        assert_eq!(w.verschiebung(&x).unwrap().coords(), &[f.zero(), f.one(), f.zero()]);

        let ctx = WittCtx::new(2, 2).unwrap();
        let f4 = FqField::new(2, 2).unwrap();
        let w = WittRing::new(&ctx, &f4);
        let g = w.from_coords(vec![f4.generator(), f4.zero()]).unwrap();
        let fg = w.frobenius(&g).unwrap();
        assert_eq!(fg.coords(), &[f4.add(f4.generator(), f4.one()), f4.zero()]);
    }

    #[test]
    fn v_of_unit_is_three_in_w2_f3() {
        let ctx = WittCtx::new(3, 2).unwrap();
        let f = FqField::new(3, 1).unwrap();
        let w = WittRing::new(&ctx, &f);
        let v1 = w.verschiebung(&w.teichmuller(&f.one(), 1)).unwrap();
        assert_eq!(v1, w.from_int(&BigInt::from(3), 2).unwrap());
    }

    #[test]
    fn frobenius_requires_char_p() {
        let ctx = WittCtx::new(2, 2).unwrap();
        let z = IntPolyRing::new(&["a"]);
        let w = WittRing::new(&ctx, &z);
        assert_eq!(w.frobenius(&w.one(2)).unwrap_err(), WittError::NotCharP);
        let f3 = FqField::new(3, 1).unwrap();
        let w3 = WittRing::new(&ctx, &f3);
        assert_eq!(w3.frobenius(&w3.one(2)).unwrap_err(), WittError::NotCharP);
    }

    #[test]
    fn ghost_examples() {
        let ctx = WittCtx::new(2, 2).unwrap();
        let w = WittRing::new(&ctx, &Integers);
        let x = w.from_coords(vec![BigInt::one(), BigInt::one()]).unwrap();
        assert_eq!(w.ghost(&x).unwrap(), vec![BigInt::from(1), BigInt::from(3)]);
        let f = FqField::new(2, 1).unwrap();
        let wf = WittRing::new(&ctx, &f);
        assert_eq!(wf.ghost(&wf.one(2)).unwrap_err(), WittError::NotTorsionFree);
    }

    #[test]
    fn ideal_membership_examples() {
        let r = FqPolyRing::new(FqField::new(3, 1).unwrap());
        let one = r.field.one();
        let x = WittVec { p: 3, coords: vec![r.monomial(one, 2), r.monomial(one, 3)] };
        assert!(witt_ideal_member(&x, |a, k| r.in_power_of_x(a, k), 2, 3));
        let y = WittVec { p: 3, coords: vec![r.monomial(one, 1), r.monomial(one, 3)] };
        assert!(!witt_ideal_member(&y, |a, k| r.in_power_of_x(a, k), 2, 3));
        let z = WittVec { p: 3, coords: vec![r.zero(), r.zero()] };
        assert!(witt_ideal_member(&z, |a, k| r.in_power_of_x(a, k), 5, 7));
    }

    #[test]
    fn divided_power_of_degree_one_is_v() {
        let ctx = WittCtx::new(2, 3).unwrap();
        let f = FqField::new(2, 1).unwrap();
        let w = WittRing::new(&ctx, &f);
        let y = w.from_coords(vec![f.one(), f.one()]).unwrap();
        assert_eq!(w.divided_power(1, Some(&y)).unwrap(), w.verschiebung(&y).unwrap());
        assert_eq!(w.divided_power(2, None).unwrap_err(), WittError::NotInImageOfV);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let ctx = WittCtx::new(2, 3).unwrap();
        let f = FqField::new(2, 1).unwrap();
        let w = WittRing::new(&ctx, &f);
        assert_eq!(w.add(&w.one(2), &w.one(3)).unwrap_err(), WittError::ContextMismatch);
        let other = WittCtx::new(3, 3).unwrap();
        let f3 = FqField::new(3, 1).unwrap();
        let w3 = WittRing::new(&other, &f3);
        let x = w3.one(2);
        let bad = WittVec { p: x.p, coords: vec![f.one(), f.one()] };
        assert_eq!(w.add(&bad, &w.one(2)).unwrap_err(), WittError::ContextMismatch);
        assert_eq!(w.verschiebung(&w.one(3)).unwrap_err(), WittError::ContextMismatch);
    }
}
