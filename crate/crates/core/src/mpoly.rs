//! Sparse multivariate polynomials with big-integer coefficients.
//!
//! Used both for the defining equations of varieties (evaluated over finite
//! fields) and for the universal Witt polynomials (manipulated over `Z`).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Reserved variable name standing for the generator of the base field.
pub const GEN_SYMBOL: &str = "g";

pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntMPoly {
    pub fn zero(vars: &[String]) -> Self {
        IntMPoly { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c.into());
        p
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, 1)
    }

    /// The polynomial consisting of the single variable `vars[i]`.
    pub fn var(vars: &[String], i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = Self::zero(vars);
        p.add_term(e, BigInt::one());
        p
    }

    pub fn from_terms(vars: &[String], terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length must match variable count");
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// Index of the reserved generator symbol, if this polynomial mentions it
    /// as a variable.
    pub fn gen_index(&self) -> Option<usize> {
        self.vars.iter().position(|v| v == GEN_SYMBOL)
    }

    /// Number of ordinary (non-generator) variables.
    pub fn arity(&self) -> usize {
        self.vars.len() - usize::from(self.gen_index().is_some())
    }

    pub fn add_term(&mut self, e: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "polynomials over different variable lists");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_vars(other);
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        IntMPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(&self.vars);
        }
        IntMPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Divides every coefficient by `k`, or returns `None` if some coefficient
    /// is not divisible.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            terms.insert(e.clone(), q);
        }
        Some(IntMPoly { vars: self.vars.clone(), terms })
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same_vars(other);
        let mut acc: std::collections::HashMap<Monomial, BigInt> = std::collections::HashMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_default() += c1 * c2;
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        IntMPoly { vars: self.vars.clone(), terms }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.vars);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Total degree ignoring the generator symbol.
    pub fn degree_without_gen(&self) -> Option<u32> {
        let gi = self.gen_index();
        self.terms
            .keys()
            .map(|e| e.iter().enumerate().filter(|(i, _)| Some(*i) != gi).map(|(_, d)| d).sum())
            .max()
    }

    /// Degree in variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// True when every term has the same total degree in the ordinary
    /// variables (the generator symbol is a constant).
    pub fn is_homogeneous(&self) -> bool {
        let gi = self.gen_index();
        let mut deg = None;
        for e in self.terms.keys() {
            let d: u32 = e.iter().enumerate().filter(|(i, _)| Some(*i) != gi).map(|(_, d)| d).sum();
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return false,
                _ => {}
            }
        }
        true
    }

    /// Homogeneous component of degree `d` in the variables selected by `mask`.
    pub fn homogeneous_part(&self, mask: &[bool], d: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().zip(mask).filter(|(_, m)| **m).map(|(x, _)| x).sum::<u32>() == d)
            .map(|(e, c)| (e.clone(), c.clone()));
        Self::from_terms(&self.vars, terms)
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut r = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                r.add_term(e2, c * BigInt::from(e[i]));
            }
        }
        r
    }

    /// Substitutes `value` for variable `i` (over `Z`), keeping the variable
    /// list unchanged.
    pub fn substitute(&self, i: usize, value: &IntMPoly) -> Self {
        self.check_same_vars(value);
        let maxd = self.degree_in(i) as usize;
        let mut powers = vec![Self::one(&self.vars)];
        for k in 1..=maxd {
            powers.push(powers[k - 1].mul(value));
        }
        let mut r = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[i] as usize;
            e2[i] = 0;
            let mono = Self::from_terms(&self.vars, [(e2, c.clone())]);
            r = r.add(&mono.mul(&powers[k]));
        }
        r
    }

    /// Re-expresses this polynomial over a larger variable list containing
    /// all of its variables.
    pub fn lift_to(&self, vars: &[String]) -> Option<Self> {
        let map: Option<Vec<usize>> = self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let map = map?;
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e2 = vec![0; vars.len()];
            for (k, &j) in map.iter().enumerate() {
                e2[j] = e[k];
            }
            (e2, c.clone())
        });
        Some(Self::from_terms(vars, terms))
    }

    /// Reduces coefficients modulo `m` into `[0, m)`, dropping zeros.
    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.mod_floor(m)));
        Self::from_terms(&self.vars, terms)
    }

    /// Evaluates with values supplied for every variable (generator included)
    /// in a commutative ring described by closures.
    pub fn eval_with<T: Clone>(
        &self,
        values: &[T],
        zero: T,
        one: T,
        from_int: impl Fn(&BigInt) -> T,
        add: impl Fn(&T, &T) -> T,
        mul: impl Fn(&T, &T) -> T,
    ) -> T {
        assert_eq!(values.len(), self.vars.len());
        // cache of powers per variable
        let mut powers: Vec<Vec<T>> = values.iter().map(|v| vec![one.clone(), v.clone()]).collect();
        let mut acc = zero;
        for (e, c) in &self.terms {
            let mut t = from_int(c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = mul(powers[i].last().unwrap(), &values[i]);
                    powers[i].push(next);
                }
                t = mul(&t, &powers[i][k]);
            }
            acc = add(&acc, &t);
        }
        acc
    }
}

impl fmt::Debug for IntMPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntMPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest degree first reads more naturally
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| if *k == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], k) })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, mono.join("*"))?;
            }
        }
        Ok(())
    }
}
