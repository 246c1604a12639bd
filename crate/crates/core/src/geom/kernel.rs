//! Enumeration kernels: compiled polynomial evaluation, univariate root
//! counting over `F_Q`, and point counting/listing for a single factor.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{AmbientKind, Factor, GeomError};
use crate::ff::FieldOps;
use crate::mpoly::IntMPoly;

/// A polynomial in the factor coordinates with the generator symbol folded
/// into the coefficients.
#[derive(Clone, Debug)]
pub struct CompiledPoly<E> {
    terms: Vec<(E, Vec<(usize, u32)>)>,
}

impl<E: Copy> CompiledPoly<E> {
    /// `f` has variables `coords ++ [g]`; `gen` is the value of `g`.
    pub fn new<F: FieldOps<E = E>>(ops: &F, f: &IntMPoly, gen: E) -> Self {
        let gi = f.gen_index();
        let p = BigInt::from(ops.p());
        let mut terms = Vec::new();
        for (e, c) in f.terms() {
            let c = c.mod_floor(&p).to_u64().unwrap();
            if c == 0 {
                continue;
            }
            let mut coef = ops.from_index(c);
            let mut mono = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if Some(i) == gi {
                    coef = ops.mul(coef, ops.pow(gen, k as u64));
                } else {
                    mono.push((i, k));
                }
            }
            if !ops.is_zero(coef) {
                terms.push((coef, mono));
            }
        }
        CompiledPoly { terms }
    }

    pub fn max_degrees(&self, nvars: usize) -> Vec<u32> {
        let mut d = vec![0; nvars];
        for (_, mono) in &self.terms {
            for &(i, k) in mono {
                d[i] = d[i].max(k);
            }
        }
        d
    }

    pub fn eval<F: FieldOps<E = E>>(&self, ops: &F, pw: &PowerTable<E>) -> E {
        let mut acc = ops.zero();
        for (c, mono) in &self.terms {
            let mut t = *c;
            for &(i, k) in mono {
                t = ops.mul(t, pw.get(i, k));
            }
            acc = ops.add(acc, t);
        }
        acc
    }

    pub fn eval_at<F: FieldOps<E = E>>(&self, ops: &F, point: &[E]) -> E {
        let maxd = self.max_degrees(point.len());
        let pw = PowerTable::new(ops, point, &maxd);
        self.eval(ops, &pw)
    }
}

/// Powers `x_i^k` for `k <= maxdeg[i]`.
pub struct PowerTable<E> {
    rows: Vec<Vec<E>>,
}

impl<E: Copy> PowerTable<E> {
    pub fn new<F: FieldOps<E = E>>(ops: &F, point: &[E], maxdeg: &[u32]) -> Self {
        let rows = point
            .iter()
            .zip(maxdeg)
            .map(|(&x, &d)| {
                let mut row = Vec::with_capacity(d as usize + 1);
                row.push(ops.one());
                for k in 1..=d as usize {
                    row.push(ops.mul(row[k - 1], x));
                }
                row
            })
            .collect();
        PowerTable { rows }
    }

    #[inline]
    pub fn get(&self, i: usize, k: u32) -> E {
        self.rows[i][k as usize]
    }
}

// --- univariate polynomials over F_Q, low degree first ---

fn utrim<F: FieldOps>(ops: &F, mut v: Vec<F::E>) -> Vec<F::E> {
    while v.last().is_some_and(|c| ops.is_zero(*c)) {
        v.pop();
    }
    v
}

fn urem<F: FieldOps>(ops: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let mut r = utrim(ops, a.to_vec());
    let db = b.len() - 1;
    let inv = ops.inv(b[db]);
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = ops.mul(r[r.len() - 1], inv);
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] = ops.sub(r[k + i], ops.mul(c, bi));
        }
        r = utrim(ops, r);
    }
    r
}

fn umul<F: FieldOps>(ops: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![ops.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if ops.is_zero(x) {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = ops.add(r[i + j], ops.mul(x, y));
        }
    }
    utrim(ops, r)
}

fn ugcd<F: FieldOps>(ops: &F, a: Vec<F::E>, b: Vec<F::E>) -> Vec<F::E> {
    let (mut a, mut b) = (utrim(ops, a), utrim(ops, b));
    while !b.is_empty() {
        let r = urem(ops, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn umonic<F: FieldOps>(ops: &F, a: Vec<F::E>) -> Vec<F::E> {
    let inv = ops.inv(*a.last().unwrap());
    a.into_iter().map(|c| ops.mul(c, inv)).collect()
}

/// `gcd(h, y^Q - y)`: the product of the distinct roots of `h` in `F_Q`.
fn split_part<F: FieldOps>(ops: &F, h: &[F::E]) -> Vec<F::E> {
    let q = ops.q();
    let mut acc = vec![ops.one()];
    let x = urem(ops, &[ops.zero(), ops.one()], h);
    for i in (0..64 - q.leading_zeros()).rev() {
        acc = urem(ops, &umul(ops, &acc, &acc), h);
        if (q >> i) & 1 == 1 {
            acc = urem(ops, &umul(ops, &acc, &x), h);
        }
    }
    let mut t = acc;
    t.resize(t.len().max(2), ops.zero());
    t[1] = ops.sub(t[1], ops.one());
    ugcd(ops, h.to_vec(), t)
}

/// Number of distinct roots in `F_Q` of a nonzero polynomial.
pub fn count_roots<F: FieldOps>(ops: &F, h: &[F::E]) -> u64 {
    let h = utrim(ops, h.to_vec());
    match h.len() {
        0 => ops.q(),
        1 => 0,
        2 => 1,
        3 => {
            let h = umonic(ops, h);
            let (c, b) = (h[0], h[1]);
            if ops.p() == 2 {
                if ops.is_zero(b) {
                    1
                } else {
                    let d = ops.mul(c, ops.inv(ops.mul(b, b)));
                    if ops.trace_f2(d) == 0 {
                        2
                    } else {
                        0
                    }
                }
            } else {
                let four = ops.from_index(4 % ops.p() as u64);
                let disc = ops.sub(ops.mul(b, b), ops.mul(four, c));
                if ops.is_zero(disc) {
                    1
                } else if ops.is_square(disc) {
                    2
                } else {
                    0
                }
            }
        }
        _ => (split_part(ops, &h).len() - 1) as u64,
    }
}

/// The distinct roots in `F_Q` of a nonzero polynomial.
pub fn find_roots<F: FieldOps>(ops: &F, h: &[F::E]) -> Vec<F::E> {
    let h = utrim(ops, h.to_vec());
    match h.len() {
        0 => (0..ops.q()).map(|i| ops.from_index(i)).collect(),
        1 => Vec::new(),
        2 => vec![ops.neg(ops.mul(h[0], ops.inv(h[1])))],
        3 => {
            let h = umonic(ops, h);
            let (c, b) = (h[0], h[1]);
            if ops.p() == 2 {
                if ops.is_zero(b) {
                    vec![ops.sqrt(c).unwrap()]
                } else {
                    let d = ops.mul(c, ops.inv(ops.mul(b, b)));
                    match ops.solve_artin_schreier(d) {
                        Some(u) => vec![ops.mul(b, u), ops.mul(b, ops.add(u, ops.one()))],
                        None => Vec::new(),
                    }
                }
            } else {
                let four = ops.from_index(4 % ops.p() as u64);
                let disc = ops.sub(ops.mul(b, b), ops.mul(four, c));
                let inv2 = ops.inv(ops.from_index(2));
                match ops.sqrt(disc) {
                    None => Vec::new(),
                    Some(s) if ops.is_zero(s) => vec![ops.neg(ops.mul(b, inv2))],
                    Some(s) => vec![
                        ops.mul(ops.sub(s, b), inv2),
                        ops.mul(ops.sub(ops.neg(s), b), inv2),
                    ],
                }
            }
        }
        _ => {
            let s = split_part(ops, &h);
            if s.len() <= 3 {
                find_roots(ops, &s)
            } else {
                (0..ops.q())
                    .map(|i| ops.from_index(i))
                    .filter(|&y| {
                        let mut acc = ops.zero();
                        for &c in s.iter().rev() {
                            acc = ops.add(ops.mul(acc, y), c);
                        }
                        ops.is_zero(acc)
                    })
                    .collect()
            }
        }
    }
}

/// A factor compiled for a given extension field, split along the
/// elimination variable.
pub struct FactorKernel<'a, F: FieldOps> {
    ops: &'a F,
    kind: AmbientKind,
    ncoords: usize,
    elim: usize,
    others: Vec<usize>,
    /// per equation, coefficients of `x_elim^d`
    coeffs: Vec<Vec<CompiledPoly<F::E>>>,
    full: Vec<CompiledPoly<F::E>>,
    maxdeg: Vec<u32>,
}

impl<'a, F: FieldOps> FactorKernel<'a, F> {
    pub fn new(ops: &'a F, factor: &Factor, gen: F::E) -> Self {
        let m = factor.ncoords();
        // eliminate the variable of least maximal degree (ties: the last)
        let elim = (0..m)
            .rev()
            .min_by_key(|&i| factor.equations.iter().map(|f| f.degree_in(i)).max().unwrap_or(0))
            .unwrap_or(0);
        let others: Vec<usize> = (0..m).filter(|&i| i != elim).collect();
        let mut coeffs = Vec::new();
        let mut full = Vec::new();
        let mut maxdeg = vec![0u32; m];
        for f in &factor.equations {
            let d = f.degree_in(elim);
            let mut parts = vec![IntMPoly::zero(f.vars()); d as usize + 1];
            for (e, c) in f.terms() {
                let mut e2 = e.clone();
                let k = e2[elim] as usize;
                e2[elim] = 0;
                parts[k].add_term(e2, c.clone());
            }
            let compiled: Vec<CompiledPoly<F::E>> = parts.iter().map(|g| CompiledPoly::new(ops, g, gen)).collect();
            for c in &compiled {
                for (i, d) in c.max_degrees(m).into_iter().enumerate() {
                    maxdeg[i] = maxdeg[i].max(d);
                }
            }
            coeffs.push(compiled);
            let cf = CompiledPoly::new(ops, f, gen);
            for (i, d) in cf.max_degrees(m).into_iter().enumerate() {
                maxdeg[i] = maxdeg[i].max(d);
            }
            full.push(cf);
        }
        FactorKernel { ops, kind: factor.kind, ncoords: m, elim, others, coeffs, full, maxdeg }
    }

    /// Number of prefixes (assignments of the non-eliminated coordinates).
    pub fn prefix_count(&self) -> u128 {
        let q = self.ops.q() as u128;
        let c = self.others.len() as u32;
        match self.kind {
            AmbientKind::Affine => q.pow(c),
            AmbientKind::Projective => (0..c).map(|j| q.pow(c - 1 - j)).sum::<u128>() + 1,
        }
    }

    fn gcd_at(&self, point: &[F::E]) -> Vec<F::E> {
        let ops = self.ops;
        let pw = PowerTable::new(ops, point, &self.maxdeg);
        let mut g: Vec<F::E> = Vec::new();
        for eq in &self.coeffs {
            let u: Vec<F::E> = eq.iter().map(|c| c.eval(ops, &pw)).collect();
            g = ugcd(ops, g, u);
            if g.len() == 1 {
                break;
            }
        }
        g
    }

    /// Visits every prefix block: positions of the `others` coordinates that
    /// are fixed (value index) and the free ones.
    fn blocks(&self) -> Vec<(Vec<(usize, u64)>, Vec<usize>)> {
        match self.kind {
            AmbientKind::Affine => vec![(Vec::new(), self.others.clone())],
            AmbientKind::Projective => (0..self.others.len())
                .map(|j| {
                    let mut fixed: Vec<(usize, u64)> = self.others[..j].iter().map(|&i| (i, 0)).collect();
                    fixed.push((self.others[j], 1));
                    (fixed, self.others[j + 1..].to_vec())
                })
                .collect(),
        }
    }

    fn point_for(&self, fixed: &[(usize, u64)], free: &[usize], mut k: u64) -> Vec<F::E> {
        let ops = self.ops;
        let q = ops.q();
        let mut pt = vec![ops.zero(); self.ncoords];
        for &(i, v) in fixed {
            pt[i] = ops.from_index(v);
        }
        for &i in free {
            pt[i] = ops.from_index(k % q);
            k /= q;
        }
        pt
    }

    fn apex(&self) -> Vec<F::E> {
        let mut pt = vec![self.ops.zero(); self.ncoords];
        pt[self.elim] = self.ops.one();
        pt
    }

    fn satisfies(&self, pt: &[F::E]) -> bool {
        let pw = PowerTable::new(self.ops, pt, &self.maxdeg);
        self.full.iter().all(|f| self.ops.is_zero(f.eval(self.ops, &pw)))
    }

    pub fn count(&self) -> u64 {
        let q = self.ops.q();
        let mut total = 0u64;
        if self.kind == AmbientKind::Projective && self.satisfies(&self.apex()) {
            total += 1;
        }
        for (fixed, free) in self.blocks() {
            let n = q.pow(free.len() as u32);
            total += par_chunks(n)
                .map(|range| {
                    range
                        .map(|k| {
                            let pt = self.point_for(&fixed, &free, k);
                            count_roots(self.ops, &self.gcd_at(&pt))
                        })
                        .sum::<u64>()
                })
                .sum::<u64>();
        }
        total
    }

    /// All points, projective ones normalized with first nonzero coordinate 1.
    pub fn points(&self) -> Vec<Vec<F::E>> {
        let ops = self.ops;
        let q = ops.q();
        let mut out = Vec::new();
        if self.kind == AmbientKind::Projective && self.satisfies(&self.apex()) {
            out.push(self.apex());
        }
        for (fixed, free) in self.blocks() {
            let n = q.pow(free.len() as u32);
            let chunk: Vec<Vec<Vec<F::E>>> = par_chunks(n)
                .map(|range| {
                    let mut found = Vec::new();
                    for k in range {
                        let pt = self.point_for(&fixed, &free, k);
                        for y in find_roots(ops, &self.gcd_at(&pt)) {
                            let mut full = pt.clone();
                            full[self.elim] = y;
                            found.push(normalize(ops, self.kind, full));
                        }
                    }
                    found
                })
                .collect();
            out.extend(chunk.into_iter().flatten());
        }
        out
    }
}

/// Splits `0..n` into ranges processed in parallel, in order.
fn par_chunks(n: u64) -> impl IndexedParallelIterator<Item = std::ops::Range<u64>> {
    const CHUNK: u64 = 512;
    let nchunks = n.div_ceil(CHUNK) as usize;
    (0..nchunks).into_par_iter().map(move |c| {
        let lo = c as u64 * CHUNK;
        lo..(lo + CHUNK).min(n)
    })
}

/// Scales a projective tuple so that its first nonzero coordinate is 1.
pub fn normalize<F: FieldOps>(ops: &F, kind: AmbientKind, mut pt: Vec<F::E>) -> Vec<F::E> {
    if kind == AmbientKind::Projective {
        if let Some(&lead) = pt.iter().find(|c| !ops.is_zero(**c)) {
            let inv = ops.inv(lead);
            for c in pt.iter_mut() {
                *c = ops.mul(*c, inv);
            }
        }
    }
    pt
}

/// Every point of the ambient space, projective ones normalized.
pub fn ambient_points<F: FieldOps>(ops: &F, kind: AmbientKind, n: usize) -> Vec<Vec<F::E>> {
    let q = ops.q();
    let mut out = Vec::new();
    let push_free = |prefix: Vec<F::E>, free: usize, out: &mut Vec<Vec<F::E>>| {
        for mut k in 0..q.pow(free as u32) {
            let mut pt = prefix.clone();
            for _ in 0..free {
                pt.push(ops.from_index(k % q));
                k /= q;
            }
            out.push(pt);
        }
    };
    match kind {
        AmbientKind::Affine => push_free(Vec::new(), n, &mut out),
        AmbientKind::Projective => {
            for j in 0..=n {
                let mut prefix = vec![ops.zero(); j];
                prefix.push(ops.one());
                push_free(prefix, n - j, &mut out);
            }
        }
    }
    out
}

/// Brute-force count: evaluates every equation at every ambient point.
pub fn brute_count<F: FieldOps>(ops: &F, factor: &Factor, gen: F::E) -> u64 {
    let eqs: Vec<CompiledPoly<F::E>> = factor.equations.iter().map(|f| CompiledPoly::new(ops, f, gen)).collect();
    ambient_points(ops, factor.kind, factor.n)
        .par_iter()
        .filter(|pt| eqs.iter().all(|f| ops.is_zero(f.eval_at(ops, pt))))
        .count() as u64
}

pub fn check_budget(needed: u128, budget: u64) -> Result<(), GeomError> {
    if needed > budget as u128 {
        Err(GeomError::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}
