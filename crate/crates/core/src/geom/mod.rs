//! Varieties over finite fields and exhaustive point counting.
//!
//! Every [`VarietySpec`] is brought into a normal form: a union of *basic*
//! pieces, each a product of factors `{f_1 = ... = f_k = 0}` inside a fixed
//! list of affine or projective spaces. Unions are counted by
//! inclusion-exclusion and each basic piece by multiplying factor counts.
//! A factor is counted by enumerating all coordinates but one and counting
//! the distinct roots of the remaining univariate system.

pub mod action;
pub mod kernel;
pub mod smooth;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ff::{log_tables, FieldError, FieldOps, FqElem, FqField, LogField, SlowField};
use crate::mpoly::{IntMPoly, GEN_SYMBOL};

pub use action::{quotient_count_by_orbits, quotient_count_free, twisted_count, twisted_counts, GroupAction, PatchMap};
pub use smooth::smoothness_spot_check;

/// Default cap on enumerated prefixes (or ambient points) per task.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("enumeration needs {needed} points, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("equation {index} of a projective variety is not homogeneous")]
    NonHomogeneous { index: usize },
    #[error("variable {0} is not a coordinate of the ambient space")]
    UnknownVariable(String),
    #[error("components do not share the same ambient space")]
    AmbientMismatch,
    #[error("components are defined over different fields")]
    BaseMismatch,
    #[error("closed-point count of degree {degree} is {value}, not a nonnegative integer")]
    InconsistentCounts { degree: usize, value: String },
    #[error("the group action does not map the variety to itself")]
    ActionNotClosed,
    #[error("the generator does not have the declared order")]
    ActionOrderMismatch,
    #[error("the group action has fixed points")]
    ActionNotFree,
    #[error("sum of twisted counts is not divisible by the group order")]
    NonIntegralQuotient,
    #[error("unsupported variety for this operation: {0}")]
    Unsupported(String),
    #[error("fixed point for slot {slot} does not lie on the ambient factor")]
    BadPoint { slot: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AmbientKind {
    Affine,
    Projective,
}

/// `{f_1 = ... = f_k = 0}` inside `A^n` or `P^n`. Equations are over the
/// variable list `coords ++ [g]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub kind: AmbientKind,
    pub n: usize,
    pub coords: Vec<String>,
    pub equations: Vec<IntMPoly>,
}

impl Factor {
    pub fn ncoords(&self) -> usize {
        match self.kind {
            AmbientKind::Affine => self.n,
            AmbientKind::Projective => self.n + 1,
        }
    }

    pub fn vars(&self) -> Vec<String> {
        let mut v = self.coords.clone();
        v.push(GEN_SYMBOL.to_string());
        v
    }

    fn same_ambient(&self, other: &Factor) -> bool {
        self.kind == other.kind && self.n == other.n
    }

    fn with_extra(&self, extra: &[IntMPoly]) -> Factor {
        let mut f = self.clone();
        f.equations.extend(extra.iter().cloned());
        f
    }

    fn key(&self) -> String {
        let mut eqs: Vec<String> = self.equations.iter().map(|e| e.to_string()).collect();
        eqs.sort();
        eqs.dedup();
        format!("{:?}{}|{}", self.kind, self.n, eqs.join(";"))
    }
}

/// A product of factors; one piece of the normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basic {
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug)]
pub enum Shape {
    Space(Factor),
    Product(Vec<VarietySpec>),
    Union(Vec<VarietySpec>),
    /// `curve` placed in slot `slot` of the product `ambient`, the other
    /// slots pinned to `points[j]`.
    TranslateEmbed { curve: Box<VarietySpec>, ambient: Vec<VarietySpec>, slot: usize, points: Vec<Vec<FqElem>> },
}

#[derive(Clone, Debug)]
pub struct VarietySpec {
    pub base: FqField,
    pub shape: Shape,
}

fn lift_equations(coords: &[String], eqs: Vec<IntMPoly>) -> Result<Vec<IntMPoly>, GeomError> {
    let mut vars = coords.to_vec();
    vars.push(GEN_SYMBOL.to_string());
    eqs.into_iter()
        .map(|f| {
            f.lift_to(&vars).ok_or_else(|| {
                let bad = f.vars().iter().find(|v| !vars.contains(v)).cloned().unwrap_or_default();
                GeomError::UnknownVariable(bad)
            })
        })
        .collect()
}

/// The base-field element `sum c_i g^i` as a polynomial in `g`.
pub fn elem_to_poly(field: &FqField, x: FqElem, vars: &[String]) -> IntMPoly {
    let gi = vars.iter().position(|v| v == GEN_SYMBOL).expect("generator variable");
    let mut f = IntMPoly::zero(vars);
    for (i, c) in field.coeffs(x).into_iter().enumerate() {
        let mut e = vec![0; vars.len()];
        e[gi] = i as u32;
        f.add_term(e, BigInt::from(c));
    }
    f
}

impl VarietySpec {
    pub fn affine(base: &FqField, coords: &[&str], eqs: Vec<IntMPoly>) -> Result<Self, GeomError> {
        let coords: Vec<String> = coords.iter().map(|s| s.to_string()).collect();
        let equations = lift_equations(&coords, eqs)?;
        let factor = Factor { kind: AmbientKind::Affine, n: coords.len(), coords, equations };
        Ok(VarietySpec { base: base.clone(), shape: Shape::Space(factor) })
    }

    pub fn projective(base: &FqField, coords: &[&str], eqs: Vec<IntMPoly>) -> Result<Self, GeomError> {
        assert!(!coords.is_empty());
        let coords: Vec<String> = coords.iter().map(|s| s.to_string()).collect();
        let equations = lift_equations(&coords, eqs)?;
        if let Some(index) = equations.iter().position(|f| !f.is_homogeneous()) {
            return Err(GeomError::NonHomogeneous { index });
        }
        let factor = Factor { kind: AmbientKind::Projective, n: coords.len() - 1, coords, equations };
        Ok(VarietySpec { base: base.clone(), shape: Shape::Space(factor) })
    }

    /// A single rational point (`A^0`).
    pub fn point(base: &FqField) -> Self {
        VarietySpec::affine(base, &[], Vec::new()).unwrap()
    }

    pub fn product(parts: Vec<VarietySpec>) -> Result<Self, GeomError> {
        let base = parts.first().ok_or_else(|| GeomError::Unsupported("empty product".into()))?.base.clone();
        if parts.iter().any(|v| v.base != base) {
            return Err(GeomError::BaseMismatch);
        }
        Ok(VarietySpec { base, shape: Shape::Product(parts) })
    }

    pub fn union(parts: Vec<VarietySpec>) -> Result<Self, GeomError> {
        let base = parts.first().ok_or_else(|| GeomError::Unsupported("empty union".into()))?.base.clone();
        if parts.iter().any(|v| v.base != base) {
            return Err(GeomError::BaseMismatch);
        }
        let v = VarietySpec { base, shape: Shape::Union(parts) };
        v.normal_form()?;
        Ok(v)
    }

    pub fn translate_embed(
        curve: VarietySpec,
        ambient: Vec<VarietySpec>,
        slot: usize,
        points: Vec<Vec<FqElem>>,
    ) -> Result<Self, GeomError> {
        let v = VarietySpec { base: curve.base.clone(), shape: Shape::TranslateEmbed { curve: Box::new(curve), ambient, slot, points } };
        v.normal_form()?;
        Ok(v)
    }

    /// The single factor of a plain affine or projective spec.
    pub fn as_factor(&self) -> Option<&Factor> {
        match &self.shape {
            Shape::Space(f) => Some(f),
            _ => None,
        }
    }

    pub fn normal_form(&self) -> Result<Vec<Basic>, GeomError> {
        let basics = match &self.shape {
            Shape::Space(f) => vec![Basic { factors: vec![f.clone()] }],
            Shape::Product(parts) => {
                let mut acc = vec![Basic { factors: Vec::new() }];
                for part in parts {
                    if part.base != self.base {
                        return Err(GeomError::BaseMismatch);
                    }
                    let nf = part.normal_form()?;
                    let mut next = Vec::new();
                    for a in &acc {
                        for b in &nf {
                            let mut factors = a.factors.clone();
                            factors.extend(b.factors.iter().cloned());
                            next.push(Basic { factors });
                        }
                    }
                    acc = next;
                }
                acc
            }
            Shape::Union(parts) => {
                let mut acc: Vec<Basic> = Vec::new();
                for part in parts {
                    if part.base != self.base {
                        return Err(GeomError::BaseMismatch);
                    }
                    acc.extend(part.normal_form()?);
                }
                acc
            }
            Shape::TranslateEmbed { curve, ambient, slot, points } => {
                let curve_factor = single_factor(curve)?;
                let mut factors = Vec::new();
                for (j, amb) in ambient.iter().enumerate() {
                    let af = single_factor(amb)?;
                    if j == *slot {
                        if !af.same_ambient(&curve_factor) {
                            return Err(GeomError::AmbientMismatch);
                        }
                        factors.push(curve_factor.clone());
                        continue;
                    }
                    let pt = points.get(j).ok_or(GeomError::BadPoint { slot: j })?;
                    if pt.len() != af.ncoords() || !self.on_factor(&af, pt)? {
                        return Err(GeomError::BadPoint { slot: j });
                    }
                    let extra = point_equations(&self.base, &af, pt);
                    factors.push(af.with_extra(&extra));
                }
                if *slot >= ambient.len() {
                    return Err(GeomError::Unsupported("slot index out of range".into()));
                }
                vec![Basic { factors }]
            }
        };
        let first = &basics[0];
        for b in &basics[1..] {
            if b.factors.len() != first.factors.len()
                || b.factors.iter().zip(&first.factors).any(|(x, y)| !x.same_ambient(y))
            {
                return Err(GeomError::AmbientMismatch);
            }
        }
        Ok(basics)
    }

    fn on_factor(&self, f: &Factor, pt: &[FqElem]) -> Result<bool, GeomError> {
        if f.kind == AmbientKind::Projective && pt.iter().all(|c| self.base.is_zero(*c)) {
            return Ok(false);
        }
        for e in &f.equations {
            if !self.base.is_zero(self.base.eval(e, pt)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Ambient factors (kind, dimension) shared by all pieces.
    pub fn ambient(&self) -> Result<Vec<(AmbientKind, usize)>, GeomError> {
        Ok(self.normal_form()?[0].factors.iter().map(|f| (f.kind, f.n)).collect())
    }
}

fn single_factor(v: &VarietySpec) -> Result<Factor, GeomError> {
    let nf = v.normal_form()?;
    if nf.len() != 1 || nf[0].factors.len() != 1 {
        return Err(GeomError::Unsupported("expected a single affine or projective variety".into()));
    }
    Ok(nf[0].factors[0].clone())
}

/// Linear equations cutting out one base-field point of a factor's ambient
/// space.
fn point_equations(base: &FqField, f: &Factor, pt: &[FqElem]) -> Vec<IntMPoly> {
    let vars = f.vars();
    let c: Vec<IntMPoly> = pt.iter().map(|&x| elem_to_poly(base, x, &vars)).collect();
    let x: Vec<IntMPoly> = (0..f.ncoords()).map(|i| IntMPoly::var(&vars, i)).collect();
    match f.kind {
        AmbientKind::Affine => (0..f.ncoords()).map(|i| x[i].sub(&c[i])).collect(),
        AmbientKind::Projective => {
            let mut out = Vec::new();
            for i in 0..f.ncoords() {
                for j in i + 1..f.ncoords() {
                    let m = x[i].mul(&c[j]).sub(&x[j].mul(&c[i]));
                    if !m.is_zero() {
                        out.push(m);
                    }
                }
            }
            out
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CountConfig {
    pub budget: u64,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig { budget: DEFAULT_BUDGET }
    }
}

/// Field backend for an extension: log tables when small enough.
pub enum Backend {
    Log(Arc<LogField>),
    Slow(SlowField),
}

impl Backend {
    pub fn new(field: &FqField) -> Self {
        match log_tables(field) {
            Some(t) => Backend::Log(t),
            None => Backend::Slow(SlowField::new(field)),
        }
    }
}

/// Runs `$body` with `$ops` bound to the field backend of `$backend`.
#[macro_export]
macro_rules! with_backend {
    ($backend:expr, $ops:ident => $body:expr) => {
        match $backend {
            $crate::geom::Backend::Log(t) => {
                let $ops: &$crate::ff::LogField = &**t;
                $body
            }
            $crate::geom::Backend::Slow(s) => {
                let $ops: &$crate::ff::SlowField = s;
                $body
            }
        }
    };
}

/// Index of the base generator inside `ext`, cached per pair of fields.
pub fn embedded_generator(base: &FqField, ext: &FqField) -> u64 {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32, u32), u64>>> = OnceLock::new();
    let key = (base.p(), base.degree(), ext.degree());
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&g) = cache.lock().unwrap().get(&key) {
        return g;
    }
    let g = ext.embed_generator(base).expect("base field embeds in its extension").index();
    cache.lock().unwrap().insert(key, g);
    g
}

fn uses_generator(f: &Factor) -> bool {
    let gi = f.ncoords();
    f.equations.iter().any(|e| e.degree_in(gi) > 0)
}

fn ambient_count(kind: AmbientKind, n: usize, q: &BigInt) -> BigInt {
    match kind {
        AmbientKind::Affine => q.pow(n as u32),
        AmbientKind::Projective => (q.pow(n as u32 + 1) - 1u32) / (q - 1u32),
    }
}

/// `|F(F_{q^r})|` for a single factor.
pub fn count_factor(base: &FqField, factor: &Factor, r: u32, cfg: &CountConfig) -> Result<BigInt, GeomError> {
    let q = base.q_big().pow(r);
    if factor.equations.is_empty() {
        return Ok(ambient_count(factor.kind, factor.n, &q));
    }
    let ext = base.extension(r)?;
    let gen_idx = if uses_generator(factor) { embedded_generator(base, &ext) } else { 0 };
    let backend = Backend::new(&ext);
    with_backend!(&backend, ops => {
        let gen = ops.from_index(gen_idx);
        if factor.ncoords() == 0 {
            let ok = factor
                .equations
                .iter()
                .all(|f| ops.is_zero(kernel::CompiledPoly::new(ops, f, gen).eval_at(ops, &[])));
            return Ok(BigInt::from(ok as u32));
        }
        let k = kernel::FactorKernel::new(ops, factor, gen);
        kernel::check_budget(k.prefix_count(), cfg.budget)?;
        Ok(BigInt::from(k.count()))
    })
}

/// The `F_{q^r}`-points of a single affine or projective variety, as
/// elements of `base.extension(r)`, projective points normalized.
pub fn rational_points(v: &VarietySpec, r: u32, cfg: &CountConfig) -> Result<Vec<Vec<FqElem>>, GeomError> {
    let factor = single_factor(v)?;
    let ext = v.base.extension(r)?;
    let gen_idx = embedded_generator(&v.base, &ext);
    let backend = Backend::new(&ext);
    with_backend!(&backend, ops => {
        let gen = ops.from_index(gen_idx);
        let k = kernel::FactorKernel::new(ops, &factor, gen);
        kernel::check_budget(k.prefix_count(), cfg.budget)?;
        let mut pts: Vec<Vec<FqElem>> =
            k.points().iter().map(|p| p.iter().map(|c| ext.from_index(ops.to_index(*c))).collect()).collect();
        pts.sort_by_key(|p| p.iter().map(|c| ext.order_key(*c)).collect::<Vec<_>>());
        Ok(pts)
    })
}

/// Inclusion-exclusion over the pieces of a normal form.
fn count_basics(base: &FqField, basics: &[Basic], r: u32, cfg: &CountConfig) -> Result<BigInt, GeomError> {
    let k = basics.len();
    if k > 16 {
        return Err(GeomError::Unsupported("too many union components".into()));
    }
    let mut memo: HashMap<String, BigInt> = HashMap::new();
    let mut total = BigInt::zero();
    for mask in 1u32..(1 << k) {
        let chosen: Vec<&Basic> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| &basics[i]).collect();
        let mut term = BigInt::one();
        for slot in 0..chosen[0].factors.len() {
            let mut f = chosen[0].factors[slot].clone();
            for b in &chosen[1..] {
                f = f.with_extra(&b.factors[slot].equations);
            }
            let key = f.key();
            let c = match memo.get(&key) {
                Some(c) => c.clone(),
                None => {
                    let c = count_factor(base, &f, r, cfg)?;
                    memo.insert(key, c.clone());
                    c
                }
            };
            term *= c;
            if term.is_zero() {
                break;
            }
        }
        if chosen.len() % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

pub fn count_points(v: &VarietySpec, r: u32) -> Result<BigInt, GeomError> {
    count_points_with(v, r, &CountConfig::default())
}

/// `|V(F_{q^r})|`.
pub fn count_points_with(v: &VarietySpec, r: u32, cfg: &CountConfig) -> Result<BigInt, GeomError> {
    assert!(r >= 1);
    count_basics(&v.base, &v.normal_form()?, r, cfg)
}

/// Direct enumeration of the point set: walks the whole product ambient
/// space and tests membership in any piece. Independent of the elimination
/// kernel and of inclusion-exclusion; only for small cases.
pub fn count_points_flat(v: &VarietySpec, r: u32, cfg: &CountConfig) -> Result<BigInt, GeomError> {
    let basics = v.normal_form()?;
    let ext = v.base.extension(r)?;
    let gen_idx = embedded_generator(&v.base, &ext);
    let backend = Backend::new(&ext);
    with_backend!(&backend, ops => {
        let gen = ops.from_index(gen_idx);
        let slots = basics[0].factors.len();
        let mut needed: u128 = 1;
        // membership[slot][piece] = bitmap over ambient points of that slot
        let mut membership: Vec<Vec<Vec<bool>>> = Vec::new();
        for s in 0..slots {
            let f0 = &basics[0].factors[s];
            let pts = kernel::ambient_points(ops, f0.kind, f0.n);
            needed *= pts.len() as u128;
            kernel::check_budget(needed, cfg.budget)?;
            let per_piece = basics
                .iter()
                .map(|b| {
                    let eqs: Vec<_> = b.factors[s].equations.iter().map(|e| kernel::CompiledPoly::new(ops, e, gen)).collect();
                    pts.iter().map(|pt| eqs.iter().all(|e| ops.is_zero(e.eval_at(ops, pt)))).collect()
                })
                .collect();
            membership.push(per_piece);
        }
        let sizes: Vec<usize> = membership.iter().map(|m| m[0].len()).collect();
        let mut count = 0u64;
        let mut idx = vec![0usize; slots];
        'outer: loop {
            if basics.iter().enumerate().any(|(b, _)| (0..slots).all(|s| membership[s][b][idx[s]])) {
                count += 1;
            }
            for s in 0..slots {
                idx[s] += 1;
                if idx[s] < sizes[s] {
                    continue 'outer;
                }
                idx[s] = 0;
            }
            break;
        }
        Ok(BigInt::from(count))
    })
}

/// Point counts `N_1..N_R` over `F_{q^r}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub q: BigInt,
    pub counts: Vec<BigInt>,
}

impl CountTable {
    pub fn new(q: BigInt, counts: Vec<BigInt>) -> Self {
        CountTable { q, counts }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `N_r`, 1-based.
    pub fn get(&self, r: usize) -> &BigInt {
        &self.counts[r - 1]
    }

    /// Checks that `N_r >= 0` and that the implied numbers of closed points
    /// of each degree are nonnegative integers.
    pub fn check_consistency(&self) -> Result<(), GeomError> {
        for (i, n) in self.counts.iter().enumerate() {
            if n.is_negative() {
                return Err(GeomError::InconsistentCounts { degree: i + 1, value: n.to_string() });
            }
        }
        for d in 1..=self.counts.len() {
            let mut s = BigInt::zero();
            for e in crate::arith::divisors(d as u64) {
                let mu = crate::arith::mobius(d as u64 / e);
                s += self.counts[e as usize - 1].clone() * mu;
            }
            let (a, rem) = s.div_rem(&BigInt::from(d));
            if !rem.is_zero() || a.is_negative() {
                return Err(GeomError::InconsistentCounts { degree: d, value: format!("{}/{}", s, d) });
            }
        }
        Ok(())
    }

    /// Elementwise difference, for counts of complements.
    pub fn minus(&self, other: &CountTable) -> CountTable {
        let counts = self.counts.iter().zip(&other.counts).map(|(a, b)| a - b).collect();
        CountTable { q: self.q.clone(), counts }
    }
}

pub fn count_table(v: &VarietySpec, rmax: usize) -> Result<CountTable, GeomError> {
    count_table_with(v, rmax, &CountConfig::default())
}

pub fn count_table_with(v: &VarietySpec, rmax: usize, cfg: &CountConfig) -> Result<CountTable, GeomError> {
    let counts = (1..=rmax).map(|r| count_points_with(v, r as u32, cfg)).collect::<Result<Vec<_>, _>>()?;
    let t = CountTable { q: v.base.q_big(), counts };
    t.check_consistency()?;
    Ok(t)
}
