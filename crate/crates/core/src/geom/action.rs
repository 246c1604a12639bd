//! Finite cyclic group actions, Frobenius-twisted counts and quotient counts.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::kernel::{self, CompiledPoly};
use super::{count_factor, embedded_generator, AmbientKind, Backend, CountConfig, Factor, GeomError, VarietySpec};
use crate::ff::{FieldOps, FqField};
use crate::mpoly::IntMPoly;
use crate::with_backend;

/// A self-map of one factor given by patches: each patch lists the images
/// of all coordinates; on a projective factor the first patch that does not
/// vanish identically at the point is used.
#[derive(Clone, Debug)]
pub struct PatchMap {
    pub patches: Vec<Vec<IntMPoly>>,
}

/// A cyclic group of order `order` acting factorwise on a product; `None`
/// slots are acted on trivially.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub order: usize,
    pub maps: Vec<Option<PatchMap>>,
}

impl GroupAction {
    pub fn trivial(slots: usize) -> Self {
        GroupAction { order: 1, maps: vec![None; slots] }
    }
}

/// Per-factor data over `F_{q^{rm}}`: twisted counts `T_j` and fixed-point
/// counts of `g^j`, for `j = 0..m`.
#[derive(Clone, Debug)]
struct FactorTwist {
    twisted: Vec<BigInt>,
    fixed: Vec<BigInt>,
}

struct Orbits {
    /// points as element indices
    points: Vec<Vec<u64>>,
    g: Vec<usize>,
    frob: Vec<usize>,
}

fn apply_patch<F: FieldOps>(
    ops: &F,
    kind: AmbientKind,
    patches: &[Vec<CompiledPoly<F::E>>],
    pt: &[F::E],
) -> Option<Vec<F::E>> {
    for patch in patches {
        let img: Vec<F::E> = patch.iter().map(|f| f.eval_at(ops, pt)).collect();
        if kind == AmbientKind::Affine || img.iter().any(|c| !ops.is_zero(*c)) {
            return Some(kernel::normalize(ops, kind, img));
        }
    }
    None
}

/// Lists `V(F_{q^{rm}})` for one factor with the permutations induced by the
/// generator and by `Frob_{q^r}`.
fn factor_orbits(
    base: &FqField,
    factor: &Factor,
    map: Option<&PatchMap>,
    m: usize,
    r: u32,
    cfg: &CountConfig,
) -> Result<Orbits, GeomError> {
    let ext = base.extension(r * m as u32)?;
    let gen_idx = embedded_generator(base, &ext);
    let backend = Backend::new(&ext);
    let qr = base.q().pow(r);
    with_backend!(&backend, ops => {
        let gen = ops.from_index(gen_idx);
        let k = kernel::FactorKernel::new(ops, factor, gen);
        kernel::check_budget(k.prefix_count(), cfg.budget)?;
        let pts = k.points();
        let index: HashMap<Vec<u64>, usize> = pts
            .iter()
            .enumerate()
            .map(|(i, p)| (p.iter().map(|c| ops.to_index(*c)).collect(), i))
            .collect();
        let lookup = |p: &Vec<_>| -> Option<usize> { index.get(&indices(ops, p)).copied() };
        let frob = pts
            .iter()
            .map(|p| {
                let img: Vec<_> = p.iter().map(|c| ops.pow(*c, qr)).collect();
                lookup(&img).ok_or(GeomError::ActionNotClosed)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let g = match map {
            None => (0..pts.len()).collect(),
            Some(pm) => {
                let compiled: Vec<Vec<CompiledPoly<_>>> = pm
                    .patches
                    .iter()
                    .map(|patch| {
                        if patch.len() != factor.ncoords() {
                            return Err(GeomError::Unsupported("patch has the wrong number of coordinates".into()));
                        }
                        Ok(patch.iter().map(|f| CompiledPoly::new(ops, f, gen)).collect())
                    })
                    .collect::<Result<_, GeomError>>()?;
                pts.iter()
                    .map(|p| {
                        let img = apply_patch(ops, factor.kind, &compiled, p).ok_or(GeomError::ActionNotClosed)?;
                        lookup(&img).ok_or(GeomError::ActionNotClosed)
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
        };
        let points = pts.iter().map(|p| p.iter().map(|c| ops.to_index(*c)).collect()).collect();
        Ok(Orbits { points, g, frob })
    })
}

fn indices<F: FieldOps>(ops: &F, p: &[F::E]) -> Vec<u64> {
    p.iter().map(|c| ops.to_index(*c)).collect()
}

fn powers_of(g: &[usize], m: usize) -> Result<Vec<Vec<usize>>, GeomError> {
    let mut pw = vec![(0..g.len()).collect::<Vec<usize>>()];
    for j in 1..=m {
        let prev = &pw[j - 1];
        pw.push(prev.iter().map(|&i| g[i]).collect());
    }
    if pw[m] != pw[0] {
        return Err(GeomError::ActionOrderMismatch);
    }
    pw.truncate(m);
    Ok(pw)
}

fn factor_twist(
    base: &FqField,
    factor: &Factor,
    map: Option<&PatchMap>,
    m: usize,
    r: u32,
    cfg: &CountConfig,
) -> Result<FactorTwist, GeomError> {
    if map.is_none() {
        let n_r = count_factor(base, factor, r, cfg)?;
        let n_rm = count_factor(base, factor, r * m as u32, cfg)?;
        return Ok(FactorTwist { twisted: vec![n_r; m], fixed: vec![n_rm; m] });
    }
    let o = factor_orbits(base, factor, map, m, r, cfg)?;
    let pw = powers_of(&o.g, m)?;
    let twisted = pw
        .iter()
        .map(|gj| BigInt::from(o.frob.iter().zip(gj).filter(|(a, b)| a == b).count()))
        .collect();
    let fixed = pw
        .iter()
        .map(|gj| BigInt::from(gj.iter().enumerate().filter(|(i, b)| i == *b).count()))
        .collect();
    Ok(FactorTwist { twisted, fixed })
}

fn factors_for_action(v: &VarietySpec, action: &GroupAction) -> Result<Vec<Factor>, GeomError> {
    let nf = v.normal_form()?;
    if nf.len() != 1 {
        return Err(GeomError::Unsupported("group actions need a product of factors, not a union".into()));
    }
    let factors = nf[0].factors.clone();
    if factors.len() != action.maps.len() {
        return Err(GeomError::Unsupported("action has the wrong number of slots".into()));
    }
    if action.order == 0 {
        return Err(GeomError::ActionOrderMismatch);
    }
    Ok(factors)
}

fn twists(v: &VarietySpec, action: &GroupAction, r: u32, cfg: &CountConfig) -> Result<Vec<FactorTwist>, GeomError> {
    let factors = factors_for_action(v, action)?;
    factors
        .iter()
        .zip(&action.maps)
        .map(|(f, m)| factor_twist(&v.base, f, m.as_ref(), action.order, r, cfg))
        .collect()
}

/// `T_j = #{x in V(F_{q^{rm}}) : Frob_{q^r}(x) = g^j(x)}` for `j = 0..m`.
pub fn twisted_counts(v: &VarietySpec, action: &GroupAction, r: u32, cfg: &CountConfig) -> Result<Vec<BigInt>, GeomError> {
    let tw = twists(v, action, r, cfg)?;
    Ok((0..action.order)
        .map(|j| tw.iter().fold(BigInt::one(), |acc, t| acc * &t.twisted[j]))
        .collect())
}

/// Twisted count for the generator `g`.
pub fn twisted_count(v: &VarietySpec, action: &GroupAction, r: u32, cfg: &CountConfig) -> Result<BigInt, GeomError> {
    let t = twisted_counts(v, action, r, cfg)?;
    Ok(t[1 % action.order].clone())
}

/// `|(V/G)(F_{q^r})| = (1/|G|) sum_j T_j` for a free action.
pub fn quotient_count_free(v: &VarietySpec, action: &GroupAction, r: u32, cfg: &CountConfig) -> Result<BigInt, GeomError> {
    let tw = twists(v, action, r, cfg)?;
    let m = action.order;
    for j in 1..m {
        let fixed = tw.iter().fold(BigInt::one(), |acc, t| acc * &t.fixed[j]);
        if !fixed.is_zero() {
            return Err(GeomError::ActionNotFree);
        }
    }
    let total: BigInt = (0..m).map(|j| tw.iter().fold(BigInt::one(), |acc, t| acc * &t.twisted[j])).sum();
    let (qt, rem) = total.div_rem(&BigInt::from(m));
    if !rem.is_zero() {
        return Err(GeomError::NonIntegralQuotient);
    }
    Ok(qt)
}

/// Quotient count by listing the orbits of `G` on the product points over
/// `F_{q^{rm}}` and keeping those mapped to themselves by `Frob_{q^r}`.
pub fn quotient_count_by_orbits(v: &VarietySpec, action: &GroupAction, r: u32, cfg: &CountConfig) -> Result<BigInt, GeomError> {
    let factors = factors_for_action(v, action)?;
    let m = action.order;
    let per: Vec<Orbits> = factors
        .iter()
        .zip(&action.maps)
        .map(|(f, map)| factor_orbits(&v.base, f, map.as_ref(), m, r, cfg))
        .collect::<Result<_, _>>()?;
    let sizes: Vec<usize> = per.iter().map(|o| o.points.len()).collect();
    let total: u128 = sizes.iter().map(|&s| s as u128).product();
    kernel::check_budget(total, cfg.budget)?;
    if total == 0 {
        return Ok(BigInt::zero());
    }
    let encode = |idx: &[usize]| -> usize { idx.iter().zip(&sizes).rev().fold(0, |acc, (i, s)| acc * s + i) };
    let decode = |mut k: usize| -> Vec<usize> {
        sizes
            .iter()
            .map(|s| {
                let i = k % s;
                k /= s;
                i
            })
            .collect()
    };
    let apply = |k: usize, which: &dyn Fn(&Orbits) -> &Vec<usize>| -> usize {
        let idx = decode(k);
        let img: Vec<usize> = idx.iter().zip(&per).map(|(&i, o)| which(o)[i]).collect();
        encode(&img)
    };
    let mut seen = vec![false; total as usize];
    let mut stable = 0u64;
    for start in 0..total as usize {
        if seen[start] {
            continue;
        }
        let mut orbit = HashSet::new();
        let mut cur = start;
        loop {
            orbit.insert(cur);
            seen[cur] = true;
            cur = apply(cur, &|o| &o.g);
            if cur == start {
                break;
            }
            if orbit.len() > m {
                return Err(GeomError::ActionOrderMismatch);
            }
        }
        if orbit.len() != m {
            return Err(GeomError::ActionNotFree);
        }
        if orbit.contains(&apply(start, &|o| &o.frob)) {
            stable += 1;
        }
    }
    Ok(BigInt::from(stable))
}
