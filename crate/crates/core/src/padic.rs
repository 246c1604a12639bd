//! p-adic Newton polygons and slope factorization of integer polynomials
//! with constant term 1, at a fixed working precision `p^M`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{mod_inverse, vp};
use crate::upoly::{self, ZPoly};
use crate::zeta::RationalZeta;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("polynomial must have constant term 1 and be nonzero")]
    BadNormalization,
    #[error("index {k} is not an interior vertex of the Newton polygon")]
    NotAVertex { k: usize },
    #[error("slope splitting unstable at precision p^{precision}")]
    PrecisionLoss { precision: u32 },
}

/// Number of doublings tried after the first `PrecisionLoss`.
pub const MAX_RETRIES: u32 = 2;

/// Default working precision in `p`-digits for `q = p^a`.
pub fn default_precision(a: u32) -> u32 {
    24 * a
}

/// An integer modulo `p^M` with valuations normalized by `v_q(q) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicScalar {
    pub p: u32,
    pub a: u32,
    pub value: BigInt,
    pub precision: u32,
}

impl PadicScalar {
    pub fn new(p: u32, a: u32, value: &BigInt, precision: u32) -> Self {
        let pm = BigInt::from(p).pow(precision);
        PadicScalar { p, a, value: value.mod_floor(&pm), precision }
    }

    /// `true` when the value vanishes at this precision.
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn v_p(&self) -> Option<u32> {
        vp(&self.value, self.p)
    }

    pub fn v_q(&self) -> Option<BigRational> {
        self.v_p().map(|v| BigRational::new(v.into(), self.a.into()))
    }
}

/// Lower convex hull of the points `(i, v_p(a_i))`; valuations are scaled
/// by `1/a` in the public fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(usize, BigRational)>,
    /// `(lambda, multiplicity)` in increasing order of `lambda`.
    pub slopes: Vec<(BigRational, usize)>,
    /// vertex heights in `p`-digits
    raw: Vec<(usize, i64)>,
}

impl NewtonPolygon {
    /// Interior vertex abscissae.
    pub fn interior_vertices(&self) -> Vec<usize> {
        self.raw[1..self.raw.len().saturating_sub(1)].iter().map(|v| v.0).collect()
    }

    pub fn degree(&self) -> usize {
        self.raw.last().map_or(0, |v| v.0)
    }

    /// Slopes listed with multiplicity.
    pub fn slope_multiset(&self) -> Vec<BigRational> {
        self.slopes.iter().flat_map(|(l, m)| std::iter::repeat_n(l.clone(), *m)).collect()
    }

    /// Slope in `p`-digits of the segment ending at `raw[i]`.
    fn raw_slope(&self, i: usize) -> BigRational {
        let (x0, y0) = self.raw[i - 1];
        let (x1, y1) = self.raw[i];
        BigRational::new((y1 - y0).into(), ((x1 - x0) as i64).into())
    }
}

fn hull(points: &[(usize, i64)]) -> Vec<(usize, i64)> {
    let mut h: Vec<(usize, i64)> = Vec::new();
    for &pt in points {
        while h.len() >= 2 {
            let (x1, y1) = h[h.len() - 2];
            let (x2, y2) = h[h.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            let cross = (x2 as i64 - x1 as i64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as i64 - x1 as i64);
            if cross <= 0 {
                h.pop();
            } else {
                break;
            }
        }
        h.push(pt);
    }
    h
}

fn polygon_from_valuations(vals: &[Option<u32>], a: u32) -> NewtonPolygon {
    let points: Vec<(usize, i64)> = vals.iter().enumerate().filter_map(|(i, v)| v.map(|v| (i, v as i64))).collect();
    let raw = hull(&points);
    let ar = BigRational::from_integer(a.into());
    let vertices = raw.iter().map(|&(i, v)| (i, BigRational::from_integer(v.into()) / &ar)).collect();
    let slopes = raw
        .windows(2)
        .map(|w| {
            let len = w[1].0 - w[0].0;
            (BigRational::new((w[1].1 - w[0].1).into(), (len as i64).into()) / &ar, len)
        })
        .collect();
    NewtonPolygon { vertices, slopes, raw }
}

/// Newton polygon of `f` with `f(0) = 1`, slopes in `v_q` units.
pub fn newton_polygon(f: &[BigInt], p: u32, a: u32) -> Result<NewtonPolygon, PadicError> {
    let f = upoly::trim(f.to_vec());
    if !f.first().is_some_and(|c| c.is_one()) {
        return Err(PadicError::BadNormalization);
    }
    let vals: Vec<Option<u32>> = f.iter().map(|c| vp(c, p)).collect();
    Ok(polygon_from_valuations(&vals, a))
}

/// Newton polygon of a polynomial known modulo `p^m`; coefficients that
/// vanish at that precision are skipped.
fn polygon_mod(f: &[BigInt], p: u32, a: u32, pm: &BigInt) -> NewtonPolygon {
    let vals: Vec<Option<u32>> = f.iter().map(|c| vp(&c.mod_floor(pm), p)).collect();
    polygon_from_valuations(&vals, a)
}

/// Representative in `(-p^m/2, p^m/2]`.
pub fn sym_mod(x: &BigInt, pm: &BigInt) -> BigInt {
    let r = x.mod_floor(pm);
    if &r * 2 > *pm {
        r - pm
    } else {
        r
    }
}

fn reduce(f: &[BigInt], pm: &BigInt) -> ZPoly {
    upoly::trim(f.iter().map(|c| sym_mod(c, pm)).collect())
}

/// `f / h mod (t^len, p^N)` for `h(0) = 1`.
fn series_div(f: &[BigInt], h: &[BigInt], len: usize, pn: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::with_capacity(len);
    for k in 0..len {
        let mut s = f.get(k).cloned().unwrap_or_default();
        for i in 1..=k.min(h.len().saturating_sub(1)) {
            s -= &h[i] * &out[k - i];
        }
        out.push(s.mod_floor(pn));
    }
    out
}

struct Split {
    g: Vec<BigInt>,
    h: Vec<BigInt>,
    /// every division by the top coefficient of `g` was exact in `Z_p`
    integral: bool,
}

/// Splits `f = g h` at the vertex `raw[vi]` of its polygon, working
/// modulo `p^n`.
///
/// Alternates `g <- f/h mod t^{k+1}` with `h <- ` the quotient of `f` by `g`
/// computed from the top coefficient. The error contracts by the slope gap
/// at the vertex on each pass, so convergence is linear.
fn split_at(f: &[BigInt], poly: &NewtonPolygon, vi: usize, p: u32, n: u32) -> Split {
    let pb = BigInt::from(p);
    let pn = pb.pow(n);
    let k = poly.raw[vi].0;
    let deg = poly.degree();
    let v = poly.raw[vi].1 as u32;
    let gap = poly.raw_slope(vi + 1) - poly.raw_slope(vi);
    let iters = (BigRational::from_integer((2 * n + 8).into()) / gap).ceil().to_integer().to_usize().unwrap() + 4;
    let pv = pb.pow(v);
    let pnv = pb.pow(n.saturating_sub(v).max(1));
    let mut h: Vec<BigInt> = vec![BigInt::one()];
    let mut g: Vec<BigInt> = Vec::new();
    let mut integral = true;
    for it in 0..iters {
        g = series_div(f, &h, k + 1, &pn);
        let lc = g[k].clone();
        let unit = &lc / &pv;
        let Some(inv) = mod_inverse(&unit, &pnv) else {
            // top coefficient lost its expected valuation
            integral = false;
            break;
        };
        let last = it + 1 == iters;
        let mut r: Vec<BigInt> = f.iter().map(|c| c.mod_floor(&pn)).collect();
        r.resize(deg + 1, BigInt::zero());
        let mut qt = vec![BigInt::zero(); deg - k + 1];
        for j in (0..=deg - k).rev() {
            let top = r[j + k].mod_floor(&pn);
            let (hi, lo) = top.div_rem(&pv);
            if last && !lo.is_zero() {
                integral = false;
            }
            let c = (hi * &inv).mod_floor(&pn);
            for (i, gi) in g.iter().enumerate() {
                r[i + j] -= &c * gi;
            }
            qt[j] = c;
        }
        h = qt;
    }
    Split { g, h, integral }
}

/// Splits `f` at the interior vertex `k`: `g` (degree `k`) carries the
/// slopes left of the vertex. Results are reduced modulo `p^m`, checked by
/// `g h = f mod p^m` and by recomputation at precision `2m`.
pub fn slope_split(f: &[BigInt], k: usize, p: u32, a: u32, m: u32) -> Result<(ZPoly, ZPoly), PadicError> {
    let poly = newton_polygon(f, p, a)?;
    let Some(vi) = poly.raw.iter().position(|v| v.0 == k).filter(|&i| i > 0 && i + 1 < poly.raw.len()) else {
        return Err(PadicError::NotAVertex { k });
    };
    let pm = BigInt::from(p).pow(m);
    let run = |prec: u32| -> Result<(ZPoly, ZPoly), PadicError> {
        let s = split_at(f, &poly, vi, p, prec + guard(&poly));
        if !s.integral {
            return Err(PadicError::PrecisionLoss { precision: m });
        }
        Ok((reduce(&s.g, &pm), reduce(&s.h, &pm)))
    };
    let (g, h) = run(m)?;
    if run(2 * m)? != (g.clone(), h.clone()) || reduce(&upoly::sub(&upoly::mul(&g, &h), f), &pm).iter().any(|c| !c.is_zero()) {
        return Err(PadicError::PrecisionLoss { precision: m });
    }
    Ok((g, h))
}

fn guard(poly: &NewtonPolygon) -> u32 {
    let top = poly.raw.iter().map(|v| v.1).max().unwrap_or(0) as u32;
    top * (poly.degree() as u32 + 1) + 8
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeFactor {
    pub lambda: BigRational,
    /// constant term 1, coefficients as symmetric residues mod `p^M`
    pub factor: ZPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeFactorization {
    pub p: u32,
    pub a: u32,
    pub precision: u32,
    pub factors: Vec<SlopeFactor>,
    /// all top-coefficient divisions were exact: the factors lie in `Z_p[t]`
    pub integral: bool,
}

impl SlopeFactorization {
    pub fn modulus(&self) -> BigInt {
        BigInt::from(self.p).pow(self.precision)
    }

    /// Product of the factors with slope `< rho`, reduced mod `p^M`.
    pub fn slope_lt(&self, rho: &BigRational) -> ZPoly {
        let pm = self.modulus();
        let prod = self.factors.iter().filter(|f| &f.lambda < rho).fold(upoly::one(), |acc, f| upoly::mul(&acc, &f.factor));
        reduce(&prod, &pm)
    }
}

fn factorization_at(f: &[BigInt], poly: &NewtonPolygon, p: u32, m: u32) -> (Vec<ZPoly>, bool) {
    let n = m + guard(poly);
    let pn = BigInt::from(p).pow(n);
    let pm = BigInt::from(p).pow(m);
    let mut integral = true;
    let mut prev: Vec<BigInt> = vec![BigInt::one()];
    let mut prev_k = 0;
    let mut out = Vec::new();
    for vi in 1..poly.raw.len() - 1 {
        let k = poly.raw[vi].0;
        let s = split_at(f, poly, vi, p, n);
        integral &= s.integral;
        out.push(reduce(&series_div(&s.g, &prev, k - prev_k + 1, &pn), &pm));
        prev = s.g;
        prev_k = k;
    }
    let deg = poly.degree();
    out.push(reduce(&series_div(f, &prev, deg - prev_k + 1, &pn), &pm));
    (out, integral)
}

/// Factors `f` into single-slope pieces modulo `p^m`.
pub fn slope_factorization(f: &[BigInt], p: u32, a: u32, m: u32) -> Result<SlopeFactorization, PadicError> {
    let f = upoly::trim(f.to_vec());
    let poly = newton_polygon(&f, p, a)?;
    let pm = BigInt::from(p).pow(m);
    let loss = PadicError::PrecisionLoss { precision: m };
    if poly.degree() == 0 {
        return Ok(SlopeFactorization { p, a, precision: m, factors: Vec::new(), integral: true });
    }
    let (factors, integral) = factorization_at(&f, &poly, p, m);
    let (again, _) = factorization_at(&f, &poly, p, 2 * m);
    let again: Vec<ZPoly> = again.iter().map(|g| reduce(g, &pm)).collect();
    if again != factors {
        return Err(loss);
    }
    let prod = factors.iter().fold(upoly::one(), |acc, g| upoly::mul(&acc, g));
    if reduce(&upoly::sub(&prod, &f), &pm).iter().any(|c| !c.is_zero()) {
        return Err(loss);
    }
    let mut out = Vec::new();
    for (g, (lambda, mult)) in factors.into_iter().zip(&poly.slopes) {
        let gp = polygon_mod(&g, p, a, &pm);
        if gp.degree() != *mult || gp.slopes.len() != 1 || &gp.slopes[0].0 != lambda {
            return Err(loss);
        }
        out.push(SlopeFactor { lambda: lambda.clone(), factor: g });
    }
    Ok(SlopeFactorization { p, a, precision: m, factors: out, integral })
}

/// Runs `op` at precision `m`, doubling up to [`MAX_RETRIES`] times on
/// `PrecisionLoss`.
pub fn with_retries<T>(m: u32, mut op: impl FnMut(u32) -> Result<T, PadicError>) -> Result<T, PadicError> {
    let mut prec = m;
    for attempt in 0..=MAX_RETRIES {
        match op(prec) {
            Err(PadicError::PrecisionLoss { .. }) if attempt < MAX_RETRIES => prec *= 2,
            other => return other,
        }
    }
    unreachable!()
}

/// `f^{<rho}` modulo `p^m`.
pub fn slope_lt_factor(f: &[BigInt], rho: &BigRational, p: u32, a: u32, m: u32) -> Result<ZPoly, PadicError> {
    Ok(slope_factorization(f, p, a, m)?.slope_lt(rho))
}

/// Slope-`<rho` part of a rational zeta function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaSlopePart {
    pub p: u32,
    pub precision: u32,
    pub num: ZPoly,
    pub den: ZPoly,
    pub num_factors: SlopeFactorization,
    pub den_factors: SlopeFactorization,
}

impl ZetaSlopePart {
    pub fn modulus(&self) -> BigInt {
        BigInt::from(self.p).pow(self.precision)
    }

    /// Both parts are `1` modulo `p^M`.
    pub fn is_trivial(&self) -> bool {
        self.num == upoly::one() && self.den == upoly::one()
    }

    /// `num/den == other.num/other.den` modulo `p^m` (cross-multiplied).
    pub fn congruent(&self, other: &ZetaSlopePart, m: u32) -> bool {
        let pm = BigInt::from(self.p).pow(m);
        let lhs = upoly::mul(&self.num, &other.den);
        let rhs = upoly::mul(&other.num, &self.den);
        reduce(&upoly::sub(&lhs, &rhs), &pm).is_empty()
    }

    /// All slope factors of both parts, for range checks.
    pub fn all_factors(&self) -> impl Iterator<Item = &SlopeFactor> {
        self.num_factors.factors.iter().chain(&self.den_factors.factors)
    }
}

/// `zeta^{<rho}`: [`slope_lt_factor`] applied to numerator and denominator.
pub fn zeta_slope_lt(z: &RationalZeta, rho: &BigRational, p: u32, a: u32, m: u32) -> Result<ZetaSlopePart, PadicError> {
    let nf = slope_factorization(&z.num, p, a, m)?;
    let df = slope_factorization(&z.den, p, a, m)?;
    Ok(ZetaSlopePart { p, precision: m, num: nf.slope_lt(rho), den: df.slope_lt(rho), num_factors: nf, den_factors: df })
}

/// [`zeta_slope_lt`] with automatic precision doubling.
pub fn zeta_slope_lt_auto(z: &RationalZeta, rho: &BigRational, p: u32, a: u32, m: u32) -> Result<ZetaSlopePart, PadicError> {
    with_retries(m, |prec| zeta_slope_lt(z, rho, p, a, prec))
}

/// Format `u/v` (or `u`) for exact slopes.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `true` if every slope lies in `[0, rho)`.
pub fn slopes_in_range<'a>(factors: impl IntoIterator<Item = &'a SlopeFactor>, rho: &BigRational) -> bool {
    factors.into_iter().all(|f| !f.lambda.is_negative() && &f.lambda < rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> ZPoly {
        upoly::from_i64(v)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn polygon_examples() {
        let np = newton_polygon(&z(&[1, -1, 3]), 3, 1).unwrap();
        assert_eq!(np.slope_multiset(), vec![q(0, 1), q(1, 1)]);
        let np = newton_polygon(&z(&[1, 0, 2]), 2, 1).unwrap();
        assert_eq!(np.slopes, vec![(q(1, 2), 2)]);
        let np = newton_polygon(&z(&[1, -4]), 2, 2).unwrap();
        assert_eq!(np.slopes, vec![(q(1, 1), 1)]);
        assert_eq!(newton_polygon(&z(&[2, 1]), 2, 1), Err(PadicError::BadNormalization));
    }

    #[test]
    fn split_examples() {
        let f = upoly::mul(&z(&[1, -1]), &z(&[1, -3]));
        assert_eq!(slope_split(&f, 1, 3, 1, 10).unwrap(), (z(&[1, -1]), z(&[1, -3])));
        assert_eq!(slope_split(&z(&[1, 0, 2]), 1, 2, 1, 10), Err(PadicError::NotAVertex { k: 1 }));
        // ordinary: 1 - 2t + 5t^2 over F_5, unit root u = a mod 5
        let (g, h) = slope_split(&z(&[1, -2, 5]), 1, 5, 1, 12).unwrap();
        let pm = BigInt::from(5).pow(12);
        let u = -&g[1];
        assert_eq!(u.mod_floor(&BigInt::from(5)), BigInt::from(2));
        assert_eq!(sym_mod(&(&u * -&h[1]), &pm), BigInt::from(5));
    }

    #[test]
    fn factorization_examples() {
        let f = upoly::mul(&z(&[1, -1]), &z(&[1, -4]));
        let sf = slope_factorization(&f, 2, 2, 48).unwrap();
        assert_eq!(sf.factors.iter().map(|s| s.lambda.clone()).collect::<Vec<_>>(), vec![q(0, 1), q(1, 1)]);
        assert_eq!(sf.slope_lt(&q(1, 1)), z(&[1, -1]));
        assert_eq!(slope_lt_factor(&z(&[1, -3]), &q(1, 1), 3, 1, 24).unwrap(), z(&[1]));
        let sf = slope_factorization(&z(&[1, 0, 3]), 3, 1, 24).unwrap();
        assert_eq!(sf.factors.len(), 1);
        assert_eq!(sf.factors[0].lambda, q(1, 2));
        assert!(sf.integral);
    }

    #[test]
    fn fractional_slopes_split_without_ramification() {
        // (1 + 2t^2)(1 - t)(1 - 8t^3) over p = 2: slopes 0, 1/2, 1/2, 1, 1, 1
        let f = upoly::product(&[z(&[1, 0, 2]), z(&[1, -1]), z(&[1, 0, 0, -8])]);
        let sf = slope_factorization(&f, 2, 1, 30).unwrap();
        let lambdas: Vec<BigRational> = sf.factors.iter().map(|s| s.lambda.clone()).collect();
        assert_eq!(lambdas, vec![q(0, 1), q(1, 2), q(1, 1)]);
        assert_eq!(sf.factors[0].factor, z(&[1, -1]));
        assert_eq!(sf.factors[1].factor, z(&[1, 0, 2]));
        assert_eq!(sf.factors[2].factor, z(&[1, 0, 0, -8]));
    }
}
