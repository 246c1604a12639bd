//! Zeta functions as exact rational functions: power series from point
//! counts, Padé reconstruction, power sums, and Künneth products.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::geom::CountTable;
use crate::linalg;
use crate::upoly::{self, ZPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZetaError {
    #[error("series coefficient {index} is not integral: the counts are inconsistent")]
    NonIntegralSeries { index: usize },
    #[error("need counts for r = 1..{needed}, have {have}")]
    MissingCounts { needed: usize, have: usize },
    #[error("{needed} series terms required, {have} available")]
    InsufficientTerms { needed: usize, have: usize },
    #[error("no rational function with numerator degree <= {d_num} and denominator degree <= {d_den} fits the series")]
    NoRationalFit { d_num: usize, d_den: usize },
    #[error("constant term must be 1")]
    ZeroConstantTerm,
    #[error("expected a polynomial of the form 1 - a t + q t^2")]
    BadShape,
}

/// `exp(sum N_r t^r / r)` truncated after `t^M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaSeries {
    pub q: BigInt,
    pub coeffs: Vec<BigInt>,
}

impl ZetaSeries {
    /// `M`: the index of the last known coefficient.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// `num/den` in lowest terms with `num(0) = den(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalZeta {
    pub q: BigInt,
    pub num: ZPoly,
    pub den: ZPoly,
}

impl RationalZeta {
    pub fn expand(&self, m: usize) -> Vec<BigInt> {
        let inv = upoly::series_inverse(&self.den, m + 1);
        let mut s = upoly::mul(&self.num, &inv);
        s.resize(m + 1, BigInt::zero());
        s.truncate(m + 1);
        s
    }
}

/// Series coefficients `c_0..c_M` from `m c_m = sum_{r<=m} N_r c_{m-r}`.
pub fn series_from_counts(counts: &CountTable, m: usize) -> Result<ZetaSeries, ZetaError> {
    if counts.len() < m {
        return Err(ZetaError::MissingCounts { needed: m, have: counts.len() });
    }
    let mut c = vec![BigInt::one()];
    for k in 1..=m {
        let mut s = BigInt::zero();
        for r in 1..=k {
            s += counts.get(r) * &c[k - r];
        }
        let (qt, rem) = s.div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(ZetaError::NonIntegralSeries { index: k });
        }
        c.push(qt);
    }
    Ok(ZetaSeries { q: counts.q.clone(), coeffs: c })
}

/// Padé fit with the given degree bounds; at least one unused check term
/// is required.
pub fn reconstruct_rational(series: &ZetaSeries, d_num: usize, d_den: usize) -> Result<RationalZeta, ZetaError> {
    let m = series.order();
    if d_num + d_den + 1 > m {
        return Err(ZetaError::InsufficientTerms { needed: d_num + d_den + 2, have: m + 1 });
    }
    fit(series, d_num, d_den).ok_or(ZetaError::NoRationalFit { d_num, d_den })
}

/// Searches degree bounds by increasing total degree, keeping at least two
/// check terms.
pub fn reconstruct_auto(series: &ZetaSeries) -> Result<RationalZeta, ZetaError> {
    let m = series.order();
    if m < 2 {
        return Err(ZetaError::InsufficientTerms { needed: 3, have: m + 1 });
    }
    for total in 0..=m - 2 {
        for d_den in (0..=total).rev() {
            if let Some(z) = fit(series, total - d_den, d_den) {
                return Ok(z);
            }
        }
    }
    Err(ZetaError::NoRationalFit { d_num: m - 2, d_den: m - 2 })
}

fn fit(series: &ZetaSeries, d_num: usize, d_den: usize) -> Option<RationalZeta> {
    let c = &series.coeffs;
    let coef = |k: isize| if k < 0 { BigInt::zero() } else { c[k as usize].clone() };
    // den = 1 + e_1 t + ... : coefficient k of c*den vanishes for d_num < k <= d_num + d_den
    let rows: Vec<Vec<BigInt>> = (d_num + 1..=d_num + d_den)
        .map(|k| (1..=d_den).map(|j| coef(k as isize - j as isize)).collect())
        .collect();
    let rhs: Vec<BigInt> = (d_num + 1..=d_num + d_den).map(|k| -coef(k as isize)).collect();
    let e = linalg::solve(&rows, &rhs)?;
    let mut den_q: Vec<BigRational> = vec![BigRational::one()];
    den_q.extend(e);
    let c_q = upoly::to_q(&c[..=d_num]);
    let mut num_q: Vec<BigRational> = vec![BigRational::zero(); d_num + 1];
    for (i, ci) in c_q.iter().enumerate() {
        for (j, dj) in den_q.iter().enumerate() {
            if i + j <= d_num {
                num_q[i + j] += ci * dj;
            }
        }
    }
    let g = upoly::qgcd(&num_q, &den_q);
    let num = upoly::normalize_constant(&upoly::qdiv(&num_q, &g)?)?;
    let den = upoly::normalize_constant(&upoly::qdiv(&den_q, &g)?)?;
    let z = RationalZeta { q: series.q.clone(), num, den };
    (z.expand(series.order()) == *c).then_some(z)
}

/// `N_r = p_r(den) - p_r(num)` for `r = 1..R`.
pub fn counts_from_rational(z: &RationalZeta, r: usize) -> CountTable {
    let pd = upoly::power_sums(&z.den, r);
    let pn = upoly::power_sums(&z.num, r);
    CountTable::new(z.q.clone(), pd.into_iter().zip(pn).map(|(a, b)| a - b).collect())
}

fn check_unit(f: &[BigInt]) -> Result<(), ZetaError> {
    if f.first().is_some_and(|c| c.is_one()) {
        Ok(())
    } else {
        Err(ZetaError::ZeroConstantTerm)
    }
}

/// Sylvester matrix of `a` and `b` (coefficients lowest first, formal
/// degrees `len - 1`).
fn sylvester(a: &[BigInt], b: &[BigInt]) -> Vec<Vec<BigInt>> {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (k, c) in a.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (k, c) in b.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// `Res_x(a, b)` by a fraction-free determinant.
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    linalg::det(sylvester(a, b))
}

/// The polynomial with constant term 1 whose inverse roots are the products
/// `alpha_i beta_j`, as `Res_x(x^m f(1/x), g(t x))` interpolated in `t`.
pub fn composed_product(f: &[BigInt], g: &[BigInt]) -> Result<ZPoly, ZetaError> {
    check_unit(f)?;
    check_unit(g)?;
    let m = upoly::degree(f).unwrap_or(0);
    let n = upoly::degree(g).unwrap_or(0);
    if m == 0 || n == 0 {
        return Ok(upoly::one());
    }
    // x^m f(1/x) is monic since f(0) = 1
    let rev: ZPoly = f[..=m].iter().rev().cloned().collect();
    let d = m * n;
    let xs: Vec<BigInt> = (0..=d as i64).map(BigInt::from).collect();
    let ys: Vec<BigInt> = xs
        .iter()
        .map(|t| {
            let mut gt = upoly::scale_var(g, t);
            gt.resize(n + 1, BigInt::zero());
            resultant(&rev, &gt)
        })
        .collect();
    let h = interpolate(&xs, &ys);
    let h = upoly::normalize_constant(&h).expect("composed product has integer coefficients");
    Ok(h)
}

/// Oracle route: `p_r(h) = p_r(f) p_r(g)` and Newton's identities.
pub fn composed_product_power_sums(f: &[BigInt], g: &[BigInt]) -> Result<ZPoly, ZetaError> {
    check_unit(f)?;
    check_unit(g)?;
    let d = upoly::degree(f).unwrap_or(0) * upoly::degree(g).unwrap_or(0);
    let pf = upoly::power_sums(f, d);
    let pg = upoly::power_sums(g, d);
    let ph: Vec<BigInt> = pf.iter().zip(&pg).map(|(a, b)| a * b).collect();
    Ok(upoly::from_power_sums(&ph, d).expect("integral power sums"))
}

/// Lagrange interpolation over Q through `(xs[i], ys[i])`.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> Vec<BigRational> {
    let n = xs.len();
    let mut out = vec![BigRational::zero(); n];
    for i in 0..n {
        let mut basis: Vec<BigRational> = vec![BigRational::one()];
        let mut denom = BigInt::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            // basis *= (t - x_j)
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * BigRational::from_integer(xs[j].clone());
            }
            basis = next;
            denom *= &xs[i] - &xs[j];
        }
        let scale = BigRational::new(ys[i].clone(), denom);
        for (k, c) in basis.iter().enumerate() {
            out[k] += c * &scale;
        }
    }
    out
}

/// Coefficient `a` of `1 - a t + q t^2`.
pub fn weil_trace(p: &[BigInt], q: &BigInt) -> Result<BigInt, ZetaError> {
    if p.len() != 3 || !p[0].is_one() || &p[2] != q {
        return Err(ZetaError::BadShape);
    }
    Ok(-p[1].clone())
}

/// `P_0..P_4` of `E_1 x E_2` from the two curve polynomials.
pub fn kunneth_abelian_surface(p1: &[BigInt], p2: &[BigInt], q: &BigInt) -> Result<[ZPoly; 5], ZetaError> {
    weil_trace(p1, q)?;
    weil_trace(p2, q)?;
    let one_minus = |c: BigInt| vec![BigInt::one(), -c];
    let p0 = one_minus(BigInt::one());
    let h1 = upoly::mul(p1, p2);
    let lq = one_minus(q.clone());
    let h2 = upoly::mul(&upoly::mul(&lq, &lq), &composed_product(p1, p2)?);
    let h3 = upoly::mul(&upoly::scale_var(p1, q), &upoly::scale_var(p2, q));
    let h4 = one_minus(q * q);
    Ok([p0, h1, h2, h3, h4])
}

/// `prod P_i^{(-1)^{i+1}}` as an unreduced pair (numerator: odd `i`).
pub fn alternating_product(ps: &[ZPoly], q: &BigInt) -> RationalZeta {
    let mut num = upoly::one();
    let mut den = upoly::one();
    for (i, p) in ps.iter().enumerate() {
        if i % 2 == 1 {
            num = upoly::mul(&num, p);
        } else {
            den = upoly::mul(&den, p);
        }
    }
    RationalZeta { q: q.clone(), num, den }
}

/// Advisory functional-equation test for a curve numerator of degree `2g`:
/// `a_{2g-i} = q^{g-i} a_i`.
pub fn curve_functional_equation_holds(num: &[BigInt], q: &BigInt) -> bool {
    let Some(d) = upoly::degree(num) else { return false };
    if d % 2 == 1 {
        return false;
    }
    let g = d / 2;
    (0..=g).all(|i| num[d - i] == q.pow((g - i) as u32) * &num[i])
}

/// Hasse–Weil bound check `|a| <= 2 sqrt(q)`, i.e. `a^2 <= 4q`.
pub fn within_hasse(a: &BigInt, q: &BigInt) -> bool {
    a.abs().pow(2) <= BigInt::from(4) * q
}
