//! Dense univariate polynomials over Z and Q, lowest degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type ZPoly = Vec<BigInt>;
pub type QPoly = Vec<BigRational>;

pub fn from_i64(c: &[i64]) -> ZPoly {
    trim(c.iter().map(|&v| BigInt::from(v)).collect())
}

pub fn trim(mut f: ZPoly) -> ZPoly {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    f
}

fn qtrim(mut f: QPoly) -> QPoly {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    f
}

/// Degree; `None` for the zero polynomial.
pub fn degree(f: &[BigInt]) -> Option<usize> {
    f.iter().rposition(|c| !c.is_zero())
}

pub fn one() -> ZPoly {
    vec![BigInt::one()]
}

pub fn add(f: &[BigInt], g: &[BigInt]) -> ZPoly {
    let n = f.len().max(g.len());
    trim((0..n)
        .map(|i| f.get(i).cloned().unwrap_or_default() + g.get(i).cloned().unwrap_or_default())
        .collect())
}

pub fn sub(f: &[BigInt], g: &[BigInt]) -> ZPoly {
    let n = f.len().max(g.len());
    trim((0..n)
        .map(|i| f.get(i).cloned().unwrap_or_default() - g.get(i).cloned().unwrap_or_default())
        .collect())
}

pub fn mul(f: &[BigInt], g: &[BigInt]) -> ZPoly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigInt::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            r[i + j] += a * b;
        }
    }
    trim(r)
}

pub fn product<'a>(fs: impl IntoIterator<Item = &'a ZPoly>) -> ZPoly {
    fs.into_iter().fold(one(), |acc, f| mul(&acc, f))
}

pub fn pow(f: &[BigInt], e: u32) -> ZPoly {
    (0..e).fold(one(), |acc, _| mul(&acc, f))
}

/// `f(c t)`.
pub fn scale_var(f: &[BigInt], c: &BigInt) -> ZPoly {
    let mut pw = BigInt::one();
    let mut out = Vec::with_capacity(f.len());
    for a in f {
        out.push(a * &pw);
        pw *= c;
    }
    trim(out)
}

pub fn eval(f: &[BigInt], x: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// `f mod t^n`.
pub fn truncate(f: &[BigInt], n: usize) -> ZPoly {
    trim(f.iter().take(n).cloned().collect())
}

/// `1/f mod t^n` for `f(0) = ±1`.
pub fn series_inverse(f: &[BigInt], n: usize) -> ZPoly {
    let c0 = &f[0];
    assert!(c0.abs().is_one(), "series inverse needs a unit constant term");
    let mut inv = vec![BigInt::zero(); n];
    if n == 0 {
        return inv;
    }
    inv[0] = c0.clone();
    for k in 1..n {
        let mut s = BigInt::zero();
        for i in 1..=k.min(f.len() - 1) {
            s += &f[i] * &inv[k - i];
        }
        inv[k] = -(s * c0);
    }
    inv
}

/// Power sums `p_1..p_r` of the inverse roots of `f` (with `f(0) = 1`),
/// by Newton's identities.
pub fn power_sums(f: &[BigInt], r: usize) -> Vec<BigInt> {
    assert!(f.first().is_some_and(|c| c.is_one()));
    let coef = |i: usize| f.get(i).cloned().unwrap_or_default();
    let mut p: Vec<BigInt> = Vec::with_capacity(r);
    for k in 1..=r {
        let mut s = -(BigInt::from(k) * coef(k));
        for i in 1..k {
            s -= coef(i) * &p[k - 1 - i];
        }
        p.push(s);
    }
    p
}

/// The polynomial with constant term 1 of degree `d` whose inverse roots
/// have power sums `p_1..p_d`; `None` if a division is inexact.
pub fn from_power_sums(p: &[BigInt], d: usize) -> Option<ZPoly> {
    assert!(p.len() >= d);
    let mut f = vec![BigInt::one()];
    for k in 1..=d {
        let mut s = p[k - 1].clone();
        for i in 1..k {
            s += &f[i] * &p[k - 1 - i];
        }
        let (qt, rem) = (-s).div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return None;
        }
        f.push(qt);
    }
    Some(trim(f))
}

pub fn to_q(f: &[BigInt]) -> QPoly {
    f.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn qrem(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    let mut r = qtrim(a.to_vec());
    let db = b.len() - 1;
    let mut qt = vec![BigRational::zero(); r.len().saturating_sub(db)];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() / &b[db];
        for (i, bi) in b.iter().enumerate() {
            r[k + i] = &r[k + i] - &c * bi;
        }
        qt[k] = c;
        r = qtrim(r);
    }
    (qtrim(qt), r)
}

/// Monic gcd over Q.
pub fn qgcd(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let (mut a, mut b) = (qtrim(a.to_vec()), qtrim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = qrem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lc) = a.last().cloned() {
        a.iter_mut().for_each(|c| *c = &*c / &lc);
    }
    a
}

/// Exact quotient over Q; `None` if the remainder is nonzero.
pub fn qdiv(a: &[BigRational], b: &[BigRational]) -> Option<QPoly> {
    let (qt, r) = qrem(a, b);
    r.is_empty().then_some(qt)
}

/// Scales so the constant term is 1 and returns integer coefficients if
/// they all are integral.
pub fn normalize_constant(f: &[BigRational]) -> Option<ZPoly> {
    let c0 = f.first()?.clone();
    if c0.is_zero() {
        return None;
    }
    f.iter()
        .map(|c| {
            let v = c / &c0;
            v.is_integer().then(|| v.to_integer())
        })
        .collect::<Option<Vec<_>>>()
        .map(trim)
}

/// Human-readable form such as `1 - 4t + 3t^2`.
pub fn format(f: &[BigInt]) -> String {
    let mut s = String::new();
    for (i, c) in f.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{i}"),
        };
        if i == 0 || !mag.is_one() {
            s.push_str(&mag.to_string());
        }
        s.push_str(&mono);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_round_trip() {
        let f = mul(&from_i64(&[1, -2]), &from_i64(&[1, 3, 5]));
        let p = power_sums(&f, 6);
        assert_eq!(from_power_sums(&p, 3).unwrap(), f);
        assert_eq!(power_sums(&from_i64(&[1, -1]), 3), vec![BigInt::one(); 3]);
    }

    #[test]
    fn gcd_and_inverse() {
        let a = mul(&from_i64(&[1, -1]), &from_i64(&[1, -3]));
        let b = mul(&from_i64(&[1, -1]), &from_i64(&[1, 2]));
        let g = normalize_constant(&qgcd(&to_q(&a), &to_q(&b))).unwrap();
        assert_eq!(g, from_i64(&[1, -1]));
        let inv = series_inverse(&from_i64(&[1, -1]), 4);
        assert_eq!(inv, from_i64(&[1, 1, 1, 1]));
        assert_eq!(format(&from_i64(&[1, -4, 3])), "1 - 4t + 3t^2");
    }
}
