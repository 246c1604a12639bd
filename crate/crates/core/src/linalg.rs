//! Fraction-free (Bareiss) elimination over Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn exact_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    assert!(r.is_zero(), "Bareiss division not exact");
    q
}

/// Determinant of a square integer matrix.
pub fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = exact_div(&v, &prev);
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Row-echelon form of the augmented matrix `[a | b]` by fraction-free
/// elimination; returns the echelon rows and the pivot columns.
fn echelon(mut m: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, k);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = exact_div(&v, &prev);
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// Some rational solution of `a x = b` (free variables set to zero), or
/// `None` when the system is inconsistent.
pub fn solve(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = a.first().map_or(0, |r| r.len());
    let aug: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect())
        .collect();
    let (m, pivots) = echelon(aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, &c) in pivots.iter().enumerate().rev() {
        let mut acc = BigRational::from_integer(m[r][n].clone());
        for j in c + 1..n {
            if !m[r][j].is_zero() {
                acc -= BigRational::from_integer(m[r][j].clone()) * &x[j];
            }
        }
        x[c] = acc / BigRational::from_integer(m[r][c].clone());
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(det(mat(&[&[2, 0], &[0, 3]])), BigInt::from(6));
        assert_eq!(det(mat(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(det(mat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), BigInt::from(-3));
        assert_eq!(det(mat(&[&[1, 2], &[2, 4]])), BigInt::zero());
        // Vandermonde 1,2,3,4: product of differences = 12
        let v: Vec<Vec<BigInt>> = (1..=4).map(|x: i64| (0..4).map(|k| BigInt::from(x.pow(k))).collect()).collect();
        assert_eq!(det(v), BigInt::from(12));
    }

    #[test]
    fn solves_consistent_and_rejects_inconsistent() {
        let a = mat(&[&[1, 1], &[1, -1]]);
        let x = solve(&a, &[BigInt::from(3), BigInt::from(1)]).unwrap();
        assert_eq!(x, vec![BigRational::from_integer(2.into()), BigRational::from_integer(1.into())]);
        let singular = mat(&[&[1, 2], &[2, 4]]);
        let x = solve(&singular, &[BigInt::from(1), BigInt::from(2)]).unwrap();
        assert_eq!(&x[0] + &x[1] * BigRational::from_integer(2.into()), BigRational::one());
        assert!(solve(&singular, &[BigInt::from(1), BigInt::from(3)]).is_none());
        let x = solve(&mat(&[&[2, 1, 0], &[0, 0, 3]]), &[BigInt::from(1), BigInt::from(1)]).unwrap();
        assert_eq!(x[2], BigRational::new(1.into(), 3.into()));
    }
}
