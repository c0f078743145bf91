//! Exact linear algebra over `Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<BigRational>>;

fn lcm_denoms<'a>(it: impl Iterator<Item = &'a BigRational>) -> BigInt {
    it.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Solves `A x = b` for square nonsingular `A` by fraction-free (Bareiss)
/// elimination on the row-scaled integer system.
pub fn solve(a: &Matrix, b: &[BigRational]) -> Result<Vec<BigRational>> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n) && b.len() == n);
    // integer augmented matrix, each row cleared of denominators
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let l = lcm_denoms(a[i].iter().chain(std::iter::once(&b[i])));
            a[i].iter()
                .chain(std::iter::once(&b[i]))
                .map(|x| (x * BigRational::from(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let piv = (k..n)
            .find(|&r| !m[r][k].is_zero())
            .ok_or_else(|| Error::InternalAssertionFailed("singular linear system".into()))?;
        m.swap(k, piv);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut s = BigRational::from(m[i][n].clone());
        for j in i + 1..n {
            s -= BigRational::from(m[i][j].clone()) * &x[j];
        }
        x[i] = s / BigRational::from(m[i][i].clone());
    }
    Ok(x)
}

/// Characteristic polynomial `det(xI - A)` (monic, little-endian) by
/// Faddeev–LeVerrier.
pub fn char_poly(a: &Matrix) -> Vec<BigRational> {
    let d = a.len();
    let zero = BigRational::zero();
    let mut c = vec![zero.clone(); d + 1];
    c[d] = BigRational::one();
    let mut mk: Matrix = vec![vec![zero.clone(); d]; d];
    for k in 1..=d {
        // M_k = A M_{k-1} + c_{d-k+1} I
        let mut next = vec![vec![zero.clone(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let mut s = zero.clone();
                for l in 0..d {
                    if !a[i][l].is_zero() && !mk[l][j].is_zero() {
                        s += &a[i][l] * &mk[l][j];
                    }
                }
                if i == j {
                    s += &c[d - k + 1];
                }
                next[i][j] = s;
            }
        }
        mk = next;
        let mut tr = zero.clone();
        for i in 0..d {
            for l in 0..d {
                if !a[i][l].is_zero() && !mk[l][i].is_zero() {
                    tr += &a[i][l] * &mk[l][i];
                }
            }
        }
        c[d - k] = -tr / BigRational::from(BigInt::from(k));
    }
    c
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b[0].len();
    let inner = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = BigRational::zero();
                    for l in 0..inner {
                        s += &a[i][l] * &b[l][j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}
