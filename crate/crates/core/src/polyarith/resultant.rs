//! Resultants by the subresultant polynomial remainder sequence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::IntPolynomial;
use crate::error::{Error, Result};

fn exact_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    debug_assert!(r.is_zero(), "subresultant division not exact");
    q
}

/// `Res(f, g)` over `Z`, following the subresultant PRS so that every
/// intermediate division is exact and coefficient growth stays polynomial.
pub(super) fn resultant(f: &IntPolynomial, g: &IntPolynomial) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (mut a, mut b, mut s) = if f.deg() >= g.deg() {
        (f.clone(), g.clone(), 1i32)
    } else {
        let sign = if f.deg() % 2 == 1 && g.deg() % 2 == 1 {
            -1
        } else {
            1
        };
        (g.clone(), f.clone(), sign)
    };
    if b.deg() == 0 {
        return Ok(sign_mul(s, num_traits::pow(b.coeff(0), a.deg())));
    }

    let ca = a.content();
    let cb = b.content();
    a = a.div_scalar_exact(&ca);
    b = b.div_scalar_exact(&cb);
    let t = num_traits::pow(ca, b.deg()) * num_traits::pow(cb, a.deg());
    let mut g_acc = BigInt::one();
    let mut h = BigInt::one();

    loop {
        let da = a.deg();
        let db = b.deg();
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        if r.is_zero() {
            return Ok(BigInt::zero());
        }
        let divisor = &g_acc * num_traits::pow(h.clone(), delta);
        b = IntPolynomial::new(r.coeffs().iter().map(|c| exact_div(c, &divisor)).collect());
        g_acc = a.leading_coeff().unwrap().clone();
        // h ← h^{1-δ} g^δ
        h = if delta == 0 {
            h
        } else {
            exact_div(
                &num_traits::pow(g_acc.clone(), delta),
                &num_traits::pow(h, delta - 1),
            )
        };
        if b.deg() == 0 {
            let da = a.deg();
            let lb = b.coeff(0);
            // h ← h^{1-deg a} lc(b)^{deg a}
            let h_final = exact_div(&num_traits::pow(lb, da), &num_traits::pow(h, da - 1));
            return Ok(sign_mul(s, t * h_final));
        }
    }
}

fn sign_mul(s: i32, v: BigInt) -> BigInt {
    if s < 0 {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    /// Determinant of the Sylvester matrix by rational Gaussian elimination.
    fn sylvester_oracle(f: &IntPolynomial, g: &IntPolynomial) -> BigInt {
        let m = f.deg();
        let n = g.deg();
        let size = m + n;
        if size == 0 {
            return BigInt::one();
        }
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for i in 0..n {
            let mut row = vec![BigRational::zero(); size];
            for (j, c) in f.coeffs().iter().rev().enumerate() {
                row[i + j] = BigRational::from(c.clone());
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![BigRational::zero(); size];
            for (j, c) in g.coeffs().iter().rev().enumerate() {
                row[i + j] = BigRational::from(c.clone());
            }
            rows.push(row);
        }
        let mut det = BigRational::one();
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !rows[r][col].is_zero()) else {
                return BigInt::zero();
            };
            if piv != col {
                rows.swap(piv, col);
                det = -det;
            }
            let pv = rows[col][col].clone();
            det *= &pv;
            for r in col + 1..size {
                let factor = &rows[r][col] / &pv;
                if factor.is_zero() {
                    continue;
                }
                for c in col..size {
                    let delta = &factor * &rows[col][c];
                    rows[r][c] -= delta;
                }
            }
        }
        assert!(det.is_integer());
        det.to_integer()
    }

    #[test]
    fn examples() {
        assert_eq!(
            resultant(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])).unwrap(),
            BigInt::one()
        );
        assert_eq!(
            resultant(&p(&[1, 0, 1]), &p(&[0, 2])).unwrap(),
            BigInt::from(4)
        );
        // Res(x - a, g) = g(a)
        let g = p(&[7, -3, 0, 2]);
        assert_eq!(
            resultant(&p(&[-5, 1]), &g).unwrap(),
            g.evaluate(&BigInt::from(5))
        );
        assert_eq!(
            resultant(&p(&[1, 1]), &p(&[-1, 0, 1])).unwrap(),
            BigInt::zero()
        );
        assert_eq!(resultant(&p(&[]), &g), Err(Error::ZeroPolynomial));
        assert_eq!(
            resultant(&p(&[3]), &p(&[1, 1, 1])).unwrap(),
            BigInt::from(9)
        );
    }

    fn arb_poly(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPolynomial> {
        prop::collection::vec(-bound..=bound, 1..=max_deg + 1)
            .prop_map(|v| IntPolynomial::from_i64(&v))
            .prop_filter("nonzero", |f| !f.is_zero())
    }

    proptest! {
        #[test]
        fn matches_sylvester_determinant(f in arb_poly(6, 20), g in arb_poly(6, 20)) {
            prop_assert_eq!(resultant(&f, &g).unwrap(), sylvester_oracle(&f, &g));
        }

        #[test]
        fn antisymmetry(f in arb_poly(5, 30), g in arb_poly(5, 30)) {
            let sign = if (f.deg() * g.deg()) % 2 == 1 { -1 } else { 1 };
            prop_assert_eq!(
                resultant(&f, &g).unwrap(),
                resultant(&g, &f).unwrap() * BigInt::from(sign)
            );
        }

        #[test]
        fn multiplicative(f in arb_poly(3, 10), g in arb_poly(3, 10), h in arb_poly(3, 10)) {
            let fg = &f * &g;
            prop_assert_eq!(
                resultant(&fg, &h).unwrap(),
                resultant(&f, &h).unwrap() * resultant(&g, &h).unwrap()
            );
        }

        #[test]
        fn discriminant_bound(v in prop::collection::vec(-50i64..=50, 3..=7)) {
            let f = IntPolynomial::from_i64(&v);
            prop_assume!(f.deg() >= 2);
            let disc = f.discriminant().unwrap();
            let d = f.deg() as u32;
            let h = f.height();
            let bound = BigInt::from(d).pow(2 * d) * h.pow(2 * d - 2);
            prop_assert!(disc.abs() < bound);
        }
    }
}
