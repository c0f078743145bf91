use num_bigint::BigInt;
use num_traits::One;

use super::IntPolynomial;

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n)
        .take_while(|i| i * i <= n)
        .filter(|i| n % i == 0)
        .collect();
    let mirrored: Vec<u64> = out
        .iter()
        .rev()
        .map(|&i| n / i)
        .filter(|&j| j * j != n)
        .collect();
    out.extend(mirrored);
    out
}

/// The `m`-th cyclotomic polynomial, obtained from `x^m - 1` by exact
/// division by `Φ_e` for every proper divisor `e` of `m`.
pub fn cyclotomic(m: u64) -> IntPolynomial {
    assert!(m >= 1, "cyclotomic index must be positive");
    let mut cache: Vec<(u64, IntPolynomial)> = Vec::new();
    for e in divisors(m) {
        let mut phi = IntPolynomial::monomial(BigInt::one(), e as usize);
        phi = &phi - &IntPolynomial::constant(BigInt::one());
        for (k, phi_k) in &cache {
            if e % k == 0 {
                phi = phi.div_exact(phi_k).expect("cyclotomic factor divides");
            }
        }
        cache.push((e, phi));
    }
    cache.pop().expect("m divides itself").1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::totient;

    #[test]
    fn small_cases() {
        assert_eq!(cyclotomic(1), IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(4), IntPolynomial::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), IntPolynomial::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(5), IntPolynomial::from_i64(&[1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic(12), IntPolynomial::from_i64(&[1, 0, -1, 0, 1]));
        // Φ_105 is the first with a coefficient of absolute value 2.
        assert_eq!(cyclotomic(105).height(), BigInt::from(2));
    }

    #[test]
    fn product_over_divisors_is_x_m_minus_1() {
        for m in 1..=200u64 {
            let mut acc = IntPolynomial::from_i64(&[1]);
            for e in divisors(m) {
                acc = &acc * &cyclotomic(e);
            }
            let mut expect = IntPolynomial::monomial(BigInt::one(), m as usize);
            expect = &expect - &IntPolynomial::from_i64(&[1]);
            assert_eq!(acc, expect, "m = {m}");
            assert_eq!(cyclotomic(m).deg() as u64, totient(m));
        }
    }
}
