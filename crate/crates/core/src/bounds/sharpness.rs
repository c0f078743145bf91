//! Families showing that the prime and height bounds cannot be improved
//! much: products of consecutive primes, and quadratic fields whose
//! generators all have large height.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::heights::ln_abs;
use crate::numfield::{FieldElement, NumberField};
use crate::polyarith::IntPolynomial;
use crate::primes::{is_prime_u64, nth_prime, PrimeIter};

#[derive(Clone, Debug, Serialize)]
pub struct SharpnessPrimesReport {
    pub n: usize,
    pub r: usize,
    #[serde(with = "crate::io::bigint_vec")]
    pub betas: Vec<BigInt>,
    /// `Σ h(β_i) = Σ log β_i`.
    pub sum_heights: f64,
    /// `p_{nR}`.
    pub p_nr: u64,
    /// Least prime dividing no `β_i`.
    pub least_good_prime: u64,
    pub holds: bool,
    /// `p / Σ h(β_i)`.
    pub ratio: f64,
}

/// `β_i = ∏_{r<R} p_{nr+i}`; the least prime at which all `β_i` are units
/// exceeds `p_{nR}`.
pub fn sharpness_primes(n: usize, r: usize) -> Result<SharpnessPrimesReport> {
    if n == 0 || r == 0 {
        return Err(Error::PreconditionViolated(
            "n and R must be positive".into(),
        ));
    }
    let betas: Vec<BigInt> = (1..=n)
        .map(|i| (0..r).map(|j| BigInt::from(nth_prime(n * j + i))).product())
        .collect();
    let sum_heights = betas.iter().map(ln_abs).sum();
    // p_{nR+1} divides no β_i, so the scan stops there
    let least_good_prime = PrimeIter::new(2, nth_prime(n * r + 1))
        .find(|&p| betas.iter().all(|b| !(b % BigInt::from(p)).is_zero()))
        .expect("some prime divides none of finitely many integers");
    let p_nr = nth_prime(n * r);
    Ok(SharpnessPrimesReport {
        n,
        r,
        betas,
        sum_heights,
        p_nr,
        least_good_prime,
        holds: least_good_prime > p_nr,
        ratio: least_good_prime as f64 / sum_heights,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadraticSample {
    pub a: String,
    pub b: String,
    pub min_poly: IntPolynomial,
    #[serde(with = "crate::io::bigint_str")]
    pub height: BigInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct SharpnessQuadraticReport {
    pub k: u64,
    pub t: u64,
    /// `(k+t)(k−t)`; the field is `Q(√D)`.
    pub radicand: u64,
    /// The splitting polynomial `x² − 2kx + t²`.
    pub polynomial: IntPolynomial,
    pub samples: Vec<QuadraticSample>,
    #[serde(with = "crate::io::bigint_str")]
    pub min_height: BigInt,
    /// Whether every sample has `3H(α) > k`.
    pub holds: bool,
    /// Asserted only for `k ≥ 15`.
    pub asserted: bool,
}

pub const QUADRATIC_ASSERT_FROM: u64 = 15;

/// Minimal polynomial over `Z` of `a + b√D`, checked against the field
/// arithmetic of `Q(√D)`.
pub fn quadratic_min_poly(
    a: &BigRational,
    b: &BigRational,
    radicand: u64,
) -> Result<IntPolynomial> {
    // (x − a)² − b² D
    let dq = BigRational::from(BigInt::from(radicand));
    let c0 = a * a - b * b * dq;
    let c1 = -(a + a);
    let den = c0.denom().clone() * c1.denom();
    let poly = IntPolynomial::new(vec![
        (c0 * BigRational::from(den.clone())).to_integer(),
        (c1 * BigRational::from(den.clone())).to_integer(),
        den,
    ])
    .primitive_part();
    let field = NumberField::new(IntPolynomial::new(vec![
        -BigInt::from(radicand),
        BigInt::zero(),
        BigInt::one(),
    ]))?;
    let alpha = FieldElement::new(&field, vec![a.clone(), b.clone()])?;
    if alpha.min_poly() != poly {
        return Err(Error::InternalAssertionFailed(format!(
            "minimal polynomial mismatch for {a} + {b}√{radicand}"
        )));
    }
    Ok(poly)
}

/// Samples primitive elements `a + b√((k+t)(k−t))` and checks `H(α) > k/3`.
pub fn sharpness_quadratic(
    k: u64,
    t: u64,
    samples: usize,
    seed: u64,
) -> Result<SharpnessQuadraticReport> {
    if t == 0 || t >= k || !is_prime_u64(k + t) || !is_prime_u64(k - t) {
        return Err(Error::NotPrimePair(k.saturating_sub(t), k + t));
    }
    let radicand = (k + t) * (k - t);
    let polynomial = IntPolynomial::new(vec![
        BigInt::from(t * t),
        -BigInt::from(2 * k),
        BigInt::one(),
    ]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rat = |rng: &mut ChaCha8Rng, nonzero: bool| loop {
        let num: i64 = rng.gen_range(-60..=60);
        let den: i64 = rng.gen_range(1..=30);
        if !nonzero || num != 0 {
            return BigRational::new(num.into(), den.into());
        }
    };
    let mut out = Vec::with_capacity(samples);
    let mut min_height: Option<BigInt> = None;
    for i in 0..samples {
        // the first two samples are β and (1 + β)/2
        let (a, b) = match i {
            0 => (BigRational::zero(), BigRational::one()),
            1 => (
                BigRational::new(1.into(), 2.into()),
                BigRational::new(1.into(), 2.into()),
            ),
            _ => (rat(&mut rng, false), rat(&mut rng, true)),
        };
        let min_poly = quadratic_min_poly(&a, &b, radicand)?;
        let height = min_poly.height();
        if min_height.as_ref().is_none_or(|m| &height < m) {
            min_height = Some(height.clone());
        }
        out.push(QuadraticSample {
            a: a.to_string(),
            b: b.to_string(),
            min_poly,
            height,
        });
    }
    let kb = BigInt::from(k);
    let holds = out.iter().all(|s| BigInt::from(3) * &s.height > kb);
    let asserted = k >= QUADRATIC_ASSERT_FROM;
    if asserted && !holds {
        let bad = out
            .iter()
            .find(|s| BigInt::from(3) * &s.height <= kb)
            .unwrap();
        return Err(Error::InequalityViolated(format!(
            "H({} + {}√{radicand}) = {} is at most k/3",
            bad.a, bad.b, bad.height
        )));
    }
    Ok(SharpnessQuadraticReport {
        k,
        t,
        radicand,
        polynomial,
        samples: out,
        min_height: min_height.unwrap_or_default().abs(),
        holds,
        asserted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_examples() {
        let r = sharpness_primes(2, 3).unwrap();
        assert_eq!(r.betas, vec![BigInt::from(110), BigInt::from(273)]);
        assert_eq!((r.least_good_prime, r.p_nr), (17, 13));
        assert!(r.holds);
        let r = sharpness_primes(1, 1).unwrap();
        assert_eq!((r.least_good_prime, r.p_nr), (3, 2));
        let r = sharpness_primes(3, 4).unwrap();
        assert_eq!((r.least_good_prime, r.p_nr), (41, 37));
    }

    #[test]
    fn quadratic_examples() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            quadratic_min_poly(&BigRational::zero(), &BigRational::one(), 35).unwrap(),
            IntPolynomial::from_i64(&[-35, 0, 1])
        );
        assert_eq!(
            quadratic_min_poly(&half, &half, 35).unwrap(),
            IntPolynomial::from_i64(&[-17, -2, 2])
        );
        let r = sharpness_quadratic(6, 1, 20, 0).unwrap();
        assert_eq!(r.samples[0].height, BigInt::from(35));
        assert_eq!(r.samples[1].height, BigInt::from(17));
        assert!(!r.asserted);
        let r = sharpness_quadratic(15, 2, 200, 0).unwrap();
        assert!(r.asserted && r.holds);
        assert!(r.min_height > BigInt::from(5));
        assert_eq!(
            sharpness_quadratic(7, 2, 1, 0).unwrap_err(),
            Error::NotPrimePair(5, 9)
        );
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sharpness_quadratic(15, 2, 30, 7).unwrap();
        let b = sharpness_quadratic(15, 2, 30, 7).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
