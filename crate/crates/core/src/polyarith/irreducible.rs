use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::IntPolynomial;
use crate::error::{Error, Result};
use crate::fp::FpPoly;
use crate::primes::PrimeIter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Irreducibility {
    Proven,
    Unknown,
}

/// Number of good primes whose factor-degree patterns are intersected.
const PATTERN_PRIMES: usize = 60;
const PRIME_LIMIT: u64 = 20_000;

/// Sound-but-incomplete irreducibility test over `Q`.
///
/// For primes not dividing `Δ·lc(f)`, the factorization pattern of `f mod p`
/// constrains the degrees any rational factor could have (they must be
/// subset sums of the modular factor degrees). If no proper degree survives
/// the intersection over the tested primes, `f` is irreducible.
pub fn check_irreducible(f: &IntPolynomial) -> Result<Irreducibility> {
    let d = f.degree().ok_or(Error::DegreeTooSmall(0))?;
    if d < 1 {
        return Err(Error::DegreeTooSmall(d));
    }
    let content = f.content();
    if !content.is_one() {
        return Err(Error::NotPrimitiveContent(content.to_string()));
    }
    if d == 1 {
        return Ok(Irreducibility::Proven);
    }
    let disc = f.discriminant()?;
    if disc.is_zero() {
        return Ok(Irreducibility::Unknown);
    }
    let bad = disc * f.leading_coeff().unwrap();

    // possible[k] is true while a rational factor of degree k is not ruled out
    let mut possible = vec![true; d + 1];
    let mut used = 0;
    for p in PrimeIter::new(2, PRIME_LIMIT) {
        if (&bad % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = FpPoly::from_int(f, p);
        let mut reachable = vec![false; d + 1];
        reachable[0] = true;
        for (k, g) in fp.distinct_degree() {
            let count = g.degree().unwrap() / k;
            for _ in 0..count {
                for s in (k..=d).rev() {
                    if reachable[s - k] {
                        reachable[s] = true;
                    }
                }
            }
        }
        for k in 1..d {
            possible[k] &= reachable[k];
        }
        if (1..d).all(|k| !possible[k]) {
            return Ok(Irreducibility::Proven);
        }
        used += 1;
        if used >= PATTERN_PRIMES {
            break;
        }
    }
    Ok(Irreducibility::Unknown)
}
