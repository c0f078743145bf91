//! Arithmetic of integer polynomials modulo primes: roots in `F_p`, simple
//! roots, prime searches, and the constructive small-prime procedure.

mod counting;
mod cyclo;

pub use counting::*;
pub use cyclo::*;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{factorize, radical, FactorEffort};
use crate::fp::FpPoly;
use crate::polyarith::IntPolynomial;
use crate::primes::PrimeIter;

/// Below this modulus roots are found by direct scanning.
pub const SCAN_LIMIT: u64 = 10_000;
pub const DEFAULT_P_MAX: u64 = 100_000_000;
pub const DEFAULT_SEED: u64 = 0;

/// `f(a) ≡ 0 (mod p)`, and `simple` records whether `f'(a) ≢ 0 (mod p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleRootWitness {
    pub p: u64,
    pub a: u64,
    pub simple: bool,
}

/// All roots of `f` modulo the prime `p`, ascending.
pub fn roots_mod_p(f: &IntPolynomial, p: u64) -> Result<Vec<u64>> {
    roots_mod_p_seeded(f, p, DEFAULT_SEED)
}

pub fn roots_mod_p_seeded(f: &IntPolynomial, p: u64, seed: u64) -> Result<Vec<u64>> {
    let g = FpPoly::from_int(f, p);
    if g.is_zero() {
        return Err(Error::ZeroReduction(p));
    }
    if g.degree() == Some(0) {
        return Ok(Vec::new());
    }
    if p < SCAN_LIMIT {
        return Ok((0..p).filter(|&a| g.eval(a) == 0).collect());
    }
    let lin = g.linear_part();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
    Ok(lin.split_linear(&mut rng))
}

/// The smallest root `a` of `f` mod `p` with `f'(a) ≢ 0`, if any.
pub fn simple_root_mod_p(f: &IntPolynomial, p: u64) -> Result<Option<SimpleRootWitness>> {
    let roots = roots_mod_p(f, p)?;
    let df = f.derivative();
    Ok(roots
        .into_iter()
        .find(|&a| df.eval_mod(a, p) != 0)
        .map(|a| SimpleRootWitness { p, a, simple: true }))
}

fn divides(p: u64, n: &BigInt) -> bool {
    (n % BigInt::from(p)).is_zero()
}

/// Checks one prime for [`smallest_simple_root_prime`]; `excluded` is `Q`
/// and `bad` is `Δ·lc(f)`.
fn check_prime(
    f: &IntPolynomial,
    p: u64,
    excluded: &BigInt,
    bad: &BigInt,
) -> Result<Option<SimpleRootWitness>> {
    if divides(p, excluded) {
        return Ok(None);
    }
    let roots = match roots_mod_p(f, p) {
        Ok(r) => r,
        Err(Error::ZeroReduction(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let df = f.derivative();
    let good = !divides(p, bad);
    for &a in &roots {
        if df.eval_mod(a, p) != 0 {
            return Ok(Some(SimpleRootWitness { p, a, simple: true }));
        }
        if good {
            return Err(Error::InternalAssertionFailed(format!(
                "root {a} mod {p} is repeated although p does not divide disc·lc"
            )));
        }
    }
    Ok(None)
}

/// The smallest prime `p ≤ p_max` with `p ∤ q` at which `f` has a simple
/// root. Primes are scanned in parallel blocks; the first hit wins.
pub fn smallest_simple_root_prime(
    f: &IntPolynomial,
    q: &BigInt,
    p_max: u64,
) -> Result<SimpleRootWitness> {
    smallest_simple_root_prime_from(f, q, 2, p_max)
}

pub fn smallest_simple_root_prime_from(
    f: &IntPolynomial,
    q: &BigInt,
    p_min: u64,
    p_max: u64,
) -> Result<SimpleRootWitness> {
    if q.is_zero() || q.is_negative() {
        return Err(Error::PreconditionViolated(
            "Q must be a positive integer".into(),
        ));
    }
    if f.deg() < 1 {
        return Err(Error::DegreeTooSmall(f.deg()));
    }
    let bad = f.discriminant()? * f.leading_coeff().unwrap();
    let mut primes = PrimeIter::new(p_min, p_max);
    let mut block = 64usize;
    loop {
        let chunk: Vec<u64> = primes.by_ref().take(block).collect();
        if chunk.is_empty() {
            return Err(Error::SearchExhausted(p_max));
        }
        let hit = chunk
            .par_iter()
            .map(|&p| check_prime(f, p, q, &bad))
            .find_first(|r| !matches!(r, Ok(None)));
        if let Some(r) = hit {
            return r.map(|w| w.expect("filtered"));
        }
        block = (block * 2).min(1 << 14);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GenericCase {
    /// `gcd(a_0, M) = 1` and `|a_0| > 1`: a prime divisor of `a_0`, root 0.
    ConstantTerm,
    /// `|a_0| = 1`: a prime divisor of `f(±iM)`.
    UnitConstant,
    /// `gcd(a_0, M) > 1`: a prime divisor of `f(±i a_0 M)/a_0`.
    SharedConstant,
}

impl GenericCase {
    pub fn number(self) -> u8 {
        match self {
            GenericCase::ConstantTerm => 1,
            GenericCase::UnitConstant => 2,
            GenericCase::SharedConstant => 3,
        }
    }
}

/// Output of [`generic_prime`]. `p` can exceed `u64`, so the witness is
/// kept as big integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericPrime {
    #[serde(with = "crate::io::bigint_str")]
    pub p: BigInt,
    /// Simple root of `f` mod `p`, reduced into `[0, p)`.
    #[serde(with = "crate::io::bigint_str")]
    pub root: BigInt,
    pub case: GenericCase,
    /// The integer point `x` whose value supplied `p`.
    #[serde(with = "crate::io::bigint_str")]
    pub point: BigInt,
    #[serde(with = "crate::io::bigint_str")]
    pub value: BigInt,
    /// Radical of the discriminant.
    #[serde(with = "crate::io::bigint_str")]
    pub radical: BigInt,
    #[serde(with = "crate::io::bigint_str")]
    pub bound: BigInt,
}

impl GenericPrime {
    pub fn witness(&self) -> Option<SimpleRootWitness> {
        Some(SimpleRootWitness {
            p: self.p.to_u64()?,
            a: self.root.to_u64()?,
            simple: true,
        })
    }
}

/// Smallest prime factor found for `n`, skipping primes dividing `avoid`.
fn prime_divisor(n: &BigInt, avoid: &BigInt, effort: &FactorEffort) -> Option<BigInt> {
    let fac = factorize(n, effort);
    fac.primes
        .keys()
        .map(|p| BigInt::from(p.clone()))
        .find(|p| !(avoid % p).is_zero())
}

/// Finds a prime `p` and an integer `a` with `a` a simple root of `f` mod
/// `p` and `p` at most `H`, `2H(dM)^d` or `2H(dHM)^d` depending on the
/// constant term, where `M` is the radical of the discriminant.
pub fn generic_prime(f: &IntPolynomial) -> Result<GenericPrime> {
    generic_prime_with(f, &FactorEffort::default())
}

pub fn generic_prime_with(f: &IntPolynomial, effort: &FactorEffort) -> Result<GenericPrime> {
    let d = f.deg();
    if f.is_zero() || d < 2 {
        return Err(Error::DegreeTooSmall(d));
    }
    let a0 = f.coeff(0);
    if a0.is_zero() {
        return Err(Error::PreconditionViolated(
            "f(0) = 0, so f is reducible".into(),
        ));
    }
    let disc = f.discriminant()?;
    if disc.is_zero() {
        return Err(Error::PreconditionViolated("discriminant is zero".into()));
    }
    let (m, fac) = radical(&disc, effort);
    if !fac.is_complete() {
        return Err(Error::FactorizationTimeout(format!("discriminant {disc}")));
    }
    let h = f.height();
    let dd = BigInt::from(d);
    let two = BigInt::from(2);
    let g = a0.gcd(&m);

    let (case, bound) = if g.is_one() && a0.abs() > BigInt::one() {
        (GenericCase::ConstantTerm, h.clone())
    } else if a0.abs().is_one() {
        (
            GenericCase::UnitConstant,
            &two * &h * num_traits::pow(&dd * &m, d),
        )
    } else {
        (
            GenericCase::SharedConstant,
            &two * &h * num_traits::pow(&dd * &h * &m, d),
        )
    };

    let mut found = None;
    let mut factoring_failed = false;
    match case {
        GenericCase::ConstantTerm => {
            if let Some(p) = prime_divisor(&a0, &m, effort) {
                found = Some((p, BigInt::zero(), a0.clone()));
            } else {
                factoring_failed = true;
            }
        }
        GenericCase::UnitConstant | GenericCase::SharedConstant => {
            let step = if case == GenericCase::UnitConstant {
                m.clone()
            } else {
                &a0 * &m
            };
            'scan: for i in 1..=d as i64 {
                for s in [1i64, -1] {
                    let x = &step * BigInt::from(s * i);
                    let v = f.evaluate(&x);
                    // f(x) ≡ a_0 (mod a_0 M), so the quotient is ≡ 1 mod M
                    let w = if case == GenericCase::UnitConstant {
                        v.clone()
                    } else {
                        &v / &a0
                    };
                    if w.abs().is_one() || w.is_zero() {
                        continue;
                    }
                    match prime_divisor(&w, &m, effort) {
                        Some(p) => {
                            found = Some((p, x, v));
                            break 'scan;
                        }
                        None => factoring_failed = true,
                    }
                }
            }
        }
    }
    let (p, point, value) = match found {
        Some(t) => t,
        None if factoring_failed => {
            return Err(Error::FactorizationTimeout(format!(
                "no prime divisor found for {f}"
            )))
        }
        None => {
            return Err(Error::InternalAssertionFailed(format!(
                "every candidate value was a unit for {f}"
            )))
        }
    };
    let root = point.mod_floor(&p);
    if !f.evaluate(&root).mod_floor(&p).is_zero() {
        return Err(Error::InternalAssertionFailed(format!(
            "{root} is not a root of {f} mod {p}"
        )));
    }
    if f.derivative().evaluate(&root).mod_floor(&p).is_zero() {
        return Err(Error::InternalAssertionFailed(format!(
            "root {root} mod {p} is not simple"
        )));
    }
    if p > bound {
        return Err(Error::InternalAssertionFailed(format!(
            "p = {p} exceeds bound {bound}"
        )));
    }
    Ok(GenericPrime {
        p,
        root,
        case,
        point,
        value,
        radical: m,
        bound,
    })
}
