//! Integer factorization with a bounded effort budget.
//!
//! Trial division up to [`FactorEffort::trial_limit`], then Brent's variant
//! of Pollard's rho. A composite cofactor that survives the rho budget is
//! returned separately so callers can treat it as a single pseudo-prime.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::primes::{is_prime_big, is_prime_u64, mul_mod, primes_up_to};

#[derive(Debug, Clone, Copy)]
pub struct FactorEffort {
    pub trial_limit: u64,
    /// Total rho iterations allowed per composite cofactor.
    pub rho_iterations: u64,
}

impl Default for FactorEffort {
    fn default() -> Self {
        Self {
            trial_limit: 1_000_000,
            rho_iterations: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Factorization {
    pub primes: BTreeMap<BigUint, u32>,
    /// Composite cofactors the budget could not split, with multiplicity.
    pub unfactored: Vec<BigUint>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }

    fn add(&mut self, p: BigUint, e: u32) {
        *self.primes.entry(p).or_insert(0) += e;
    }
}

fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(1_000_000))
}

fn rho_brent_u64(n: u64, seed: u64, budget: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let c = seed % (n - 1) + 1;
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let mut y = seed % n;
    let m = 128u64;
    let mut g = 1u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut x = y;
    let mut ys = y;
    let mut spent = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += m;
        }
        r *= 2;
        spent += r;
        if spent > budget {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn rho_brent_big(n: &BigUint, seed: u64, budget: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let c = BigUint::from(seed) % n + 1u32;
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(seed.wrapping_mul(0x9E37_79B9) | 3) % n;
    let m = 128u64;
    let mut g = BigUint::one();
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut spent = 0u64;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                q = (&q * diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        spent += r;
        if spent > budget {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

/// Splits a composite `n` into a nontrivial factor, trying several seeds
/// until the iteration budget is spent.
fn split(n: &BigUint, budget: u64) -> Option<BigUint> {
    let per_seed = (budget / 8).max(1 << 12);
    let mut spent = 0;
    let mut seed = 1u64;
    while spent < budget {
        let found = match n.to_u64() {
            Some(v) => rho_brent_u64(v, seed, per_seed).map(BigUint::from),
            None => rho_brent_big(n, seed, per_seed),
        };
        if let Some(d) = found {
            return Some(d);
        }
        spent += per_seed;
        seed += 1;
    }
    None
}

fn factor_cofactor(n: BigUint, effort: &FactorEffort, out: &mut Factorization) {
    if n.is_one() {
        return;
    }
    if is_prime_big(&n) {
        out.add(n, 1);
        return;
    }
    match split(&n, effort.rho_iterations) {
        Some(d) => {
            let e = &n / &d;
            factor_cofactor(d, effort, out);
            factor_cofactor(e, effort, out);
        }
        None => out.unfactored.push(n),
    }
}

/// Factors `|n|` (`n != 0`).
pub fn factorize(n: &BigInt, effort: &FactorEffort) -> Factorization {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut rest = n.magnitude().clone();
    let mut out = Factorization::default();
    for &p in trial_primes() {
        if p > effort.trial_limit {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        if let Some(small) = rest.to_u64() {
            if small % p != 0 {
                continue;
            }
        } else if !(&rest % p).is_zero() {
            continue;
        }
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        out.add(pb, e);
    }
    if rest.is_one() {
        return out;
    }
    if rest.to_u64().is_some_and(is_prime_u64) {
        out.add(rest, 1);
        return out;
    }
    factor_cofactor(rest, effort, &mut out);
    out
}

pub fn factorize_u64(n: u64) -> BTreeMap<u64, u32> {
    let f = factorize(&BigInt::from(n), &FactorEffort::default());
    debug_assert!(f.is_complete());
    f.primes
        .into_iter()
        .map(|(p, e)| (p.to_u64().expect("fits"), e))
        .collect()
}

/// Product of the distinct primes dividing `n`.
pub fn radical(n: &BigInt, effort: &FactorEffort) -> (BigInt, Factorization) {
    let f = factorize(n, effort);
    let mut r = BigInt::one();
    for p in f.primes.keys() {
        r *= BigInt::from(p.clone());
    }
    for c in &f.unfactored {
        r *= BigInt::from(c.clone());
    }
    (r, f)
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero());
    let mut n = n.magnitude().clone();
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}
