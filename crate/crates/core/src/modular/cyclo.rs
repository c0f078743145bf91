//! Root counts of cyclotomic polynomials modulo primes and the correction
//! factor `δ(m)`.

use serde::Serialize;

use crate::factor::factorize_u64;
use crate::primes::totient;

/// Largest prime factor `ℓ` of `m ≥ 2` and `e` with `ℓ^e ∥ m`.
pub fn largest_prime_power(m: u64) -> (u64, u32) {
    assert!(m >= 2, "m must be at least 2");
    let (&l, &e) = factorize_u64(m)
        .iter()
        .next_back()
        .expect("m >= 2 has a prime factor");
    (l, e)
}

/// `φ(m/ℓ^e)` when `ℓ ≡ 1 (mod m/ℓ^e)` for the largest prime `ℓ | m`,
/// otherwise 1.
pub fn delta(m: u64) -> u64 {
    let (l, e) = largest_prime_power(m);
    let rest = m / l.pow(e);
    if l % rest == 1 % rest {
        totient(rest)
    } else {
        1
    }
}

/// Whether `Φ_m` has a root (equivalently, splits completely) mod `ℓ`:
/// `ℓ ≡ 1 (mod m/ℓ^e)` with `ℓ^e ∥ m`.
pub fn cyclotomic_criterion(m: u64, ell: u64) -> bool {
    let mut rest = m;
    while rest % ell == 0 {
        rest /= ell;
    }
    ell % rest == 1 % rest
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CyclotomicCount {
    pub m: u64,
    pub ell: u64,
    pub k: u32,
    /// Exact `N(ℓ)` for `Φ_m`.
    pub n_ell: u64,
    /// Upper bound for `N(ℓ^k)`; exact when `ℓ ∤ m`.
    pub n_ell_k_bound: u64,
    pub exact: bool,
}

/// Root counts of `Φ_m` modulo `ℓ` and `ℓ^k` from the splitting behaviour:
/// for `ℓ ∤ m` the roots are simple and all lift, for `ℓ | m` only
/// `φ(m/ℓ^e)` residues occur and each has at most `ℓ^{k-1}` lifts.
pub fn cyclotomic_root_count(m: u64, ell: u64, k: u32) -> CyclotomicCount {
    assert!(m >= 1 && k >= 1);
    let mut rest = m;
    while rest % ell == 0 {
        rest /= ell;
    }
    let divides = rest != m;
    let n_ell = if cyclotomic_criterion(m, ell) {
        totient(rest)
    } else {
        0
    };
    let n_ell_k_bound = if divides {
        n_ell * ell.pow(k - 1)
    } else {
        n_ell
    };
    CyclotomicCount {
        m,
        ell,
        k,
        n_ell,
        n_ell_k_bound,
        exact: !divides || k == 1,
    }
}
