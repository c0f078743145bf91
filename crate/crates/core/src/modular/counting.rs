//! Congruence counts `N(L, q)`, the value product `W(L)` and its prime
//! divisors.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{factorize, FactorEffort};
use crate::heights::ln_abs;
use crate::polyarith::{eval_reduced, IntPolynomial};

/// `#{1 ≤ j ≤ L : f(j) ≡ 0 (mod q)}`, using that `f(j) mod q` has period `q`.
pub fn count_roots_n(f: &IntPolynomial, l: u64, q: u64) -> u64 {
    assert!(q >= 1, "modulus must be positive");
    let c = f.reduce_mod(q);
    let scan = |hi: u64| {
        (1..=hi)
            .filter(|&j| eval_reduced(&c, j % q, q) == 0)
            .count() as u64
    };
    if l <= q {
        return scan(l);
    }
    let full = scan(q);
    (l / q) * full + scan(l % q)
}

/// `N(q) = N(q, q)`.
pub fn count_roots(f: &IntPolynomial, q: u64) -> u64 {
    count_roots_n(f, q, q)
}

fn pow_big(b: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(b), e as usize)
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowCheck {
    pub l: u64,
    pub n_l: u64,
    /// `|q N(L,q) − L N(q)| < d q`.
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimePowerCheck {
    pub k: u32,
    pub q: u64,
    pub n_q: u64,
    /// `m ℓ^{k−1}` with `m` the number of distinct complex roots.
    pub root_count_bound: u64,
    pub root_count_holds: bool,
    /// `N(q)^d ≤ 2^d ℓ^{k(d−1)}`, i.e. `N(q) ≤ 2 ℓ^{k(1−1/d)}`.
    pub power_bound: f64,
    pub power_holds: bool,
    pub windows: Vec<WindowCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceReport {
    pub ell: u64,
    pub degree: usize,
    pub distinct_roots: usize,
    pub checks: Vec<PrimePowerCheck>,
}

impl CongruenceReport {
    pub fn all_hold(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.root_count_holds && c.power_holds && c.windows.iter().all(|w| w.holds))
    }

    /// Number of individual inequalities evaluated.
    pub fn check_count(&self) -> usize {
        self.checks.iter().map(|c| 2 + c.windows.len()).sum()
    }
}

/// Brute-force evaluation of the three prime-power congruence bounds for
/// `q = ℓ^k`, `1 ≤ k ≤ k_max`, all as exact integer comparisons.
pub fn verify_congruence_lemmas(
    f: &IntPolynomial,
    ell: u64,
    k_max: u32,
    windows: &[u64],
) -> Result<CongruenceReport> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d < 1 {
        return Err(Error::DegreeTooSmall(d));
    }
    if (f.content() % BigInt::from(ell)).is_zero() {
        return Err(Error::PreconditionViolated(format!(
            "content of {f} is divisible by {ell}"
        )));
    }
    let m = f.distinct_root_count();
    let mut checks = Vec::new();
    for k in 1..=k_max {
        let q = ell
            .checked_pow(k)
            .ok_or_else(|| Error::PreconditionViolated(format!("{ell}^{k} overflows")))?;
        let n_q = count_roots(f, q);
        let root_count_bound = m as u64 * q / ell;
        let lhs = num_traits::pow(BigInt::from(n_q), d);
        let rhs = pow_big(2, d as u64) * pow_big(ell, k as u64 * (d as u64 - 1));
        let windows = windows
            .iter()
            .map(|&l| {
                let n_l = count_roots_n(f, l, q);
                let dev = (BigInt::from(q) * n_l - BigInt::from(l) * n_q).abs();
                WindowCheck {
                    l,
                    n_l,
                    holds: dev < BigInt::from(d as u64) * q,
                }
            })
            .collect();
        checks.push(PrimePowerCheck {
            k,
            q,
            n_q,
            root_count_bound,
            root_count_holds: n_q <= root_count_bound,
            power_bound: 2.0 * (ell as f64).powf(k as f64 * (1.0 - 1.0 / d as f64)),
            power_holds: lhs <= rhs,
            windows,
        });
    }
    Ok(CongruenceReport {
        ell,
        degree: d,
        distinct_roots: m,
        checks,
    })
}

/// Prime factorization of `W(L) = ∏_{j ≤ L} max(1, |f(j)|)`.
#[derive(Clone, Debug, Serialize)]
pub struct DivisorProfile {
    pub f: IntPolynomial,
    pub l: u64,
    /// `r_ℓ(L)`, the exponent of `ℓ` in `W(L)`. Keys are decimal strings.
    #[serde(serialize_with = "ser_map")]
    pub exponents: BTreeMap<BigUint, u64>,
    /// `K_ℓ(L)`: the largest `r` with `ℓ^r | f(j)` for some `j` with `f(j) ≠ 0`.
    #[serde(serialize_with = "ser_map")]
    pub max_powers: BTreeMap<BigUint, u64>,
    /// Composite cofactors the factoring budget left unsplit; each one is
    /// counted once in `omega`, so `omega` is then a lower bound.
    #[serde(serialize_with = "ser_vec")]
    pub unfactored: Vec<BigUint>,
    pub omega: usize,
    /// `Σ log max(1, |f(j)|)`.
    pub log_w: f64,
    /// Number of `j ≤ L` with `f(j) = 0`.
    pub zeros: u64,
}

fn ser_map<S: serde::Serializer>(
    m: &BTreeMap<BigUint, u64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(&k.to_string(), v)?;
    }
    map.end()
}

fn ser_vec<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl DivisorProfile {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }

    /// `W(L)` rebuilt from the factorization.
    pub fn product(&self) -> BigInt {
        let mut w = BigUint::one();
        for (p, &e) in &self.exponents {
            w *= num_traits::pow(p.clone(), e as usize);
        }
        for c in &self.unfactored {
            w *= c;
        }
        BigInt::from(w)
    }
}

pub fn w_product(f: &IntPolynomial, l: u64) -> BigInt {
    (1..=l)
        .into_par_iter()
        .map(|j| {
            let v = f.evaluate(&BigInt::from(j)).abs();
            if v.is_zero() {
                BigInt::one()
            } else {
                v
            }
        })
        .reduce(BigInt::one, |a, b| a * b)
}

/// Factors every `|f(j)| > 1`, `j ≤ L`, and aggregates the exponents.
/// Cross-checks `r_ℓ(L) = Σ_k (N(L, ℓ^k) − #zeros)` for every profiled
/// prime whose powers up to `K_ℓ(L)+1` fit in `u64`.
pub fn divisor_profile(f: &IntPolynomial, l: u64, effort: &FactorEffort) -> Result<DivisorProfile> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if l < 1 {
        return Err(Error::PreconditionViolated("L must be positive".into()));
    }
    let per_j: Vec<(BigInt, Option<crate::factor::Factorization>)> = (1..=l)
        .into_par_iter()
        .map(|j| {
            let v = f.evaluate(&BigInt::from(j));
            let fac = if v.abs() > BigInt::one() {
                Some(factorize(&v, effort))
            } else {
                None
            };
            (v, fac)
        })
        .collect();
    let mut exponents: BTreeMap<BigUint, u64> = BTreeMap::new();
    let mut max_powers: BTreeMap<BigUint, u64> = BTreeMap::new();
    let mut unfactored = Vec::new();
    let mut log_w = 0.0;
    let mut zeros = 0;
    for (v, fac) in &per_j {
        if v.is_zero() {
            zeros += 1;
            continue;
        }
        log_w += ln_abs(v);
        if let Some(fac) = fac {
            for (p, &e) in &fac.primes {
                *exponents.entry(p.clone()).or_insert(0) += e as u64;
                let k = max_powers.entry(p.clone()).or_insert(0);
                *k = (*k).max(e as u64);
            }
            unfactored.extend(fac.unfactored.iter().cloned());
        }
    }
    let mut distinct_cofactors = unfactored.clone();
    distinct_cofactors.sort();
    distinct_cofactors.dedup();
    let omega = exponents.len() + distinct_cofactors.len();
    let profile = DivisorProfile {
        f: f.clone(),
        l,
        exponents,
        max_powers,
        unfactored,
        omega,
        log_w,
        zeros,
    };
    for (p, &r) in &profile.exponents {
        let Some(ell) = p.to_u64() else { continue };
        let kmax = profile.max_powers[p];
        let Some(top) = ell.checked_pow(kmax as u32 + 1) else {
            continue;
        };
        let mut sum = 0;
        let mut q = 1u64;
        for _ in 0..=kmax {
            q *= ell;
            sum += count_roots_n(f, l, q) - zeros;
        }
        debug_assert_eq!(q, top);
        if sum != r {
            return Err(Error::InternalAssertionFailed(format!(
                "exponent of {ell} in W({l}) is {r} but congruence counts give {sum}"
            )));
        }
    }
    Ok(profile)
}

/// `ℓ^{K_ℓ(L)} ≤ 2 H L^d` for every profiled prime, the exact form of
/// `K_ℓ(L) ≤ log(2HL^d)/log ℓ`. Valid for `L ≥ 2`.
pub fn max_power_bound_holds(profile: &DivisorProfile) -> bool {
    let d = profile.f.deg();
    let cap = BigInt::from(2) * profile.f.height() * num_traits::pow(BigInt::from(profile.l), d);
    profile
        .max_powers
        .iter()
        .all(|(p, &k)| num_traits::pow(BigInt::from(p.clone()), k as usize) <= cap)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductCheck {
    pub l: u64,
    pub degree: usize,
    pub log_w: f64,
    /// `(dL/18) log(L/5)`.
    pub log_bound: f64,
    /// Exact verdict of `W(L)^{18} · 5^{dL} ≥ L^{dL}`.
    pub holds: bool,
}

/// Checks `W(L) ≥ (L/5)^{dL/18}` exactly, for `L ≥ 51(2d+1)`.
pub fn check_product_lower_bound(f: &IntPolynomial, l: u64) -> Result<ProductCheck> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d < 1 {
        return Err(Error::DegreeTooSmall(d));
    }
    let threshold = 51 * (2 * d as u64 + 1);
    if l < threshold {
        return Err(Error::HypothesisNotMet(format!(
            "L = {l} is below 51(2d+1) = {threshold}"
        )));
    }
    let w = w_product(f, l);
    let e = d * l as usize;
    let lhs = num_traits::pow(w.clone(), 18) * num_traits::pow(BigInt::from(5), e);
    let rhs = num_traits::pow(BigInt::from(l), e);
    Ok(ProductCheck {
        l,
        degree: d,
        log_w: ln_abs(&w),
        log_bound: (d as f64 * l as f64 / 18.0) * (l as f64 / 5.0).ln(),
        holds: lhs >= rhs,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductOmegaReport {
    pub product: Option<ProductCheck>,
    /// Why the product check was skipped, if it was.
    pub product_skipped: Option<String>,
    pub omega: usize,
    pub omega_is_lower_bound: bool,
    pub c1: f64,
    pub c2: f64,
    /// `min{c1 L / log⁺H, L^{c2/d}}`; reported, never asserted.
    pub omega_rhs: f64,
    pub omega_ratio: f64,
}

/// The product lower bound (asserted) together with the distinct-prime
/// count of `W(L)` against `min{c1 L/log⁺H, L^{c2/d}}` (reported only).
pub fn verify_product_and_omega_lemmas(
    f: &IntPolynomial,
    l: u64,
    c1: f64,
    c2: f64,
    effort: &FactorEffort,
) -> Result<ProductOmegaReport> {
    let (product, product_skipped) = match check_product_lower_bound(f, l) {
        Ok(p) => (Some(p), None),
        Err(Error::HypothesisNotMet(msg)) => (None, Some(msg)),
        Err(e) => return Err(e),
    };
    let profile = divisor_profile(f, l, effort)?;
    let d = f.deg() as f64;
    let log_plus_h = ln_abs(&f.height()).max(1.0);
    let lf = l as f64;
    let omega_rhs = (c1 * lf / log_plus_h).min(lf.powf(c2 / d));
    Ok(ProductOmegaReport {
        product,
        product_skipped,
        omega: profile.omega,
        omega_is_lower_bound: !profile.is_complete(),
        c1,
        c2,
        omega_rhs,
        omega_ratio: profile.omega as f64 / omega_rhs,
    })
}
