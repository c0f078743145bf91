//! Randomised self-check over every certified inequality in the crate.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heights::{check_height_mahler_inequality, isolate_roots, ln_abs};
use crate::modular::{check_product_lower_bound, generic_prime, verify_congruence_lemmas};
use crate::numfield::{
    coefficient_height_certificate, primitive_from_generators, FieldElement, GeneratorSet,
    NumberField,
};
use crate::padic::{find_embedding, recheck_valuation, EmbedOptions, Valuation};
use crate::polyarith::{check_irreducible, IntPolynomial, Irreducibility};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Quick,
    Full,
}

/// Deliberate corruption used to confirm a check can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Negates every discriminant before it is checked.
    DiscriminantSign,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckTally {
    pub passed: usize,
    pub failed: usize,
    /// First few failure messages.
    pub failures: Vec<String>,
}

impl CheckTally {
    fn record(&mut self, r: Result<()>) {
        match r {
            Ok(()) => self.passed += 1,
            Err(e) => {
                self.failed += 1;
                if self.failures.len() < 5 {
                    self.failures.push(e.to_string());
                }
            }
        }
    }

    fn merge(mut self, o: CheckTally) -> CheckTally {
        self.passed += o.passed;
        self.failed += o.failed;
        for f in o.failures {
            if self.failures.len() < 5 {
                self.failures.push(f);
            }
        }
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub scope: Scope,
    pub seed: u64,
    pub fault: Option<Fault>,
    pub checks: BTreeMap<String, CheckTally>,
    pub total: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn failing(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, t)| t.failed > 0)
            .map(|(k, _)| k.as_str())
            .collect()
    }
}

/// Random primitive polynomial of exact degree `d` with positive leading
/// coefficient, height at most `h`, and proven irreducible.
pub fn random_irreducible<R: Rng>(rng: &mut R, d: usize, h: i64, monic: bool) -> IntPolynomial {
    loop {
        let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-h..=h)).collect();
        c[d] = if monic { 1 } else { rng.gen_range(1..=h) };
        let f = IntPolynomial::from_i64(&c);
        if f.content() != BigInt::from(1) || f.coeff(0).is_zero() {
            continue;
        }
        if f.discriminant().map(|x| x.is_zero()).unwrap_or(true) {
            continue;
        }
        if matches!(check_irreducible(&f), Ok(Irreducibility::Proven)) {
            return f;
        }
    }
}

pub fn random_rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> BigRational {
    BigRational::new(
        rng.gen_range(-num..=num).into(),
        rng.gen_range(1..=den).into(),
    )
}

pub fn random_element<R: Rng>(
    rng: &mut R,
    field: &Arc<NumberField>,
    num: i64,
    den: i64,
) -> FieldElement {
    loop {
        let coords = (0..field.degree())
            .map(|_| random_rational(rng, num, den))
            .collect();
        let e = FieldElement::new(field, coords).unwrap();
        if !e.is_zero() {
            return e;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscriminantCheck {
    #[serde(with = "crate::io::bigint_str")]
    pub discriminant: BigInt,
    pub log_abs: f64,
    /// `log(d^{2d} H^{2d−2})`.
    pub log_bound: f64,
    pub bound_holds: bool,
    pub real_roots: usize,
    /// `sign Δ = (−1)^{r₂}`.
    pub sign_holds: bool,
}

/// `|Δ(f)| < d^{2d} H^{2d−2}` exactly, and the sign of `Δ` against the number
/// of complex-conjugate root pairs.
pub fn check_discriminant(f: &IntPolynomial, fault: Option<Fault>) -> Result<DiscriminantCheck> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d < 2 {
        return Err(Error::DegreeTooSmall(d));
    }
    let mut disc = f.discriminant()?;
    if fault == Some(Fault::DiscriminantSign) {
        disc = -disc;
    }
    let h = f.height();
    let bound = num_traits::pow(BigInt::from(d), 2 * d) * num_traits::pow(h.clone(), 2 * d - 2);
    let balls = isolate_roots(f, 1e-12)?;
    if balls.iter().any(|b| b.multiplicity > 1) {
        return Err(Error::PreconditionViolated(format!(
            "{f} has a repeated root"
        )));
    }
    // a certified ball meeting the real axis is its own conjugate
    let real_roots = balls
        .iter()
        .filter(|b| b.center.im.abs() <= b.radius)
        .count();
    let r2 = (d - real_roots) / 2;
    let sign_holds = (disc.is_positive()) == (r2 % 2 == 0);
    let report = DiscriminantCheck {
        log_abs: ln_abs(&disc),
        log_bound: 2.0 * d as f64 * (d as f64).ln() + (2 * d - 2) as f64 * ln_abs(&h),
        bound_holds: disc.abs() < bound,
        discriminant: disc,
        real_roots,
        sign_holds,
    };
    if !report.bound_holds {
        return Err(Error::InequalityViolated(format!(
            "|Δ({f})| exceeds d^(2d) H^(2d-2)"
        )));
    }
    if !report.sign_holds {
        return Err(Error::InequalityViolated(format!(
            "sign of Δ({f}) = {} disagrees with {} complex pairs",
            report.discriminant, r2
        )));
    }
    Ok(report)
}

struct Sizes {
    mahler: usize,
    primitive: usize,
    coefficient: usize,
    generic: usize,
    discriminant: usize,
    congruence_polys: usize,
    embedding: usize,
}

fn sizes(scope: Scope) -> Sizes {
    match scope {
        Scope::Quick => Sizes {
            mahler: 200,
            primitive: 6,
            coefficient: 60,
            generic: 100,
            discriminant: 200,
            congruence_polys: 12,
            embedding: 12,
        },
        Scope::Full => Sizes {
            mahler: 20_000,
            primitive: 200,
            coefficient: 4_000,
            generic: 5_000,
            discriminant: 20_000,
            congruence_polys: 400,
            embedding: 1_000,
        },
    }
}

/// Runs `n` seeded trials in parallel; trial `i` gets its own RNG stream.
fn trials<F>(n: usize, seed: u64, salt: u64, f: F) -> CheckTally
where
    F: Fn(&mut ChaCha8Rng) -> Vec<Result<()>> + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (salt << 32) ^ i as u64);
            let mut t = CheckTally::default();
            for r in f(&mut rng) {
                t.record(r);
            }
            t
        })
        .reduce(CheckTally::default, CheckTally::merge)
}

fn biquadratic(a: i64, b: i64) -> Result<(Arc<NumberField>, Vec<FieldElement>)> {
    // θ = √a + √b, θ⁴ − 2(a+b)θ² + (a−b)² = 0
    let f = IntPolynomial::from_i64(&[(a - b) * (a - b), 0, -2 * (a + b), 0, 1]);
    let field = NumberField::new(f)?;
    // √b = (θ³ − (a+3b)θ) / (2(a−b)),  √a = θ − √b
    let den = 2 * (a - b);
    let sb = FieldElement::from_ints(&field, &[0, -(a + 3 * b), 0, 1], den);
    let sa = FieldElement::generator(&field).sub(&sb)?;
    Ok((field, vec![sa, sb]))
}

fn squarefree_pick<R: Rng>(rng: &mut R) -> i64 {
    loop {
        let v: i64 = rng.gen_range(-30..=30);
        if v == 0 || v == 1 {
            continue;
        }
        let n = v.unsigned_abs();
        if (2..=5u64).all(|p| n % (p * p) != 0) {
            return v;
        }
    }
}

fn fail(msg: String) -> Result<()> {
    Err(Error::InequalityViolated(msg))
}

/// Exercises every certified inequality on seeded random instances.
pub fn run_verification_suite(scope: Scope, seed: u64, fault: Option<Fault>) -> SuiteReport {
    let s = sizes(scope);
    let mut checks = BTreeMap::new();

    checks.insert(
        "height-mahler-sandwich".to_string(),
        trials(s.mahler, seed, 1, |rng| {
            let d = rng.gen_range(1..=8);
            let h = rng.gen_range(1..=1000);
            let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-h..=h)).collect();
            if c[d] == 0 {
                c[d] = h;
            }
            let f = IntPolynomial::from_i64(&c);
            vec![check_height_mahler_inequality(&f).map(|_| ())]
        }),
    );

    checks.insert(
        "primitive-element-height".to_string(),
        trials(s.primitive, seed, 2, |rng| {
            let a = squarefree_pick(rng);
            let b = loop {
                let b = squarefree_pick(rng);
                if b != a {
                    break b;
                }
            };
            let r = biquadratic(a, b).and_then(|(field, gens)| {
                let gs = GeneratorSet::new(&field, gens)?;
                let prim = primitive_from_generators(&gs)?;
                let c = &prim.certificate;
                if c.height > c.height_bound || c.log_mahler > c.log_mahler_bound {
                    return fail(format!(
                        "primitive element for √{a}, √{b} exceeds its bound"
                    ));
                }
                Ok(())
            });
            vec![r]
        }),
    );

    checks.insert(
        "coefficient-height".to_string(),
        trials(s.coefficient, seed, 3, |rng| {
            let d = rng.gen_range(2..=4);
            let f = {
                let monic = rng.gen_bool(0.5);
                random_irreducible(rng, d, 20, monic)
            };
            let field = match NumberField::new(f) {
                Ok(k) => k,
                Err(e) => return vec![Err(e)],
            };
            (0..3)
                .map(|_| {
                    let beta = random_element(rng, &field, 1000, 1000);
                    coefficient_height_certificate(&beta).map(|_| ())
                })
                .collect()
        }),
    );

    checks.insert(
        "generic-prime".to_string(),
        trials(s.generic, seed, 4, |rng| {
            let d = rng.gen_range(2..=4);
            let f = {
                let monic = rng.gen_bool(0.5);
                random_irreducible(rng, d, 100, monic)
            };
            let r = generic_prime(&f).and_then(|g| {
                let p = g.p.clone();
                if p < BigInt::from(2) || p > g.bound {
                    return fail(format!("prime {} above bound {} for {f}", g.p, g.bound));
                }
                let a = g.root.clone();
                if !(f.evaluate(&a) % &p).is_zero() || (f.derivative().evaluate(&a) % &p).is_zero()
                {
                    return fail(format!(
                        "{} is not a simple root of {f} mod {}",
                        g.root, g.p
                    ));
                }
                Ok(())
            });
            vec![r]
        }),
    );

    checks.insert(
        "discriminant-bound".to_string(),
        trials(s.discriminant, seed, 5, |rng| {
            let d = rng.gen_range(2..=6);
            let f = {
                let monic = rng.gen_bool(0.5);
                random_irreducible(rng, d, 50, monic)
            };
            vec![check_discriminant(&f, fault).map(|_| ())]
        }),
    );

    checks.insert(
        "congruence-root-counts".to_string(),
        trials(s.congruence_polys, seed, 6, |rng| {
            let d = rng.gen_range(1..=4);
            let f = {
                let monic = rng.gen_bool(0.5);
                random_irreducible(rng, d, 30, monic)
            };
            let mut out = Vec::new();
            for ell in [2u64, 3, 5, 7] {
                let k_max = if ell <= 3 { 4 } else { 2 };
                match verify_congruence_lemmas(&f, ell, k_max, &[1, 2, 5, 13]) {
                    Ok(rep) => {
                        for c in &rep.checks {
                            out.push(if c.root_count_holds {
                                Ok(())
                            } else {
                                fail(format!(
                                    "N({}) = {} exceeds {} for {f}",
                                    c.q, c.n_q, c.root_count_bound
                                ))
                            });
                            out.push(if c.power_holds {
                                Ok(())
                            } else {
                                fail(format!("N({})^d bound fails for {f}", c.q))
                            });
                            for w in &c.windows {
                                out.push(if w.holds {
                                    Ok(())
                                } else {
                                    fail(format!("window L = {} mod {} deviates for {f}", w.l, c.q))
                                });
                            }
                        }
                    }
                    Err(e) => out.push(Err(e)),
                }
            }
            out
        }),
    );

    let product_cases: &[(&[i64], u64)] = match scope {
        Scope::Quick => &[(&[0, 1], 160), (&[1, 0, 1], 260)],
        Scope::Full => &[
            (&[0, 1], 160),
            (&[1, 0, 1], 260),
            (&[-2, 0, 1], 260),
            (&[1, 1, 1], 400),
            (&[-2, 0, 0, 1], 400),
        ],
    };
    let mut product = CheckTally::default();
    for (c, l) in product_cases {
        let f = IntPolynomial::from_i64(c);
        product.record(check_product_lower_bound(&f, *l).and_then(|r| {
            if r.holds {
                Ok(())
            } else {
                fail(format!("W({l}) below (L/5)^(dL/18) for {f}"))
            }
        }));
    }
    checks.insert("product-lower-bound".to_string(), product);

    checks.insert(
        "embedding-units".to_string(),
        trials(s.embedding, seed, 8, |rng| {
            let d = rng.gen_range(2..=4);
            let f = {
                let monic = rng.gen_bool(0.5);
                random_irreducible(rng, d, 20, monic)
            };
            let r = NumberField::new(f).and_then(|field| {
                let n = rng.gen_range(1..=3);
                let named: Vec<(String, FieldElement)> = (0..n)
                    .map(|i| (format!("b{i}"), random_element(rng, &field, 1000, 1000)))
                    .collect();
                let opts = EmbedOptions {
                    p_max: 10_000_000,
                    ..Default::default()
                };
                let res = find_embedding(&field, &named, &opts)?;
                if res.element_valuations.values().any(|&v| v != 0) {
                    return fail(format!("nonzero valuation at p = {}", res.p));
                }
                for (name, beta) in &named {
                    match recheck_valuation(
                        &field,
                        res.p,
                        res.root_mod_p,
                        beta,
                        2 * opts.precision,
                    )? {
                        Valuation::Exact(0) => {}
                        v => return fail(format!("{name} rechecks to {v:?} at p = {}", res.p)),
                    }
                }
                Ok(())
            });
            vec![r]
        }),
    );

    let total = checks.values().map(|t| t.passed + t.failed).sum();
    let failed = checks.values().map(|t| t.failed).sum();
    SuiteReport {
        scope,
        seed,
        fault,
        checks,
        total,
        failed,
    }
}
