//! Fixed-precision `Z_p` arithmetic, Hensel lifting, and embeddings
//! `σ: K → Q_p` under which a given set of elements are all `p`-adic units.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{evaluate_bound, inputs, BoundReport, Constants};
use crate::error::{Error, Result};
use crate::factor::valuation;
use crate::heights::abs_log_height;
use crate::modular::roots_mod_p;
use crate::numfield::{
    coefficient_height_certificate, power_basis_coords, FieldElement, NumberField,
};
use crate::polyarith::IntPolynomial;
use crate::primes::PrimeIter;

pub const DEFAULT_PRECISION: u32 = 64;
/// Largest precision tried when a valuation is not yet determined.
pub const MAX_PRECISION: u32 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Valuation {
    Exact(i64),
    /// The residue vanished at this precision.
    AtLeast(i64),
}

/// `x ≡ p^{-shift} · residue (mod p^{k-shift})` with `0 ≤ residue < p^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PAdicApprox {
    pub p: u64,
    pub k: u32,
    #[serde(with = "crate::io::bigint_str")]
    pub residue: BigInt,
    pub shift: u32,
    pub valuation: Valuation,
}

impl PAdicApprox {
    pub fn new(p: u64, k: u32, residue: BigInt, shift: u32) -> Self {
        let modulus = pow_p(p, k);
        let residue = residue.mod_floor(&modulus);
        let valuation = if residue.is_zero() {
            Valuation::AtLeast(k as i64 - shift as i64)
        } else {
            Valuation::Exact(valuation(&residue, p) as i64 - shift as i64)
        };
        Self {
            p,
            k,
            residue,
            shift,
            valuation,
        }
    }

    pub fn modulus(&self) -> BigInt {
        pow_p(self.p, self.k)
    }

    /// Base-`p` digits of the residue, least significant first, `k` of them.
    pub fn digits(&self) -> Vec<u64> {
        let p = BigInt::from(self.p);
        let mut r = self.residue.clone();
        (0..self.k)
            .map(|_| {
                let (q, d) = r.div_mod_floor(&p);
                r = q;
                d.to_u64().expect("digit below p")
            })
            .collect()
    }

    pub fn is_unit(&self) -> bool {
        self.valuation == Valuation::Exact(0)
    }
}

pub fn pow_p(p: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Lifts a simple root `a` of `f` mod `p` to `η mod p^k` by Newton steps
/// with doubling precision.
pub fn hensel_lift(f: &IntPolynomial, p: u64, a: u64, k: u32) -> Result<PAdicApprox> {
    if k == 0 {
        return Err(Error::PreconditionViolated(
            "precision must be at least 1".into(),
        ));
    }
    let pb = BigInt::from(p);
    let df = f.derivative();
    let a = BigInt::from(a).mod_floor(&pb);
    if !f.evaluate(&a).mod_floor(&pb).is_zero() || df.evaluate(&a).mod_floor(&pb).is_zero() {
        return Err(Error::NotSimpleRoot(a.to_string(), p));
    }
    let mut eta = a;
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let m = pow_p(p, prec);
        let d = df.evaluate(&eta);
        let inv = inv_mod_big(&d, &m).expect("f'(η) is a unit");
        eta = (&eta - f.evaluate(&eta) * inv).mod_floor(&m);
        if !f.evaluate(&eta).mod_floor(&m).is_zero() {
            return Err(Error::InternalAssertionFailed(format!(
                "Newton step failed at precision {prec} for p = {p}"
            )));
        }
    }
    Ok(PAdicApprox::new(p, k, eta, 0))
}

/// `v_p(x)` for nonzero rational `x`.
pub fn rational_valuation(x: &BigRational, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    Ok(valuation(x.numer(), p) as i64 - valuation(x.denom(), p) as i64)
}

/// `σ(β) = (1/b) Σ a_j η^j` where `σ(α) = η`. The precision is doubled,
/// up to [`MAX_PRECISION`], while the numerator vanishes.
pub fn embed_element(
    field: &NumberField,
    eta: &PAdicApprox,
    beta: &FieldElement,
) -> Result<PAdicApprox> {
    let coords = power_basis_coords(beta)?;
    let p = eta.p;
    let root = (&eta.residue % BigInt::from(p)).to_u64().expect("below p");
    let e = valuation(&coords.b, p);
    let b_unit = &coords.b / pow_p(p, e);
    let mut k = eta.k;
    let mut eta = eta.clone();
    loop {
        let m = pow_p(p, k);
        let num = coords.a.iter().rev().fold(BigInt::zero(), |acc, c| {
            (acc * &eta.residue + c).mod_floor(&m)
        });
        if !num.is_zero() {
            let inv = inv_mod_big(&b_unit, &m).expect("unit part of b");
            return Ok(PAdicApprox::new(p, k, num * inv, e));
        }
        if k >= MAX_PRECISION {
            return Err(Error::PrecisionExhausted(k));
        }
        k = (2 * k).min(MAX_PRECISION);
        eta = hensel_lift(field.defining_poly(), p, root, k)?;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum SkipReason {
    /// No simple root of `f` mod `p`.
    #[serde(rename = "no_root")]
    NoRoot,
    /// `p` divides the discriminant.
    #[serde(rename = "discriminant")]
    Discriminant,
    /// `p` divides a coordinate denominator `b_i`.
    #[serde(rename = "denominator")]
    Denominator,
    /// `p` divides the leading coefficient of `f`.
    #[serde(rename = "leading_coefficient")]
    LeadingCoefficient,
}

#[derive(Clone, Copy, Debug)]
pub struct EmbedOptions {
    pub p_max: u64,
    pub precision: u32,
    pub constants: Constants,
    pub seed: u64,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        Self {
            p_max: crate::modular::DEFAULT_P_MAX,
            precision: DEFAULT_PRECISION,
            constants: Constants::default(),
            seed: crate::modular::DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementImage {
    pub name: String,
    pub valuation: i64,
    pub image: PAdicApprox,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingResult {
    pub p: u64,
    /// Root of `f` mod `p` that `α` is sent to.
    pub root_mod_p: u64,
    pub eta: PAdicApprox,
    /// Base-`p` digits of `η`, least significant first.
    pub eta_digits: Vec<u64>,
    /// Valuations of every element and of every inverse.
    pub element_valuations: BTreeMap<String, i64>,
    pub images: Vec<ElementImage>,
    pub skipped_primes: Vec<(u64, SkipReason)>,
    /// Coordinate denominators `b_i` of the elements and their inverses.
    #[serde(with = "crate::io::bigint_vec")]
    pub denominators: Vec<BigInt>,
    /// Number of coefficient-height certificates checked.
    pub coefficient_checks: usize,
    pub bound: BoundReport,
}

fn classify(
    f: &IntPolynomial,
    p: u64,
    disc: &BigInt,
    lc: &BigInt,
    dens: &BigInt,
    seed: u64,
) -> Result<std::result::Result<u64, SkipReason>> {
    let pb = BigInt::from(p);
    if (disc % &pb).is_zero() {
        return Ok(Err(SkipReason::Discriminant));
    }
    if (lc % &pb).is_zero() {
        return Ok(Err(SkipReason::LeadingCoefficient));
    }
    if (dens % &pb).is_zero() {
        return Ok(Err(SkipReason::Denominator));
    }
    let roots = crate::modular::roots_mod_p_seeded(f, p, seed)?;
    let df = f.derivative();
    match roots.first() {
        None => Ok(Err(SkipReason::NoRoot)),
        Some(&a) if df.eval_mod(a, p) != 0 => Ok(Ok(a)),
        Some(&a) => Err(Error::InternalAssertionFailed(format!(
            "repeated root {a} mod {p} with p not dividing the discriminant"
        ))),
    }
}

/// Least prime `p` with an embedding `K → Q_p` under which every element of
/// `elements` (and its inverse) is a unit. Primes dividing the
/// discriminant, the leading coefficient or a coordinate denominator are
/// skipped, as are primes where `f` has no root.
pub fn find_embedding(
    field: &Arc<NumberField>,
    elements: &[(String, FieldElement)],
    opts: &EmbedOptions,
) -> Result<EmbeddingResult> {
    let f = field.defining_poly();
    let d = field.degree();
    let mut all: Vec<(String, FieldElement)> = Vec::with_capacity(2 * elements.len());
    for (name, e) in elements {
        if !Arc::ptr_eq(e.field(), field) && e.field().defining_poly() != f {
            return Err(Error::FieldMismatch);
        }
        if e.is_zero() {
            return Err(Error::ZeroElement);
        }
        all.push((name.clone(), e.clone()));
    }
    for (name, e) in elements {
        all.push((format!("{name}^-1"), e.inv()?));
    }
    let mut denominators = Vec::with_capacity(all.len());
    let mut coefficient_checks = 0;
    for (_, e) in &all {
        denominators.push(power_basis_coords(e)?.b);
        if d >= 2 {
            coefficient_height_certificate(e)?;
            coefficient_checks += 1;
        }
    }
    let dens: BigInt = denominators.iter().product();
    let disc = field.discriminant().clone();
    let lc = f.leading_coeff().expect("nonzero").clone();

    let mut skipped = Vec::new();
    let mut primes = PrimeIter::new(2, opts.p_max);
    let mut block = 64usize;
    let (p, a) = 'search: loop {
        let chunk: Vec<u64> = primes.by_ref().take(block).collect();
        if chunk.is_empty() {
            return Err(Error::SearchExhausted(opts.p_max));
        }
        let outcomes: Vec<Result<std::result::Result<u64, SkipReason>>> = chunk
            .par_iter()
            .map(|&p| classify(f, p, &disc, &lc, &dens, opts.seed))
            .collect();
        for (&p, o) in chunk.iter().zip(outcomes) {
            match o? {
                Ok(a) => break 'search (p, a),
                Err(reason) => skipped.push((p, reason)),
            }
        }
        block = (block * 2).min(1 << 14);
    };

    let eta = hensel_lift(f, p, a, opts.precision)?;
    let mut images = Vec::with_capacity(all.len());
    let mut element_valuations = BTreeMap::new();
    for (name, e) in &all {
        let image = embed_element(field, &eta, e)?;
        let v = match image.valuation {
            Valuation::Exact(v) => v,
            Valuation::AtLeast(_) => unreachable!("embed_element returns exact valuations"),
        };
        if v != 0 {
            return Err(Error::InternalAssertionFailed(format!(
                "σ({name}) has valuation {v} at p = {p} although the search conditions hold"
            )));
        }
        element_valuations.insert(name.clone(), v);
        images.push(ElementImage {
            name: name.clone(),
            valuation: v,
            image,
        });
    }

    let h_alpha = if d >= 2 { abs_log_height(f)? } else { 0.0 };
    let mut sum_h_beta = 0.0;
    for (_, e) in elements {
        sum_h_beta += e.height()?;
    }
    let bound = evaluate_bound(
        "embedding-single-generator",
        &inputs(&[
            ("d", d as f64),
            ("n", elements.len().max(1) as f64),
            ("h_alpha", h_alpha),
            ("sum_h_beta", sum_h_beta),
            ("empirical", p as f64),
        ]),
        &opts.constants,
    )?;
    Ok(EmbeddingResult {
        p,
        root_mod_p: a,
        eta_digits: eta.digits(),
        eta,
        element_valuations,
        images,
        skipped_primes: skipped,
        denominators,
        coefficient_checks,
        bound,
    })
}

/// Recomputes `v_p(σ(β))` from scratch at precision `k`: fresh root, fresh
/// lift, fresh coordinates. Used to cross-check [`find_embedding`].
pub fn recheck_valuation(
    field: &NumberField,
    p: u64,
    root: u64,
    beta: &FieldElement,
    k: u32,
) -> Result<Valuation> {
    let roots = roots_mod_p(field.defining_poly(), p)?;
    if !roots.contains(&root) {
        return Err(Error::NotSimpleRoot(root.to_string(), p));
    }
    let eta = hensel_lift(field.defining_poly(), p, root, k)?;
    let m = pow_p(p, k);
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    // Σ c_j η^j over a common denominator, without power_basis_coords
    for c in beta.coords().iter().rev() {
        num = num * &eta.residue * c.denom() + c.numer() * &den;
        den *= c.denom();
        let g = num.gcd(&den);
        if !g.is_one() && !g.is_zero() {
            num /= &g;
            den /= &g;
        }
        num = num.mod_floor(&(&m * &den));
    }
    let num = num.mod_floor(&m);
    if num.is_zero() {
        return Ok(Valuation::AtLeast(k as i64 - valuation(&den, p) as i64));
    }
    Ok(Valuation::Exact(
        valuation(&num, p) as i64 - valuation(&den, p) as i64,
    ))
}
