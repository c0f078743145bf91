//! Evaluation of the explicit and parameterized prime/height bounds, in
//! log space, with comparison against observed values.
//!
//! Bounds with an unspecified absolute constant in the exponent are
//! evaluated with that constant set to [`Constants::c`] (default 1) and are
//! never asserted.

mod sharpness;

pub use sharpness::*;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::modular::delta;
use crate::primes::totient;

/// Relative slack (in log space) for asserted floating comparisons.
pub const LOG_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// Multiplier of the exponent in `(…)^{O(·)}` terms.
    pub c: f64,
    /// Base constant `C` of the `C^d` factor.
    #[serde(rename = "C")]
    pub big_c: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self { c: 1.0, big_c: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputValue {
    Scalar(f64),
    List(Vec<f64>),
}

pub type Inputs = BTreeMap<String, InputValue>;

/// Builds an [`Inputs`] map from scalar pairs.
pub fn inputs(pairs: &[(&str, f64)]) -> Inputs {
    pairs
        .iter()
        .map(|&(k, v)| (k.to_string(), InputValue::Scalar(v)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// The observed value must not exceed the bound.
    Upper,
    /// The observed value must be at least the bound.
    Lower,
}

fn ser_ext<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("+inf")
    } else {
        s.serialize_str("-inf")
    }
}

fn ser_opt_ext<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => ser_ext(x, s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub description: String,
    pub inputs: Inputs,
    pub constants: Constants,
    /// Natural log of the bound.
    #[serde(serialize_with = "ser_ext")]
    pub log_bound: f64,
    /// `exp(log_bound)`, `+inf` on overflow.
    #[serde(serialize_with = "ser_ext")]
    pub bound_value: f64,
    #[serde(serialize_with = "ser_opt_ext")]
    pub log_empirical: Option<f64>,
    pub asserted: bool,
    pub direction: Direction,
    /// `empirical / bound`.
    #[serde(serialize_with = "ser_opt_ext")]
    pub margin: Option<f64>,
    /// Whether the empirical value respects the bound (with [`LOG_EPS`]).
    pub holds: Option<bool>,
}

impl BoundReport {
    /// True unless this is an asserted bound whose empirical value fails.
    pub fn passes(&self) -> bool {
        !self.asserted || self.holds != Some(false)
    }
}

struct Spec {
    name: &'static str,
    description: &'static str,
    asserted: bool,
    direction: Direction,
}

const SPECS: &[Spec] = &[
    Spec {
        name: "embedding-generators",
        description: "p ≤ m^d exp(dΣh(α_i)) (dnΣh(α_i) + dΣh(β_i) + dn log⁺m)^{c d²}",
        asserted: false,
        direction: Direction::Upper,
    },
    Spec {
        name: "embedding-self",
        description: "p ≤ exp(dΣh(α_i)) (dmΣh(α_i) + dm)^{c d²}",
        asserted: false,
        direction: Direction::Upper,
    },
    Spec {
        name: "embedding-integral",
        description: "p ≤ exp(d h(α)) (d h(α) + d)^{c d²}",
        asserted: false,
        direction: Direction::Upper,
    },
    Spec {
        name: "embedding-discriminant",
        description: "p ≤ √|D_K| (n log|D_K| + dΣh(β_i))^{c d²}",
        asserted: false,
        direction: Direction::Upper,
    },
    Spec {
        name: "embedding-cyclotomic",
        description: "p ≤ (dΣh(β_i) + dn)^{c d δ(m)}, d = φ(m)",
        asserted: false,
        direction: Direction::Upper,
    },
    Spec {
        name: "embedding-single-generator",
        description: "p ≤ exp(d h(α)) (dn h(α) + dΣh(β_i) + dn)^{c d²}",
        asserted: false,
        direction: Direction::Upper,
    },
    Spec {
        name: "root-prime-avoiding",
        description: "p ≤ C^d H (d log Q log⁺H)^d + H (log Q)^{c d²}",
        asserted: false,
        direction: Direction::Upper,
    },
    Spec {
        name: "simple-root-prime",
        description: "p ≤ H (d log⁺H)^{c d²}",
        asserted: false,
        direction: Direction::Upper,
    },
    Spec {
        name: "generic-prime",
        description: "p ≤ H, 2H(dM)^d or 2H(dHM)^d by case",
        asserted: true,
        direction: Direction::Upper,
    },
    Spec {
        name: "mahler-upper",
        description: "M(f) ≤ H √(d+1)",
        asserted: true,
        direction: Direction::Upper,
    },
    Spec {
        name: "mahler-lower",
        description: "M(f) ≥ H 2^{-d}",
        asserted: true,
        direction: Direction::Lower,
    },
    Spec {
        name: "primitive-height",
        description: "h(α) ≤ log(m⌊d/2⌋) + Σh(α_i)",
        asserted: true,
        direction: Direction::Upper,
    },
    Spec {
        name: "primitive-usual-height",
        description: "H(α) ≤ (md)^d ∏(d_i+1)^{d/(2d_i)} ∏H_i^{d/d_i}",
        asserted: false,
        direction: Direction::Upper,
    },
    Spec {
        name: "splitting-field-height",
        description: "h(α) ≤ log((d−1)⌊D/2⌋) + ((d−1)/d) log(H√(d+1))",
        asserted: false,
        direction: Direction::Upper,
    },
    Spec {
        name: "splitting-field-usual-height",
        description: "H(α) ≤ (d−1)^D D^D (d+1)^{(d−1)D/(2d)} H^{(d−1)D/d}",
        asserted: false,
        direction: Direction::Upper,
    },
    Spec {
        name: "coefficient-height",
        description: "h(a_i/b), log b < d h(β) + 3d² h(α) + 2d²",
        asserted: true,
        direction: Direction::Upper,
    },
    Spec {
        name: "discriminant",
        description: "|Δ| < d^{2d} H^{2d−2}",
        asserted: true,
        direction: Direction::Upper,
    },
    Spec {
        name: "product-lower",
        description: "∏_{j≤L} max(1,|f(j)|) ≥ (L/5)^{dL/18}",
        asserted: true,
        direction: Direction::Lower,
    },
    Spec {
        name: "root-count",
        description: "N(ℓ^k) ≤ m ℓ^{k−1}",
        asserted: true,
        direction: Direction::Upper,
    },
    Spec {
        name: "root-count-power",
        description: "N(ℓ^k) ≤ 2 ℓ^{k(1−1/d)}",
        asserted: true,
        direction: Direction::Upper,
    },
    Spec {
        name: "window-deviation",
        description: "|N(L,ℓ^k) − (L/ℓ^k) N(ℓ^k)| < d",
        asserted: true,
        direction: Direction::Upper,
    },
];

/// Names accepted by [`evaluate_bound`].
pub fn bound_names() -> Vec<&'static str> {
    SPECS.iter().map(|s| s.name).collect()
}

/// Whether the named bound is constant-free (and hence asserted).
pub fn is_asserted(name: &str) -> Option<bool> {
    SPECS.iter().find(|s| s.name == name).map(|s| s.asserted)
}

fn scalar(inputs: &Inputs, key: &str) -> Result<f64> {
    match inputs.get(key) {
        Some(InputValue::Scalar(v)) => Ok(*v),
        _ => Err(Error::MissingInput(key.into())),
    }
}

fn list<'a>(inputs: &'a Inputs, key: &str) -> Result<&'a [f64]> {
    match inputs.get(key) {
        Some(InputValue::List(v)) => Ok(v),
        _ => Err(Error::MissingInput(key.into())),
    }
}

/// `max{1, log x}`.
pub fn log_plus(x: f64) -> f64 {
    x.ln().max(1.0)
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

fn log_bound(name: &str, x: &Inputs, k: &Constants) -> Result<f64> {
    let s = |key| scalar(x, key);
    let c = k.c;
    Ok(match name {
        "embedding-generators" => {
            let (d, m, n) = (s("d")?, s("m")?, s("n")?);
            let (ha, hb) = (s("sum_h_alpha")?, s("sum_h_beta")?);
            d * m.ln() + d * ha + c * d * d * (d * n * ha + d * hb + d * n * log_plus(m)).ln()
        }
        "embedding-self" => {
            let (d, m, ha) = (s("d")?, s("m")?, s("sum_h_alpha")?);
            d * ha + c * d * d * (d * m * ha + d * m).ln()
        }
        "embedding-integral" => {
            let (d, h) = (s("d")?, s("h_alpha")?);
            d * h + c * d * d * (d * h + d).ln()
        }
        "embedding-discriminant" => {
            let (d, n, disc, hb) = (s("d")?, s("n")?, s("abs_disc")?, s("sum_h_beta")?);
            0.5 * disc.ln() + c * d * d * (n * disc.ln() + d * hb).ln()
        }
        "embedding-cyclotomic" => {
            let m = s("m")?;
            if m < 3.0 || m.fract() != 0.0 {
                return Err(Error::PreconditionViolated(
                    "m must be an integer > 2".into(),
                ));
            }
            let d = totient(m as u64) as f64;
            let dl = delta(m as u64) as f64;
            let (n, hb) = (s("n")?, s("sum_h_beta")?);
            c * d * dl * (d * hb + d * n).ln()
        }
        "embedding-single-generator" => {
            let (d, n, h, hb) = (s("d")?, s("n")?, s("h_alpha")?, s("sum_h_beta")?);
            d * h + c * d * d * (d * n * h + d * hb + d * n).ln()
        }
        "root-prime-avoiding" => {
            let (d, h, q) = (s("d")?, s("H")?, s("Q")?);
            if q < 3.0 {
                return Err(Error::PreconditionViolated("Q must be at least 3".into()));
            }
            let lq = q.ln();
            let first = d * k.big_c.ln() + h.ln() + d * (d * lq * log_plus(h)).ln();
            let second = h.ln() + c * d * d * lq.ln();
            log_sum_exp(first, second)
        }
        "simple-root-prime" => {
            let (d, h) = (s("d")?, s("H")?);
            h.ln() + c * d * d * (d * log_plus(h)).ln()
        }
        "generic-prime" => {
            let (d, h, m, case) = (s("d")?, s("H")?, s("M")?, s("case")?);
            match case as i64 {
                1 => h.ln(),
                2 => 2f64.ln() + h.ln() + d * (d * m).ln(),
                3 => 2f64.ln() + h.ln() + d * (d * h * m).ln(),
                _ => return Err(Error::PreconditionViolated("case must be 1, 2 or 3".into())),
            }
        }
        "mahler-upper" => s("H")?.ln() + 0.5 * (s("d")? + 1.0).ln(),
        "mahler-lower" => s("H")?.ln() - s("d")? * 2f64.ln(),
        "primitive-height" => {
            let (d, m, hs) = (s("d")?, s("m")?, s("sum_h_alpha")?);
            ((m * (d / 2.0).floor()).ln() + hs).ln()
        }
        "primitive-usual-height" => {
            let d = s("d")?;
            let ds = list(x, "degrees")?;
            let hs = list(x, "heights")?;
            if ds.len() != hs.len() || ds.is_empty() {
                return Err(Error::MissingInput(
                    "degrees and heights of equal nonzero length".into(),
                ));
            }
            let m = ds.len() as f64;
            d * (m * d).ln()
                + ds.iter()
                    .map(|&di| d / (2.0 * di) * (di + 1.0).ln())
                    .sum::<f64>()
                + ds.iter()
                    .zip(hs)
                    .map(|(&di, &hi)| d / di * hi.ln())
                    .sum::<f64>()
        }
        "splitting-field-height" => {
            let (d, big_d, h) = (s("d")?, s("D")?, s("H")?);
            (((d - 1.0) * (big_d / 2.0).floor()).ln() + (d - 1.0) / d * (h * (d + 1.0).sqrt()).ln())
                .ln()
        }
        "splitting-field-usual-height" => {
            let (d, big_d, h) = (s("d")?, s("D")?, s("H")?);
            big_d * (d - 1.0).ln()
                + big_d * big_d.ln()
                + (d - 1.0) * big_d / (2.0 * d) * (d + 1.0).ln()
                + (d - 1.0) * big_d / d * h.ln()
        }
        "coefficient-height" => {
            let (d, hb, ha) = (s("d")?, s("h_beta")?, s("h_alpha")?);
            (d * hb + 3.0 * d * d * ha + 2.0 * d * d).ln()
        }
        "discriminant" => {
            let (d, h) = (s("d")?, s("H")?);
            2.0 * d * d.ln() + (2.0 * d - 2.0) * h.ln()
        }
        "product-lower" => {
            let (d, l) = (s("d")?, s("L")?);
            d * l / 18.0 * (l / 5.0).ln()
        }
        "root-count" => {
            let (m, ell, k) = (s("m")?, s("ell")?, s("k")?);
            m.ln() + (k - 1.0) * ell.ln()
        }
        "root-count-power" => {
            let (d, ell, k) = (s("d")?, s("ell")?, s("k")?);
            2f64.ln() + k * (1.0 - 1.0 / d) * ell.ln()
        }
        "window-deviation" => s("d")?.ln(),
        other => return Err(Error::UnknownBound(other.into())),
    })
}

/// Evaluates the named bound. The observed value is taken from the input
/// `empirical` (or `log_empirical` for values too large for `f64`).
pub fn evaluate_bound(name: &str, x: &Inputs, constants: &Constants) -> Result<BoundReport> {
    let spec = SPECS
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownBound(name.into()))?;
    let lb = log_bound(name, x, constants)?;
    let log_empirical = match (x.get("log_empirical"), x.get("empirical")) {
        (Some(InputValue::Scalar(v)), _) => Some(*v),
        (_, Some(InputValue::Scalar(v))) => Some(v.ln()),
        _ => None,
    };
    let holds = log_empirical.map(|le| match spec.direction {
        Direction::Upper => le <= lb + LOG_EPS * lb.abs().max(1.0),
        Direction::Lower => le >= lb - LOG_EPS * lb.abs().max(1.0),
    });
    let margin = log_empirical.map(|le| (le - lb).exp());
    Ok(BoundReport {
        name: name.into(),
        description: spec.description.into(),
        inputs: x.clone(),
        constants: *constants,
        log_bound: lb,
        bound_value: lb.exp(),
        log_empirical,
        asserted: spec.asserted,
        direction: spec.direction,
        margin,
        holds,
    })
}
