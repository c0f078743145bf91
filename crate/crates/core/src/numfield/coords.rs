//! Power-basis coordinates with integer normalization and the coefficient
//! height bounds that go with them.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::FieldElement;
use crate::error::{Error, Result};
use crate::heights::{self, abs_log_height_estimate, rational_height, HEIGHT_SLACK};

/// `β = (1/b) Σ a_j α^j` with `b ≥ 1` the least common denominator, so
/// that `gcd(b, a_0, …, a_{d-1}) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerBasisCoords {
    #[serde(with = "crate::io::bigint_str")]
    pub b: BigInt,
    #[serde(with = "crate::io::bigint_vec")]
    pub a: Vec<BigInt>,
}

pub fn power_basis_coords(beta: &FieldElement) -> Result<PowerBasisCoords> {
    if beta.is_zero() {
        return Err(Error::ZeroElement);
    }
    let b = beta
        .coords()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let a = beta
        .coords()
        .iter()
        .map(|c| (c * BigRational::from(b.clone())).to_integer())
        .collect();
    Ok(PowerBasisCoords { b, a })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientHeightReport {
    pub degree: usize,
    pub h_beta: f64,
    pub h_alpha: f64,
    /// `h(a_i / b)` for each index.
    pub coefficient_heights: Vec<f64>,
    /// Index-dependent bound with the binomial term.
    pub per_index_bounds: Vec<f64>,
    /// `d h(β) + 3d² h(α) + 2d²`, shared by every index and by `log b`.
    pub uniform_bound: f64,
    pub log_b: f64,
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    (0..k)
        .map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln())
        .sum()
}

/// Checks every coordinate height and `log b` against the coefficient
/// bounds for `K = Q(α)`, with [`HEIGHT_SLACK`] plus the height errors.
pub fn coefficient_height_certificate(beta: &FieldElement) -> Result<CoefficientHeightReport> {
    let field = beta.field();
    let d = field.degree();
    if d < 2 {
        return Err(Error::DegreeTooSmall(d));
    }
    let coords = power_basis_coords(beta)?;
    let (h_beta, e_beta) = abs_log_height_estimate(&beta.min_poly())?;
    let (h_alpha, e_alpha) = abs_log_height_estimate(field.defining_poly())?;
    let df = d as f64;
    let ln2 = std::f64::consts::LN_2;
    let coefficient_heights: Vec<f64> = beta.coords().iter().map(rational_height).collect();
    let per_index_bounds: Vec<f64> = (0..d)
        .map(|i| {
            df * h_beta
                + 3.0 * df * (df - 1.0) * h_alpha
                + df * ln_binomial(d - 1, i)
                + df * (df - 1.0) * ln2
                + df.ln()
        })
        .collect();
    let uniform_bound = df * h_beta + 3.0 * df * df * h_alpha + 2.0 * df * df;
    let log_b = heights::ln_abs(&coords.b);
    let slack = HEIGHT_SLACK + df * e_beta + 3.0 * df * df * e_alpha;
    let report = CoefficientHeightReport {
        degree: d,
        h_beta,
        h_alpha,
        coefficient_heights,
        per_index_bounds,
        uniform_bound,
        log_b,
    };
    for (i, (h, bound)) in report
        .coefficient_heights
        .iter()
        .zip(&report.per_index_bounds)
        .enumerate()
    {
        if *h > bound + slack {
            return Err(Error::InequalityViolated(format!(
                "coefficient {i}: h = {h} exceeds per-index bound {bound}"
            )));
        }
        if *h >= uniform_bound + slack {
            return Err(Error::InequalityViolated(format!(
                "coefficient {i}: h = {h} exceeds uniform bound {uniform_bound}"
            )));
        }
    }
    if log_b >= uniform_bound + slack {
        return Err(Error::InequalityViolated(format!(
            "log b = {log_b} exceeds {uniform_bound}"
        )));
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct VandermondeReport {
    pub exact: Vec<f64>,
    pub reconstructed: Vec<Complex64>,
    pub max_deviation: f64,
    pub tolerance: f64,
}

/// Recovers the coordinates of `β` numerically from its conjugates via the
/// explicit inverse of the Vandermonde matrix, and compares with the exact
/// coordinates.
pub fn vandermonde_solve_check(beta: &FieldElement) -> Result<VandermondeReport> {
    let field = beta.field();
    let d = field.degree();
    let alphas = heights::complex_roots(field.defining_poly(), heights::DEFAULT_TOL)?;
    let coords: Vec<f64> = beta
        .coords()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect();
    let betas: Vec<Complex64> = alphas
        .iter()
        .map(|&al| {
            coords
                .iter()
                .rev()
                .fold(Complex64::zero(), |acc, &c| acc * al + c)
        })
        .collect();
    let mut reconstructed = vec![Complex64::zero(); d];
    let mut scale: f64 = 1.0;
    for (i, &ai) in alphas.iter().enumerate() {
        // elementary symmetric functions of the other conjugates
        let mut sigma = vec![Complex64::zero(); d];
        sigma[0] = Complex64::new(1.0, 0.0);
        let mut len = 1;
        for (k, &ak) in alphas.iter().enumerate() {
            if k == i {
                continue;
            }
            for m in (1..=len).rev() {
                let prev = sigma[m - 1];
                sigma[m] += prev * ak;
            }
            len += 1;
        }
        let mut den = Complex64::new(1.0, 0.0);
        for (m, &am) in alphas.iter().enumerate() {
            if m < i {
                den *= ai - am;
            } else if m > i {
                den *= am - ai;
            }
        }
        for j in 1..=d {
            let sign = if (i + 1 + j) % 2 == 0 { 1.0 } else { -1.0 };
            let term = betas[i] * sigma[d - j] * sign / den;
            scale = scale.max(term.norm());
            reconstructed[j - 1] += term;
        }
    }
    let max_deviation = reconstructed
        .iter()
        .zip(&coords)
        .map(|(z, &c)| (z - c).norm())
        .fold(0.0, f64::max);
    let tolerance = 1e-8 * scale * d as f64;
    let report = VandermondeReport {
        exact: coords,
        reconstructed,
        max_deviation,
        tolerance,
    };
    if !(max_deviation <= tolerance) {
        return Err(Error::InternalAssertionFailed(format!(
            "Vandermonde reconstruction deviates by {max_deviation} (tolerance {tolerance})"
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::tests::field;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn coords_examples() {
        let k = field(&[1, 0, -10, 0, 1]);
        let s = FieldElement::from_ints(&k, &[0, -9, 0, 1], 2);
        let c = power_basis_coords(&s).unwrap();
        assert_eq!(c.b, BigInt::from(2));
        assert_eq!(c.a, ints(&[0, -9, 0, 1]));
        let al = FieldElement::generator(&k);
        assert_eq!(power_basis_coords(&al).unwrap().a, ints(&[0, 1, 0, 0]));
        let r = FieldElement::from_ints(&k, &[3], 4);
        let c = power_basis_coords(&r).unwrap();
        assert_eq!((c.b, c.a), (BigInt::from(4), ints(&[3, 0, 0, 0])));
        assert_eq!(
            power_basis_coords(&FieldElement::zero(&k)),
            Err(Error::ZeroElement)
        );
    }

    #[test]
    fn certificate_for_sqrt2() {
        let k = field(&[1, 0, -10, 0, 1]);
        let s = FieldElement::from_ints(&k, &[0, -9, 0, 1], 2);
        let r = coefficient_height_certificate(&s).unwrap();
        assert!((r.coefficient_heights[1] - 9f64.ln()).abs() < 1e-12);
        assert!((r.uniform_bound - 60.9).abs() < 0.1, "{}", r.uniform_bound);
        let r = coefficient_height_certificate(&FieldElement::generator(&k)).unwrap();
        assert!(r.coefficient_heights.iter().all(|&h| h == 0.0));
    }

    #[test]
    fn vandermonde_examples() {
        let k = field(&[1, 0, -10, 0, 1]);
        let s = FieldElement::from_ints(&k, &[0, -9, 0, 1], 2);
        let r = vandermonde_solve_check(&s).unwrap();
        for (z, e) in r.reconstructed.iter().zip([0.0, -4.5, 0.0, 0.5]) {
            assert!((z - e).norm() < 1e-9);
        }
        let r = vandermonde_solve_check(&FieldElement::one(&k)).unwrap();
        assert!((r.reconstructed[0].re - 1.0).abs() < 1e-9);
        let k2 = field(&[-2, 0, 1]);
        let r = vandermonde_solve_check(&FieldElement::generator(&k2)).unwrap();
        assert!((r.reconstructed[1].re - 1.0).abs() < 1e-9 && r.reconstructed[0].norm() < 1e-9);
    }

    #[test]
    fn lcm_normalization_keeps_b_coprime_to_numerators() {
        let k = field(&[-2, 0, 0, 1]);
        let e = FieldElement::new(
            &k,
            vec![
                BigRational::new(1.into(), 6.into()),
                BigRational::new(3.into(), 4.into()),
                BigRational::from(BigInt::from(2)),
            ],
        )
        .unwrap();
        let c = power_basis_coords(&e).unwrap();
        assert_eq!(c.b, BigInt::from(12));
        assert_eq!(c.a, ints(&[2, 9, 24]));
        let g = c.a.iter().fold(c.b.clone(), |acc, x| acc.gcd(x));
        assert!(g.is_one());
    }

    fn quartic_fields() -> Vec<Vec<i64>> {
        vec![
            vec![1, 0, -10, 0, 1],
            vec![1, 1, 1, 1, 1],
            vec![-2, 0, 0, 0, 1],
            vec![1, -1, 0, 1, 1],
            vec![3, 0, 1, 0, 1],
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn random_elements_in_quartic_fields(
            fi in 0usize..5, num in prop::collection::vec(-30i64..=30, 4), den in 1i64..=20
        ) {
            let k = field(&quartic_fields()[fi]);
            let e = FieldElement::from_ints(&k, &num, den);
            prop_assume!(!e.is_zero());
            let c = power_basis_coords(&e).unwrap();
            // reconstruction is exact
            let back: Vec<BigRational> = c.a.iter().map(|x| BigRational::new(x.clone(), c.b.clone())).collect();
            prop_assert_eq!(back.as_slice(), e.coords());
            prop_assert!(coefficient_height_certificate(&e).is_ok());
            prop_assert!(vandermonde_solve_check(&e).is_ok());
        }
    }
}
