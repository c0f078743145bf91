//! Certified complex root isolation.
//!
//! Each squarefree factor is solved by Aberth iteration, first in double
//! precision and, if the inclusion certificate fails, in fixed point with
//! increasing precision. The certificate is the classical one for
//! Weierstrass corrections: the discs `D(z_j, n·|g(z_j)| / (|lc|·∏|z_j − z_k|))`
//! contain all roots, and when they are pairwise disjoint each holds exactly one.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::fixed::Fx;
use crate::error::{Error, Result};
use crate::polyarith::IntPolynomial;

const F64_ITERATIONS: usize = 2000;
const FIXED_PRECISIONS: [u32; 5] = [128, 256, 512, 1024, 2048];
const FIXED_ITERATIONS: usize = 1500;
const EPS: f64 = f64::EPSILON / 2.0;

/// A root approximation with a certified inclusion radius.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RootBall {
    pub center: Complex64,
    pub radius: f64,
    pub multiplicity: usize,
}

/// All roots of `f` (with multiplicity) as certified balls, each radius at
/// most `tol · max(1, |center|)`.
pub fn isolate_roots(f: &IntPolynomial, tol: f64) -> Result<Vec<RootBall>> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d < 1 {
        return Err(Error::DegreeTooSmall(d));
    }
    let mut out = Vec::new();
    let zeros = f.coeffs().iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        out.push(RootBall {
            center: Complex64::new(0.0, 0.0),
            radius: 0.0,
            multiplicity: zeros,
        });
    }
    let stripped = IntPolynomial::new(f.coeffs()[zeros..].to_vec());
    if stripped.deg() == 0 {
        return Ok(out);
    }
    for (i, g) in stripped.squarefree_decomposition().iter().enumerate() {
        if g.deg() == 0 {
            continue;
        }
        for (center, radius) in solve_squarefree(g, tol)? {
            out.push(RootBall {
                center,
                radius,
                multiplicity: i + 1,
            });
        }
    }
    debug_assert_eq!(out.iter().map(|b| b.multiplicity).sum::<usize>(), d);
    Ok(out)
}

/// Root approximations of `f` listed with multiplicity, each within
/// `tol · max(1, |z|)` of a true root.
pub fn complex_roots(f: &IntPolynomial, tol: f64) -> Result<Vec<Complex64>> {
    Ok(isolate_roots(f, tol)?
        .into_iter()
        .flat_map(|b| std::iter::repeat(b.center).take(b.multiplicity))
        .collect())
}

fn within_tol(balls: &[(Complex64, f64)], tol: f64) -> bool {
    balls
        .iter()
        .all(|(z, r)| r.is_finite() && *r <= tol * z.norm().max(1.0))
        && disjoint(balls)
}

fn disjoint(balls: &[(Complex64, f64)]) -> bool {
    for (j, (zj, rj)) in balls.iter().enumerate() {
        for (zk, rk) in &balls[j + 1..] {
            if (zj - zk).norm() <= rj + rk {
                return false;
            }
        }
    }
    true
}

fn solve_squarefree(g: &IntPolynomial, tol: f64) -> Result<Vec<(Complex64, f64)>> {
    let n = g.deg();
    if n == 1 {
        let q = BigRational::new(-g.coeff(0), g.coeff(1));
        let z = q.to_f64().unwrap_or(f64::NAN);
        if z.is_finite() {
            return Ok(vec![(Complex64::new(z, 0.0), 2.0 * EPS * z.abs())]);
        }
    }
    let coeffs: Vec<f64> = g
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
        .collect();
    let mut start = None;
    if coeffs.iter().all(|c| c.is_finite()) {
        let zs = aberth_f64(&coeffs);
        if zs.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            if let Some(balls) = certify_f64(&coeffs, &zs) {
                if within_tol(&balls, tol) {
                    return Ok(balls);
                }
            }
            start = Some(zs);
        }
    }
    let mut start = start.unwrap_or_else(|| initial_guesses(g));
    for &prec in &FIXED_PRECISIONS {
        let zs = aberth_fixed(g, &start, prec);
        if let Some(balls) = certify_fixed(g, &zs, prec) {
            if within_tol(&balls, tol) {
                return Ok(balls);
            }
        }
        start = zs.iter().map(|z| z.to_c64(prec)).collect();
    }
    Err(Error::NoConvergence(n))
}

/// Points on a circle of Fujiwara radius, rotated off the real axis.
fn initial_guesses(g: &IntPolynomial) -> Vec<Complex64> {
    let n = g.deg();
    let ln_lc = super::ln_abs(g.leading_coeff().unwrap());
    let mut ln_r = f64::NEG_INFINITY;
    for i in 1..=n {
        let c = g.coeff(n - i);
        if c.is_zero() {
            continue;
        }
        let mut v = (super::ln_abs(&c) - ln_lc) / i as f64;
        if i == n {
            v -= std::f64::consts::LN_2 / n as f64;
        }
        ln_r = ln_r.max(v);
    }
    let r = if ln_r.is_finite() {
        (ln_r + std::f64::consts::LN_2).exp().min(1e300)
    } else {
        1.0
    };
    (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64 + 0.7;
            Complex64::from_polar(r, t)
        })
        .collect()
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn aberth_f64(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let mut zs = guesses_f64(coeffs);
    let mut quiet = 0;
    for _ in 0..F64_ITERATIONS {
        let mut worst: f64 = 0.0;
        for j in 0..n {
            let (p, dp) = horner(coeffs, zs[j]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&k| k != j)
                .map(|k| (zs[j] - zs[k]).inv())
                .sum();
            let step = w / (Complex64::new(1.0, 0.0) - w * s);
            if step.re.is_finite() && step.im.is_finite() {
                zs[j] -= step;
                worst = worst.max(step.norm() / zs[j].norm().max(1.0));
            }
        }
        if worst < 4.0 * f64::EPSILON {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    zs
}

fn guesses_f64(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lc = coeffs[n].abs();
    let r = (1..=n)
        .filter(|&i| coeffs[n - i] != 0.0)
        .map(|i| 2.0 * (coeffs[n - i].abs() / lc).powf(1.0 / i as f64))
        .fold(1.0f64, f64::max);
    (0..n)
        .map(|k| Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / n as f64 + 0.7))
        .collect()
}

fn certify_f64(coeffs: &[f64], zs: &[Complex64]) -> Option<Vec<(Complex64, f64)>> {
    let n = zs.len();
    let lc = coeffs[n].abs();
    let mut out = Vec::with_capacity(n);
    for (j, &z) in zs.iter().enumerate() {
        let (p, _) = horner(coeffs, z);
        let az = z.norm();
        let mut absum = 0.0;
        for &c in coeffs.iter().rev() {
            absum = absum * az + c.abs();
        }
        // rounding of Horner plus conversion of the coefficients
        let err = (8.0 * n as f64 + 4.0) * EPS * absum;
        let mut den = lc;
        for (k, &w) in zs.iter().enumerate() {
            if k != j {
                den *= (z - w).norm();
            }
        }
        den *= 1.0 - 4.0 * n as f64 * EPS;
        if !(den > 0.0) || !den.is_finite() {
            return None;
        }
        let r = n as f64 * (p.norm() + err) / den * (1.0 + 1e-12);
        out.push((z, r));
    }
    Some(out)
}

fn aberth_fixed(g: &IntPolynomial, start: &[Complex64], prec: u32) -> Vec<Fx> {
    let n = g.deg();
    let coeffs: Vec<Fx> = g.coeffs().iter().map(|c| Fx::from_int(c, prec)).collect();
    let mut zs: Vec<Fx> = start.iter().map(|&z| Fx::from_c64(z, prec)).collect();
    let one = Fx::from_int(&BigInt::from(1), prec);
    let settle = BigInt::from(1) << 24u32;
    for _ in 0..FIXED_ITERATIONS {
        let mut done = true;
        for j in 0..n {
            let (p, dp) = horner_fixed(&coeffs, &zs[j], prec);
            if p.is_zero() || dp.is_zero() {
                continue;
            }
            let w = p.div(&dp, prec);
            let mut s = Fx::zero();
            let mut clash = false;
            for k in 0..n {
                if k == j {
                    continue;
                }
                let diff = &zs[j] - &zs[k];
                if diff.is_zero() {
                    clash = true;
                    break;
                }
                s = &s + &one.div(&diff, prec);
            }
            if clash {
                // nudge coincident iterates apart
                zs[j] = &zs[j]
                    + &Fx {
                        re: BigInt::from(1) << (prec / 2),
                        im: BigInt::from(1) << (prec / 2),
                    };
                done = false;
                continue;
            }
            let denom = &one - &w.mul(&s, prec);
            if denom.is_zero() {
                continue;
            }
            let step = w.div(&denom, prec);
            let mag = zs[j].max_abs().max(one.re.clone());
            if step.max_abs() * (BigInt::from(1) << prec) > &mag * &settle {
                done = false;
            }
            zs[j] = &zs[j] - &step;
        }
        if done {
            break;
        }
    }
    zs
}

fn horner_fixed(coeffs: &[Fx], z: &Fx, prec: u32) -> (Fx, Fx) {
    let mut p = Fx::zero();
    let mut dp = Fx::zero();
    for c in coeffs.iter().rev() {
        dp = &dp.mul(z, prec) + &p;
        p = &p.mul(z, prec) + c;
    }
    (p, dp)
}

fn certify_fixed(g: &IntPolynomial, zs: &[Fx], prec: u32) -> Option<Vec<(Complex64, f64)>> {
    let n = zs.len();
    let coeffs: Vec<Fx> = g.coeffs().iter().map(|c| Fx::from_int(c, prec)).collect();
    let ln_lc = super::ln_abs(g.leading_coeff().unwrap());
    let ln_ulp = -(prec as f64) * std::f64::consts::LN_2;
    let mut out = Vec::with_capacity(n);
    // everything in log space: roots and values may exceed the double range
    for (j, z) in zs.iter().enumerate() {
        let (p, _) = horner_fixed(&coeffs, z, prec);
        let ln_az = z.abs_ln(prec).max(0.0);
        let ln_err = (4.0 * (n as f64 + 1.0)).ln() + n as f64 * ln_az + ln_ulp;
        let ln_p = p.abs_ln(prec);
        let hi = ln_p.max(ln_err);
        let ln_num = hi + ((ln_p - hi).exp() + (ln_err - hi).exp()).ln();
        let mut ln_den = ln_lc;
        for (k, w) in zs.iter().enumerate() {
            if k != j {
                ln_den += (z - w).abs_ln(prec);
            }
        }
        if !ln_den.is_finite() || !ln_num.is_finite() {
            return None;
        }
        let r = (n as f64).ln() + ln_num - ln_den + 1e-10;
        out.push((z.to_c64(prec), r.exp()));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        v
    }

    #[test]
    fn sqrt_two() {
        let r = sorted_re(complex_roots(&p(&[-2, 0, 1]), 1e-12).unwrap());
        assert!((r[0].re + 2f64.sqrt()).abs() < 1e-10 && r[0].im.abs() < 1e-10);
        assert!((r[1].re - 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn plus_minus_i() {
        let r = complex_roots(&p(&[1, 0, 1]), 1e-12).unwrap();
        let mut ims: Vec<f64> = r.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-10 && (ims[1] - 1.0).abs() < 1e-10);
        assert!(r.iter().all(|z| z.re.abs() < 1e-10));
    }

    #[test]
    fn sqrt2_plus_sqrt3_conjugates() {
        let r = sorted_re(complex_roots(&p(&[1, 0, -10, 0, 1]), 1e-12).unwrap());
        let (a, b) = (2f64.sqrt(), 3f64.sqrt());
        let expect = [-a - b, a - b, b - a, a + b];
        for (z, e) in r.iter().zip(expect) {
            assert!((z.re - e).abs() < 1e-10 && z.im.abs() < 1e-10, "{z} vs {e}");
        }
    }

    #[test]
    fn multiplicities_and_zero_roots() {
        // x^2 (x - 1)^3 (x^2 + 1)
        let f = &(&p(&[0, 0, 1]) * &p(&[-1, 3, -3, 1])) * &p(&[1, 0, 1]);
        let balls = isolate_roots(&f, 1e-12).unwrap();
        let total: usize = balls.iter().map(|b| b.multiplicity).sum();
        assert_eq!(total, 7);
        let one = balls
            .iter()
            .find(|b| (b.center.re - 1.0).abs() < 1e-9)
            .unwrap();
        assert_eq!(one.multiplicity, 3);
    }

    #[test]
    fn clustered_roots_force_fixed_point() {
        // (x - 10^8)(x - 10^8 - 1)(10^8 x - 1)(10^8 x - 3): f64 cannot separate well
        let big = 100_000_000i64;
        let f = &(&p(&[-big, 1]) * &p(&[-big - 1, 1])) * &(&p(&[-1, big]) * &p(&[-3, big]));
        let f = &f * &p(&[-7, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let balls = isolate_roots(&f, 1e-30).unwrap();
        assert_eq!(balls.len(), 15);
        assert!(balls.iter().any(|b| (b.center.re - 3e-8).abs() < 1e-20));
    }

    #[test]
    fn wilkinson_like() {
        let mut f = p(&[1]);
        for k in 1..=20 {
            f = &f * &p(&[-k, 1]);
        }
        let r = sorted_re(complex_roots(&f, 1e-12).unwrap());
        for (k, z) in r.iter().enumerate() {
            assert!((z.re - (k + 1) as f64).abs() < 1e-9, "{z}");
        }
    }
}
