//! Binary fixed-point complex numbers over `BigInt`, used when double
//! precision cannot certify a root cluster.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use std::ops::{Add, Mul, Sub};

/// Converts `x · 2^{-shift}` to `f64` without losing tiny magnitudes.
pub(crate) fn scaled_to_f64(x: &BigInt, shift: u32) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return 0.0;
    }
    let drop = bits.saturating_sub(60);
    let top = (x >> drop).to_f64().unwrap_or(0.0);
    let exp = drop as i64 - shift as i64;
    top * pow2(exp)
}

fn pow2(e: i64) -> f64 {
    // powi on 2.0 is exact within the normal range; split to reach subnormals
    if e < -1000 {
        2f64.powi(-1000) * 2f64.powi((e + 1000).max(-1074) as i32)
    } else {
        2f64.powi(e.min(1023) as i32)
    }
}

/// Exact conversion of a finite `f64` into fixed point with `prec` bits.
pub(crate) fn f64_to_scaled(v: f64, prec: u32) -> BigInt {
    if v == 0.0 || !v.is_finite() {
        return BigInt::zero();
    }
    let bits = v.to_bits();
    let sign = if (bits >> 63) == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let m = BigInt::from(mant) * sign;
    let total = e + prec as i64;
    if total >= 0 {
        m << total as u32
    } else {
        m >> (-total) as u32
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Fx {
    pub re: BigInt,
    pub im: BigInt,
}

impl Fx {
    pub fn zero() -> Self {
        Fx {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    pub fn from_int(c: &BigInt, prec: u32) -> Self {
        Fx {
            re: c << prec,
            im: BigInt::zero(),
        }
    }

    pub fn from_c64(z: Complex64, prec: u32) -> Self {
        Fx {
            re: f64_to_scaled(z.re, prec),
            im: f64_to_scaled(z.im, prec),
        }
    }

    pub fn to_c64(&self, prec: u32) -> Complex64 {
        Complex64::new(scaled_to_f64(&self.re, prec), scaled_to_f64(&self.im, prec))
    }

    pub fn mul(&self, o: &Fx, prec: u32) -> Fx {
        let re = (&self.re * &o.re - &self.im * &o.im) >> prec;
        let im = (&self.re * &o.im + &self.im * &o.re) >> prec;
        Fx { re, im }
    }

    /// `self / o`; `o` must be nonzero.
    pub fn div(&self, o: &Fx, prec: u32) -> Fx {
        let den = &o.re * &o.re + &o.im * &o.im;
        let re = ((&self.re * &o.re + &self.im * &o.im) << prec) / &den;
        let im = ((&self.im * &o.re - &self.re * &o.im) << prec) / &den;
        Fx { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Modulus as `f64` (relative accuracy about `1e-15`).
    #[cfg(test)]
    pub fn abs_f64(&self, prec: u32) -> f64 {
        let bits = self.re.bits().max(self.im.bits());
        if bits == 0 {
            return 0.0;
        }
        let drop = bits.saturating_sub(60);
        let a = (&self.re >> drop).to_f64().unwrap_or(0.0);
        let b = (&self.im >> drop).to_f64().unwrap_or(0.0);
        a.hypot(b) * pow2(drop as i64 - prec as i64)
    }

    /// `ln |self|`, valid at any magnitude.
    pub fn abs_ln(&self, prec: u32) -> f64 {
        let bits = self.re.bits().max(self.im.bits());
        if bits == 0 {
            return f64::NEG_INFINITY;
        }
        let drop = bits.saturating_sub(60);
        let a = (&self.re >> drop).to_f64().unwrap_or(0.0);
        let b = (&self.im >> drop).to_f64().unwrap_or(0.0);
        a.hypot(b).ln() + (drop as f64 - prec as f64) * std::f64::consts::LN_2
    }

    /// `max(|re|, |im|)` as a scaled integer; cheap magnitude proxy.
    pub fn max_abs(&self) -> BigInt {
        self.re.abs().max(self.im.abs())
    }
}

impl Add for &Fx {
    type Output = Fx;
    fn add(self, o: &Fx) -> Fx {
        Fx {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl Sub for &Fx {
    type Output = Fx;
    fn sub(self, o: &Fx) -> Fx {
        Fx {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl Mul<&BigInt> for &Fx {
    type Output = Fx;
    fn mul(self, c: &BigInt) -> Fx {
        Fx {
            re: &self.re * c,
            im: &self.im * c,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for v in [1.0, -2.5, 1e-300, 3.0e200, 0.1] {
            let s = f64_to_scaled(v, 1100);
            assert_eq!(scaled_to_f64(&s, 1100), v);
        }
        let prec = 128;
        let a = Fx::from_c64(Complex64::new(1.5, -2.0), prec);
        let b = Fx::from_c64(Complex64::new(0.25, 4.0), prec);
        let q = a.mul(&b, prec).div(&b, prec);
        assert!((q.to_c64(prec) - Complex64::new(1.5, -2.0)).norm() < 1e-30);
        assert!((a.abs_f64(prec) - 2.5).abs() < 1e-15);
    }
}
