//! Exact univariate polynomials over the integers and the rationals.
//!
//! Coefficients are stored little-endian: `coeffs[i]` multiplies `x^i`.
//! The zero polynomial is the empty coefficient vector, and every nonzero
//! polynomial has a nonzero highest coefficient.

mod cyclotomic;
mod irreducible;
mod resultant;

pub use cyclotomic::cyclotomic;
pub use irreducible::{check_irreducible, Irreducibility};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c · x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; convenient when the
    /// caller has already excluded zero.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Horner evaluation at an integer.
    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Evaluation at a rational point.
    pub fn evaluate_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from(c.clone())
            })
    }

    /// Coefficients reduced into `[0, m)`.
    pub fn reduce_mod(&self, m: u64) -> Vec<u64> {
        let mb = BigInt::from(m);
        self.coeffs
            .iter()
            .map(|c| c.mod_floor(&mb).to_u64().expect("reduced residue fits"))
            .collect()
    }

    /// `f(x) mod m` with `x` already reduced.
    pub fn eval_mod(&self, x: u64, m: u64) -> u64 {
        let reduced = self.reduce_mod(m);
        eval_reduced(&reduced, x, m)
    }

    /// Gcd of the coefficients; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `self / content`, normalised to a positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading_coeff().is_some_and(Signed::is_negative) {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// `H(f) = max |a_i|`.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_default()
    }

    /// `L(f) = Σ |a_i|`.
    pub fn length(&self) -> BigInt {
        self.coeffs.iter().map(Signed::abs).sum()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Exact division of every coefficient by `c`.
    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|a| {
                    debug_assert!((a % c).is_zero(), "inexact scalar division");
                    a / c
                })
                .collect(),
        )
    }

    /// `f(-x)`
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Pseudo-remainder: `lc(g)^(deg f - deg g + 1) · f  mod g`.
    pub fn pseudo_rem(&self, g: &Self) -> Self {
        let dg = g.degree().expect("pseudo-division by zero");
        let lc = g.leading_coeff().unwrap().clone();
        let mut r = self.coeffs.clone();
        let Some(df) = self.degree() else {
            return Self::zero();
        };
        if df < dg {
            return self.clone();
        }
        let mut steps = df - dg + 1;
        while r.len() > dg && !r.is_empty() {
            let top = r.len() - 1;
            let t = r[top].clone();
            for c in r.iter_mut() {
                *c *= &lc;
            }
            let shift = top - dg;
            for (i, gc) in g.coeffs.iter().enumerate() {
                r[i + shift] -= &t * gc;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            steps -= 1;
        }
        let fix = num_traits::pow(lc, steps);
        Self::new(r.into_iter().map(|c| c * &fix).collect())
    }

    /// Exact division over the integers. Returns `None` when `g` does not
    /// divide `self` in `Z[x]`.
    pub fn div_exact(&self, g: &Self) -> Option<Self> {
        let dg = g.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let df = self.deg();
        if df < dg {
            return None;
        }
        let lc = g.leading_coeff().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); df - dg + 1];
        for k in (0..=df - dg).rev() {
            let (t, rem) = r[k + dg].div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            for (i, gc) in g.coeffs.iter().enumerate() {
                r[i + k] -= &t * gc;
            }
            q[k] = t;
        }
        r.iter().all(Zero::is_zero).then(|| Self::new(q))
    }

    /// Primitive gcd in `Z[x]` with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let (mut a, mut b) = if self.deg() >= other.deg() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    /// Primitive squarefree part.
    pub fn squarefree_part(&self) -> Self {
        if self.deg() == 0 {
            return self.primitive_part();
        }
        let g = self.gcd(&self.derivative());
        self.primitive_part()
            .div_exact(&g)
            .expect("gcd divides")
            .primitive_part()
    }

    /// Yun's algorithm: primitive squarefree `g_i` with `pp(f) = ∏ g_i^i`
    /// (up to sign). Entry `i - 1` holds `g_i`; trailing constants omitted.
    pub fn squarefree_decomposition(&self) -> Vec<Self> {
        let f = self.primitive_part();
        if f.deg() == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0).expect("gcd divides");
        // Primitive divisors over Q divide over Z (Gauss), so these are exact.
        let mut c = fp.div_exact(&a0).expect("gcd divides derivative");
        let mut d = &c - &b.derivative();
        while b.deg() > 0 {
            let a = b.gcd(&d);
            out.push(a.clone());
            b = b.div_exact(&a).expect("gcd divides");
            c = d.div_exact(&a).expect("gcd divides");
            d = &c - &b.derivative();
        }
        while out.last().is_some_and(|g| g.deg() == 0) {
            out.pop();
        }
        out
    }

    pub fn resultant(&self, g: &Self) -> Result<BigInt> {
        resultant::resultant(self, g)
    }

    /// `Δ = (-1)^{d(d-1)/2} Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Result<BigInt> {
        let d = self.degree().ok_or(Error::DegreeTooSmall(0))?;
        if d < 1 {
            return Err(Error::DegreeTooSmall(d));
        }
        let r = self.resultant(&self.derivative())?;
        let lc = self.leading_coeff().unwrap();
        let (q, rem) = r.div_rem(lc);
        if !rem.is_zero() {
            return Err(Error::InternalAssertionFailed(
                "Res(f, f') not divisible by lc(f)".into(),
            ));
        }
        Ok(if (d * (d - 1) / 2) % 2 == 1 { -q } else { q })
    }

    /// Number of distinct complex roots.
    pub fn distinct_root_count(&self) -> usize {
        self.squarefree_part().deg()
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from(c.clone()))
            .collect()
    }
}

pub(crate) fn eval_reduced(coeffs: &[u64], x: u64, m: u64) -> u64 {
    coeffs.iter().rev().fold(0u64, |acc, &c| {
        ((acc as u128 * x as u128 + c as u128) % m as u128) as u64
    })
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::io::bigint_vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        crate::io::bigint_vec::deserialize(d).map(Self::new)
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// A rational polynomial `numerator / denominator` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPolynomial {
    numerator: IntPolynomial,
    denominator: BigInt,
}

impl RatPolynomial {
    pub fn new(numerator: IntPolynomial, denominator: BigInt) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut g = numerator.content().gcd(&denominator);
        if g.is_zero() {
            g = denominator.abs();
        }
        if denominator.is_negative() {
            g = -g;
        }
        Ok(Self {
            numerator: numerator.div_scalar_exact(&g),
            denominator: denominator / g,
        })
    }

    pub fn from_rationals(coeffs: &[BigRational]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::new(IntPolynomial::new(num), den).expect("nonzero denominator")
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.numerator
            .coeffs()
            .iter()
            .map(|c| BigRational::new(c.clone(), self.denominator.clone()))
            .collect()
    }

    pub fn numerator(&self) -> &IntPolynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(p(&[1, 0, 1]).evaluate(&BigInt::from(2)), BigInt::from(5));
        assert_eq!(
            IntPolynomial::zero().evaluate(&BigInt::from(7)),
            BigInt::zero()
        );
        // x^2 - 2kx + t^2 with k = 6, t = 1
        assert_eq!(p(&[1, -12, 1]).evaluate(&BigInt::zero()), BigInt::one());
    }

    #[test]
    fn content_examples() {
        assert_eq!(p(&[4, 6, -2]).content(), BigInt::from(2));
        assert_eq!(p(&[1, 0, 1]).content(), BigInt::one());
        assert_eq!(IntPolynomial::zero().content(), BigInt::zero());
    }

    #[test]
    fn height_length_derivative() {
        let f = p(&[1, 0, -10, 0, 1]);
        assert_eq!(f.height(), BigInt::from(10));
        assert_eq!(f.length(), BigInt::from(12));
        assert_eq!(p(&[1, -12, 1]).height(), BigInt::from(12));
        let c = p(&[5]);
        assert_eq!(c.height(), BigInt::from(5));
        assert!(c.derivative().is_zero());
        assert_eq!(f.derivative(), p(&[0, -20, 0, 4]));
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let f = p(&[1, 2, 0, 0]);
        assert_eq!(f.degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(p(&[1, 0, 1]).discriminant().unwrap(), BigInt::from(-4));
        assert_eq!(p(&[-2, 0, 1]).discriminant().unwrap(), BigInt::from(8));
        assert_eq!(p(&[3, 1, 1]).discriminant().unwrap(), BigInt::from(-11));
        assert_eq!(p(&[5]).discriminant(), Err(Error::DegreeTooSmall(0)));
        assert_eq!(
            IntPolynomial::zero().discriminant(),
            Err(Error::DegreeTooSmall(0))
        );
        // Φ_5 has discriminant 5^3
        assert_eq!(
            p(&[1, 1, 1, 1, 1]).discriminant().unwrap(),
            BigInt::from(125)
        );
        // x^4 - 10x^2 + 1 has discriminant 147456 = 2^14 · 3^2
        assert_eq!(
            p(&[1, 0, -10, 0, 1]).discriminant().unwrap(),
            BigInt::from(147456)
        );
        // non-monic: 2x^2 + 3x + 5 → 9 - 40
        assert_eq!(p(&[5, 3, 2]).discriminant().unwrap(), BigInt::from(-31));
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = p(&[-1, 1]);
        let b = p(&[2, 1]);
        let c = p(&[1, 0, 1]);
        let f = &(&(&a * &a) * &b) * &c;
        let g = &(&a * &c) * &p(&[3, 1]);
        assert_eq!(f.gcd(&g), &a * &c);
        assert_eq!(f.squarefree_part(), &(&a * &b) * &c);
        let dec = f.scale(&BigInt::from(-6)).squarefree_decomposition();
        assert_eq!(dec.len(), 2);
        assert_eq!(dec[0], &b * &c);
        assert_eq!(dec[1], a);
        let g3 = p(&[1, 2]);
        let h = &(&g3 * &g3) * &g3;
        assert_eq!(
            h.squarefree_decomposition(),
            vec![p(&[1]), p(&[1]), g3.clone()]
        );
        assert_eq!(h.distinct_root_count(), 1);
    }

    #[test]
    fn pseudo_rem_and_exact_division() {
        let f = p(&[1, 2, 3, 4]);
        let g = p(&[1, 2]);
        let r = f.pseudo_rem(&g);
        // lc(g)^3 f(-1/2) = 8 · (1 - 1 + 3/4 - 1/2) = 2
        assert_eq!(r, p(&[2]));
        let prod = &f * &g;
        assert_eq!(prod.div_exact(&g), Some(f.clone()));
        assert_eq!(f.div_exact(&g), None);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 0, -10, 0, 1]).to_string(), "x^4 - 10x^2 + 1");
        assert_eq!(p(&[-17, -2, 2]).to_string(), "2x^2 - 2x - 17");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn rat_polynomial_normalises() {
        let r = RatPolynomial::new(p(&[2, 4]), BigInt::from(-6)).unwrap();
        assert_eq!(r.numerator(), &p(&[-1, -2]));
        assert_eq!(r.denominator(), &BigInt::from(3));
        let q = RatPolynomial::from_rationals(&r.to_rationals());
        assert_eq!(q, r);
        assert!(RatPolynomial::new(p(&[1]), BigInt::zero()).is_err());
    }

    fn arb_poly(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPolynomial> {
        prop::collection::vec(-bound..=bound, 1..=max_deg + 1)
            .prop_map(|v| IntPolynomial::from_i64(&v))
    }

    proptest! {
        #[test]
        fn content_is_multiplicative_in_scalar(f in arb_poly(6, 30), c in -50i64..50) {
            let cf = f.scale(&BigInt::from(c));
            prop_assert_eq!(cf.content(), BigInt::from(c).abs() * f.content());
        }

        #[test]
        fn degree_of_product(f in arb_poly(5, 20), g in arb_poly(5, 20)) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            prop_assert_eq!((&f * &g).degree(), Some(f.deg() + g.deg()));
        }

        #[test]
        fn squarefree_decomposition_reassembles(f in arb_poly(3, 5), g in arb_poly(2, 5)) {
            prop_assume!(f.deg() >= 1 && g.deg() >= 1);
            let h = &(&f * &g) * &g;
            let dec = h.squarefree_decomposition();
            let mut acc = IntPolynomial::from_i64(&[1]);
            for (i, gi) in dec.iter().enumerate() {
                for _ in 0..=i {
                    acc = &acc * gi;
                }
            }
            prop_assert_eq!(acc.primitive_part(), h.primitive_part());
        }
    }
}
