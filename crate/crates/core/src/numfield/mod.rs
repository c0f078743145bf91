//! Number fields `Q(α) = Q[x]/(f)` with exact element arithmetic.

mod coords;
pub mod linalg;
mod primitive;
mod spec;

pub use coords::{
    coefficient_height_certificate, power_basis_coords, vandermonde_solve_check,
    CoefficientHeightReport, PowerBasisCoords, VandermondeReport,
};
pub use primitive::{
    count_generating_tuples, linear_form_height_check, primitive_from_generators, rebase,
    tuple_order, GeneratorSet, LinearFormReport, PrimitiveCertificate, PrimitiveElement,
    TupleCount,
};
pub use spec::{parse_inline_element, ElementSpec, FieldSpec};

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyarith::{check_irreducible, IntPolynomial, Irreducibility};

/// `Q[x]/(f)` for an irreducible integer polynomial `f` of content 1.
#[derive(Debug, Serialize)]
pub struct NumberField {
    defining_poly: IntPolynomial,
    degree: usize,
    #[serde(with = "crate::io::bigint_str")]
    discriminant: BigInt,
    irreducibility: Irreducibility,
    #[serde(skip)]
    monic: Vec<BigRational>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.defining_poly == other.defining_poly
    }
}

impl NumberField {
    /// Builds the field, normalizing the sign of the leading coefficient.
    /// When irreducibility cannot be proven the polynomial is taken as
    /// caller-asserted irreducible; a repeated root is always rejected.
    pub fn new(f: IntPolynomial) -> Result<Arc<Self>> {
        let d = f.degree().ok_or(Error::ZeroPolynomial)?;
        if d < 1 {
            return Err(Error::DegreeTooSmall(d));
        }
        let content = f.content();
        if !content.is_one() {
            return Err(Error::NotPrimitiveContent(content.to_string()));
        }
        let f = if f.leading_coeff().unwrap().is_negative() {
            -&f
        } else {
            f
        };
        let discriminant = f.discriminant()?;
        if discriminant.is_zero() {
            return Err(Error::PreconditionViolated(format!(
                "{f} has a repeated root"
            )));
        }
        let irreducibility = check_irreducible(&f)?;
        let lc = BigRational::from(f.leading_coeff().unwrap().clone());
        let monic = f.to_rationals().iter().map(|c| c / &lc).collect();
        Ok(Arc::new(Self {
            defining_poly: f,
            degree: d,
            discriminant,
            irreducibility,
            monic,
        }))
    }

    pub fn defining_poly(&self) -> &IntPolynomial {
        &self.defining_poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    pub fn irreducibility(&self) -> Irreducibility {
        self.irreducibility
    }

    /// Reduces a coefficient vector of any length modulo `f`.
    fn reduce(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree;
        while v.len() > d {
            let top = v.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let base = v.len() - d;
            for i in 0..d {
                if !self.monic[i].is_zero() {
                    v[base + i] -= &top * &self.monic[i];
                }
            }
        }
        v.resize(d, BigRational::zero());
        v
    }
}

/// `Σ c_j α^j` in a fixed number field.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Arc<NumberField>,
    coords: Vec<BigRational>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coords == other.coords
    }
}

impl FieldElement {
    pub fn new(field: &Arc<NumberField>, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() > field.degree {
            return Ok(Self {
                coords: field.reduce(coords),
                field: field.clone(),
            });
        }
        let mut coords = coords;
        coords.resize(field.degree, BigRational::zero());
        Ok(Self {
            field: field.clone(),
            coords,
        })
    }

    pub fn from_ints(field: &Arc<NumberField>, num: &[i64], den: i64) -> Self {
        let den = BigInt::from(den);
        let coords = num
            .iter()
            .map(|&n| BigRational::new(BigInt::from(n), den.clone()))
            .collect();
        Self::new(field, coords).expect("valid coordinates")
    }

    pub fn rational(field: &Arc<NumberField>, q: BigRational) -> Self {
        Self::new(field, vec![q]).expect("constant")
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::rational(field, BigRational::one())
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::rational(field, BigRational::zero())
    }

    /// The power-basis generator `α`.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        if field.degree == 1 {
            let root = -field.monic[0].clone();
            return Self::rational(field, root);
        }
        Self::new(field, vec![BigRational::zero(), BigRational::one()]).expect("degree >= 2")
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            field: self.field.clone(),
            coords,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            field: self.field.clone(),
            coords,
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let d = self.field.degree;
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self {
            field: self.field.clone(),
            coords: self.field.reduce(prod),
        })
    }

    /// Inverse by the extended Euclidean algorithm in `Q[x]`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.field.monic.clone();
        let (g, s) = ext_gcd(&self.coords, &f);
        if g.len() != 1 {
            return Err(Error::PreconditionViolated(format!(
                "{} is reducible: shares a factor with an element",
                self.field.defining_poly
            )));
        }
        let c = g[0].clone();
        let coords = s.iter().map(|x| x / &c).collect();
        Self::new(&self.field, coords)
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let mut base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Matrix of multiplication by `self` on the power basis (column `j`
    /// holds the coordinates of `self · α^j`).
    pub fn multiplication_matrix(&self) -> linalg::Matrix {
        let d = self.field.degree;
        let mut cols = Vec::with_capacity(d);
        let mut v = self.coords.clone();
        for _ in 0..d {
            cols.push(v.clone());
            let mut shifted = vec![BigRational::zero()];
            shifted.extend(v);
            v = self.field.reduce(shifted);
        }
        (0..d)
            .map(|i| (0..d).map(|j| cols[j][i].clone()).collect())
            .collect()
    }

    /// Characteristic polynomial of multiplication by `self`, cleared to a
    /// primitive integer polynomial.
    pub fn char_poly(&self) -> IntPolynomial {
        let cp = linalg::char_poly(&self.multiplication_matrix());
        let l = cp.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        IntPolynomial::new(
            cp.iter()
                .map(|x| (x * BigRational::from(l.clone())).to_integer())
                .collect(),
        )
        .primitive_part()
    }

    /// Minimal polynomial over `Z`: content 1, positive leading coefficient.
    pub fn min_poly(&self) -> IntPolynomial {
        let m = self.char_poly().squarefree_part();
        debug_assert_eq!(self.field.degree % m.deg(), 0);
        m
    }

    /// Degree of `self` over `Q`.
    pub fn degree(&self) -> usize {
        self.min_poly().deg()
    }

    /// Absolute logarithmic height via the minimal polynomial.
    pub fn height(&self) -> Result<f64> {
        let m = self.min_poly();
        crate::heights::abs_log_height(&m)
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lb = b[db].clone();
    for k in (0..q.len()).rev() {
        let t = &r[k + db] / &lb;
        if t.is_zero() {
            continue;
        }
        for (i, c) in b.iter().enumerate() {
            r[k + i] -= &t * c;
        }
        q[k] = t;
    }
    r.truncate(db);
    trim(&mut r);
    (q, r)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(BigRational::zero)
                - b.get(i).cloned().unwrap_or_else(BigRational::zero)
        })
        .collect();
    trim(&mut out);
    out
}

/// Returns `(g, s)` with `s·a ≡ g (mod b)` and `g = gcd(a, b)`.
fn ext_gcd(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = b.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0: Vec<BigRational> = Vec::new();
    let mut s1 = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    pub(crate) fn field(c: &[i64]) -> Arc<NumberField> {
        NumberField::new(IntPolynomial::from_i64(c)).unwrap()
    }

    #[test]
    fn quadratic_arithmetic() {
        let k = field(&[-2, 0, 1]);
        let a = FieldElement::generator(&k);
        assert_eq!(a.mul(&a).unwrap().coords(), &[q(2, 1), q(0, 1)]);
        assert_eq!(a.inv().unwrap().coords(), &[q(0, 1), q(1, 2)]);
        assert_eq!(FieldElement::zero(&k).inv(), Err(Error::DivisionByZero));
        assert_eq!(a.pow(-2).unwrap().coords(), &[q(1, 2), q(0, 1)]);
    }

    #[test]
    fn sqrt2_inside_biquadratic() {
        let k = field(&[1, 0, -10, 0, 1]);
        let s = FieldElement::from_ints(&k, &[0, -9, 0, 1], 2);
        assert_eq!(
            s.mul(&s).unwrap().coords(),
            &[q(2, 1), q(0, 1), q(0, 1), q(0, 1)]
        );
        assert_eq!(s.min_poly(), IntPolynomial::from_i64(&[-2, 0, 1]));
    }

    #[test]
    fn min_poly_examples() {
        let k = field(&[-2, 0, 1]);
        assert_eq!(
            FieldElement::generator(&k).min_poly(),
            IntPolynomial::from_i64(&[-2, 0, 1])
        );
        assert_eq!(
            FieldElement::rational(&k, q(1, 2)).min_poly(),
            IntPolynomial::from_i64(&[-1, 2])
        );
        assert_eq!(
            FieldElement::zero(&k).min_poly(),
            IntPolynomial::from_i64(&[0, 1])
        );
        // non-monic field: α root of 2x^2 - 3
        let k = field(&[-3, 0, 2]);
        let a = FieldElement::generator(&k);
        assert_eq!(a.mul(&a).unwrap().coords(), &[q(3, 2), q(0, 1)]);
        assert_eq!(a.min_poly(), IntPolynomial::from_i64(&[-3, 0, 2]));
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert!(matches!(
            NumberField::new(IntPolynomial::from_i64(&[2, 0, 2])),
            Err(Error::NotPrimitiveContent(_))
        ));
        assert!(matches!(
            NumberField::new(IntPolynomial::from_i64(&[1, 2, 1])),
            Err(Error::PreconditionViolated(_))
        ));
        let a = FieldElement::generator(&field(&[-2, 0, 1]));
        let b = FieldElement::generator(&field(&[-3, 0, 1]));
        assert_eq!(a.add(&b), Err(Error::FieldMismatch));
    }

    fn arb_field() -> impl Strategy<Value = Arc<NumberField>> {
        prop::sample::select(vec![
            vec![-2i64, 0, 1],
            vec![1, 0, -10, 0, 1],
            vec![1, 1, 1, 1, 1],
            vec![-2, 0, 0, 1],
            vec![3, -1, 0, 2],
            vec![-5, 1, 0, 0, 0, 1],
        ])
        .prop_map(|c| field(&c))
    }

    fn arb_element() -> impl Strategy<Value = FieldElement> {
        (
            arb_field(),
            prop::collection::vec(-20i64..=20, 5),
            1i64..=12,
        )
            .prop_map(|(k, num, den)| {
                let d = k.degree();
                FieldElement::from_ints(&k, &num[..d], den)
            })
    }

    proptest! {
        #[test]
        fn inverse_times_self_is_one(b in arb_element()) {
            prop_assume!(!b.is_zero());
            let one = FieldElement::one(b.field());
            prop_assert_eq!(b.mul(&b.inv().unwrap()).unwrap(), one);
        }

        #[test]
        fn min_poly_annihilates_multiplication_matrix(b in arb_element()) {
            let m = b.min_poly();
            let mat = b.multiplication_matrix();
            let d = mat.len();
            // Horner in the matrix ring
            let mut acc: linalg::Matrix = vec![vec![BigRational::zero(); d]; d];
            for c in m.coeffs().iter().rev() {
                acc = linalg::mat_mul(&acc, &mat);
                for (i, row) in acc.iter_mut().enumerate() {
                    row[i] += BigRational::from(c.clone());
                }
            }
            prop_assert!(acc.iter().flatten().all(Zero::is_zero));
            prop_assert_eq!(b.field().degree() % m.deg(), 0);
        }

        #[test]
        fn multiplication_is_commutative_and_distributive(
            a in arb_element(), s in prop::collection::vec(-9i64..=9, 5), t in prop::collection::vec(-9i64..=9, 5)
        ) {
            let k = a.field().clone();
            let d = k.degree();
            let b = FieldElement::from_ints(&k, &s[..d], 1);
            let c = FieldElement::from_ints(&k, &t[..d], 3);
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
        }
    }
}
