//! Primitive elements as small integer combinations of generators.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::{linalg, FieldElement, NumberField};
use crate::error::{Error, Result};
use crate::heights::{abs_log_height_estimate, HEIGHT_SLACK};
use crate::polyarith::IntPolynomial;

/// Generators `α_1, …, α_m` of an ambient field, each of degree `≥ 2`.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    field: Arc<NumberField>,
    generators: Vec<FieldElement>,
}

impl GeneratorSet {
    pub fn new(field: &Arc<NumberField>, generators: Vec<FieldElement>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::MissingInput("generators".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.field() != field {
                return Err(Error::FieldMismatch);
            }
            let deg = g.degree();
            if deg < 2 {
                return Err(Error::PreconditionViolated(format!(
                    "generator {i} has degree {deg}; degree at least 2 is required"
                )));
            }
        }
        Ok(Self {
            field: field.clone(),
            generators,
        })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn generators(&self) -> &[FieldElement] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    fn combine(&self, tuple: &[i64]) -> FieldElement {
        let mut acc = FieldElement::zero(&self.field);
        for (g, &b) in self.generators.iter().zip(tuple) {
            if b != 0 {
                acc = acc
                    .add(&g.scale(&BigRational::from_integer(b.into())))
                    .expect("same field");
            }
        }
        acc
    }
}

fn value_rank(v: i64) -> i64 {
    if v > 0 {
        2 * v - 1
    } else {
        -2 * v
    }
}

/// Nonzero tuples in `{-s, …, s}^m`, by max-norm ascending and then
/// lexicographically under the value order `0, 1, -1, 2, -2, …`.
pub fn tuple_order(m: usize, s: i64) -> Vec<Vec<i64>> {
    let mut all: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..m {
        all = all
            .into_iter()
            .flat_map(|t| {
                (-s..=s).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    all.retain(|t| t.iter().any(|&v| v != 0));
    all.sort_by_key(|t| {
        let norm = t.iter().map(|v| v.abs()).max().unwrap_or(0);
        (norm, t.iter().map(|&v| value_rank(v)).collect::<Vec<_>>())
    });
    all
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimitiveCertificate {
    pub m: usize,
    pub d: usize,
    pub generator_degrees: Vec<usize>,
    pub generator_heights: Vec<f64>,
    pub height: f64,
    /// `log(m⌊d/2⌋) + Σ h(α_i)`.
    pub height_bound: f64,
    /// `log M(α′)` against `d log(m⌊d/2⌋) + Σ (d/d_i) log M(α_i)`.
    pub log_mahler: f64,
    pub log_mahler_bound: f64,
}

#[derive(Clone, Debug)]
pub struct PrimitiveElement {
    pub element: FieldElement,
    pub tuple: Vec<i64>,
    pub min_poly: IntPolynomial,
    pub certificate: PrimitiveCertificate,
}

/// First tuple (in [`tuple_order`]) whose combination has full degree,
/// together with its checked height certificate.
pub fn primitive_from_generators(gs: &GeneratorSet) -> Result<PrimitiveElement> {
    let d = gs.field.degree();
    let m = gs.len();
    let s = (d / 2) as i64;
    let tuples = tuple_order(m, s);
    // search shell by shell so the answer is the canonical first one
    let mut found = None;
    for norm in 1..=s {
        let shell: Vec<&Vec<i64>> = tuples
            .iter()
            .filter(|t| t.iter().map(|v| v.abs()).max() == Some(norm))
            .collect();
        if let Some(t) = shell.par_iter().find_first(|t| gs.combine(t).degree() == d) {
            found = Some((*t).clone());
            break;
        }
    }
    let tuple = found.ok_or(Error::NotGenerating(m))?;
    let element = gs.combine(&tuple);
    let min_poly = element.min_poly();

    let mut generator_degrees = Vec::with_capacity(m);
    let mut generator_heights = Vec::with_capacity(m);
    let mut err = 0.0;
    for g in &gs.generators {
        let mp = g.min_poly();
        let (h, e) = abs_log_height_estimate(&mp)?;
        generator_degrees.push(mp.deg());
        generator_heights.push(h);
        err += e;
    }
    let (height, e) = abs_log_height_estimate(&min_poly)?;
    err += e;
    let ln_ms = ((m as f64) * s as f64).ln();
    let height_bound = ln_ms + generator_heights.iter().sum::<f64>();
    let df = d as f64;
    let log_mahler = df * height;
    let log_mahler_bound = df * ln_ms
        + generator_degrees
            .iter()
            .zip(&generator_heights)
            .map(|(&di, &h)| df / di as f64 * (di as f64 * h))
            .sum::<f64>();
    let certificate = PrimitiveCertificate {
        m,
        d,
        generator_degrees,
        generator_heights,
        height,
        height_bound,
        log_mahler,
        log_mahler_bound,
    };
    if height > height_bound + HEIGHT_SLACK + err {
        return Err(Error::InequalityViolated(format!(
            "primitive element height {height} exceeds {height_bound}"
        )));
    }
    if log_mahler > log_mahler_bound + df * (HEIGHT_SLACK + err) {
        return Err(Error::InequalityViolated(format!(
            "log M = {log_mahler} exceeds {log_mahler_bound}"
        )));
    }
    Ok(PrimitiveElement {
        element,
        tuple,
        min_poly,
        certificate,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TupleCount {
    pub generating: u64,
    pub total: u64,
    /// `|S|^{m-1} (|S| - d + 1)`.
    pub lower_bound: i64,
}

/// Exhaustive count of generating tuples in `S^m`, `S = {-⌊d/2⌋, …, ⌊d/2⌋}`.
pub fn count_generating_tuples(gs: &GeneratorSet) -> TupleCount {
    let d = gs.field.degree();
    let m = gs.len() as u32;
    let s = (d / 2) as i64;
    let size = 2 * s + 1;
    let tuples = tuple_order(gs.len(), s);
    let generating = tuples
        .par_iter()
        .filter(|t| gs.combine(t).degree() == d)
        .count() as u64;
    TupleCount {
        generating,
        total: (size as u64).pow(m),
        lower_bound: size.pow(m - 1) * (size - d as i64 + 1),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearFormReport {
    pub lhs: f64,
    pub rhs: f64,
}

/// `h(Σ b_i γ_i) ≤ log Σ|b_i| + Σ_{b_i ≠ 0} h(γ_i)`.
pub fn linear_form_height_check(elements: &[FieldElement], b: &[i64]) -> Result<LinearFormReport> {
    let field = elements
        .first()
        .ok_or(Error::MissingInput("elements".into()))?
        .field()
        .clone();
    let mut acc = FieldElement::zero(&field);
    let mut rhs = 0.0;
    let mut err = 0.0;
    let mut length = 0i64;
    for (g, &c) in elements.iter().zip(b) {
        if c == 0 {
            continue;
        }
        acc = acc.add(&g.scale(&BigRational::from_integer(c.into())))?;
        let (h, e) = abs_log_height_estimate(&g.min_poly())?;
        rhs += h;
        err += e;
        length += c.abs();
    }
    if length == 0 {
        return Err(Error::ZeroElement);
    }
    rhs += (length as f64).ln();
    let (lhs, e) = abs_log_height_estimate(&acc.min_poly())?;
    if lhs > rhs + HEIGHT_SLACK + err + e {
        return Err(Error::InequalityViolated(format!(
            "h = {lhs} exceeds {rhs}"
        )));
    }
    Ok(LinearFormReport { lhs, rhs })
}

/// Re-expresses `elements` in the power basis of `primitive`, returning the
/// new field `Q[x]/(minpoly(primitive))`. Every result is re-expanded in the
/// old basis and compared exactly.
pub fn rebase(
    primitive: &FieldElement,
    elements: &[FieldElement],
) -> Result<(Arc<NumberField>, Vec<FieldElement>)> {
    let old = primitive.field();
    let d = old.degree();
    let mp = primitive.min_poly();
    if mp.deg() != d {
        return Err(Error::NotGenerating(1));
    }
    let new_field = NumberField::new(mp)?;
    let mut powers = Vec::with_capacity(d);
    let mut p = FieldElement::one(old);
    for _ in 0..d {
        powers.push(p.clone());
        p = p.mul(primitive)?;
    }
    let mat: linalg::Matrix = (0..d)
        .map(|i| (0..d).map(|j| powers[j].coords()[i].clone()).collect())
        .collect();
    let mut out = Vec::with_capacity(elements.len());
    for e in elements {
        if e.field() != old {
            return Err(Error::FieldMismatch);
        }
        let y = linalg::solve(&mat, e.coords())?;
        let mut back = FieldElement::zero(old);
        for (c, pw) in y.iter().zip(&powers) {
            if !c.is_zero() {
                back = back.add(&pw.scale(c))?;
            }
        }
        if &back != e {
            return Err(Error::InternalAssertionFailed(
                "rebased element does not re-expand".into(),
            ));
        }
        out.push(FieldElement::new(&new_field, y)?);
    }
    Ok((new_field, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::tests::field;

    fn biquadratic() -> (Arc<NumberField>, FieldElement, FieldElement) {
        let k = field(&[1, 0, -10, 0, 1]);
        let s2 = FieldElement::from_ints(&k, &[0, -9, 0, 1], 2);
        let s3 = FieldElement::from_ints(&k, &[0, 11, 0, -1], 2);
        (k, s2, s3)
    }

    #[test]
    fn order_starts_with_small_tuples() {
        let t = tuple_order(2, 2);
        assert_eq!(
            &t[..8],
            &[
                vec![0, 1],
                vec![0, -1],
                vec![1, 0],
                vec![1, 1],
                vec![1, -1],
                vec![-1, 0],
                vec![-1, 1],
                vec![-1, -1],
            ]
        );
        assert_eq!(t.len(), 24);
    }

    #[test]
    fn sqrt2_sqrt3() {
        let (k, s2, s3) = biquadratic();
        assert_eq!(s3.mul(&s3).unwrap(), FieldElement::from_ints(&k, &[3], 1));
        let gs = GeneratorSet::new(&k, vec![s2, s3]).unwrap();
        let p = primitive_from_generators(&gs).unwrap();
        assert_eq!(p.tuple, vec![1, 1]);
        assert_eq!(p.min_poly, IntPolynomial::from_i64(&[1, 0, -10, 0, 1]));
        let c = &p.certificate;
        assert!((c.height - 0.5728).abs() < 1e-3, "{}", c.height);
        assert!((c.height_bound - 2.282).abs() < 1e-3, "{}", c.height_bound);
    }

    #[test]
    fn single_generator_is_returned() {
        let k = field(&[-2, 0, 0, 1]);
        let gs = GeneratorSet::new(&k, vec![FieldElement::generator(&k)]).unwrap();
        let p = primitive_from_generators(&gs).unwrap();
        assert_eq!(p.tuple, vec![1]);
        assert_eq!(p.element, FieldElement::generator(&k));
    }

    #[test]
    fn non_generating_set_is_reported() {
        let (k, s2, _) = biquadratic();
        let gs = GeneratorSet::new(
            &k,
            vec![s2.clone(), s2.scale(&BigRational::from_integer(3.into()))],
        )
        .unwrap();
        assert_eq!(
            primitive_from_generators(&gs).unwrap_err(),
            Error::NotGenerating(2)
        );
        assert!(GeneratorSet::new(&k, vec![FieldElement::one(&k)]).is_err());
    }

    #[test]
    fn generating_tuple_count_meets_lower_bound() {
        let (k, s2, s3) = biquadratic();
        let gs = GeneratorSet::new(&k, vec![s2.clone(), s3.clone()]).unwrap();
        let c = count_generating_tuples(&gs);
        assert!(c.generating as i64 >= c.lower_bound);
        // brute force: b1√2 + b2√3 generates iff b1 b2 ≠ 0
        assert_eq!(c.generating, 16);
        assert_eq!(c.lower_bound, 10);
        for fc in [
            vec![-2i64, 0, 1],
            vec![1, 1, 1],
            vec![-2, 0, 0, 1],
            vec![1, 1, 1, 1, 1],
            vec![3, 0, 1, 0, 1],
        ] {
            let k = field(&fc);
            let a = FieldElement::generator(&k);
            let gens = vec![
                a.clone(),
                a.mul(&a).unwrap().add(&FieldElement::one(&k)).unwrap(),
            ];
            let gens: Vec<_> = gens.into_iter().filter(|g| g.degree() >= 2).collect();
            let gs = GeneratorSet::new(&k, gens).unwrap();
            let c = count_generating_tuples(&gs);
            assert!(c.generating as i64 >= c.lower_bound, "{fc:?}: {c:?}");
        }
    }

    #[test]
    fn linear_forms() {
        let (_, s2, s3) = biquadratic();
        for b in [[1, 1], [2, -1], [3, 2], [0, 5], [-2, -2]] {
            linear_form_height_check(&[s2.clone(), s3.clone()], &b).unwrap();
        }
        let k = field(&[1, 1, 1, 1, 1]);
        let z = FieldElement::generator(&k);
        let z2 = z.mul(&z).unwrap();
        let w = FieldElement::from_ints(&k, &[1, 2, 0, -1], 3);
        for b in [[1, 1, 1], [2, 0, -1], [1, -2, 2]] {
            linear_form_height_check(&[z.clone(), z2.clone(), w.clone()], &b).unwrap();
        }
    }

    #[test]
    fn rebase_to_primitive() {
        let (_, s2, s3) = biquadratic();
        // 2√2 + √3 is primitive with a different basis
        let prim = s2
            .scale(&BigRational::from_integer(2.into()))
            .add(&s3)
            .unwrap();
        let (kk, out) = rebase(&prim, &[s2.clone(), s3.clone()]).unwrap();
        assert_eq!(kk.degree(), 4);
        assert_eq!(out[0].min_poly(), IntPolynomial::from_i64(&[-2, 0, 1]));
        assert_eq!(out[1].min_poly(), IntPolynomial::from_i64(&[-3, 0, 1]));
    }
}
