//! End-to-end embedding: generators → primitive element → rebased
//! coordinates → prime search → lifted root → valuations → bound reports.

use std::sync::Arc;

use serde::Serialize;

use crate::bounds::{evaluate_bound, inputs, BoundReport};
use crate::error::{Error, Result};
use crate::numfield::{
    primitive_from_generators, rebase, FieldElement, FieldSpec, GeneratorSet, NumberField,
    PrimitiveCertificate,
};
use crate::padic::{find_embedding, EmbedOptions, EmbeddingResult};
use crate::polyarith::{cyclotomic, IntPolynomial};

#[derive(Clone, Debug, Serialize)]
pub struct PrimitiveSummary {
    pub generators: Vec<String>,
    pub tuple: Vec<i64>,
    pub min_poly: IntPolynomial,
    pub certificate: PrimitiveCertificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub defining_poly: IntPolynomial,
    pub primitive: Option<PrimitiveSummary>,
    /// Defining polynomial of the field the search ran in.
    pub working_poly: IntPolynomial,
    pub elements: Vec<String>,
    pub embedding: EmbeddingResult,
    pub bounds: Vec<BoundReport>,
}

/// Runs the full pipeline on a field spec. When the spec lists generators,
/// the search runs in the power basis of the primitive element built from
/// them, and every element is rebased there first.
pub fn run_embed_pipeline(
    spec: &FieldSpec,
    element_names: &[String],
    cyclotomic_m: Option<u64>,
    opts: &EmbedOptions,
) -> Result<PipelineReport> {
    let field = spec.field()?;
    let mut elements = Vec::with_capacity(element_names.len());
    for name in element_names {
        elements.push(spec.element(&field, name)?);
    }
    let mut bounds = Vec::new();
    let (primitive, work_field, work_elements) = if spec.generators.is_empty() {
        (None, field.clone(), elements.clone())
    } else {
        let gens: Vec<FieldElement> = spec
            .generators
            .iter()
            .map(|g| spec.element(&field, g))
            .collect::<Result<_>>()?;
        let gs = GeneratorSet::new(&field, gens)?;
        let prim = primitive_from_generators(&gs)?;
        let (nf, rebased) = rebase(&prim.element, &elements)?;
        let mut sum_h_beta = 0.0;
        for e in &elements {
            sum_h_beta += e.height()?;
        }
        bounds.push(bounds_for_generators(
            &prim.certificate,
            elements.len(),
            sum_h_beta,
        )?);
        let summary = PrimitiveSummary {
            generators: spec.generators.clone(),
            tuple: prim.tuple.clone(),
            min_poly: prim.min_poly.clone(),
            certificate: prim.certificate.clone(),
        };
        (Some(summary), nf, rebased)
    };
    let named: Vec<(String, FieldElement)> =
        element_names.iter().cloned().zip(work_elements).collect();
    let embedding = find_embedding(&work_field, &named, opts)?;
    bounds.insert(0, embedding.bound.clone());
    if let Some(m) = cyclotomic_m {
        let mut sum_h_beta = 0.0;
        for e in &elements {
            sum_h_beta += e.height()?;
        }
        let mut r = evaluate_bound(
            "embedding-cyclotomic",
            &inputs(&[
                ("m", m as f64),
                ("n", elements.len().max(1) as f64),
                ("sum_h_beta", sum_h_beta),
                ("empirical", embedding.p as f64),
            ]),
            &opts.constants,
        )?;
        r.inputs.remove("empirical");
        bounds.push(r);
    }
    for b in &bounds {
        if !b.passes() {
            return Err(Error::InequalityViolated(format!(
                "bound `{}` fails",
                b.name
            )));
        }
    }
    Ok(PipelineReport {
        defining_poly: field.defining_poly().clone(),
        primitive,
        working_poly: work_field.defining_poly().clone(),
        elements: element_names.to_vec(),
        embedding,
        bounds,
    })
}

fn bounds_for_generators(
    cert: &PrimitiveCertificate,
    n: usize,
    sum_h_beta: f64,
) -> Result<BoundReport> {
    evaluate_bound(
        "embedding-generators",
        &inputs(&[
            ("d", cert.d as f64),
            ("m", cert.m as f64),
            ("n", n.max(1) as f64),
            ("sum_h_alpha", cert.generator_heights.iter().sum()),
            ("sum_h_beta", sum_h_beta),
        ]),
        &Default::default(),
    )
}

/// Field spec for `Q(ζ_m)` with the generator available as `z`.
pub fn cyclotomic_spec(m: u64) -> Result<FieldSpec> {
    if m < 3 {
        return Err(Error::PreconditionViolated(
            "cyclotomic field needs m > 2".into(),
        ));
    }
    let f = cyclotomic(m);
    let _: Arc<NumberField> = NumberField::new(f.clone())?;
    let mut elements = std::collections::BTreeMap::new();
    elements.insert(
        "z".to_string(),
        crate::numfield::ElementSpec {
            num: vec![0.into(), 1.into()],
            den: 1.into(),
        },
    );
    Ok(FieldSpec {
        defining_poly: f,
        elements,
        generators: Vec::new(),
    })
}
