//! Exact analysis of a scenario and its text/JSON summaries.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use serde_json::{json, Value};

use nilflow::limits::{
    abelianize_dilation, classify_convergence, compress, limit_family, normal_form, slmax, translated_body_limits,
    Convergence, DilationFamily, InputSet, LimitFamily, MultiCosetFamily, PolyVec, TranslatedBodyLimits,
};
use nilflow::qlinalg::{LatticeBasis, Subspace};
use nilflow::scalar::format_rational;
use nilflow::unipotent::{project_lattice, Abelianization};
use nilflow::Scalar;

use crate::scenario::{Scenario, Setup};

/// Normal form and limit family of a proper dilation on a torus.
#[derive(Clone, Debug)]
pub struct DilationAnalysis {
    pub lattice: LatticeBasis,
    pub dilation: DilationFamily,
    pub input: InputSet,
    pub normal_form: MultiCosetFamily,
    pub slmax: Vec<Subspace>,
    pub family: LimitFamily,
    pub classification: Convergence,
}

impl DilationAnalysis {
    pub fn new(lattice: &LatticeBasis, dilation: &DilationFamily, input: &InputSet) -> Result<DilationAnalysis> {
        let normal_form = compress(&normal_form(dilation, input)?);
        let family = limit_family(&normal_form, lattice)?;
        Ok(DilationAnalysis {
            lattice: lattice.clone(),
            dilation: dilation.clone(),
            input: input.clone(),
            slmax: slmax(&normal_form),
            classification: classify_convergence(&normal_form, lattice)?,
            normal_form,
            family,
        })
    }
}

#[derive(Clone, Debug)]
pub enum Analysis {
    Abelian(DilationAnalysis),
    /// The unipotent family is classified through its abelianization.
    Unipotent {
        abelianization: Abelianization,
        abelian: DilationAnalysis,
    },
    TranslatedBody(TranslatedBodyLimits),
}

impl Analysis {
    pub fn classification(&self) -> Convergence {
        match self {
            Analysis::Abelian(a) | Analysis::Unipotent { abelian: a, .. } => a.classification,
            Analysis::TranslatedBody(l) => l.classification(),
        }
    }
}

pub fn predict(s: &Scenario) -> Result<Analysis> {
    Ok(match &s.setup {
        Setup::Abelian { lattice, dilation, input } => Analysis::Abelian(DilationAnalysis::new(lattice, dilation, input)?),
        Setup::Unipotent { group, lattice, dilation, input, .. } => {
            let lattice_ab = project_lattice(lattice, group)?;
            let dilation_ab = abelianize_dilation(dilation, group)?;
            Analysis::Unipotent {
                abelianization: group.abelianization(),
                abelian: DilationAnalysis::new(&lattice_ab, &dilation_ab, input)?,
            }
        }
        Setup::TranslatedBody { lattice, translate, body } => {
            Analysis::TranslatedBody(translated_body_limits(translate, body, lattice)?)
        }
        Setup::Raw { .. } => bail!("raw scenarios have no prediction; run `verify` for their distance curves"),
    })
}

pub fn scalar_json(x: &Scalar) -> Value {
    match x.as_rational() {
        Some(q) => Value::String(format_rational(&q)),
        None => Value::Array(x.rational_coords().iter().map(|c| Value::String(format_rational(c))).collect()),
    }
}

pub fn vector_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_json).collect())
}

pub fn subspace_json(l: &Subspace) -> Value {
    json!({
        "rank": l.rank(),
        "ambient_dim": l.ambient_dim(),
        "basis": l.basis().iter().map(|v| vector_json(v)).collect::<Vec<_>>(),
    })
}

fn poly_json(p: &PolyVec) -> Value {
    Value::Array(p.coeffs().iter().map(|c| vector_json(c)).collect())
}

fn lattice_json(l: &LatticeBasis) -> Value {
    Value::Array(l.vectors().iter().map(|v| vector_json(v)).collect())
}

fn dilation_json(a: &DilationAnalysis) -> Value {
    json!({
        "lattice": lattice_json(&a.lattice),
        "normal_form": a.normal_form.cosets.iter().map(|c| json!({
            "p": poly_json(&c.p),
            "l": subspace_json(&c.l),
        })).collect::<Vec<_>>(),
        "slmax": a.slmax.iter().map(subspace_json).collect::<Vec<_>>(),
        "limit_family": {
            "n": a.family.n,
            "closures": a.family.closures.iter().map(subspace_json).collect::<Vec<_>>(),
            "cbar": vector_json(&a.family.cbar),
            "v": subspace_json(&a.family.v),
            "vclosed": subspace_json(&a.family.vclosed),
            "full": a.family.is_full(),
        },
        "classification": a.classification.as_str(),
    })
}

/// Machine-readable summary; keys are sorted, so output is byte-stable.
pub fn analysis_json(s: &Scenario, a: &Analysis) -> Value {
    let body = match a {
        Analysis::Abelian(d) => dilation_json(d),
        Analysis::Unipotent { abelianization, abelian } => json!({
            "abelianization": {
                "m_ab": abelianization.m_ab(),
                "commutator": subspace_json(&abelianization.commutator),
                "projection": abelianization.projection.iter().map(|r| vector_json(r)).collect::<Vec<_>>(),
            },
            "abelianized": dilation_json(abelian),
            "classification": abelian.classification.as_str(),
        }),
        Analysis::TranslatedBody(l) => json!({
            "lattice": lattice_json(&l.lattice),
            "cbar": vector_json(&l.cbar),
            "v": subspace_json(&l.v),
            "vclosed": subspace_json(&l.vclosed),
            "classification": l.classification().as_str(),
        }),
    };
    json!({
        "spec_version": crate::scenario::SCHEMA_VERSION,
        "id": s.id,
        "mode": s.mode.as_str(),
        "field_degree": s.field.degree(),
        "lattice_scale": s.lattice_scale,
        "prediction": body,
    })
}

pub fn fmt_vector(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn fmt_subspace(l: &Subspace) -> String {
    if l.is_zero() {
        return "{0}".into();
    }
    let parts: Vec<String> = l.basis().iter().map(|v| fmt_vector(v)).collect();
    let full = if l.is_full() { " (full)" } else { "" };
    format!("span{{{}}}{full}", parts.join(", "))
}

fn fmt_poly(p: &PolyVec) -> String {
    let terms: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| match i {
            0 => fmt_vector(c),
            1 => format!("{}·t", fmt_vector(c)),
            _ => format!("{}·t^{i}", fmt_vector(c)),
        })
        .collect();
    terms.join(" + ")
}

fn write_dilation(out: &mut String, a: &DilationAnalysis) {
    let lattice: Vec<String> = a.lattice.vectors().iter().map(|v| fmt_vector(v)).collect();
    let _ = writeln!(out, "lattice basis: {}", lattice.join(" "));
    let _ = writeln!(out, "normal form: {} coset(s)", a.normal_form.len());
    for (j, c) in a.normal_form.cosets.iter().enumerate() {
        let _ = writeln!(out, "  coset {}: p(t) = {} ; L = {}", j + 1, fmt_poly(&c.p), fmt_subspace(&c.l));
    }
    for l in &a.slmax {
        let _ = writeln!(out, "SL_max: {}", fmt_subspace(l));
    }
    let _ = writeln!(out, "limit family (n = {}):", a.family.n);
    for (j, l) in a.family.closures.iter().enumerate() {
        let _ = writeln!(out, "  closure {}: {}", j + 1, fmt_subspace(l));
    }
    let _ = writeln!(out, "  cbar = {}", fmt_vector(&a.family.cbar));
    let _ = writeln!(out, "  V = {}", fmt_subspace(&a.family.v));
    let _ = writeln!(out, "  V closed = {}", fmt_subspace(&a.family.vclosed));
}

/// Human-readable summary.
pub fn analysis_text(s: &Scenario, a: &Analysis) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario {} ({})", s.id, s.mode.as_str());
    if s.lattice_scale != 1 {
        let _ = writeln!(out, "lattice scaled by {}", s.lattice_scale);
    }
    match a {
        Analysis::Abelian(d) => write_dilation(&mut out, d),
        Analysis::Unipotent { abelianization, abelian } => {
            let _ = writeln!(out, "commutator subalgebra: {}", fmt_subspace(&abelianization.commutator));
            let _ = writeln!(out, "abelianization: dimension {}", abelianization.m_ab());
            write_dilation(&mut out, abelian);
        }
        Analysis::TranslatedBody(l) => {
            let lattice: Vec<String> = l.lattice.vectors().iter().map(|v| fmt_vector(v)).collect();
            let _ = writeln!(out, "lattice basis: {}", lattice.join(" "));
            let _ = writeln!(out, "cbar = {}", fmt_vector(&l.cbar));
            let _ = writeln!(out, "V = {}", fmt_subspace(&l.v));
            let _ = writeln!(out, "V closed = {}", fmt_subspace(&l.vclosed));
        }
    }
    let _ = writeln!(out, "classification: {}", a.classification().as_str());
    out
}
