//! Numeric verification of a scenario against its prediction.

use std::time::Instant;

use anyhow::Result;

use nilflow::limits::{nonconvergence_index, Convergence, DilationFamily, PolyVec};
use nilflow::numeric::{
    fullspace_floor, verify_convergence, FullspaceVerdict, HeisModel, HeisReport, NumericReport, TorusModel,
};
use nilflow::qlinalg::{mat_vec, vec_add, KVec, LatticeBasis};
use nilflow::Scalar;

use crate::predict::{predict, Analysis, DilationAnalysis};
use crate::scenario::{Scenario, Setup};

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub id: String,
    pub mode: String,
    pub lattice_scale: u64,
    pub analysis: Option<Analysis>,
    pub torus: NumericReport,
    pub heis: Option<HeisReport>,
    /// `Some(None)` when the search ran without finding a certificate.
    pub nonconvergence_index: Option<Option<u64>>,
    pub wall_ms: f64,
}

impl VerificationReport {
    /// Every verdict passes; without a prediction there is nothing to fail.
    pub fn passed(&self) -> bool {
        self.torus.verdicts.all_pass() && self.heis.as_ref().map_or(true, |h| h.verdict.agrees())
    }

    pub fn has_verdicts(&self) -> bool {
        self.analysis.is_some()
    }

    pub fn classification(&self) -> Option<Convergence> {
        self.analysis.as_ref().map(Analysis::classification)
    }

    /// Full-space verdicts of the torus and, if present, the nilmanifold.
    pub fn fullspace_verdicts(&self) -> Vec<(&'static str, &FullspaceVerdict)> {
        let mut out = Vec::new();
        if let Some(v) = &self.torus.verdicts.fullspace {
            out.push(("torus", v));
        }
        if let Some(h) = &self.heis {
            out.push(("nilmanifold", &h.verdict));
        }
        out
    }
}

fn dilation_model(s: &Scenario, a: &DilationAnalysis) -> Result<TorusModel> {
    Ok(TorusModel::dilation(
        &a.lattice,
        &a.dilation,
        &a.input,
        Some((&a.normal_form, &a.family)),
        &s.embedding,
    )?)
}

/// The family without prediction on the lattice `lattice`.
fn unpredicted_model(s: &Scenario, lattice: &LatticeBasis) -> Result<Option<TorusModel>> {
    let cfg = &s.embedding;
    Ok(Some(match &s.setup {
        Setup::Abelian { dilation, input, .. } => TorusModel::raw(lattice, input.pieces(), |x| dilation.apply(x), cfg)?,
        Setup::TranslatedBody { translate, body, .. } => {
            TorusModel::raw(lattice, std::slice::from_ref(body), |x| translate.shifted(x), cfg)?
        }
        Setup::Raw { constant, dilation, input, .. } => TorusModel::raw(lattice, input.pieces(), |x| raw_image(constant, dilation, x), cfg)?,
        Setup::Unipotent { .. } => return Ok(None),
    }))
}

fn raw_image(constant: &Option<Vec<KVec>>, dil: &DilationFamily, x: &[Scalar]) -> PolyVec {
    let p = dil.apply(x);
    match constant {
        None => p,
        Some(a0) => {
            let mut coeffs = p.coeffs().to_vec();
            coeffs[0] = vec_add(&coeffs[0], &mat_vec(a0, x));
            PolyVec::new(coeffs)
        }
    }
}

fn base_lattice(s: &Scenario) -> Option<&LatticeBasis> {
    match &s.setup {
        Setup::Abelian { lattice, .. } | Setup::TranslatedBody { lattice, .. } | Setup::Raw { lattice, .. } => Some(lattice),
        Setup::Unipotent { .. } => None,
    }
}

/// Smallest `N ≤ n_max` whose quotient by `N·Γ` keeps the family at least
/// `margin` away from the whole torus at every scheduled time.
pub fn certify_nonconvergence(s: &Scenario, classification: Convergence, n_max: u64) -> Result<Option<u64>> {
    let Some(lattice) = base_lattice(s) else {
        anyhow::bail!("nonconvergence certificates need an abelian lattice");
    };
    let mut failure = None;
    let found = nonconvergence_index(classification, n_max, |n| {
        let scaled = lattice.scaled(n);
        let floor = unpredicted_model(s, &scaled)
            .and_then(|m| Ok(fullspace_floor(&m.expect("abelian setup"), &s.schedule, &s.embedding)?));
        match floor {
            Ok(d) => d >= s.tolerances.margin,
            Err(e) => {
                failure.get_or_insert(e);
                false
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(found?)
}

pub fn verify(s: &Scenario) -> Result<VerificationReport> {
    let start = Instant::now();
    let analysis = match &s.setup {
        Setup::Raw { .. } => None,
        _ => Some(predict(s)?),
    };
    let model = match (&analysis, &s.setup) {
        (Some(Analysis::Abelian(a)), _) | (Some(Analysis::Unipotent { abelian: a, .. }), _) => dilation_model(s, a)?,
        (Some(Analysis::TranslatedBody(l)), Setup::TranslatedBody { translate, .. }) => {
            TorusModel::translated_body(translate, l, &s.embedding)?
        }
        _ => unpredicted_model(s, base_lattice(s).expect("raw setups carry a lattice"))?.expect("abelian setup"),
    };
    let torus = verify_convergence(&model, &s.schedule, &s.embedding, &s.tolerances)?;
    let heis = match (&s.setup, &analysis) {
        (Setup::Unipotent { group, integer_lattice: true, dilation, input, .. }, Some(a)) if group.is_heisenberg() => {
            let full = a.classification() == Convergence::ConvergesStronglyToFull;
            let model = HeisModel::new(dilation, input)?;
            Some(model.verify(&s.schedule, &s.embedding, &s.tolerances, s.heis_grid, full)?)
        }
        _ => None,
    };
    let nonconvergence_index = match (&analysis, s.n_max) {
        (Some(a), Some(n_max)) if a.classification() == Convergence::NotFull && base_lattice(s).is_some() => {
            Some(certify_nonconvergence(s, a.classification(), n_max)?)
        }
        _ => None,
    };
    Ok(VerificationReport {
        id: s.id.clone(),
        mode: s.mode.as_str().into(),
        lattice_scale: s.lattice_scale,
        analysis,
        torus,
        heis,
        nonconvergence_index,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
