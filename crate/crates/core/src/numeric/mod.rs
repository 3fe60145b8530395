//! Floating-point verification of predicted limits.
//!
//! Exact data is embedded into fractional lattice coordinates, sampled, and
//! compared by Hausdorff distance under the quotient metric. Everything here
//! is evidence for the exact predictions of [`crate::limits`], never input to
//! them.

pub mod heis;
pub mod kdtree;
pub mod sample;
pub mod torus;

use std::time::Instant;

use thiserror::Error;

use crate::limits::{
    DilationFamily, InputSet, LimitFamily, LimitsError, MultiCosetFamily, Piece, PolyVec, TranslatedBodyLimits,
};
use crate::qlinalg::{rational_coordinate_basis, LatticeBasis, LinalgError, Subspace};
use crate::scalar::Scalar;

pub use heis::{heis_distance, heis_exp, heis_grid, heis_reduce, HeisMetric};
pub use kdtree::{hausdorff, Cloud, KdTree, Metric};
pub use sample::{full_grid, sample_pieces, sample_subtorus, PieceSampler};
pub use torus::Torus;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("schedule is empty")]
    EmptySchedule,
    #[error("schedule must be positive and strictly increasing")]
    BadSchedule,
    #[error("embedded lattice basis is singular or too ill-conditioned")]
    SingularBasis,
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Limits(#[from] LimitsError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Sampling and embedding parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingConfig {
    /// Absolute error of scalar embedding before rounding to `f64`.
    pub precision: f64,
    /// Samples per unit of ambient length, along every direction.
    pub sample_density: f64,
    /// Integer offset radius of the torus metric.
    pub offset_window: u32,
    /// Upper bound on the samples of one set at one time; the density is
    /// lowered uniformly to respect it.
    pub sample_cap: usize,
    /// Upper bound on predicted-set and full-space grids.
    pub grid_cap: usize,
    pub seed: u64,
    /// Completeness targets per dimension of the parameter torus.
    pub target_grid: usize,
    pub target_cap: usize,
    /// Times in the dense completeness sweep; `None` picks by dimension.
    pub sweep_steps: Option<usize>,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        EmbeddingConfig {
            precision: 1e-12,
            sample_density: 200.0,
            offset_window: 1,
            sample_cap: 1_000_000,
            grid_cap: 250_000,
            seed: 0,
            target_grid: 8,
            target_cap: 4096,
            sweep_steps: None,
        }
    }
}

impl EmbeddingConfig {
    pub fn validate(&self) -> Result<(), NumericError> {
        if !(self.precision > 0.0) {
            return Err(NumericError::Config("precision must be positive".into()));
        }
        if !(self.sample_density >= 1.0) {
            return Err(NumericError::Config("sample_density must be at least 1".into()));
        }
        if self.offset_window < 1 {
            return Err(NumericError::Config("offset_window must be at least 1".into()));
        }
        if self.sample_cap == 0 || self.grid_cap == 0 || self.target_grid == 0 || self.target_cap == 0 {
            return Err(NumericError::Config("caps and grid sizes must be positive".into()));
        }
        Ok(())
    }
}

/// Increasing positive times at which families are sampled.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    t_values: Vec<f64>,
}

impl Schedule {
    pub fn new(t_values: Vec<f64>) -> Result<Schedule, NumericError> {
        if t_values.is_empty() {
            return Err(NumericError::EmptySchedule);
        }
        let ok = t_values.iter().all(|t| t.is_finite() && *t > 0.0) && t_values.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(NumericError::BadSchedule);
        }
        Ok(Schedule { t_values })
    }

    /// `10^{lo}, 10^{lo+step}, …, 10^{hi}`.
    pub fn geometric(lo: f64, hi: f64, step: f64) -> Result<Schedule, NumericError> {
        if !(step > 0.0) || hi < lo {
            return Err(NumericError::BadSchedule);
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        Schedule::new((0..=n).map(|i| 10f64.powf(lo + step * i as f64)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.t_values
    }

    /// The last `⌈len/2⌉` times.
    pub fn tail(&self) -> &[f64] {
        let n = self.t_values.len();
        &self.t_values[n / 2..]
    }

    fn tail_start(&self) -> usize {
        self.t_values.len() / 2
    }

    /// Geometric refinement of `[first, last]` with `steps` times.
    pub fn refined(&self, steps: usize) -> Vec<f64> {
        let (a, b) = (self.t_values[0], *self.t_values.last().unwrap());
        if steps < 2 || a == b {
            return self.t_values.clone();
        }
        let (la, lb) = (a.ln(), b.ln());
        let mut out: Vec<f64> = (0..steps).map(|i| (la + (lb - la) * i as f64 / (steps - 1) as f64).exp()).collect();
        out.extend_from_slice(&self.t_values);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule::geometric(1.0, 4.0, 0.5).expect("valid default schedule")
    }
}

/// Acceptance thresholds for the verdicts.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    /// Bound on the tail soundness distance.
    pub sound: f64,
    /// Bound on the worst completeness target distance.
    pub complete: f64,
    /// A set counts as the full space when its distance to the full grid
    /// stays below this over the tail.
    pub fullspace: f64,
    /// Bound on the Heisenberg full-space distance.
    pub heis_fullspace: f64,
    /// Separation from the full space required to certify a proper limit.
    pub margin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { sound: 0.02, complete: 0.05, fullspace: 0.05, heis_fullspace: 0.1, margin: 0.1 }
    }
}

/// `frac(B⁻¹ v)`.
pub fn reduce_mod_lattice(v: &[f64], torus: &Torus) -> Vec<f64> {
    torus.reduce(v)
}

pub fn torus_distance(x: &[f64], y: &[f64], torus: &Torus) -> f64 {
    torus.distance(x, y)
}

/// Hausdorff distance of two clouds on the torus.
pub fn torus_hausdorff(a: &Cloud, b: &Cloud, torus: &Torus) -> Result<f64, NumericError> {
    hausdorff(torus, a, b).ok_or(NumericError::EmptyCloud)
}

/// `π(ρ_t P)` for a single piece.
pub fn sample_piece(
    piece: &Piece,
    dil: &DilationFamily,
    t: f64,
    lattice: &LatticeBasis,
    cfg: &EmbeddingConfig,
) -> Result<Cloud, NumericError> {
    let torus = Torus::from_lattice(lattice, cfg.offset_window)?;
    let sampler = PieceSampler::new(piece, |x| to_lattice(&dil.apply(x), lattice));
    Ok(sample_pieces(&[sampler], t, &torus, cfg.sample_density, cfg.sample_cap, cfg.seed))
}

/// Grid of `π(⋃_j d_j + L_j^Γ)` for ambient float translates `d_j`.
pub fn sample_limit(
    d: &[Vec<f64>],
    closures: &[Subspace],
    lattice: &LatticeBasis,
    cfg: &EmbeddingConfig,
) -> Result<Cloud, NumericError> {
    if d.len() != closures.len() {
        return Err(NumericError::Config(format!("{} translates for {} closures", d.len(), closures.len())));
    }
    let torus = Torus::from_lattice(lattice, cfg.offset_window)?;
    let mut cloud = Cloud::new(torus.dim());
    for (dj, l) in d.iter().zip(closures) {
        let basis = integer_coordinate_basis(l, lattice)?;
        cloud.extend(&sample_subtorus(&torus.reduce(dj), &basis, &torus, cfg.sample_density, cfg.grid_cap));
    }
    Ok(cloud)
}

enum PredictedPart {
    /// `σ(t) + L^Γ` with an integer lattice-coordinate basis of `L^Γ`.
    Coset { sigma: PolyVec, basis: Vec<Vec<f64>> },
    /// The body itself moved along the curve.
    Body(PieceSampler),
}

/// How to decide whether every predicted limit is the whole torus.
enum FullPrediction {
    Known(bool),
    /// Whether the reduced body alone covers the torus.
    BodyCovers(PieceSampler),
}

struct Prediction {
    parts: Vec<PredictedPart>,
    curve: Vec<Vec<f64>>,
    curve_torus: Torus,
    targets: Vec<Vec<f64>>,
    full: FullPrediction,
}

/// A family on a torus, with an optional prediction of its limits.
pub struct TorusModel {
    torus: Torus,
    pieces: Vec<PieceSampler>,
    prediction: Option<Prediction>,
}

fn to_lattice(p: &PolyVec, lattice: &LatticeBasis) -> PolyVec {
    p.map(lattice.inverse_matrix())
}

/// Grid of `cbar + span{u_i}` with `per_dim` steps per basis vector, thinned
/// to at most `cap` targets.
fn target_grid(cbar: &[f64], basis: &[Vec<f64>], per_dim: usize, cap: usize) -> Vec<Vec<f64>> {
    let r = basis.len();
    let mut per = per_dim.max(1);
    while r > 0 && (per as f64).powi(r as i32) > cap as f64 && per > 1 {
        per -= 1;
    }
    let count = per.pow(r as u32);
    (0..count)
        .map(|mut idx| {
            let mut p = cbar.to_vec();
            for u in basis {
                let s = (idx % per) as f64 / per as f64;
                idx /= per;
                for (x, ui) in p.iter_mut().zip(u) {
                    *x += s * ui;
                }
            }
            p.iter().map(|&x| torus::frac(x)).collect()
        })
        .collect()
}

fn integer_coordinate_basis(space: &Subspace, lattice: &LatticeBasis) -> Result<Vec<Vec<f64>>, NumericError> {
    let rows = rational_coordinate_basis(space, lattice)
        .ok_or_else(|| NumericError::Unsupported("closure is not rational in lattice coordinates".into()))?;
    Ok(sample::integer_basis(&rows))
}

impl TorusModel {
    /// Unpredicted family given by ambient-coordinate vertex polynomials.
    pub fn raw(
        lattice: &LatticeBasis,
        pieces: &[Piece],
        image: impl Fn(&[Scalar]) -> PolyVec,
        cfg: &EmbeddingConfig,
    ) -> Result<TorusModel, NumericError> {
        let torus = Torus::from_lattice(lattice, cfg.offset_window)?;
        let pieces = pieces
            .iter()
            .map(|p| PieceSampler::new(p, |x| to_lattice(&image(x), lattice)))
            .collect();
        Ok(TorusModel { torus, pieces, prediction: None })
    }

    /// `ρ_t X` for a proper dilation, with the limit family as prediction.
    pub fn dilation(
        lattice: &LatticeBasis,
        dil: &DilationFamily,
        input: &InputSet,
        predicted: Option<(&MultiCosetFamily, &LimitFamily)>,
        cfg: &EmbeddingConfig,
    ) -> Result<TorusModel, NumericError> {
        let mut model = TorusModel::raw(lattice, input.pieces(), |x| dil.apply(x), cfg)?;
        if let Some((mc, lf)) = predicted {
            let mut parts = Vec::new();
            for (c, closure) in mc.cosets.iter().zip(&lf.closures) {
                parts.push(PredictedPart::Coset {
                    sigma: to_lattice(&c.p, lattice),
                    basis: integer_coordinate_basis(closure, lattice)?,
                });
            }
            let power = lattice.power(mc.len());
            let curve = to_lattice(&crate::limits::stacked_curve(mc), &power);
            let curve_torus = Torus::from_lattice(&power, cfg.offset_window)?;
            let cbar: Vec<f64> = power.coords(&lf.cbar)?.iter().map(sample::frac_exact).collect();
            let basis = integer_coordinate_basis(&lf.vclosed, &power)?;
            model.prediction = Some(Prediction {
                parts,
                curve: sample::poly_to_f64(&curve),
                curve_torus,
                targets: target_grid(&cbar, &basis, cfg.target_grid, cfg.target_cap),
                full: FullPrediction::Known(lf.is_full()),
            });
        }
        Ok(model)
    }

    /// `a(t) + C` with its limits `π(d + C)`, `d ∈ c̄ + V^Γ`.
    pub fn translated_body(a: &PolyVec, limits: &TranslatedBodyLimits, cfg: &EmbeddingConfig) -> Result<TorusModel, NumericError> {
        let lattice = &limits.lattice;
        let body = std::slice::from_ref(&limits.body);
        let mut model = TorusModel::raw(lattice, body, |x| a.shifted(x), cfg)?;
        let field = lattice.field().clone();
        let still = PieceSampler::new(&limits.body, |x| to_lattice(&PolyVec::zero(&field, x.len()).shifted(x), lattice));
        let moving = PieceSampler::new(&limits.body, |x| to_lattice(&a.shifted(x), lattice));
        let curve = to_lattice(a, lattice);
        let cbar: Vec<f64> = lattice.coords(&limits.cbar)?.iter().map(sample::frac_exact).collect();
        let basis = integer_coordinate_basis(&limits.vclosed, lattice)?;
        model.prediction = Some(Prediction {
            parts: vec![PredictedPart::Body(moving)],
            curve: sample::poly_to_f64(&curve),
            curve_torus: Torus::from_lattice(lattice, cfg.offset_window)?,
            targets: target_grid(&cbar, &basis, cfg.target_grid, cfg.target_cap),
            full: FullPrediction::BodyCovers(still),
        });
        Ok(model)
    }

    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    pub fn has_prediction(&self) -> bool {
        self.prediction.is_some()
    }

    /// Number of completeness targets.
    pub fn target_count(&self) -> usize {
        self.prediction.as_ref().map_or(0, |p| p.targets.len())
    }

    /// `π(ρ_t X)`.
    pub fn sample(&self, t: f64, cfg: &EmbeddingConfig) -> Cloud {
        sample_pieces(&self.pieces, t, &self.torus, cfg.sample_density, cfg.sample_cap, cfg.seed)
    }

    /// Predicted set `π(⋃_j σ_j(t) + L_j^Γ)` at time `t`.
    pub fn predicted_at(&self, t: f64, cfg: &EmbeddingConfig) -> Option<Cloud> {
        let pred = self.prediction.as_ref()?;
        let mut cloud = Cloud::new(self.torus.dim());
        for part in &pred.parts {
            match part {
                PredictedPart::Coset { sigma, basis } => {
                    let d = sample::eval_frac(sigma, t);
                    cloud.extend(&sample_subtorus(&d, basis, &self.torus, cfg.sample_density, cfg.grid_cap));
                }
                PredictedPart::Body(s) => {
                    cloud.extend(&sample_pieces(
                        std::slice::from_ref(s),
                        t,
                        &self.torus,
                        cfg.sample_density,
                        cfg.sample_cap,
                        cfg.seed,
                    ));
                }
            }
        }
        Some(cloud)
    }

    pub fn full_grid(&self, cfg: &EmbeddingConfig) -> Cloud {
        full_grid(&self.torus, cfg.sample_density, cfg.grid_cap)
    }

    fn predicted_full(&self, cfg: &EmbeddingConfig, tol: &Tolerances, grid: &Cloud) -> Option<bool> {
        let pred = self.prediction.as_ref()?;
        Some(match &pred.full {
            FullPrediction::Known(b) => *b,
            FullPrediction::BodyCovers(s) => {
                let cloud = sample_pieces(std::slice::from_ref(s), 1.0, &self.torus, cfg.sample_density, cfg.sample_cap, cfg.seed);
                hausdorff(&self.torus, &cloud, grid).map_or(false, |d| d <= tol.fullspace)
            }
        })
    }

    /// Running worst completeness distance at each schedule time, over a
    /// dense geometric sweep of the schedule range.
    fn completeness(&self, schedule: &Schedule, cfg: &EmbeddingConfig) -> Option<Vec<f64>> {
        let pred = self.prediction.as_ref()?;
        let rank = if pred.targets.len() <= 1 { 0 } else { (pred.targets.len() as f64).log(cfg.target_grid.max(2) as f64).round() as i32 };
        let steps = cfg
            .sweep_steps
            .unwrap_or_else(|| (512.0 * 8f64.powi((rank - 1).max(0))).min(65536.0) as usize);
        let times = schedule.refined(steps);
        let metric = &pred.curve_torus;
        let mut best = vec![f64::INFINITY; pred.targets.len()];
        let mut out = Vec::with_capacity(schedule.values().len());
        let mut start = 0;
        for &checkpoint in schedule.values() {
            let end = times.partition_point(|&s| s <= checkpoint);
            if end > start {
                let mut cloud = Cloud::new(metric.dim());
                for &s in &times[start..end] {
                    let p: Vec<f64> = sample::eval_f64(&pred.curve, s).iter().map(|&x| torus::frac(x)).collect();
                    cloud.push(&p);
                }
                let tree = KdTree::build(&cloud);
                let near = kdtree::nearest_all(metric, &pred.targets, &tree);
                for (b, d) in best.iter_mut().zip(near) {
                    *b = b.min(d);
                }
                start = end;
            }
            out.push(best.iter().copied().fold(0.0, f64::max));
        }
        Some(out)
    }
}

/// One schedule time of a verification run.
#[derive(Clone, Debug, PartialEq)]
pub struct TRow {
    pub t: f64,
    pub sound_dh: Option<f64>,
    pub worst_target_dist: Option<f64>,
    pub fullspace_dh: f64,
    pub samples_used: usize,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FullspaceVerdict {
    pub predicted_full: bool,
    pub observed_full: bool,
    /// Largest full-space distance over the schedule tail.
    pub tail_max: f64,
    /// Smallest full-space distance over the whole schedule.
    pub min_over_schedule: f64,
}

impl FullspaceVerdict {
    pub fn agrees(&self) -> bool {
        self.predicted_full == self.observed_full
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Verdicts {
    pub sound: Option<bool>,
    pub complete: Option<bool>,
    pub fullspace: Option<FullspaceVerdict>,
}

impl Verdicts {
    pub fn all_pass(&self) -> bool {
        self.sound != Some(false)
            && self.complete != Some(false)
            && self.fullspace.as_ref().map_or(true, FullspaceVerdict::agrees)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericReport {
    pub rows: Vec<TRow>,
    pub tail_sound_max: Option<f64>,
    pub max_target_dist: Option<f64>,
    pub targets: usize,
    pub verdicts: Verdicts,
}

fn tail_max(values: &[f64], schedule: &Schedule) -> f64 {
    values[schedule.tail_start()..].iter().copied().fold(0.0, f64::max)
}

/// Samples the family at every scheduled time, compares with the prediction
/// (soundness), sweeps the translation curve against targets in `c̄ + V^{Γⁿ}`
/// (completeness), and measures the distance to the whole torus.
pub fn verify_convergence(
    model: &TorusModel,
    schedule: &Schedule,
    cfg: &EmbeddingConfig,
    tol: &Tolerances,
) -> Result<NumericReport, NumericError> {
    cfg.validate()?;
    let grid = model.full_grid(cfg);
    let completeness = model.completeness(schedule, cfg);
    let mut rows = Vec::with_capacity(schedule.values().len());
    for (i, &t) in schedule.values().iter().enumerate() {
        let start = Instant::now();
        let cloud = model.sample(t, cfg);
        let sound_dh = match model.predicted_at(t, cfg) {
            Some(p) => Some(torus_hausdorff(&cloud, &p, &model.torus)?),
            None => None,
        };
        let fullspace_dh = torus_hausdorff(&cloud, &grid, &model.torus)?;
        rows.push(TRow {
            t,
            sound_dh,
            worst_target_dist: completeness.as_ref().map(|c| c[i]),
            fullspace_dh,
            samples_used: cloud.len(),
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
    let sound: Vec<f64> = rows.iter().filter_map(|r| r.sound_dh).collect();
    let tail_sound_max = (!sound.is_empty()).then(|| tail_max(&sound, schedule));
    let max_target_dist = completeness.as_ref().and_then(|c| c.last().copied());
    let full: Vec<f64> = rows.iter().map(|r| r.fullspace_dh).collect();
    let fullspace = model.predicted_full(cfg, tol, &grid).map(|predicted_full| {
        let tail = tail_max(&full, schedule);
        FullspaceVerdict {
            predicted_full,
            observed_full: tail <= tol.fullspace,
            tail_max: tail,
            min_over_schedule: full.iter().copied().fold(f64::INFINITY, f64::min),
        }
    });
    Ok(NumericReport {
        rows,
        tail_sound_max,
        max_target_dist,
        targets: model.target_count(),
        verdicts: Verdicts {
            sound: tail_sound_max.map(|s| s <= tol.sound),
            complete: max_target_dist.map(|c| c <= tol.complete),
            fullspace,
        },
    })
}

/// Smallest distance to the full torus over the schedule.
pub fn fullspace_floor(model: &TorusModel, schedule: &Schedule, cfg: &EmbeddingConfig) -> Result<f64, NumericError> {
    let grid = model.full_grid(cfg);
    let mut floor = f64::INFINITY;
    for &t in schedule.values() {
        floor = floor.min(torus_hausdorff(&model.sample(t, cfg), &grid, &model.torus)?);
    }
    Ok(floor)
}

/// A family `exp(M_t X)` in the Heisenberg group, sampled in the
/// nilmanifold `H(R)/H(Z)`.
pub struct HeisModel {
    pieces: Vec<PieceSampler>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeisRow {
    pub t: f64,
    pub fullspace_dh: f64,
    pub samples_used: usize,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeisReport {
    pub rows: Vec<HeisRow>,
    pub grid: usize,
    pub verdict: FullspaceVerdict,
}

impl HeisModel {
    /// `dil` acts into algebra coordinates `(x, y, z)` for `X = E12`,
    /// `Y = E23`, `Z = E13`.
    pub fn new(dil: &DilationFamily, input: &InputSet) -> Result<HeisModel, NumericError> {
        if dil.m() != 3 {
            return Err(NumericError::Unsupported("Heisenberg sampling needs a 3-dimensional algebra".into()));
        }
        let pieces = input.pieces().iter().map(|p| PieceSampler::new(p, |x| dil.apply(x))).collect();
        Ok(HeisModel { pieces })
    }

    /// Reduced group coordinates of `exp(M_t X)`.
    pub fn sample(&self, t: f64, cfg: &EmbeddingConfig) -> Cloud {
        let all: Vec<_> = self.pieces.iter().map(|p| p.at(t, false)).collect();
        let flat: Vec<_> = all.iter().flatten().cloned().collect();
        let len = |e: &[f64]| e.iter().map(|x| x * x).sum::<f64>().sqrt();
        let density = sample::clamp_density(&flat, cfg.sample_density, cfg.sample_cap, &len);
        let mut cloud = Cloud::new(3);
        for (i, simplices) in all.iter().enumerate() {
            let seed = cfg.seed ^ t.to_bits().rotate_left(23) ^ (i as u64) << 7;
            sample::grid_simplices(simplices, density, &len, seed, &mut |p| {
                cloud.push(&heis_reduce(heis_exp(p[0], p[1], p[2])));
            });
        }
        cloud
    }

    /// Distance to an `n³` grid of the fundamental domain at every time.
    pub fn verify(
        &self,
        schedule: &Schedule,
        cfg: &EmbeddingConfig,
        tol: &Tolerances,
        grid_n: usize,
        predicted_full: bool,
    ) -> Result<HeisReport, NumericError> {
        cfg.validate()?;
        let grid = heis_grid(grid_n);
        let mut rows = Vec::new();
        for &t in schedule.values() {
            let start = Instant::now();
            let cloud = self.sample(t, cfg);
            let d = hausdorff(&HeisMetric, &cloud, &grid).ok_or(NumericError::EmptyCloud)?;
            rows.push(HeisRow { t, fullspace_dh: d, samples_used: cloud.len(), wall_ms: start.elapsed().as_secs_f64() * 1e3 });
        }
        let full: Vec<f64> = rows.iter().map(|r| r.fullspace_dh).collect();
        let tail = tail_max(&full, schedule);
        Ok(HeisReport {
            rows,
            grid: grid_n,
            verdict: FullspaceVerdict {
                predicted_full,
                observed_full: tail <= tol.heis_fullspace,
                tail_max: tail,
                min_over_schedule: full.iter().copied().fold(f64::INFINITY, f64::min),
            },
        })
    }
}
