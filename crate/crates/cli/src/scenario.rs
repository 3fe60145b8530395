//! Scenario files: JSON schema and conversion into exact objects.

use anyhow::{anyhow, bail, ensure, Context, Result};
use serde::Deserialize;

use nilflow::limits::{DilationFamily, InputSet, Piece, PolyVec};
use nilflow::numeric::{EmbeddingConfig, Schedule, Tolerances};
use nilflow::qlinalg::{hnf, KVec, LatticeBasis};
use nilflow::scalar::parse_rational;
use nilflow::unipotent::{GroupLattice, UnipotentGroupSpec};
use nilflow::{FieldRef, NumberField, Rational, Scalar};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Abelian,
    Unipotent,
    TranslatedBody,
    Raw,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Abelian => "abelian",
            Mode::Unipotent => "unipotent",
            Mode::TranslatedBody => "translated_body",
            Mode::Raw => "raw",
        }
    }
}

/// A rational written as an integer or a `"p/q"` string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RationalLit {
    Int(i64),
    Str(String),
}

impl RationalLit {
    fn value(&self) -> Result<Rational> {
        match self {
            RationalLit::Int(i) => Ok(Rational::from_integer((*i).into())),
            RationalLit::Str(s) => Ok(parse_rational(s)?),
        }
    }
}

/// A field element: a rational, or its coefficient list in powers of `θ`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ScalarLit {
    Rational(RationalLit),
    Coeffs(Vec<RationalLit>),
}

impl ScalarLit {
    pub fn value(&self, field: &FieldRef) -> Result<Scalar> {
        match self {
            ScalarLit::Rational(q) => Ok(Scalar::from_rational(field, q.value()?)),
            ScalarLit::Coeffs(cs) => {
                let mut coeffs = cs.iter().map(RationalLit::value).collect::<Result<Vec<_>>>()?;
                ensure!(
                    coeffs.len() <= field.degree(),
                    "coefficient list has {} entries but the field has degree {}",
                    coeffs.len(),
                    field.degree()
                );
                coeffs.resize(field.degree(), Rational::from_integer(0.into()));
                Ok(Scalar::from_coeffs(field, coeffs)?)
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDecl {
    pub minpoly: Vec<RationalLit>,
    pub root_between: [RationalLit; 2],
}

impl FieldDecl {
    pub fn build(&self) -> Result<FieldRef> {
        let minpoly = self.minpoly.iter().map(RationalLit::value).collect::<Result<Vec<_>>>()?;
        Ok(NumberField::new(minpoly, self.root_between[0].value()?, self.root_between[1].value()?)?)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GroupDecl {
    Builtin(String),
    Basis { basis: Vec<Vec<Vec<ScalarLit>>> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum LatticeDecl {
    /// `"integer"`.
    Named(String),
    /// Basis vectors of `Γ`.
    Basis { basis: Vec<Vec<ScalarLit>> },
    /// Generators of `Γ`: vectors in abelian modes, algebra coordinates of
    /// `log γ` in unipotent mode.
    Generators { generators: Vec<Vec<ScalarLit>> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DilationDecl {
    /// `matrices[i]` is the `m × k` coefficient of `t^{i+1}`, row-major.
    pub matrices: Vec<Vec<Vec<ScalarLit>>>,
    /// Coefficient of `t⁰`; only raw scenarios may set it.
    #[serde(default)]
    pub constant: Option<Vec<Vec<ScalarLit>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum PieceDecl {
    Points { points: Vec<Vec<ScalarLit>> },
    Polytope { polytope: Vec<Vec<ScalarLit>> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometricDecl {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ScheduleDecl {
    Values { t_values: Vec<f64> },
    Geometric { geometric: GeometricDecl },
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingDecl {
    pub precision: Option<f64>,
    pub sample_density: Option<f64>,
    pub offset_window: Option<u32>,
    pub sample_cap: Option<usize>,
    pub grid_cap: Option<usize>,
    pub seed: Option<u64>,
    pub target_grid: Option<usize>,
    pub target_cap: Option<usize>,
    pub sweep_steps: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyDecl {
    pub sound: Option<f64>,
    pub complete: Option<f64>,
    pub fullspace: Option<f64>,
    pub heis_fullspace: Option<f64>,
    pub margin: Option<f64>,
    /// Points per side of the Heisenberg full-space grid.
    pub heis_grid: Option<usize>,
    /// Largest sublattice index tried when certifying nonconvergence.
    pub n_max: Option<u64>,
}

/// The JSON document as written.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub spec_version: u32,
    pub id: String,
    #[serde(default)]
    pub description: String,
    pub mode: Mode,
    #[serde(default)]
    pub field: Option<FieldDecl>,
    #[serde(default)]
    pub group: Option<GroupDecl>,
    #[serde(default)]
    pub lattice: Option<LatticeDecl>,
    #[serde(default)]
    pub lattice_scale: Option<u64>,
    #[serde(default)]
    pub dilation: Option<DilationDecl>,
    #[serde(default)]
    pub input_set: Vec<PieceDecl>,
    /// Coefficient vectors of the translation curve, constant term first.
    #[serde(default)]
    pub translate: Option<Vec<Vec<ScalarLit>>>,
    #[serde(default)]
    pub body: Option<PieceDecl>,
    #[serde(default)]
    pub schedule: Option<ScheduleDecl>,
    #[serde(default)]
    pub embedding: EmbeddingDecl,
    #[serde(default)]
    pub verify: VerifyDecl,
}

/// Exact data of a scenario, by mode.
#[derive(Clone, Debug)]
pub enum Setup {
    Abelian {
        lattice: LatticeBasis,
        dilation: DilationFamily,
        input: InputSet,
    },
    Unipotent {
        group: UnipotentGroupSpec,
        lattice: GroupLattice,
        /// Whether `lattice` is the builtin integer lattice.
        integer_lattice: bool,
        dilation: DilationFamily,
        input: InputSet,
    },
    TranslatedBody {
        lattice: LatticeBasis,
        translate: PolyVec,
        body: Piece,
    },
    Raw {
        lattice: LatticeBasis,
        constant: Option<Vec<KVec>>,
        dilation: DilationFamily,
        input: InputSet,
    },
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub id: String,
    pub description: String,
    pub mode: Mode,
    pub field: FieldRef,
    pub lattice_scale: u64,
    pub setup: Setup,
    pub schedule: Schedule,
    pub embedding: EmbeddingConfig,
    pub tolerances: Tolerances,
    pub heis_grid: usize,
    pub n_max: Option<u64>,
}

fn vector(field: &FieldRef, v: &[ScalarLit], dim: usize, what: &str) -> Result<KVec> {
    ensure!(v.len() == dim, "{what}: expected {dim} entries, got {}", v.len());
    v.iter()
        .enumerate()
        .map(|(i, x)| x.value(field).with_context(|| format!("{what}[{i}]")))
        .collect()
}

fn matrix(field: &FieldRef, rows: &[Vec<ScalarLit>], shape: (usize, usize), what: &str) -> Result<Vec<KVec>> {
    ensure!(rows.len() == shape.0, "{what}: expected {} rows, got {}", shape.0, rows.len());
    rows.iter()
        .enumerate()
        .map(|(i, r)| vector(field, r, shape.1, &format!("{what}[{i}]")))
        .collect()
}

fn piece(field: &FieldRef, decl: &PieceDecl, k: usize, what: &str) -> Result<Piece> {
    Ok(match decl {
        PieceDecl::Points { points } => Piece::Points(
            points
                .iter()
                .enumerate()
                .map(|(i, p)| vector(field, p, k, &format!("{what}.points[{i}]")))
                .collect::<Result<_>>()?,
        ),
        PieceDecl::Polytope { polytope } => Piece::Polytope(
            polytope
                .iter()
                .enumerate()
                .map(|(i, p)| vector(field, p, k, &format!("{what}.polytope[{i}]")))
                .collect::<Result<_>>()?,
        ),
    })
}

fn first_len(decl: &PieceDecl) -> Option<usize> {
    match decl {
        PieceDecl::Points { points: v } | PieceDecl::Polytope { polytope: v } => v.first().map(Vec::len),
    }
}

fn input_set(field: &FieldRef, decls: &[PieceDecl], k: usize) -> Result<InputSet> {
    ensure!(!decls.is_empty(), "input_set: at least one piece is required");
    let pieces = decls
        .iter()
        .enumerate()
        .map(|(i, d)| piece(field, d, k, &format!("input_set[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    InputSet::new(pieces).context("input_set")
}

fn abelian_lattice(field: &FieldRef, decl: Option<&LatticeDecl>, m: usize) -> Result<LatticeBasis> {
    match decl {
        None => Ok(LatticeBasis::integer(field, m)),
        Some(LatticeDecl::Named(name)) if name == "integer" => Ok(LatticeBasis::integer(field, m)),
        Some(LatticeDecl::Named(name)) => bail!("lattice: unknown lattice `{name}` (expected \"integer\")"),
        Some(LatticeDecl::Basis { basis }) => {
            let vs = basis
                .iter()
                .enumerate()
                .map(|(i, v)| vector(field, v, m, &format!("lattice.basis[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            LatticeBasis::new(field, vs).context("lattice.basis")
        }
        Some(LatticeDecl::Generators { generators }) => {
            let gens = generators
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    vector(field, v, m, &format!("lattice.generators[{i}]"))?
                        .iter()
                        .map(Scalar::as_rational)
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| anyhow!("lattice.generators[{i}]: generators must be rational"))
                })
                .collect::<Result<Vec<_>>>()?;
            hnf(field, &gens).context("lattice.generators")
        }
    }
}

fn dilation(field: &FieldRef, decl: &DilationDecl, m: usize, k: usize) -> Result<DilationFamily> {
    ensure!(!decl.matrices.is_empty(), "dilation.matrices: at least one matrix is required");
    let ms = decl
        .matrices
        .iter()
        .enumerate()
        .map(|(i, a)| matrix(field, a, (m, k), &format!("dilation.matrices[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    DilationFamily::new(field, ms).context("dilation")
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<ScenarioFile> {
        let file: ScenarioFile = serde_json::from_str(text).context("scenario schema")?;
        ensure!(
            file.spec_version == SCHEMA_VERSION,
            "spec_version: unsupported version {} (expected {SCHEMA_VERSION})",
            file.spec_version
        );
        Ok(file)
    }

    pub fn build(&self) -> Result<Scenario> {
        let field = match &self.field {
            Some(decl) => decl.build().context("field")?,
            None => NumberField::rationals(),
        };
        let lattice_scale = self.lattice_scale.unwrap_or(1);
        ensure!(lattice_scale >= 1, "lattice_scale: must be at least 1");
        let setup = self.setup(&field, lattice_scale)?;
        let schedule = match &self.schedule {
            None => Schedule::default(),
            Some(ScheduleDecl::Values { t_values }) => Schedule::new(t_values.clone()).context("schedule")?,
            Some(ScheduleDecl::Geometric { geometric: g }) => {
                Schedule::geometric(g.lo, g.hi, g.step).context("schedule.geometric")?
            }
        };
        let e = &self.embedding;
        let d = EmbeddingConfig::default();
        let embedding = EmbeddingConfig {
            precision: e.precision.unwrap_or(d.precision),
            sample_density: e.sample_density.unwrap_or(d.sample_density),
            offset_window: e.offset_window.unwrap_or(d.offset_window),
            sample_cap: e.sample_cap.unwrap_or(d.sample_cap),
            grid_cap: e.grid_cap.unwrap_or(d.grid_cap),
            seed: e.seed.unwrap_or(d.seed),
            target_grid: e.target_grid.unwrap_or(d.target_grid),
            target_cap: e.target_cap.unwrap_or(d.target_cap),
            sweep_steps: e.sweep_steps.or(d.sweep_steps),
        };
        embedding.validate().context("embedding")?;
        let v = &self.verify;
        let t = Tolerances::default();
        let tolerances = Tolerances {
            sound: v.sound.unwrap_or(t.sound),
            complete: v.complete.unwrap_or(t.complete),
            fullspace: v.fullspace.unwrap_or(t.fullspace),
            heis_fullspace: v.heis_fullspace.unwrap_or(t.heis_fullspace),
            margin: v.margin.unwrap_or(t.margin),
        };
        Ok(Scenario {
            id: self.id.clone(),
            description: self.description.clone(),
            mode: self.mode,
            field,
            lattice_scale,
            setup,
            schedule,
            embedding,
            tolerances,
            heis_grid: v.heis_grid.unwrap_or(20),
            n_max: v.n_max,
        })
    }

    fn setup(&self, field: &FieldRef, scale: u64) -> Result<Setup> {
        match self.mode {
            Mode::Abelian | Mode::Raw => {
                let dil = self.dilation.as_ref().ok_or_else(|| anyhow!("dilation: required in {} mode", self.mode.as_str()))?;
                let m = dil.matrices.first().map_or(0, Vec::len);
                let k = self.input_set.first().and_then(first_len).unwrap_or(0);
                if let Some(GroupDecl::Builtin(name)) = &self.group {
                    ensure!(name == &format!("abelian:{m}"), "group: `{name}` does not match a {m}-dimensional dilation");
                }
                let lattice = abelian_lattice(field, self.lattice.as_ref(), m)?.scaled(scale);
                let dilation = dilation(field, dil, m, k)?;
                let input = input_set(field, &self.input_set, k)?;
                if self.mode == Mode::Abelian {
                    ensure!(
                        dil.constant.is_none(),
                        "dilation.constant: a constant term makes the family non-proper; use mode \"raw\" for such scenarios"
                    );
                    Ok(Setup::Abelian { lattice, dilation, input })
                } else {
                    let constant = dil
                        .constant
                        .as_ref()
                        .map(|a| matrix(field, a, (m, k), "dilation.constant"))
                        .transpose()?;
                    Ok(Setup::Raw { lattice, constant, dilation, input })
                }
            }
            Mode::Unipotent => {
                ensure!(scale == 1, "lattice_scale: not supported in unipotent mode");
                let group = match &self.group {
                    Some(GroupDecl::Builtin(name)) => UnipotentGroupSpec::builtin(field, name).context("group")?,
                    Some(GroupDecl::Basis { basis }) => {
                        let n = basis.first().map_or(0, Vec::len);
                        let mats = basis
                            .iter()
                            .enumerate()
                            .map(|(i, a)| matrix(field, a, (n, n), &format!("group.basis[{i}]")))
                            .collect::<Result<Vec<_>>>()?;
                        UnipotentGroupSpec::from_basis(field, n, mats, None).context("group.basis")?
                    }
                    None => bail!("group: required in unipotent mode"),
                };
                let (lattice, integer_lattice) = match &self.lattice {
                    None => (GroupLattice::integer(&group)?, true),
                    Some(LatticeDecl::Named(name)) if name == "integer" => (GroupLattice::integer(&group)?, true),
                    Some(LatticeDecl::Generators { generators }) => {
                        let gens = generators
                            .iter()
                            .enumerate()
                            .map(|(i, v)| {
                                let what = format!("lattice.generators[{i}]");
                                let c = vector(field, v, group.dim(), &what)?;
                                group.exp_coords(&c).with_context(|| what.clone())
                            })
                            .collect::<Result<Vec<_>>>()?;
                        (GroupLattice::new(&group, gens).context("lattice")?, false)
                    }
                    Some(_) => bail!("lattice: unipotent mode takes \"integer\" or {{\"generators\": [...]}}"),
                };
                let dil = self.dilation.as_ref().ok_or_else(|| anyhow!("dilation: required in unipotent mode"))?;
                ensure!(dil.constant.is_none(), "dilation.constant: a constant term makes the family non-proper; use mode \"raw\"");
                let k = self.input_set.first().and_then(first_len).unwrap_or(0);
                let dilation = dilation(field, dil, group.dim(), k)?;
                let input = input_set(field, &self.input_set, k)?;
                Ok(Setup::Unipotent { group, lattice, integer_lattice, dilation, input })
            }
            Mode::TranslatedBody => {
                let coeffs = self.translate.as_ref().ok_or_else(|| anyhow!("translate: required in translated_body mode"))?;
                let body = self.body.as_ref().ok_or_else(|| anyhow!("body: required in translated_body mode"))?;
                let m = coeffs.first().map_or(0, Vec::len);
                ensure!(m > 0, "translate: at least one nonempty coefficient vector is required");
                let translate = PolyVec::new(
                    coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, c)| vector(field, c, m, &format!("translate[{i}]")))
                        .collect::<Result<_>>()?,
                );
                let body = piece(field, body, m, "body")?;
                let lattice = abelian_lattice(field, self.lattice.as_ref(), m)?.scaled(scale);
                Ok(Setup::TranslatedBody { lattice, translate, body })
            }
        }
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        ScenarioFile::parse(text)?.build()
    }

    /// The same scenario with its lattice replaced by `N·Γ`.
    pub fn with_lattice_scale(&self, n: u64) -> Result<Scenario> {
        ensure!(n >= 1, "lattice scale must be at least 1");
        let mut s = self.clone();
        s.lattice_scale = self.lattice_scale * n;
        s.setup = match &self.setup {
            Setup::Abelian { lattice, dilation, input } => Setup::Abelian {
                lattice: lattice.scaled(n),
                dilation: dilation.clone(),
                input: input.clone(),
            },
            Setup::TranslatedBody { lattice, translate, body } => Setup::TranslatedBody {
                lattice: lattice.scaled(n),
                translate: translate.clone(),
                body: body.clone(),
            },
            Setup::Raw { lattice, constant, dilation, input } => Setup::Raw {
                lattice: lattice.scaled(n),
                constant: constant.clone(),
                dilation: dilation.clone(),
                input: input.clone(),
            },
            Setup::Unipotent { .. } => bail!("lattice scaling is not supported in unipotent mode"),
        };
        Ok(s)
    }
}
