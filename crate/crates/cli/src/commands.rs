//! Command implementations shared by the binary and the tests.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

use nilflow::qlinalg::{rational_closure, KVec, LatticeBasis, Subspace};
use nilflow::{FieldRef, NumberField};

use crate::predict::{analysis_json, analysis_text, fmt_subspace, predict, subspace_json};
use crate::report::{report_text, write_reports};
use crate::scenario::{FieldDecl, Scenario, ScalarLit};
use crate::verify::{verify, VerificationReport};

pub struct Bundled {
    pub name: &'static str,
    pub json: &'static str,
}

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(Bundled { name: $name, json: include_str!(concat!("../scenarios/", $name, ".json")) }),*]
    };
}

pub const BUNDLED: &[Bundled] = bundled![
    "sample64_translates",
    "sample64_lines_raw",
    "sample63_interval",
    "segment_parabola_dilation",
    "vertical_circles_sweep",
    "heis_orbit_irrational",
    "heis_orbit_rational",
    "kss_style_curve_polytope",
];

pub fn bundled(name: &str) -> Option<Scenario> {
    BUNDLED
        .iter()
        .find(|b| b.name == name)
        .map(|b| Scenario::from_json(b.json).expect("bundled scenarios are valid"))
}

/// A scenario file path, or the name of a bundled scenario.
pub fn load_scenario(arg: &str) -> Result<Scenario> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return Scenario::from_json(&text).with_context(|| format!("in {}", path.display()));
    }
    bundled(arg).ok_or_else(|| anyhow!("`{arg}` is neither a file nor a bundled scenario (see `nilflow scenarios`)"))
}

pub fn cmd_predict(s: &Scenario, as_json: bool) -> Result<String> {
    let a = predict(s)?;
    if as_json {
        Ok(format!("{}\n", serde_json::to_string_pretty(&analysis_json(s, &a))?))
    } else {
        Ok(analysis_text(s, &a))
    }
}

pub struct VerifyOutcome {
    pub report: VerificationReport,
    pub text: String,
    pub exit_code: i32,
}

pub fn cmd_verify(s: &Scenario, out: Option<&Path>, svg: bool) -> Result<VerifyOutcome> {
    let report = verify(s)?;
    let mut text = report_text(&report);
    if let Some(dir) = out {
        for p in write_reports(dir, s, &report, svg)? {
            let _ = writeln!(text, "wrote {}", p.display());
        }
    }
    let exit_code = if report.passed() { 0 } else { 2 };
    Ok(VerifyOutcome { report, text, exit_code })
}

/// `"Q"`, `"sqrt:N"`, or a JSON field declaration.
pub fn parse_field(s: &str) -> Result<FieldRef> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("q") {
        return Ok(NumberField::rationals());
    }
    if let Some(n) = s.strip_prefix("sqrt:") {
        let n: u64 = n.parse().with_context(|| format!("bad radicand in `{s}`"))?;
        return Ok(NumberField::sqrt(n)?);
    }
    let decl: FieldDecl = serde_json::from_str(s).context("field declaration")?;
    decl.build()
}

fn parse_vectors(field: &FieldRef, s: &str, what: &str) -> Result<Vec<KVec>> {
    let lits: Vec<Vec<ScalarLit>> = serde_json::from_str(s).with_context(|| format!("{what}: expected a JSON list of vectors"))?;
    lits.iter()
        .enumerate()
        .map(|(i, v)| {
            v.iter()
                .enumerate()
                .map(|(j, x)| x.value(field).with_context(|| format!("{what}[{i}][{j}]")))
                .collect()
        })
        .collect()
}

/// `L^Γ` for `L` spanned by `subspace`; the lattice defaults to `Z^m`.
pub fn cmd_closure(subspace: &str, lattice: Option<&str>, field: &str) -> Result<String> {
    let field = parse_field(field)?;
    let vectors = parse_vectors(&field, subspace, "subspace")?;
    let m = match vectors.first() {
        Some(v) => v.len(),
        None => bail!("subspace: at least one vector is required"),
    };
    let l = Subspace::span(&field, m, &vectors).context("subspace")?;
    let gamma = match lattice {
        None | Some("integer") => LatticeBasis::integer(&field, m),
        Some(text) => LatticeBasis::new(&field, parse_vectors(&field, text, "lattice")?).context("lattice")?,
    };
    let closure = rational_closure(&l, &gamma)?;
    let mut out = String::new();
    let _ = writeln!(out, "L = {}", fmt_subspace(&l));
    let _ = writeln!(out, "closure = {}", fmt_subspace(&closure));
    let _ = writeln!(out, "{}", serde_json::to_string(&subspace_json(&closure))?);
    Ok(out)
}

pub fn cmd_scenarios() -> String {
    let mut out = String::new();
    for b in BUNDLED {
        let s = Scenario::from_json(b.json).expect("bundled scenarios are valid");
        let _ = writeln!(out, "{:<28} {:<16} {}", b.name, s.mode.as_str(), s.description);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_scenarios_parse_with_matching_ids() {
        for b in BUNDLED {
            let s = Scenario::from_json(b.json).unwrap_or_else(|e| panic!("{}: {e:#}", b.name));
            assert_eq!(s.id, b.name);
        }
    }

    #[test]
    fn closure_examples() {
        let out = cmd_closure(r#"[[1, [0, 1]]]"#, None, "sqrt:2").unwrap();
        assert!(out.contains("closure = span{(1, 0), (0, 1)} (full)"), "{out}");
        let out = cmd_closure("[[1, 2]]", None, "Q").unwrap();
        assert!(out.contains("closure = span{(1, 2)}"), "{out}");
        let out = cmd_closure(r#"[[1, [0, 1], 0]]"#, Some("integer"), "sqrt:2").unwrap();
        assert!(out.contains("closure = span{(1, 0, 0), (0, 1, 0)}"), "{out}");
    }

    #[test]
    fn field_forms() {
        assert_eq!(parse_field("Q").unwrap().degree(), 1);
        assert_eq!(parse_field("sqrt:3").unwrap().degree(), 2);
        let k = parse_field(r#"{"minpoly": [-2, 0, 0, 1], "root_between": [1, 2]}"#).unwrap();
        assert_eq!(k.degree(), 3);
        assert!(parse_field("sqrt:x").is_err());
    }
}
