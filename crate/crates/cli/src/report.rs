//! Report files: per-time CSV table, JSON summary, and an SVG plot.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Value};

use nilflow::numeric::FullspaceVerdict;

use crate::predict::analysis_json;
use crate::scenario::Scenario;
use crate::verify::VerificationReport;

pub const CSV_HEADER: [&str; 5] = ["t", "sound_dH", "worst_target_dist", "samples_used", "wall_ms"];

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn csv_table(r: &VerificationReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for row in &r.torus.rows {
        w.write_record([
            row.t.to_string(),
            opt(row.sound_dh),
            opt(row.worst_target_dist),
            row.samples_used.to_string(),
            format!("{:.3}", row.wall_ms),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn fullspace_json(v: &FullspaceVerdict) -> Value {
    json!({
        "predicted_full": v.predicted_full,
        "observed_full": v.observed_full,
        "tail_max_dH": v.tail_max,
        "min_dH": v.min_over_schedule,
        "agrees": v.agrees(),
    })
}

/// The full report; timing fields are the only nondeterministic entries.
pub fn report_json(s: &Scenario, r: &VerificationReport) -> Value {
    let v = &r.torus.verdicts;
    let verdicts = r.has_verdicts().then(|| {
        json!({
            "sound": v.sound,
            "complete": v.complete,
            "fullspace": v.fullspace.as_ref().map(fullspace_json),
            "nilmanifold_fullspace": r.heis.as_ref().map(|h| fullspace_json(&h.verdict)),
            "passed": r.passed(),
        })
    });
    json!({
        "spec_version": crate::scenario::SCHEMA_VERSION,
        "id": r.id,
        "mode": r.mode,
        "lattice_scale": r.lattice_scale,
        "analysis": r.analysis.as_ref().map(|a| analysis_json(s, a)["prediction"].clone()),
        "classification": r.classification().map(|c| c.as_str()),
        "rows": r.torus.rows.iter().map(|row| json!({
            "t": row.t,
            "sound_dH": row.sound_dh,
            "worst_target_dist": row.worst_target_dist,
            "fullspace_dH": row.fullspace_dh,
            "samples_used": row.samples_used,
            "wall_ms": row.wall_ms,
        })).collect::<Vec<_>>(),
        "nilmanifold_rows": r.heis.as_ref().map(|h| h.rows.iter().map(|row| json!({
            "t": row.t,
            "fullspace_dH": row.fullspace_dh,
            "samples_used": row.samples_used,
            "wall_ms": row.wall_ms,
        })).collect::<Vec<_>>()),
        "tail_sound_max": r.torus.tail_sound_max,
        "max_target_dist": r.torus.max_target_dist,
        "targets": r.torus.targets,
        "nonconvergence_index": r.nonconvergence_index,
        "verdicts": verdicts,
        "wall_ms": r.wall_ms,
    })
}

struct Series<'a> {
    name: &'a str,
    color: &'a str,
    points: Vec<(f64, f64)>,
}

/// Distance curves against `log₁₀ t`, one polyline per series.
pub fn svg_plot(r: &VerificationReport) -> String {
    let rows = &r.torus.rows;
    let mut series = vec![
        Series {
            name: "sound_dH",
            color: "#1f77b4",
            points: rows.iter().filter_map(|x| x.sound_dh.map(|d| (x.t, d))).collect(),
        },
        Series {
            name: "worst_target_dist",
            color: "#ff7f0e",
            points: rows.iter().filter_map(|x| x.worst_target_dist.map(|d| (x.t, d))).collect(),
        },
        Series {
            name: "fullspace_dH",
            color: "#2ca02c",
            points: rows.iter().map(|x| (x.t, x.fullspace_dh)).collect(),
        },
    ];
    if let Some(h) = &r.heis {
        series.push(Series {
            name: "nilmanifold_fullspace_dH",
            color: "#d62728",
            points: h.rows.iter().map(|x| (x.t, x.fullspace_dh)).collect(),
        });
    }
    series.retain(|s| !s.points.is_empty());

    let (w, h, left, right, top, bottom) = (640.0, 400.0, 60.0, 180.0, 30.0, 40.0);
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for &(t, d) in all {
        x0 = x0.min(t.log10());
        x1 = x1.max(t.log10());
        y1 = y1.max(d);
    }
    if !x0.is_finite() {
        (x0, x1) = (0.0, 1.0);
    }
    x0 = x0.floor();
    x1 = x1.ceil().max(x0 + 1.0);
    let y1 = if y1 > 0.0 { y1 * 1.1 } else { 1.0 };
    let px = |t: f64| left + (t.log10() - x0) / (x1 - x0) * (w - left - right);
    let py = |d: f64| h - bottom - d / y1 * (h - top - bottom);

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(out, r#"<text x="{left}" y="18">{} (d_H vs t)</text>"#, r.id);
    let _ = writeln!(
        out,
        r##"<path d="M{left},{top} V{:.1} H{:.1}" fill="none" stroke="#000"/>"##,
        h - bottom,
        w - right
    );
    let mut decade = x0;
    while decade <= x1 + 1e-9 {
        let x = px(10f64.powf(decade));
        let _ = writeln!(out, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">1e{decade}</text>"#, h - bottom + 16.0);
        decade += 1.0;
    }
    for i in 0..=4 {
        let d = y1 * f64::from(i) / 4.0;
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{d:.3}</text>"#, left - 6.0, py(d) + 4.0);
    }
    for (i, s) in series.iter().enumerate() {
        let pts: Vec<String> = s.points.iter().map(|&(t, d)| format!("{:.1},{:.1}", px(t), py(d))).collect();
        let _ = writeln!(out, r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#, s.color, pts.join(" "));
        let ly = top + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            w - right + 10.0,
            w - right + 30.0,
            s.color,
            w - right + 36.0,
            ly + 4.0,
            s.name
        );
    }
    out.push_str("</svg>\n");
    out
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Writes `<id>.csv`, `<id>.json`, and optionally `<id>.svg` into `dir`.
pub fn write_reports(dir: &Path, s: &Scenario, r: &VerificationReport, svg: bool) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let stem = if r.lattice_scale == 1 { r.id.clone() } else { format!("{}_N{}", r.id, r.lattice_scale) };
    let mut written = Vec::new();
    let csv = dir.join(format!("{stem}.csv"));
    write_atomic(&csv, &csv_table(r)?)?;
    written.push(csv);
    let json_path = dir.join(format!("{stem}.json"));
    write_atomic(&json_path, &format!("{}\n", serde_json::to_string_pretty(&report_json(s, r))?))?;
    written.push(json_path);
    if svg {
        let p = dir.join(format!("{stem}.svg"));
        write_atomic(&p, &svg_plot(r))?;
        written.push(p);
    }
    Ok(written)
}

/// Console summary of a verification run.
pub fn report_text(r: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario {} ({}), lattice scale {}", r.id, r.mode, r.lattice_scale);
    if let Some(c) = r.classification() {
        let _ = writeln!(out, "classification: {}", c.as_str());
    }
    let _ = writeln!(out, "{:>12} {:>12} {:>12} {:>12} {:>10}", "t", "sound_dH", "worst_target", "fullspace_dH", "samples");
    let cell = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.6}"));
    for row in &r.torus.rows {
        let _ = writeln!(
            out,
            "{:>12.3} {:>12} {:>12} {:>12.6} {:>10}",
            row.t,
            cell(row.sound_dh),
            cell(row.worst_target_dist),
            row.fullspace_dh,
            row.samples_used
        );
    }
    if let Some(h) = &r.heis {
        let _ = writeln!(out, "nilmanifold distance to a {0}x{0}x{0} grid:", h.grid);
        for row in &h.rows {
            let _ = writeln!(out, "{:>12.3} {:>12.6} {:>10}", row.t, row.fullspace_dh, row.samples_used);
        }
    }
    if !r.has_verdicts() {
        let _ = writeln!(out, "no prediction: distance curves only");
        return out;
    }
    let v = &r.torus.verdicts;
    let flag = |b: Option<bool>| match b {
        Some(true) => "pass",
        Some(false) => "FAIL",
        None => "n/a",
    };
    let _ = writeln!(out, "sound: {} (tail max {})", flag(v.sound), cell(r.torus.tail_sound_max));
    let _ = writeln!(out, "complete: {} ({} targets, worst {})", flag(v.complete), r.torus.targets, cell(r.torus.max_target_dist));
    for (space, f) in r.fullspace_verdicts() {
        let observed = if f.observed_full { "full" } else { "proper" };
        let predicted = if f.predicted_full { "full" } else { "proper" };
        let _ = writeln!(
            out,
            "fullspace ({space}): observed {observed}, predicted {predicted} (tail max {:.6}, min {:.6}) {}",
            f.tail_max,
            f.min_over_schedule,
            if f.agrees() { "agree" } else { "DISAGREE" }
        );
    }
    if let Some(n) = r.nonconvergence_index {
        match n {
            Some(n) => {
                let _ = writeln!(out, "nonconvergence index: {n}");
            }
            None => {
                let _ = writeln!(out, "nonconvergence index: none found");
            }
        }
    }
    let _ = writeln!(out, "result: {}", if r.passed() { "PASS" } else { "FAIL" });
    out
}
