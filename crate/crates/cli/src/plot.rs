//! Plot data: plain CSV series that any plotting tool can read.
//!
//! Flow lines become polylines with a monotone parameter column, `p`-ladders
//! become two-column `(p, root)` files and fields use the shared grid format,
//! so heat-map exports load back with `load_profile_csv`.

use std::fmt::Write as _;
use std::path::PathBuf;

use axiblow::certify::CertificateReport;
use axiblow::field::{write_csv, CsvTable, ScalarField2D};
use serde_json::Value;

use crate::output::Output;
use crate::CliError;

fn num(v: &Value) -> Option<f64> {
    v.as_f64()
}

fn pair(v: &Value) -> Option<[f64; 2]> {
    let a = v.as_array()?;
    Some([num(a.first()?)?, num(a.get(1)?)?])
}

/// `s,z1,z2,w` rows of a full flow line trace.
fn flow_line_csv(line: &Value) -> Option<String> {
    let s = line["s"].as_array()?;
    let z = line["z"].as_array()?;
    let w = line["w"].as_array()?;
    let mut out = String::from("s,z1,z2,w\n");
    for k in 0..s.len().min(z.len()).min(w.len()) {
        let p = pair(&z[k])?;
        let _ = writeln!(out, "{},{},{},{}", num(&s[k])?, p[0], p[1], num(&w[k])?);
    }
    Some(out)
}

/// `line,k,z1,z2` rows of several point polylines.
fn polylines_csv(lines: &[Value]) -> Option<String> {
    let mut out = String::from("line,k,z1,z2\n");
    for (n, l) in lines.iter().enumerate() {
        for (k, p) in l.as_array()?.iter().enumerate() {
            let p = pair(p)?;
            let _ = writeln!(out, "{n},{k},{},{}", p[0], p[1]);
        }
    }
    Some(out)
}

/// Writes every plottable trace of `report` as `{stem}-{series}.csv`.
pub fn emit_plotdata(report: &CertificateReport, out: &Output, stem: &str) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    let mut put = |series: &str, text: String| -> Result<(), CliError> {
        files.push(out.write_text(&format!("{stem}-{series}.csv"), &text)?);
        Ok(())
    };
    let t = &report.traces;
    if let Some(text) = t.get("flow_line").and_then(flow_line_csv) {
        put("flow_line", text)?;
    }
    if let Some(text) = t.get("flow_lines").and_then(Value::as_array).and_then(|l| polylines_csv(l)) {
        put("flow_lines", text)?;
    }
    if let Some(pts) = t.get("curve").and_then(Value::as_array) {
        // Stored as (z2, z1) pairs, ordered by height.
        let mut text = String::from("k,z1,z2\n");
        for (k, p) in pts.iter().filter_map(pair).enumerate() {
            let _ = writeln!(text, "{k},{},{}", p[1], p[0]);
        }
        put("curve", text)?;
    }
    if let Some(rungs) = t.get("rungs").and_then(Value::as_array) {
        for key in ["root_bulk", "root_ray1", "root_ray2", "root_outer_arc", "root_inner_arc"] {
            let rows: Vec<(f64, f64)> = rungs
                .iter()
                .filter_map(|r| Some((num(&r["p"])?, num(&r[key])?)))
                .collect();
            if rows.is_empty() {
                continue;
            }
            let mut text = String::from("p,root\n");
            for (p, r) in rows {
                let _ = writeln!(text, "{p},{r}");
            }
            put(&format!("proot_{}", key.trim_start_matches("root_")), text)?;
        }
    }
    Ok(files)
}

/// Heat-map export of one field in the shared grid CSV format.
pub fn emit_field(field: &ScalarField2D, name: &str, file: &str, out: &Output) -> Result<PathBuf, CliError> {
    let p = out.path(&format!("{file}.csv"));
    let table = CsvTable::from_fields(&[name], &[field]).map_err(|e| CliError::Output(e.to_string()))?;
    write_csv(&p, &table).map_err(|e| CliError::Output(e.to_string()))?;
    Ok(p)
}
