use std::collections::BTreeMap;
use std::path::PathBuf;

use axiblow::certify::CertificateReport;
use axiblow::profile::load_profile_csv;
use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::output::Output;
use crate::plot::{emit_field, emit_plotdata};
use crate::{existing, read_text, CliError, EXIT_OK};

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportArgs {
    /// JSON reports written by `certify`, or single certificate reports.
    #[arg(long, num_args = 1..)]
    pub inputs: Vec<PathBuf>,
    /// Grid CSVs whose columns are exported as heat-map plot data.
    #[arg(long, num_args = 1..)]
    pub fields: Vec<PathBuf>,
}

impl ReportArgs {
    pub(crate) fn resolve(&mut self) -> Result<(), CliError> {
        if self.inputs.is_empty() && self.fields.is_empty() {
            return Err(CliError::input("inputs", "nothing to report"));
        }
        for (k, p) in self.inputs.iter_mut().enumerate() {
            *p = existing(&format!("inputs[{k}]"), p)?;
        }
        for (k, p) in self.fields.iter_mut().enumerate() {
            *p = existing(&format!("fields[{k}]"), p)?;
        }
        Ok(())
    }
}

fn certificates(field: &str, v: &Value) -> Result<Vec<CertificateReport>, CliError> {
    let parse = |v: &Value| serde_json::from_value::<CertificateReport>(v.clone()).map_err(|e| CliError::input(field, e));
    match v.get("reports").and_then(Value::as_array) {
        Some(list) => list.iter().map(parse).collect(),
        None if v.get("proposition").is_some() => Ok(vec![parse(v)?]),
        None => Ok(vec![]),
    }
}

pub fn run(a: &ReportArgs, out: &Output) -> Result<i32, CliError> {
    let mut entries = Vec::new();
    let mut totals: BTreeMap<String, usize> = BTreeMap::new();
    let mut plots = Vec::new();
    for (k, p) in a.inputs.iter().enumerate() {
        let field = format!("inputs[{k}]");
        let v: Value = serde_json::from_str(&read_text(&field, p)?).map_err(|e| CliError::input(&field, e))?;
        let certs = certificates(&field, &v)?;
        let mut rows = Vec::new();
        for (n, r) in certs.iter().enumerate() {
            let verdict = serde_json::to_value(r.verdict).expect("verdict serialises");
            *totals.entry(verdict.as_str().unwrap_or_default().to_string()).or_default() += 1;
            let failed: Vec<&str> = r.hypotheses.iter().filter(|h| !h.pass).map(|h| h.name.as_str()).collect();
            let stem = format!("{k:02}-{n:02}-{}", r.proposition.slug());
            let files = emit_plotdata(r, out, &stem)?;
            plots.extend(files.iter().map(|f| f.file_name().expect("file").to_string_lossy().into_owned()));
            rows.push(json!({
                "proposition": r.proposition,
                "verdict": r.verdict,
                "failed_hypotheses": failed,
                "mechanism_established": r.traces.get("mechanism_established"),
            }));
        }
        entries.push(json!({ "file": p, "certificates": rows }));
    }
    for (k, p) in a.fields.iter().enumerate() {
        let field = format!("fields[{k}]");
        let t = load_profile_csv(p, &[]).map_err(|e| CliError::input(&field, e))?;
        for (name, f) in &t.fields {
            let f = emit_field(f, name, &format!("field{k:02}-{name}"), out)?;
            plots.push(f.file_name().expect("file").to_string_lossy().into_owned());
        }
    }
    out.write_json(
        "report.json",
        &json!({ "inputs": entries, "verdict_totals": totals, "plotdata": plots }),
    )?;
    Ok(EXIT_OK)
}
