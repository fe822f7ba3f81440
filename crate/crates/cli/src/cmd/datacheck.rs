use std::path::PathBuf;

use axiblow::profile::{load_profile_csv, vorticity_table_check};
use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::output::Output;
use crate::{existing, CliError, EXIT_OK};

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatacheckArgs {
    /// Profile CSV with `w` and either `d2v1,d1v2` or `v1,v2` columns.
    #[arg(long)]
    pub profiles: PathBuf,
    /// Mismatches above this are flagged.
    #[arg(long, default_value_t = 1e-7)]
    pub accuracy: f64,
}

impl DatacheckArgs {
    pub(crate) fn resolve(&mut self) -> Result<(), CliError> {
        self.profiles = existing("profiles", &self.profiles)?;
        if !(self.accuracy > 0.0 && self.accuracy.is_finite()) {
            return Err(CliError::input("accuracy", format!("must be positive, got {}", self.accuracy)));
        }
        Ok(())
    }
}

pub fn run(a: &DatacheckArgs, out: &Output) -> Result<i32, CliError> {
    let table = load_profile_csv(&a.profiles, &[]).map_err(|e| CliError::input("profiles", e))?;
    let check = vorticity_table_check(&table, a.accuracy).map_err(|e| CliError::input("profiles", e))?;
    let report = json!({
        "profiles": a.profiles,
        "flagged_count": check.flagged.len(),
        "check": check,
    });
    out.write_json("datacheck.json", &report)?;
    Ok(EXIT_OK)
}
