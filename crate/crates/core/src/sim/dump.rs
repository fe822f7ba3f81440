//! Trajectory dumps: one CSV per snapshot plus a JSON manifest.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SimError;
use crate::field::{write_csv, CsvTable, Grid2D, ScalarField2D};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryManifest {
    pub times: Vec<f64>,
    pub grid: Grid2D,
    pub fields: Vec<String>,
    pub files: Vec<String>,
}

/// Writes `{prefix}_{k:05}.csv` for each snapshot and `{prefix}.json`.
pub fn write_trajectory(
    dir: &Path,
    prefix: &str,
    names: &[&str],
    snapshots: &[(f64, Vec<ScalarField2D>)],
) -> Result<TrajectoryManifest, SimError> {
    std::fs::create_dir_all(dir).map_err(|e| SimError::Io(e.to_string()))?;
    let grid = *snapshots
        .first()
        .and_then(|s| s.1.first())
        .ok_or_else(|| SimError::Domain("empty trajectory".into()))?
        .grid();
    let mut files = Vec::new();
    for (k, (_, fields)) in snapshots.iter().enumerate() {
        let refs: Vec<&ScalarField2D> = fields.iter().collect();
        let table = CsvTable::from_fields(names, &refs)?;
        let name = format!("{prefix}_{k:05}.csv");
        write_csv(&dir.join(&name), &table)?;
        files.push(name);
    }
    let manifest = TrajectoryManifest {
        times: snapshots.iter().map(|s| s.0).collect(),
        grid,
        fields: names.iter().map(|s| s.to_string()).collect(),
        files,
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| SimError::Io(e.to_string()))?;
    std::fs::write(dir.join(format!("{prefix}.json")), json).map_err(|e| SimError::Io(e.to_string()))?;
    Ok(manifest)
}
