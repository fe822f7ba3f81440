use std::path::PathBuf;

use axiblow::field::{write_csv, CsvTable, Grid2D, ScalarField2D, TimeSeries};
use axiblow::profile::load_profile_csv;
use axiblow::rescale::{
    classify_domain, find_near_maximal, rescale_field, scaled_boundary_distances, successive_holder, BlowupSequence,
    Gridded, Window,
};
use axiblow::sim::TrajectoryManifest;
use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::output::Output;
use crate::{existing, read_text, CliError, EXIT_OK};

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RescaleArgs {
    /// Trajectory manifest written by `simulate`.
    #[arg(long)]
    pub trajectory: PathBuf,
    /// The three velocity columns, in `(v¹, v^θ, v³)` order.
    #[arg(long, value_delimiter = ',', default_value = "vr,vtheta,v3")]
    pub components: Vec<String>,
    /// Blow-up sequence JSON. Without it, centers are picked among the
    /// snapshots listed in `--indices` by the near-maximal rule.
    #[arg(long)]
    pub sequence: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub near_maximal: f64,
    #[arg(long, value_delimiter = ',')]
    pub indices: Vec<usize>,
    /// Half widths of the rescaled window.
    #[arg(long, value_delimiter = ',', default_value = "1,1")]
    pub half: Vec<f64>,
    #[arg(long, default_value_t = 21)]
    pub window_n: usize,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    pub window_times: Vec<f64>,
    /// Hölder exponent for successive differences.
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
}

impl RescaleArgs {
    pub(crate) fn resolve(&mut self) -> Result<(), CliError> {
        self.trajectory = existing("trajectory", &self.trajectory)?;
        if let Some(p) = &self.sequence {
            self.sequence = Some(existing("sequence", p)?);
        } else if self.alpha.is_none() {
            return Err(CliError::input("alpha", "required when no --sequence is given"));
        }
        if self.components.len() != 3 {
            return Err(CliError::input("components", format!("need three names, got {}", self.components.len())));
        }
        if self.half.len() != 2 || self.half.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
            return Err(CliError::input("half", "need two positive half widths"));
        }
        if self.window_n < 2 {
            return Err(CliError::input("window-n", "must be at least 2"));
        }
        if self.window_times.is_empty() || self.window_times.iter().any(|t| !t.is_finite()) {
            return Err(CliError::input("window-times", "need at least one finite time"));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(CliError::input("gamma", format!("must lie in (0, 1], got {}", self.gamma)));
        }
        Ok(())
    }
}

pub fn run(a: &RescaleArgs, out: &Output) -> Result<i32, CliError> {
    let manifest: TrajectoryManifest =
        serde_json::from_str(&read_text("trajectory", &a.trajectory)?).map_err(|e| CliError::input("trajectory", e))?;
    let base = a.trajectory.parent().map(PathBuf::from).unwrap_or_default();
    let cols: Vec<&str> = a.components.iter().map(String::as_str).collect();
    let mut comps: [Vec<ScalarField2D>; 3] = Default::default();
    for (k, f) in manifest.files.iter().enumerate() {
        let t = load_profile_csv(&base.join(f), &cols).map_err(|e| CliError::input(&format!("trajectory.files[{k}]"), e))?;
        for c in 0..3 {
            comps[c].push(t.fields[cols[c]].clone());
        }
    }
    let speeds: Vec<ScalarField2D> = (0..manifest.files.len())
        .map(|k| {
            let v = comps.iter().map(|c| &c[k]).collect::<Vec<_>>();
            let vals = (0..v[0].values().len())
                .map(|n| v.iter().map(|f| f.values()[n].powi(2)).sum::<f64>().sqrt())
                .collect();
            ScalarField2D::new(*v[0].grid(), vals)
        })
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::input("trajectory", e))?;
    let src = Gridded::new(manifest.times.clone(), comps).map_err(|e| CliError::input("trajectory", e))?;

    let (seq, selection) = match &a.sequence {
        Some(p) => {
            let s = BlowupSequence::from_json(&read_text("sequence", p)?).map_err(|e| CliError::input("sequence", e))?;
            (s, None)
        }
        None => {
            let alpha = a.alpha.expect("checked in resolve");
            let series = TimeSeries::new(manifest.times.clone(), speeds).map_err(|e| CliError::input("trajectory", e))?;
            let nm = find_near_maximal(&series, a.near_maximal, alpha, &a.indices).map_err(|e| CliError::input("indices", e))?;
            let sel = json!({ "indices": nm.indices, "rejected": nm.rejected });
            (nm.sequence, Some(sel))
        }
    };
    let alpha = a.alpha.unwrap_or(seq.alpha);
    if seq.centers.is_empty() {
        return Err(CliError::input("sequence", "no blow-up centers"));
    }
    let window = Window {
        grid: Grid2D::new((-a.half[0], a.half[0]), (-a.half[1], a.half[1]), a.window_n, a.window_n)
            .map_err(|e| CliError::input("half", e))?,
        times: a.window_times.clone(),
    };
    let mut fields = Vec::new();
    for (k, c) in seq.centers.iter().enumerate() {
        fields.push(rescale_field(&src, *c, alpha, &window).map_err(|e| CliError::input(&format!("sequence.centers[{k}]"), e))?);
    }
    let last = window
        .times
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
        .map_or(0, |(k, _)| k);
    let mut files = Vec::new();
    for (k, f) in fields.iter().enumerate() {
        let snaps: Vec<ScalarField2D> = (0..3)
            .map(|c| ScalarField2D::new(window.grid, f.values[last].iter().map(|v| v[c]).collect()))
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Output(e.to_string()))?;
        let refs: Vec<&ScalarField2D> = snaps.iter().collect();
        let table = CsvTable::from_fields(&cols, &refs).map_err(|e| CliError::Output(e.to_string()))?;
        let p = out.path(&format!("rescaled_{k:03}.csv"));
        write_csv(&p, &table).map_err(|e| CliError::Output(e.to_string()))?;
        files.push(p.file_name().expect("file").to_string_lossy().into_owned());
    }
    let holder = successive_holder(&fields, a.gamma).map_err(|e| CliError::input("window", e))?;
    let domain = match scaled_boundary_distances(&seq, alpha) {
        Ok(d) => json!({ "distances": d, "class": classify_domain(&seq, alpha).ok() }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let report = json!({
        "alpha": alpha,
        "sequence": seq,
        "selection": selection,
        "window": window,
        "at_origin": fields.iter().map(|f| f.at_origin()).collect::<Vec<_>>(),
        "successive_holder": holder,
        "successive_norms": holder.iter().map(|h| h.norm()).collect::<Vec<_>>(),
        "domain": domain,
        "rescaled_files": files,
    });
    out.write_json("rescale.json", &report)?;
    Ok(EXIT_OK)
}
