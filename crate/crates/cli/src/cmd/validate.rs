use std::path::{Path, PathBuf};

use axiblow::certify::route_proposition;
use axiblow::profile::{classify_regime, symmetry_decay_check, AnsatzManifest, FamilyVariant, SelfSimilarAnsatz, SymmetryOptions};
use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::VariantArg;
use crate::output::Output;
use crate::{existing, CliError, EXIT_OK};

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateArgs {
    /// Ansatz manifest: `{alpha, beta, T0, profiles, parities, decay_exponents, signs}`.
    #[arg(long)]
    pub ansatz: PathBuf,
    #[arg(long, value_enum, default_value_t = VariantArg::Lhsc2)]
    pub variant: VariantArg,
    /// Parity tolerance; defaults to 1e-6 for gridded profiles.
    #[arg(long)]
    pub parity_tol: Option<f64>,
}

impl ValidateArgs {
    pub(crate) fn resolve(&mut self) -> Result<(), CliError> {
        self.ansatz = existing("ansatz", &self.ansatz)?;
        if let Some(t) = self.parity_tol {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(CliError::input("parity-tol", format!("must be non-negative, got {t}")));
            }
        }
        Ok(())
    }
}

pub(crate) fn load_ansatz(path: &Path) -> Result<SelfSimilarAnsatz, CliError> {
    let m = AnsatzManifest::read(path).map_err(|e| CliError::input("ansatz", e))?;
    m.load(path.parent().unwrap_or(Path::new("."))).map_err(|e| CliError::input("ansatz", e))
}

pub fn run(a: &ValidateArgs, out: &Output) -> Result<i32, CliError> {
    let ansatz = load_ansatz(&a.ansatz)?;
    let regime = classify_regime(ansatz.alpha, ansatz.beta).map_err(|e| CliError::input("ansatz.alpha", e))?;
    let opts = SymmetryOptions {
        parity_tol: a.parity_tol,
        ..Default::default()
    };
    let sym = symmetry_decay_check(&ansatz, None, &opts).map_err(|e| CliError::input("ansatz", e))?;
    let variant: FamilyVariant = a.variant.into();
    let report = json!({
        "alpha": ansatz.alpha,
        "beta": ansatz.beta,
        "regime": regime,
        "symmetry": sym,
        "route": route_proposition(&ansatz, variant),
    });
    out.write_json("validate.json", &report)?;
    Ok(EXIT_OK)
}
