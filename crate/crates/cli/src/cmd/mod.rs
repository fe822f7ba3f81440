pub mod certify;
pub mod datacheck;
pub mod report;
pub mod rescale;
pub mod simulate;
pub mod validate;

use axiblow::profile::FamilyVariant;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    Lhsc,
    Lhsc2,
    CenteredBoundary,
}

impl From<VariantArg> for FamilyVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Lhsc => Self::Lhsc,
            VariantArg::Lhsc2 => Self::Lhsc2,
            VariantArg::CenteredBoundary => Self::CenteredBoundary,
        }
    }
}
