//! Blow-up sequences, the rescaling map and dimension-reduction diagnostics.

mod anchor;
mod map;
mod reduced;
mod sequence;

pub use anchor::{check_anchor, AnchorCheck, AnchorCriterion, Lambda, RadiusRule};
pub use map::{
    rescale_field, scales, successive_holder, to_original, Analytic, Gridded, RescaledField,
    SelfSimilar, VelocitySource, Window,
};
pub use reduced::{
    reduced_residual, rescale_3d, swirl_term_vanishes, tan_theta_collapse, Axisymmetric,
    ReducedResidual, RescaledField3, Source3, TanThetaCollapse, Window3,
};
pub use sequence::{
    classify_domain, classify_domain_with, find_near_maximal, scaled_boundary_distances,
    BlowupCenter, BlowupSequence, DomainClass, DomainOptions, NearMaximal,
};

use thiserror::Error;

use crate::field::FieldError;

#[derive(Debug, Error)]
pub enum RescaleError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("window corner {corner:?} maps to {mapped:?}, outside the domain")]
    WindowOutsideDomain { corner: [f64; 3], mapped: [f64; 3] },
    #[error("rescaled field vanishes at the center of index {k}")]
    ZeroCenterValue { k: usize },
    #[error("off-axis requirement violated: {0}")]
    OffAxis(String),
}
