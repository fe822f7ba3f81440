//! Grids, sampled fields and the discrete operators every other module uses.

pub(crate) mod csv;
mod diff;
mod grid;
mod holder;
mod interp;
mod quadrature;
mod series;
mod values;

pub use csv::{read_csv, write_csv, CsvTable};
pub use diff::{
    curl2d, curl2d_with, d1, d2, divergence, laplacian, perp_gradient, perp_gradient_with,
    weighted_divergence, Edge,
};
pub use grid::Grid2D;
pub use holder::{holder_norm, holder_norm_with, HolderEstimate, HolderOptions};
pub use interp::{Interpolator, Method, Wrap};
pub use quadrature::{
    quadrature, quadrature_with, QuadratureOptions, QuadratureResult, Region, Sector,
};
pub use series::{OnGrid, TimeSeries};
pub use values::{ScalarField2D, VectorField2D};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value {value} at node ({i}, {j})")]
    NonFinite { i: usize, j: usize, value: f64 },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("weight must be strictly positive, got {value} at node ({i}, {j})")]
    NonPositiveWeight { i: usize, j: usize, value: f64 },
    #[error("invalid time series: {0}")]
    InvalidSeries(String),
    #[error("Hölder exponent must lie in (0, 1), got {0}")]
    InvalidExponent(f64),
    #[error("integration region does not intersect the grid")]
    EmptyRegion,
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("csv line {line}: {msg}")]
    Csv { line: usize, msg: String },
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for FieldError {
    fn from(e: std::io::Error) -> Self {
        FieldError::Io(e.to_string())
    }
}
