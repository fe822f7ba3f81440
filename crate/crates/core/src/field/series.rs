use super::{FieldError, Grid2D, ScalarField2D, VectorField2D};

/// Anything that lives on a single [`Grid2D`].
pub trait OnGrid {
    fn grid(&self) -> &Grid2D;
}

impl OnGrid for ScalarField2D {
    fn grid(&self) -> &Grid2D {
        ScalarField2D::grid(self)
    }
}

impl OnGrid for VectorField2D {
    fn grid(&self) -> &Grid2D {
        VectorField2D::grid(self)
    }
}

/// Snapshots at strictly increasing times, all on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<F> {
    times: Vec<f64>,
    snapshots: Vec<F>,
}

impl<F: OnGrid> TimeSeries<F> {
    pub fn new(times: Vec<f64>, snapshots: Vec<F>) -> Result<Self, FieldError> {
        if times.is_empty() {
            return Err(FieldError::InvalidSeries("no snapshots".into()));
        }
        if times.len() != snapshots.len() {
            return Err(FieldError::InvalidSeries(format!(
                "{} times for {} snapshots",
                times.len(),
                snapshots.len()
            )));
        }
        if let Some(k) = times
            .windows(2)
            .position(|w| !(w[1] > w[0]) || !w[1].is_finite())
        {
            return Err(FieldError::InvalidSeries(format!(
                "times not strictly increasing at index {}",
                k + 1
            )));
        }
        let g = *snapshots[0].grid();
        if snapshots.iter().any(|s| *s.grid() != g) {
            return Err(FieldError::GridMismatch);
        }
        Ok(Self { times, snapshots })
    }

    pub fn single(snapshot: F) -> Self {
        Self {
            times: vec![0.0],
            snapshots: vec![snapshot],
        }
    }

    pub fn grid(&self) -> &Grid2D {
        self.snapshots[0].grid()
    }
    pub fn times(&self) -> &[f64] {
        &self.times
    }
    pub fn snapshots(&self) -> &[F] {
        &self.snapshots
    }
    pub fn len(&self) -> usize {
        self.times.len()
    }
    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}
