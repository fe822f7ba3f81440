use super::{FieldError, Grid2D};

/// Finite scalar samples on every node of a [`Grid2D`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField2D {
    grid: Grid2D,
    values: Vec<f64>,
}

fn check_finite(grid: &Grid2D, values: &[f64]) -> Result<(), FieldError> {
    if values.len() != grid.len() {
        return Err(FieldError::LengthMismatch {
            expected: grid.len(),
            got: values.len(),
        });
    }
    match values.iter().position(|v| !v.is_finite()) {
        Some(k) => {
            let (i, j) = grid.ij(k);
            Err(FieldError::NonFinite {
                i,
                j,
                value: values[k],
            })
        }
        None => Ok(()),
    }
}

impl ScalarField2D {
    pub fn new(grid: Grid2D, values: Vec<f64>) -> Result<Self, FieldError> {
        check_finite(&grid, &values)?;
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Result<Self, FieldError> {
        let values = grid.nodes().map(|(_, _, z)| f(z[0], z[1])).collect();
        Self::new(grid, values)
    }

    pub fn constant(grid: Grid2D, c: f64) -> Result<Self, FieldError> {
        Self::new(grid, vec![c; grid.len()])
    }

    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Node index of the largest value; ties go to the smallest `(i, j)`.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = 0;
        for (k, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = k;
            }
        }
        self.grid.ij(best)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self, FieldError> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(
        &self,
        other: &ScalarField2D,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self, FieldError> {
        self.grid.ensure_same(&other.grid)?;
        Self::new(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    /// Maximum of `|self - other|` over nodes.
    pub fn max_abs_diff(&self, other: &ScalarField2D) -> Result<f64, FieldError> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Maximum of `|u|` over nodes with `margin <= i < n1 - margin`, same in `j`.
    pub fn interior_sup(&self, margin: usize) -> f64 {
        let (n1, n2) = (self.grid.n1(), self.grid.n2());
        let mut m: f64 = 0.0;
        for i in margin..n1.saturating_sub(margin) {
            for j in margin..n2.saturating_sub(margin) {
                m = m.max(self.at(i, j).abs());
            }
        }
        m
    }
}

/// Two finite components per node, e.g. `(v¹, v²)` or `(v^r, v^(3))`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField2D {
    grid: Grid2D,
    c1: Vec<f64>,
    c2: Vec<f64>,
}

impl VectorField2D {
    pub fn new(grid: Grid2D, c1: Vec<f64>, c2: Vec<f64>) -> Result<Self, FieldError> {
        check_finite(&grid, &c1)?;
        check_finite(&grid, &c2)?;
        Ok(Self { grid, c1, c2 })
    }

    pub fn from_components(a: &ScalarField2D, b: &ScalarField2D) -> Result<Self, FieldError> {
        a.grid().ensure_same(b.grid())?;
        Ok(Self {
            grid: *a.grid(),
            c1: a.values().to_vec(),
            c2: b.values().to_vec(),
        })
    }

    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> [f64; 2]) -> Result<Self, FieldError> {
        let (c1, c2) = grid.nodes().map(|(_, _, z)| f(z[0], z[1])).map(|v| (v[0], v[1])).unzip();
        Self::new(grid, c1, c2)
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }
    pub fn c1(&self) -> &[f64] {
        &self.c1
    }
    pub fn c2(&self) -> &[f64] {
        &self.c2
    }
    pub fn at(&self, i: usize, j: usize) -> [f64; 2] {
        let k = self.grid.idx(i, j);
        [self.c1[k], self.c2[k]]
    }
    pub fn component(&self, c: usize) -> ScalarField2D {
        let v = if c == 0 { &self.c1 } else { &self.c2 };
        ScalarField2D {
            grid: self.grid,
            values: v.clone(),
        }
    }
    pub fn split(&self) -> (ScalarField2D, ScalarField2D) {
        (self.component(0), self.component(1))
    }
    pub fn magnitude(&self) -> ScalarField2D {
        ScalarField2D {
            grid: self.grid,
            values: self
                .c1
                .iter()
                .zip(&self.c2)
                .map(|(a, b)| a.hypot(*b))
                .collect(),
        }
    }
    pub fn sup_norm(&self) -> f64 {
        self.magnitude().max()
    }
}
