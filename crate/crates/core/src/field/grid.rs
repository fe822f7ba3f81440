use serde::{Deserialize, Serialize};

use super::FieldError;

/// Uniform node-centred rectangular mesh.
///
/// Node `(i, j)` sits at `(min1 + i*h1, min2 + j*h2)` and is stored at flat
/// index `i*n2 + j`, so rows of constant `i` are contiguous.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    min1: f64,
    max1: f64,
    min2: f64,
    max2: f64,
    n1: usize,
    n2: usize,
}

impl Grid2D {
    pub fn new(
        (min1, max1): (f64, f64),
        (min2, max2): (f64, f64),
        n1: usize,
        n2: usize,
    ) -> Result<Self, FieldError> {
        if n1 < 3 || n2 < 3 {
            return Err(FieldError::InvalidGrid(format!(
                "node counts must be >= 3, got {n1}x{n2}"
            )));
        }
        for (lo, hi, axis) in [(min1, max1, 1), (min2, max2, 2)] {
            if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
                return Err(FieldError::InvalidGrid(format!(
                    "axis {axis} bounds [{lo}, {hi}] are not an increasing finite interval"
                )));
            }
        }
        Ok(Self {
            min1,
            max1,
            min2,
            max2,
            n1,
            n2,
        })
    }

    /// Square grid over `[lo, hi]^2` with `n` nodes per side.
    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self, FieldError> {
        Self::new((lo, hi), (lo, hi), n, n)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }
    pub fn n2(&self) -> usize {
        self.n2
    }
    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn min1(&self) -> f64 {
        self.min1
    }
    pub fn max1(&self) -> f64 {
        self.max1
    }
    pub fn min2(&self) -> f64 {
        self.min2
    }
    pub fn max2(&self) -> f64 {
        self.max2
    }
    pub fn bounds(&self) -> [f64; 4] {
        [self.min1, self.max1, self.min2, self.max2]
    }
    pub fn h1(&self) -> f64 {
        (self.max1 - self.min1) / (self.n1 - 1) as f64
    }
    pub fn h2(&self) -> f64 {
        (self.max2 - self.min2) / (self.n2 - 1) as f64
    }

    /// Coordinate of node `i` along axis 1. The last node is `max1` exactly.
    pub fn z1(&self, i: usize) -> f64 {
        if i + 1 == self.n1 {
            self.max1
        } else {
            self.min1 + i as f64 * self.h1()
        }
    }
    pub fn z2(&self, j: usize) -> f64 {
        if j + 1 == self.n2 {
            self.max2
        } else {
            self.min2 + j as f64 * self.h2()
        }
    }
    pub fn node(&self, i: usize, j: usize) -> [f64; 2] {
        [self.z1(i), self.z2(j)]
    }
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n2 + j
    }
    #[inline]
    pub fn ij(&self, k: usize) -> (usize, usize) {
        (k / self.n2, k % self.n2)
    }

    pub fn contains(&self, z: [f64; 2]) -> bool {
        z[0] >= self.min1 && z[0] <= self.max1 && z[1] >= self.min2 && z[1] <= self.max2
    }

    /// Grid reflected onto itself by `z1 -> -z1`.
    pub fn symmetric_in_z1(&self) -> bool {
        (self.min1 + self.max1).abs() <= 1e-12 * self.max1.abs().max(1.0)
    }
    pub fn symmetric_in_z2(&self) -> bool {
        (self.min2 + self.max2).abs() <= 1e-12 * self.max2.abs().max(1.0)
    }

    /// All node coordinates in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize, [f64; 2])> + '_ {
        (0..self.n1).flat_map(move |i| (0..self.n2).map(move |j| (i, j, self.node(i, j))))
    }

    pub fn ensure_same(&self, other: &Grid2D) -> Result<(), FieldError> {
        if self == other {
            Ok(())
        } else {
            Err(FieldError::GridMismatch)
        }
    }
}
