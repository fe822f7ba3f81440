//! Integrals of the piecewise-bilinear reconstruction of a sampled field.
//!
//! On every grid cell the integrand is the bilinear interpolant of the four
//! corner values, which is the 2D composite trapezoid rule on full cells.
//! Cells cut by the region boundary are split recursively into boxes that are
//! wholly inside, wholly outside or (at the depth limit) assigned by their
//! centre, so partial cells contribute their covered fraction.

use std::f64::consts::PI;

use super::{FieldError, ScalarField2D};

/// Polar sector about the origin: `l1 <= |z| <= l2`, `theta1 <= arg z <= theta2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sector {
    pub l1: f64,
    pub l2: f64,
    pub theta1: f64,
    pub theta2: f64,
}

impl Sector {
    pub fn new(l1: f64, l2: f64, theta1: f64, theta2: f64) -> Result<Self, FieldError> {
        if !(l1 >= 0.0 && l2 > l1 && l1.is_finite()) {
            return Err(FieldError::InvalidRegion(format!(
                "radii must satisfy 0 <= l1 < l2, got [{l1}, {l2}]"
            )));
        }
        if !(theta1.is_finite() && theta2.is_finite() && theta1 < theta2 && theta2 - theta1 <= PI)
        {
            return Err(FieldError::InvalidRegion(format!(
                "angles must satisfy theta1 < theta2 <= theta1 + pi, got [{theta1}, {theta2}]"
            )));
        }
        Ok(Self {
            l1,
            l2,
            theta1,
            theta2,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Rectangle {
        min1: f64,
        max1: f64,
        min2: f64,
        max2: f64,
    },
    Sector(Sector),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Maximum number of box bisections inside a cut cell.
    pub depth: u32,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { depth: 9 }
    }
}

/// Integral and covered area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub area: f64,
}

pub fn quadrature(f: &ScalarField2D, region: Region) -> Result<f64, FieldError> {
    quadrature_with(f, region, QuadratureOptions::default()).map(|r| r.value)
}

fn unit(theta: f64) -> [f64; 2] {
    let snap = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    [snap(theta.cos()), snap(theta.sin())]
}

#[derive(Clone, Copy)]
enum Cover {
    Inside,
    Outside,
    Mixed,
}

struct Wedge {
    l1: f64,
    l2: f64,
    u1: [f64; 2],
    u2: [f64; 2],
}

impl Wedge {
    fn contains(&self, p: [f64; 2]) -> bool {
        let r = p[0].hypot(p[1]);
        r >= self.l1 && r <= self.l2 && self.s1(p) >= 0.0 && self.s2(p) >= 0.0
    }
    fn s1(&self, p: [f64; 2]) -> f64 {
        self.u1[0] * p[1] - self.u1[1] * p[0]
    }
    fn s2(&self, p: [f64; 2]) -> f64 {
        p[0] * self.u2[1] - p[1] * self.u2[0]
    }
    fn classify(&self, a: [f64; 2], b: [f64; 2]) -> Cover {
        let corners = [[a[0], a[1]], [b[0], a[1]], [a[0], b[1]], [b[0], b[1]]];
        let dmax = corners
            .iter()
            .map(|p| p[0].hypot(p[1]))
            .fold(0.0, f64::max);
        let cx = 0.0f64.clamp(a[0], b[0]);
        let cy = 0.0f64.clamp(a[1], b[1]);
        let dmin = cx.hypot(cy);
        if dmax <= self.l1 || dmin >= self.l2 {
            return Cover::Outside;
        }
        let s1: Vec<f64> = corners.iter().map(|&p| self.s1(p)).collect();
        let s2: Vec<f64> = corners.iter().map(|&p| self.s2(p)).collect();
        if s1.iter().all(|&s| s < 0.0) || s2.iter().all(|&s| s < 0.0) {
            return Cover::Outside;
        }
        if dmin >= self.l1 && dmax <= self.l2 && s1.iter().all(|&s| s >= 0.0) && s2.iter().all(|&s| s >= 0.0) {
            Cover::Inside
        } else {
            Cover::Mixed
        }
    }
}

pub fn quadrature_with(
    f: &ScalarField2D,
    region: Region,
    opts: QuadratureOptions,
) -> Result<QuadratureResult, FieldError> {
    let g = *f.grid();
    let (h1, h2) = (g.h1(), g.h2());
    let cell = |i: usize, j: usize| {
        (
            f.at(i, j),
            f.at(i, j + 1),
            f.at(i + 1, j),
            f.at(i + 1, j + 1),
        )
    };
    // Bilinear integral over the sub-box [a, b] of cell (i, j).
    let boxed = |i: usize, j: usize, a: [f64; 2], b: [f64; 2]| {
        let (f00, f01, f10, f11) = cell(i, j);
        let u = (0.5 * (a[0] + b[0]) - g.z1(i)) / h1;
        let v = (0.5 * (a[1] + b[1]) - g.z2(j)) / h2;
        let val = (1.0 - u) * ((1.0 - v) * f00 + v * f01) + u * ((1.0 - v) * f10 + v * f11);
        let area = (b[0] - a[0]) * (b[1] - a[1]);
        (val * area, area)
    };
    let mut value = 0.0;
    let mut area = 0.0;
    match region {
        Region::Rectangle {
            min1,
            max1,
            min2,
            max2,
        } => {
            let lo1 = min1.max(g.min1());
            let hi1 = max1.min(g.max1());
            let lo2 = min2.max(g.min2());
            let hi2 = max2.min(g.max2());
            if !(lo1 < hi1 && lo2 < hi2) {
                return Err(FieldError::EmptyRegion);
            }
            for i in 0..g.n1() - 1 {
                let a1 = g.z1(i).max(lo1);
                let b1 = g.z1(i + 1).min(hi1);
                if a1 >= b1 {
                    continue;
                }
                for j in 0..g.n2() - 1 {
                    let a2 = g.z2(j).max(lo2);
                    let b2 = g.z2(j + 1).min(hi2);
                    if a2 >= b2 {
                        continue;
                    }
                    let (v, s) = boxed(i, j, [a1, a2], [b1, b2]);
                    value += v;
                    area += s;
                }
            }
        }
        Region::Sector(s) => {
            let w = Wedge {
                l1: s.l1,
                l2: s.l2,
                u1: unit(s.theta1),
                u2: unit(s.theta2),
            };
            let mut stack = Vec::new();
            for i in 0..g.n1() - 1 {
                for j in 0..g.n2() - 1 {
                    stack.push((g.node(i, j), g.node(i + 1, j + 1), 0u32));
                    while let Some((a, b, d)) = stack.pop() {
                        match w.classify(a, b) {
                            Cover::Outside => {}
                            Cover::Inside => {
                                let (v, s) = boxed(i, j, a, b);
                                value += v;
                                area += s;
                            }
                            Cover::Mixed if d >= opts.depth => {
                                let c = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
                                if w.contains(c) {
                                    let (v, s) = boxed(i, j, a, b);
                                    value += v;
                                    area += s;
                                }
                            }
                            Cover::Mixed => {
                                let m = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
                                stack.push((a, m, d + 1));
                                stack.push(([m[0], a[1]], [b[0], m[1]], d + 1));
                                stack.push(([a[0], m[1]], [m[0], b[1]], d + 1));
                                stack.push((m, b, d + 1));
                            }
                        }
                    }
                }
            }
        }
    }
    if area <= 0.0 {
        return Err(FieldError::EmptyRegion);
    }
    Ok(QuadratureResult { value, area })
}
