//! Finite differences on node grids.
//!
//! Interior nodes use central differences. Edges use second-order one-sided
//! stencils unless the axis is periodic, in which case the first and last
//! node are the same physical point and the stencil wraps with period `n-1`.

use super::{FieldError, Grid2D, ScalarField2D, VectorField2D};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Edge {
    #[default]
    OneSided,
    Periodic,
}

/// Derivative of a line of `n` samples with stride `stride` starting at `base`.
fn diff_line(src: &[f64], dst: &mut [f64], base: usize, stride: usize, n: usize, h: f64, edge: Edge) {
    let at = |k: usize| src[base + k * stride];
    match edge {
        Edge::OneSided => {
            dst[base] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
            dst[base + (n - 1) * stride] =
                (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
        }
        Edge::Periodic => {
            let d0 = (at(1) - at(n - 2)) / (2.0 * h);
            dst[base] = d0;
            dst[base + (n - 1) * stride] = d0;
        }
    }
    for k in 1..n - 1 {
        dst[base + k * stride] = (at(k + 1) - at(k - 1)) / (2.0 * h);
    }
}

fn second_line(src: &[f64], dst: &mut [f64], base: usize, stride: usize, n: usize, h: f64, edge: Edge) {
    let at = |k: usize| src[base + k * stride];
    let h2 = h * h;
    match edge {
        Edge::OneSided if n >= 4 => {
            dst[base] = (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / h2;
            dst[base + (n - 1) * stride] =
                (2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4)) / h2;
        }
        Edge::OneSided => {
            let c = (at(0) - 2.0 * at(1) + at(2)) / h2;
            dst[base] = c;
            dst[base + (n - 1) * stride] = c;
        }
        Edge::Periodic => {
            let c = (at(1) - 2.0 * at(0) + at(n - 2)) / h2;
            dst[base] = c;
            dst[base + (n - 1) * stride] = c;
        }
    }
    for k in 1..n - 1 {
        dst[base + k * stride] = (at(k + 1) - 2.0 * at(k) + at(k - 1)) / h2;
    }
}

type LineOp = fn(&[f64], &mut [f64], usize, usize, usize, f64, Edge);

fn apply(grid: &Grid2D, src: &[f64], axis: usize, edge: Edge, op: LineOp) -> Vec<f64> {
    let (n1, n2) = (grid.n1(), grid.n2());
    let mut dst = vec![0.0; src.len()];
    if axis == 1 {
        for j in 0..n2 {
            op(src, &mut dst, j, n2, n1, grid.h1(), edge);
        }
    } else {
        for i in 0..n1 {
            op(src, &mut dst, i * n2, 1, n2, grid.h2(), edge);
        }
    }
    dst
}

/// `∂f/∂z¹`.
pub fn d1(f: &ScalarField2D, edge: Edge) -> Result<ScalarField2D, FieldError> {
    ScalarField2D::new(*f.grid(), apply(f.grid(), f.values(), 1, edge, diff_line))
}

/// `∂f/∂z²`.
pub fn d2(f: &ScalarField2D, edge: Edge) -> Result<ScalarField2D, FieldError> {
    ScalarField2D::new(*f.grid(), apply(f.grid(), f.values(), 2, edge, diff_line))
}

/// Five-point Laplacian, with second-order one-sided second differences at
/// non-periodic edges.
pub fn laplacian(f: &ScalarField2D, edges: [Edge; 2]) -> Result<ScalarField2D, FieldError> {
    let a = apply(f.grid(), f.values(), 1, edges[0], second_line);
    let b = apply(f.grid(), f.values(), 2, edges[1], second_line);
    ScalarField2D::new(*f.grid(), a.iter().zip(&b).map(|(x, y)| x + y).collect())
}

/// Scalar vorticity `ω = ∂₂v¹ − ∂₁v²`.
///
/// This is the negative of the usual planar curl, so that for
/// `v = ∇⊥ψ = (−∂₂ψ, ∂₁ψ)` one gets `Δψ = −ω`.
pub fn curl2d(v: &VectorField2D) -> Result<ScalarField2D, FieldError> {
    curl2d_with(v, [Edge::OneSided; 2])
}

pub fn curl2d_with(v: &VectorField2D, edges: [Edge; 2]) -> Result<ScalarField2D, FieldError> {
    let g = v.grid();
    let a = apply(g, v.c1(), 2, edges[1], diff_line);
    let b = apply(g, v.c2(), 1, edges[0], diff_line);
    ScalarField2D::new(*g, a.iter().zip(&b).map(|(x, y)| x - y).collect())
}

/// `(−∂₂f, ∂₁f)`, divided pointwise by `weight` when given.
pub fn perp_gradient(
    f: &ScalarField2D,
    weight: Option<&ScalarField2D>,
) -> Result<VectorField2D, FieldError> {
    perp_gradient_with(f, weight, [Edge::OneSided; 2])
}

pub fn perp_gradient_with(
    f: &ScalarField2D,
    weight: Option<&ScalarField2D>,
    edges: [Edge; 2],
) -> Result<VectorField2D, FieldError> {
    let g = f.grid();
    let mut c1 = apply(g, f.values(), 2, edges[1], diff_line);
    let mut c2 = apply(g, f.values(), 1, edges[0], diff_line);
    for v in c1.iter_mut() {
        *v = -*v;
    }
    if let Some(w) = weight {
        g.ensure_same(w.grid())?;
        check_positive(w)?;
        for (k, &wk) in w.values().iter().enumerate() {
            c1[k] /= wk;
            c2[k] /= wk;
        }
    }
    VectorField2D::new(*g, c1, c2)
}

fn check_positive(w: &ScalarField2D) -> Result<(), FieldError> {
    match w.values().iter().position(|&x| x <= 0.0) {
        Some(k) => {
            let (i, j) = w.grid().ij(k);
            Err(FieldError::NonPositiveWeight {
                i,
                j,
                value: w.values()[k],
            })
        }
        None => Ok(()),
    }
}

/// `∂₁v¹ + ∂₂v²`.
pub fn divergence(v: &VectorField2D, edges: [Edge; 2]) -> Result<ScalarField2D, FieldError> {
    let g = v.grid();
    let a = apply(g, v.c1(), 1, edges[0], diff_line);
    let b = apply(g, v.c2(), 2, edges[1], diff_line);
    ScalarField2D::new(*g, a.iter().zip(&b).map(|(x, y)| x + y).collect())
}

/// Divergence of `v` in the measure `w dz`, expanded as
/// `∂₁v¹ + ∂₂v² + (v¹∂₁w + v²∂₂w)/w`.
///
/// With `w = r` this is the meridian divergence `∂_r v^r + v^r/r + ∂₃v³` of an
/// axisymmetric field, which vanishes for `v = ∇⊥ψ / r` up to `O(h²)`.
pub fn weighted_divergence(
    v: &VectorField2D,
    w: &ScalarField2D,
    edges: [Edge; 2],
) -> Result<ScalarField2D, FieldError> {
    let g = v.grid();
    g.ensure_same(w.grid())?;
    check_positive(w)?;
    let div = divergence(v, edges)?;
    let w1 = apply(g, w.values(), 1, edges[0], diff_line);
    let w2 = apply(g, w.values(), 2, edges[1], diff_line);
    let out = (0..g.len())
        .map(|k| div.values()[k] + (v.c1()[k] * w1[k] + v.c2()[k] * w2[k]) / w.values()[k])
        .collect();
    ScalarField2D::new(*g, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_fields_have_exact_curl() {
        let g = Grid2D::square(0.0, 1.0, 9).unwrap();
        let v = VectorField2D::from_fn(g, |z1, _| [0.0, z1]).unwrap();
        let w = curl2d(&v).unwrap();
        assert!(w.values().iter().all(|x| (x + 1.0).abs() < 1e-12));
        let v = VectorField2D::from_fn(g, |_, z2| [z2, 0.0]).unwrap();
        let w = curl2d(&v).unwrap();
        assert!(w.values().iter().all(|x| (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn perp_gradient_of_product() {
        let g = Grid2D::square(-1.0, 1.0, 7).unwrap();
        let f = ScalarField2D::from_fn(g, |a, b| a * b).unwrap();
        let v = perp_gradient(&f, None).unwrap();
        for (i, j, z) in g.nodes() {
            let [a, b] = v.at(i, j);
            assert!((a + z[0]).abs() < 1e-12 && (b - z[1]).abs() < 1e-12);
        }
        let div = divergence(&v, [Edge::OneSided; 2]).unwrap();
        assert!(div.sup_norm() < 1e-12);
        let one = ScalarField2D::constant(g, 1.0).unwrap();
        assert_eq!(perp_gradient(&f, Some(&one)).unwrap(), v);
    }

    #[test]
    fn rejects_non_positive_weight() {
        let g = Grid2D::square(-1.0, 1.0, 5).unwrap();
        let f = ScalarField2D::zeros(g);
        let w = ScalarField2D::from_fn(g, |a, _| a + 1.0).unwrap();
        assert!(matches!(
            perp_gradient(&f, Some(&w)),
            Err(FieldError::NonPositiveWeight { i: 0, .. })
        ));
    }

    #[test]
    fn periodic_derivative_wraps() {
        let n = 33;
        let g = Grid2D::new((0.0, std::f64::consts::TAU), (0.0, 1.0), n, 4).unwrap();
        let f = ScalarField2D::from_fn(g, |a, _| a.sin()).unwrap();
        let d = d1(&f, Edge::Periodic).unwrap();
        let err = g
            .nodes()
            .map(|(i, j, z)| (d.at(i, j) - z[0].cos()).abs())
            .fold(0.0, f64::max);
        let h = g.h1();
        assert!(err < 0.2 * h * h, "err {err}");
    }
}
