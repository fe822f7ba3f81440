//! Small numerical kernels shared across modules.

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Fixed-rule Gauss–Legendre integral of `f` on `[a, b]`.
pub fn gauss_fixed(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    h * rule.0.iter().zip(&rule.1).map(|(x, w)| w * f(c + h * x)).sum::<f64>()
}

/// Adaptive bisection with a 10-point Gauss–Legendre rule, to absolute `tol`.
pub fn adaptive_gauss(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
        rule: &(Vec<f64>, Vec<f64>),
    ) -> f64 {
        let m = 0.5 * (a + b);
        let left = gauss_fixed(f, a, m, rule);
        let right = gauss_fixed(f, m, b, rule);
        // Tolerances below the rounding floor are not pursued.
        let floor = 4.0 * f64::EPSILON * (left.abs() + right.abs());
        if depth == 0 || (left + right - whole).abs() <= tol.max(floor) {
            left + right
        } else {
            rec(f, a, m, left, 0.5 * tol, depth - 1, rule)
                + rec(f, m, b, right, 0.5 * tol, depth - 1, rule)
        }
    }
    if a == b {
        return 0.0;
    }
    let rule = gauss_legendre(10);
    let whole = gauss_fixed(f, a, b, &rule);
    rec(f, a, b, whole, tol, 40, &rule)
}

/// One classical Runge–Kutta step for an autonomous-in-form system.
pub fn rk4_step<const N: usize>(
    f: &dyn Fn(f64, &[f64; N]) -> [f64; N],
    t: f64,
    y: &[f64; N],
    h: f64,
) -> [f64; N] {
    let add = |y: &[f64; N], k: &[f64; N], s: f64| {
        let mut out = *y;
        for i in 0..N {
            out[i] += s * k[i];
        }
        out
    };
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &add(y, &k1, 0.5 * h));
    let k3 = f(t + 0.5 * h, &add(y, &k2, 0.5 * h));
    let k4 = f(t + h, &add(y, &k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Error-free transformation `a + b = s + e`.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Exact sign (-1, 0, 1) of a sum of finite doubles.
///
/// The terms are accumulated into a non-overlapping expansion, whose most
/// significant nonzero component carries the sign of the exact sum.
pub fn exact_sum_sign(terms: &[f64]) -> i32 {
    let mut expansion: Vec<f64> = Vec::new();
    for &t in terms {
        let mut q = t;
        let mut next = Vec::with_capacity(expansion.len() + 1);
        for &e in &expansion {
            let (s, err) = two_sum(q, e);
            if err != 0.0 {
                next.push(err);
            }
            q = s;
        }
        if q != 0.0 {
            next.push(q);
        }
        expansion = next;
    }
    match expansion.last() {
        Some(v) if *v > 0.0 => 1,
        Some(v) if *v < 0.0 => -1,
        _ => 0,
    }
}

/// Exact product as an unevaluated sum `hi + lo`.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Ordinary least squares line through `(x, y)`: `(slope, intercept, rms residual)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - icpt - slope * a).powi(2))
        .sum();
    (slope, icpt, (rss / n).sqrt())
}

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Smooth compactly supported bump `exp(-1/(1-s²))` on `(-1, 1)` and its
/// first derivative.
#[inline]
pub fn bump(s: f64) -> (f64, f64) {
    if s.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let q = 1.0 - s * s;
    let v = (-1.0 / q).exp();
    (v, v * (-2.0 * s / (q * q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rules() {
        let (x, w) = gauss_legendre(10);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let m18: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((m18 - 2.0 / 19.0).abs() < 1e-14);
        let v = adaptive_gauss(&|s| 1.0 / s, 1.0, 10.0, 1e-15);
        assert!((v - 10f64.ln()).abs() < 2e-15);
    }

    #[test]
    fn simpson_polynomial_and_exp() {
        let v = adaptive_simpson(&|x| x * x * x, 0.0, 2.0, 1e-12);
        assert!((v - 4.0).abs() < 1e-12);
        let v = adaptive_simpson(&|x: f64| x.exp(), 0.0, 1.0, 1e-13);
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn rk4_exponential() {
        let f = |_t: f64, y: &[f64; 1]| [y[0]];
        let mut y = [1.0];
        let h = 1e-2;
        for k in 0..100 {
            y = rk4_step(&f, k as f64 * h, &y, h);
        }
        assert!((y[0] - 1f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn exact_sign_sees_below_rounding() {
        assert_eq!(exact_sum_sign(&[1.0, 1e-30, -1.0]), 1);
        assert_eq!(exact_sum_sign(&[1.0, -1e-30, -1.0]), -1);
        assert_eq!(exact_sum_sign(&[0.1, 0.2, -0.1, -0.2]), 0);
        assert_eq!(exact_sum_sign(&[]), 0);
    }

    #[test]
    fn fit_recovers_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|a| 2.0 * a - 1.0).collect();
        let (s, c, r) = linear_fit(&x, &y);
        assert!((s - 2.0).abs() < 1e-14 && (c + 1.0).abs() < 1e-14 && r < 1e-14);
    }
}
