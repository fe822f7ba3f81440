//! Blow-up sequences, near-maximal point search and domain classification.

use serde::{Deserialize, Serialize};

use super::RescaleError;
use crate::field::{ScalarField2D, TimeSeries};

/// One blow-up center `(x_k, t_k)` with magnitude `Q_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupCenter {
    /// Meridian coordinates `(r, x³)`; `r = |x'|`.
    pub x: [f64; 2],
    pub t: f64,
    #[serde(rename = "Q")]
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "kebab-case")]
pub enum DomainClass {
    FullPlane,
    HalfPlane { offset: f64 },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupSequence {
    pub alpha: f64,
    /// Comparability constant: `c⁻¹|v(x_k,t_k)| ≤ Q_k ≤ c|v(x_k,t_k)|`.
    pub c: f64,
    pub centers: Vec<BlowupCenter>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub off_axis_d: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_class: Option<DomainClass>,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<(), RescaleError> {
    if !alpha.is_finite() || alpha == 0.0 || alpha >= 1.0 {
        return Err(RescaleError::InvalidParameter(format!(
            "alpha must be finite, nonzero and below 1, got {alpha}"
        )));
    }
    Ok(())
}

impl BlowupSequence {
    pub fn new(alpha: f64, c: f64, centers: Vec<BlowupCenter>) -> Result<Self, RescaleError> {
        let s = Self {
            alpha,
            c,
            centers,
            off_axis_d: None,
            domain_class: None,
        };
        s.validate()?;
        Ok(s)
    }

    /// Checks the invariants after deserialisation.
    pub fn validate(&self) -> Result<(), RescaleError> {
        check_alpha(self.alpha)?;
        if !(self.c >= 1.0) || !self.c.is_finite() {
            return Err(RescaleError::InvalidSequence(format!(
                "c must be at least 1, got {}",
                self.c
            )));
        }
        for (k, p) in self.centers.iter().enumerate() {
            if !(p.q > 0.0) || !p.q.is_finite() {
                return Err(RescaleError::InvalidSequence(format!(
                    "centers[{k}].Q must be positive, got {}",
                    p.q
                )));
            }
            if !(p.x[0].is_finite() && p.x[1].is_finite() && p.t.is_finite()) {
                return Err(RescaleError::InvalidSequence(format!(
                    "centers[{k}] has non-finite coordinates"
                )));
            }
            if k > 0 && p.t <= self.centers[k - 1].t {
                return Err(RescaleError::InvalidSequence(format!(
                    "centers[{k}].t = {} does not increase",
                    p.t
                )));
            }
        }
        if let Some(d) = self.off_axis_d {
            if let Some((k, p)) = self.centers.iter().enumerate().find(|(_, p)| p.x[0].abs() < d) {
                return Err(RescaleError::InvalidSequence(format!(
                    "centers[{k}] has |x'| = {} below off-axis distance {d}",
                    p.x[0]
                )));
            }
        }
        Ok(())
    }

    pub fn with_off_axis(mut self, d: f64) -> Result<Self, RescaleError> {
        self.off_axis_d = Some(d);
        self.validate()?;
        Ok(self)
    }

    /// Worst violation of `c⁻¹|v| ≤ Q ≤ c|v|` given the speeds at the centers;
    /// non-positive when comparable.
    pub fn comparability_defect(&self, speeds: &[f64]) -> Result<f64, RescaleError> {
        if speeds.len() != self.centers.len() {
            return Err(RescaleError::InvalidSequence(format!(
                "{} speeds for {} centers",
                speeds.len(),
                self.centers.len()
            )));
        }
        Ok(self
            .centers
            .iter()
            .zip(speeds)
            .map(|(p, &v)| (v / self.c - p.q).max(p.q - self.c * v))
            .fold(f64::NEG_INFINITY, f64::max))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sequence serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, RescaleError> {
        let s: Self = serde_json::from_str(text)
            .map_err(|e| RescaleError::InvalidSequence(format!("manifest: {e}")))?;
        s.validate()?;
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NearMaximal {
    pub sequence: BlowupSequence,
    /// Snapshot index of every accepted center.
    pub indices: Vec<usize>,
    /// Requested indices that did not qualify, with the reason.
    pub rejected: Vec<(usize, String)>,
}

/// Accepts snapshot `k` when its largest speed is at least `c` times the
/// running supremum over snapshots `0..=k`.
pub fn find_near_maximal(
    speeds: &TimeSeries<ScalarField2D>,
    c: f64,
    alpha: f64,
    indices: &[usize],
) -> Result<NearMaximal, RescaleError> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(RescaleError::InvalidParameter(format!(
            "near-maximal constant must lie in (0, 1], got {c}"
        )));
    }
    check_alpha(alpha)?;
    let snaps = speeds.snapshots();
    let mut running = Vec::with_capacity(snaps.len());
    let mut sup = f64::NEG_INFINITY;
    for s in snaps {
        sup = sup.max(s.max());
        running.push(sup);
    }
    let mut sorted: Vec<usize> = indices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut centers = Vec::new();
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    for k in sorted {
        let Some(s) = snaps.get(k) else {
            rejected.push((k, format!("index beyond {} snapshots", snaps.len())));
            continue;
        };
        let (i, j) = s.argmax();
        let q = s.at(i, j);
        if !(q > 0.0) {
            rejected.push((k, "speed vanishes".into()));
        } else if q < c * running[k] {
            rejected.push((k, format!("max {q} below {c} x past sup {}", running[k])));
        } else {
            centers.push(BlowupCenter {
                x: s.grid().node(i, j),
                t: speeds.times()[k],
                q,
            });
            accepted.push(k);
        }
    }
    Ok(NearMaximal {
        sequence: BlowupSequence::new(alpha, 1.0, centers)?,
        indices: accepted,
        rejected,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainOptions {
    /// Scaled distances beyond this count as diverging.
    pub threshold: f64,
    /// Number of trailing centers inspected.
    pub tail: usize,
    /// Relative spread below which the tail counts as converged.
    pub rtol: f64,
}

impl Default for DomainOptions {
    fn default() -> Self {
        Self {
            threshold: 1e3,
            tail: 5,
            rtol: 0.05,
        }
    }
}

/// Scaled boundary distances `Q_k^{(1−α)/α}(1 − |x'_k|)`.
pub fn scaled_boundary_distances(seq: &BlowupSequence, alpha: f64) -> Result<Vec<f64>, RescaleError> {
    check_alpha(alpha)?;
    seq.centers
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let r = p.x[0].abs();
            if r > 1.0 + 1e-12 {
                return Err(RescaleError::InvalidSequence(format!(
                    "centers[{k}] lies outside the unit cylinder, |x'| = {r}"
                )));
            }
            Ok(p.q.powf((1.0 - alpha) / alpha) * (1.0 - r).max(0.0))
        })
        .collect()
}

pub fn classify_domain(seq: &BlowupSequence, alpha: f64) -> Result<DomainClass, RescaleError> {
    classify_domain_with(seq, alpha, DomainOptions::default())
}

pub fn classify_domain_with(
    seq: &BlowupSequence,
    alpha: f64,
    opts: DomainOptions,
) -> Result<DomainClass, RescaleError> {
    let d = scaled_boundary_distances(seq, alpha)?;
    if d.is_empty() {
        return Err(RescaleError::InvalidSequence("no centers".into()));
    }
    let tail = &d[d.len().saturating_sub(opts.tail.max(1))..];
    if tail.iter().all(|&x| x == 0.0) {
        return Ok(DomainClass::HalfPlane { offset: 0.0 });
    }
    let increasing = tail.windows(2).all(|w| w[1] > w[0]);
    if increasing && tail[tail.len() - 1] > opts.threshold {
        return Ok(DomainClass::FullPlane);
    }
    let mut sorted = tail.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    let spread = sorted[sorted.len() - 1] - sorted[0];
    if spread <= opts.rtol * median.abs().max(1.0) {
        return Ok(DomainClass::HalfPlane { offset: median });
    }
    Ok(DomainClass::Inconclusive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid2D;

    fn seq(points: &[(f64, f64)], alpha: f64) -> BlowupSequence {
        let centers = points
            .iter()
            .enumerate()
            .map(|(k, &(r, q))| BlowupCenter {
                x: [r, 0.0],
                t: k as f64,
                q,
            })
            .collect();
        BlowupSequence::new(alpha, 1.0, centers).unwrap()
    }

    #[test]
    fn boundary_centers_give_half_plane_zero() {
        let s = seq(&[(1.0, 10.0), (1.0, 100.0), (1.0, 1000.0)], 0.5);
        assert_eq!(classify_domain(&s, 0.5).unwrap(), DomainClass::HalfPlane { offset: 0.0 });
    }

    #[test]
    fn fixed_interior_radius_gives_full_plane() {
        let pts: Vec<(f64, f64)> = (1..=6).map(|k| (0.5, 10f64.powi(k))).collect();
        assert_eq!(classify_domain(&seq(&pts, 0.5), 0.5).unwrap(), DomainClass::FullPlane);
    }

    #[test]
    fn planted_offset_is_recovered_and_shift_invariant() {
        let alpha = 0.5;
        let pts: Vec<(f64, f64)> = (1..=8)
            .map(|k| {
                let q = 2f64.powi(k + 3);
                (1.0 - 3.0 * q.powf(-(1.0 - alpha) / alpha), q)
            })
            .collect();
        let full = classify_domain(&seq(&pts, alpha), alpha).unwrap();
        let DomainClass::HalfPlane { offset } = full else {
            panic!("{full:?}")
        };
        assert!((offset - 3.0).abs() < 1e-9);
        assert_eq!(classify_domain(&seq(&pts[2..], alpha), alpha).unwrap(), full);
    }

    #[test]
    fn oscillating_sequence_is_inconclusive() {
        let pts: Vec<(f64, f64)> = (1..=6)
            .map(|k| (1.0 - if k % 2 == 0 { 0.5 } else { 0.01 }, 1.0 + k as f64))
            .collect();
        assert_eq!(classify_domain(&seq(&pts, 0.5), 0.5).unwrap(), DomainClass::Inconclusive);
    }

    #[test]
    fn manifest_round_trip() {
        let s = seq(&[(0.9, 2.0), (0.95, 4.0)], 0.5).with_off_axis(0.5).unwrap();
        let back = BlowupSequence::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert!(s.to_json().contains("\"Q\""));
        let bad = s.to_json().replace("\"Q\": 4.0", "\"Q\": -4.0");
        assert!(BlowupSequence::from_json(&bad).is_err());
    }

    #[test]
    fn near_maximal_on_growing_and_constant_fields() {
        let g = Grid2D::square(-1.0, 1.0, 21).unwrap();
        let times = vec![0.0, 0.5, 0.75, 0.875];
        let snaps: Vec<ScalarField2D> = times
            .iter()
            .map(|t| ScalarField2D::from_fn(g, |x, y| (1.0 + (x - 0.3).powi(2) + y * y).recip() / (1.0 - t)).unwrap())
            .collect();
        let series = TimeSeries::new(times.clone(), snaps).unwrap();
        let nm = find_near_maximal(&series, 1.0, 0.5, &[0, 1, 2, 3]).unwrap();
        assert_eq!(nm.indices, vec![0, 1, 2, 3]);
        for (p, t) in nm.sequence.centers.iter().zip(&times) {
            assert!((p.x[0] - 0.3).abs() < 1e-12 && p.x[1].abs() < 1e-12);
            assert!((p.q - 1.0 / (1.0 - t)).abs() < 1e-12);
        }
        let flat = ScalarField2D::constant(g, 2.0).unwrap();
        let series = TimeSeries::new(times, vec![flat; 4]).unwrap();
        let nm = find_near_maximal(&series, 1.0, 0.5, &[3, 1]).unwrap();
        assert_eq!(nm.indices, vec![1, 3]);
        // Ties go to the first node.
        assert_eq!(nm.sequence.centers[0].x, [-1.0, -1.0]);
    }

    #[test]
    fn decaying_snapshot_is_reported_not_fatal() {
        let g = Grid2D::square(0.0, 1.0, 5).unwrap();
        let a = ScalarField2D::constant(g, 2.0).unwrap();
        let b = ScalarField2D::constant(g, 1.0).unwrap();
        let series = TimeSeries::new(vec![0.0, 1.0], vec![a, b]).unwrap();
        let nm = find_near_maximal(&series, 0.9, 0.5, &[0, 1, 7]).unwrap();
        assert_eq!(nm.indices, vec![0]);
        assert_eq!(nm.rejected.len(), 2);
    }
}
