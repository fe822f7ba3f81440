//! Exponent regimes of the ansatz `(α, β)`.

use serde::{Deserialize, Serialize};

use super::ProfileError;
use crate::numeric::exact_sum_sign;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeTag {
    VelocityBlowup,
    Supercritical,
    Critical,
    Subcritical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeClass {
    pub tag: RegimeTag,
    /// `−2β/α + 1/α − 1` in floating point; the tag uses the exact sign.
    pub discriminant: f64,
}

/// Classifies `(α, β)`. For `α < 0` the sign of the discriminant equals
/// `−sign(1 − α − 2β)`, which is evaluated exactly.
pub fn classify_regime(alpha: f64, beta: f64) -> Result<RegimeClass, ProfileError> {
    if !alpha.is_finite() || alpha == 0.0 || alpha >= 1.0 {
        return Err(ProfileError::InvalidExponents(format!(
            "alpha must be nonzero and below 1, got {alpha}"
        )));
    }
    if !beta.is_finite() || beta < 0.0 {
        return Err(ProfileError::InvalidExponents(format!(
            "beta must be finite and non-negative, got {beta}"
        )));
    }
    let discriminant = -2.0 * beta / alpha + 1.0 / alpha - 1.0;
    let tag = if alpha > 0.0 {
        RegimeTag::VelocityBlowup
    } else {
        match -exact_sum_sign(&[1.0, -alpha, -2.0 * beta]) {
            1 => RegimeTag::Supercritical,
            0 => RegimeTag::Critical,
            _ => RegimeTag::Subcritical,
        }
    };
    Ok(RegimeClass { tag, discriminant })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_pairs() {
        let c = classify_regime(-2.0, 1.5).unwrap();
        assert_eq!(c.tag, RegimeTag::Critical);
        assert_eq!(c.discriminant, 0.0);
        let c = classify_regime(-2.0, 2.0).unwrap();
        assert_eq!(c.tag, RegimeTag::Supercritical);
        assert_eq!(c.discriminant, 0.5);
        let c = classify_regime(-2.0, 1.0).unwrap();
        assert_eq!(c.tag, RegimeTag::Subcritical);
        assert_eq!(c.discriminant, -0.5);
        assert_eq!(classify_regime(0.5, 3.0).unwrap().tag, RegimeTag::VelocityBlowup);
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(classify_regime(0.0, 1.0).is_err());
        assert!(classify_regime(1.0, 1.0).is_err());
        assert!(classify_regime(f64::NAN, 1.0).is_err());
        assert!(classify_regime(-1.0, -0.1).is_err());
    }

    #[test]
    fn near_critical_uses_exact_sign() {
        // 1 − α − 2β is a single ulp away from zero here.
        let alpha = -2.0;
        let beta = 1.5 + f64::EPSILON;
        assert_eq!(classify_regime(alpha, beta).unwrap().tag, RegimeTag::Supercritical);
        let beta = 1.5 - f64::EPSILON;
        assert_eq!(classify_regime(alpha, beta).unwrap().tag, RegimeTag::Subcritical);
    }
}
