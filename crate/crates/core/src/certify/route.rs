//! Which certifiers apply to an ansatz.

use serde::{Deserialize, Serialize};

use super::PropositionId;
use crate::profile::{classify_regime, names, FamilyVariant, Parity, RegimeTag, SelfSimilarAnsatz};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertifierKind {
    HomogeneousSwirl,
    ThetaIndependence,
    SingularFlowline,
    SectorIntegral,
    RectangleFlowline,
    BaseSign,
    PlanarEuler,
}

impl CertifierKind {
    pub fn proposition(self) -> PropositionId {
        match self {
            Self::HomogeneousSwirl => PropositionId::HomogeneousSwirlLimit,
            Self::ThetaIndependence => PropositionId::SwirlIndependence,
            Self::SingularFlowline => PropositionId::SingularFlowNonCrossing,
            Self::SectorIntegral => PropositionId::NoSectorMaximum,
            Self::RectangleFlowline => PropositionId::NoRectangleMaximum,
            Self::BaseSign => PropositionId::BaseSign,
            Self::PlanarEuler => PropositionId::PlanarEulerLimit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub regime: Option<RegimeTag>,
    pub certifiers: Vec<CertifierKind>,
    pub rationale: String,
}

fn odd_in_z2(ansatz: &SelfSimilarAnsatz, name: &str) -> bool {
    ansatz.parities.get(name).is_some_and(|p| p[1] == Parity::Odd)
}

fn any_odd(ansatz: &SelfSimilarAnsatz) -> bool {
    ansatz.parities.values().any(|p| p.contains(&Parity::Odd))
}

/// Deterministic table from regime, family variant and parity declarations
/// to the certifiers worth running. An empty list comes with the reason.
pub fn route_proposition(ansatz: &SelfSimilarAnsatz, variant: FamilyVariant) -> Route {
    use CertifierKind::*;
    let regime = match classify_regime(ansatz.alpha, ansatz.beta) {
        Ok(c) => c.tag,
        Err(e) => {
            return Route {
                regime: None,
                certifiers: vec![],
                rationale: format!("no route: {e}"),
            }
        }
    };
    let (certifiers, rationale) = match (variant, regime) {
        (FamilyVariant::Lhsc, RegimeTag::VelocityBlowup) | (FamilyVariant::Lhsc2, RegimeTag::VelocityBlowup) => (
            vec![],
            "alpha > 0 is only routed for boundary-centered families".to_string(),
        ),
        (FamilyVariant::Lhsc, _) => (
            vec![HomogeneousSwirl],
            "the first family's swirl limit is homogeneous of degree alpha/(1-alpha) < 0".to_string(),
        ),
        (FamilyVariant::Lhsc2, RegimeTag::Supercritical) => (
            vec![ThetaIndependence],
            "positive discriminant: the swirl limit is independent of z2".to_string(),
        ),
        (FamilyVariant::Lhsc2, RegimeTag::Critical) => {
            let mut list = vec![SingularFlowline, SectorIntegral, BaseSign];
            let mut why = "zero discriminant: the limit solves the self-similar Boussinesq system".to_string();
            if !any_odd(ansatz) {
                list.retain(|&k| k != SingularFlowline);
                why.push_str("; no odd parity declared, so the singular-curve test is skipped");
            }
            (list, why)
        }
        (FamilyVariant::Lhsc2, RegimeTag::Subcritical) => (
            vec![PlanarEuler],
            "negative discriminant: the swirl drops out and the limit is planar Euler".to_string(),
        ),
        (FamilyVariant::CenteredBoundary, RegimeTag::VelocityBlowup) if odd_in_z2(ansatz, names::V3) => (
            vec![PlanarEuler],
            "boundary-centered velocity blowup with odd v3: the limit is (0, c/(1-t)^alpha)".to_string(),
        ),
        (FamilyVariant::CenteredBoundary, _) => (
            vec![],
            "boundary-centered families are routed only for 0 < alpha < 1 with v3 declared odd in z2".to_string(),
        ),
    };
    Route {
        regime: Some(regime),
        certifiers,
        rationale,
    }
}
