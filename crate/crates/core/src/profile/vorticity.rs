//! Consistency of a claimed vorticity profile with `W = ∂₂V¹ − ∂₁V²`.

use serde::Serialize;

use super::ingest::ProfileTable;
use super::ProfileError;
use crate::field::{curl2d, d1, d2, Edge, ScalarField2D, VectorField2D};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VorticityCheck {
    pub accuracy: f64,
    #[serde(skip)]
    pub mismatch: ScalarField2D,
    pub max_mismatch: f64,
    /// Nodes whose mismatch exceeds `accuracy`.
    pub flagged: Vec<(usize, usize)>,
}

/// `|W_claimed − curl V|` with the default difference stencils.
pub fn vorticity_consistency(
    v: &VectorField2D,
    w_claimed: &ScalarField2D,
    accuracy: f64,
) -> Result<VorticityCheck, ProfileError> {
    v.grid().ensure_same(w_claimed.grid())?;
    let curl = curl2d(v)?;
    let mismatch = w_claimed.zip_with(&curl, |a, b| (a - b).abs())?;
    let flagged = mismatch
        .grid()
        .nodes()
        .filter(|&(i, j, _)| mismatch.at(i, j) > accuracy)
        .map(|(i, j, _)| (i, j))
        .collect();
    Ok(VorticityCheck {
        accuracy,
        max_mismatch: mismatch.sup_norm(),
        mismatch,
        flagged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointMismatch {
    pub w_claimed: f64,
    pub d2v1: f64,
    pub d1v2: f64,
    pub w_computed: f64,
    pub mismatch: f64,
    pub flagged: bool,
}

/// Pointwise check when the derivatives are supplied directly.
pub fn vorticity_from_derivatives(w_claimed: f64, d2v1: f64, d1v2: f64, accuracy: f64) -> PointMismatch {
    let w_computed = d2v1 - d1v2;
    let mismatch = (w_claimed - w_computed).abs();
    PointMismatch {
        w_claimed,
        d2v1,
        d1v2,
        w_computed,
        mismatch,
        flagged: mismatch > accuracy,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodeMismatch {
    /// Mesh label from the file.
    pub mesh: (usize, usize),
    pub z: [f64; 2],
    #[serde(flatten)]
    pub point: PointMismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableCheck {
    /// `"derivatives"` for `w,d2v1,d1v2` columns, `"velocity"` for `w,v1,v2`.
    pub source: &'static str,
    pub accuracy: f64,
    pub max_mismatch: f64,
    pub worst: NodeMismatch,
    pub flagged: Vec<NodeMismatch>,
}

/// Checks an ingested table, preferring precomputed derivative columns.
pub fn vorticity_table_check(table: &ProfileTable, accuracy: f64) -> Result<TableCheck, ProfileError> {
    let w = table.require("w")?;
    let (source, d2v1, d1v2) = match (table.get("d2v1"), table.get("d1v2")) {
        (Some(a), Some(b)) => ("derivatives", a.clone(), b.clone()),
        _ => (
            "velocity",
            d2(table.require("v1")?, Edge::OneSided)?,
            d1(table.require("v2")?, Edge::OneSided)?,
        ),
    };
    let mut worst: Option<NodeMismatch> = None;
    let mut flagged = Vec::new();
    for (i, j, z) in table.grid.nodes() {
        let n = NodeMismatch {
            mesh: table.label(i, j),
            z,
            point: vorticity_from_derivatives(w.at(i, j), d2v1.at(i, j), d1v2.at(i, j), accuracy),
        };
        if worst.is_none_or(|b| n.point.mismatch > b.point.mismatch) {
            worst = Some(n);
        }
        if n.point.flagged {
            flagged.push(n);
        }
    }
    let worst = worst.expect("grids have at least one node");
    Ok(TableCheck {
        source,
        accuracy,
        max_mismatch: worst.point.mismatch,
        worst,
        flagged,
    })
}
