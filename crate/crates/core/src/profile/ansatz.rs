//! Profiles, the self-similar ansatz and its JSON manifest.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ingest::load_profile_csv;
use super::ProfileError;
use crate::field::{Grid2D, Interpolator, Method, ScalarField2D};

/// Conventional profile names.
pub mod names {
    pub const THETA: &str = "theta";
    pub const VR: &str = "vr";
    pub const V3: &str = "v3";
    pub const V1: &str = "v1";
    pub const V2: &str = "v2";
    pub const H: &str = "h";
    pub const H2: &str = "h2";
    pub const W: &str = "w";
}

/// Profiles with `‖·‖∞` at or below this count as trivial.
pub const NONTRIVIAL_TOL: f64 = 1e-12;

pub type ProfileFn = Arc<dyn Fn([f64; 2]) -> f64 + Send + Sync>;

/// A profile of the self-similar variable `z`.
#[derive(Clone)]
pub enum Profile {
    Analytic(ProfileFn),
    /// Bicubic reconstruction of sampled values.
    Gridded(ScalarField2D),
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Analytic(_) => f.write_str("Profile::Analytic"),
            Self::Gridded(g) => write!(f, "Profile::Gridded({:?})", g.grid()),
        }
    }
}

impl Profile {
    pub fn analytic(f: impl Fn([f64; 2]) -> f64 + Send + Sync + 'static) -> Self {
        Self::Analytic(Arc::new(f))
    }

    pub fn zero() -> Self {
        Self::analytic(|_| 0.0)
    }

    pub fn eval(&self, z: [f64; 2]) -> f64 {
        match self {
            Self::Analytic(f) => f(z),
            Self::Gridded(g) => Interpolator::new(g, Method::Bicubic).sample(z),
        }
    }

    /// Analytic profiles use a fourth-order central difference.
    pub fn grad(&self, z: [f64; 2]) -> [f64; 2] {
        match self {
            Self::Analytic(f) => {
                let d = |e: [f64; 2]| {
                    let h = 1e-4 * (1.0 + z[0].abs().max(z[1].abs()));
                    let at = |s: f64| f([z[0] + s * h * e[0], z[1] + s * h * e[1]]);
                    (8.0 * (at(1.0) - at(-1.0)) - (at(2.0) - at(-2.0))) / (12.0 * h)
                };
                [d([1.0, 0.0]), d([0.0, 1.0])]
            }
            Self::Gridded(g) => Interpolator::new(g, Method::Bicubic).gradient(z),
        }
    }

    /// Node values on `grid`; a gridded profile on the same grid is copied.
    pub fn sample(&self, grid: &Grid2D) -> Result<ScalarField2D, ProfileError> {
        if let Self::Gridded(g) = self {
            if g.grid() == grid {
                return Ok(g.clone());
            }
        }
        Ok(ScalarField2D::from_fn(*grid, |a, b| self.eval([a, b]))?)
    }

    pub fn grid(&self) -> Option<&Grid2D> {
        match self {
            Self::Analytic(_) => None,
            Self::Gridded(g) => Some(g.grid()),
        }
    }

    pub fn contains(&self, z: [f64; 2]) -> bool {
        self.grid().is_none_or(|g| g.contains(z))
    }

    pub fn is_gridded(&self) -> bool {
        matches!(self, Self::Gridded(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Any,
}

/// Sign expected on the open first quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignRule {
    Positive,
    Negative,
    NonNegative,
    NonPositive,
}

impl SignRule {
    pub fn holds(self, v: f64) -> bool {
        match self {
            Self::Positive => v > 0.0,
            Self::Negative => v < 0.0,
            Self::NonNegative => v >= 0.0,
            Self::NonPositive => v <= 0.0,
        }
    }
}

pub type ErrorModulus = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `(T₀ − t)/ln(1/(T₀ − t))`, an `o(T₀ − t)` modulus for `T₀ − t < 1`.
pub fn default_error_modulus(t0: f64, t: f64) -> f64 {
    let s = t0 - t;
    if s <= 0.0 {
        0.0
    } else {
        s / (1.0 / s).ln()
    }
}

/// `v = (T₀−t)^{−α} V(x/(T₀−t)^{1−α})` with optional `β` shifts between
/// components, plus declared parities, decay exponents and signs.
#[derive(Clone)]
pub struct SelfSimilarAnsatz {
    pub alpha: f64,
    pub beta: f64,
    pub t0: f64,
    pub profiles: BTreeMap<String, Profile>,
    /// Parity in `(z¹, z²)` per profile.
    pub parities: BTreeMap<String, [Parity; 2]>,
    /// Expected `p` in `|u| ~ |z|^p` at large `|z|`.
    pub decay_exponents: BTreeMap<String, f64>,
    pub signs: BTreeMap<String, SignRule>,
    pub error_modulus: Option<ErrorModulus>,
}

impl fmt::Debug for SelfSimilarAnsatz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SelfSimilarAnsatz")
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("t0", &self.t0)
            .field("profiles", &self.profiles)
            .field("parities", &self.parities)
            .field("decay_exponents", &self.decay_exponents)
            .field("signs", &self.signs)
            .finish()
    }
}

impl SelfSimilarAnsatz {
    pub fn new(alpha: f64, beta: f64, t0: f64) -> Result<Self, ProfileError> {
        if !alpha.is_finite() || alpha >= 1.0 || alpha == 0.0 {
            return Err(ProfileError::InvalidExponents(format!(
                "alpha must be nonzero and below 1, got {alpha}"
            )));
        }
        if !beta.is_finite() || beta < 0.0 {
            return Err(ProfileError::InvalidExponents(format!(
                "beta must be non-negative, got {beta}"
            )));
        }
        if !t0.is_finite() {
            return Err(ProfileError::InvalidParameter("T0 must be finite".into()));
        }
        Ok(Self {
            alpha,
            beta,
            t0,
            profiles: BTreeMap::new(),
            parities: BTreeMap::new(),
            decay_exponents: BTreeMap::new(),
            signs: BTreeMap::new(),
            error_modulus: None,
        })
    }

    pub fn with_profile(mut self, name: &str, p: Profile) -> Self {
        self.profiles.insert(name.to_string(), p);
        self
    }

    pub fn with_parity(mut self, name: &str, parity: [Parity; 2]) -> Self {
        self.parities.insert(name.to_string(), parity);
        self
    }

    pub fn with_decay(mut self, name: &str, exponent: f64) -> Self {
        self.decay_exponents.insert(name.to_string(), exponent);
        self
    }

    pub fn with_sign(mut self, name: &str, rule: SignRule) -> Self {
        self.signs.insert(name.to_string(), rule);
        self
    }

    pub fn profile(&self, name: &str) -> Result<&Profile, ProfileError> {
        self.profiles
            .get(name)
            .ok_or_else(|| ProfileError::MissingProfile(name.to_string()))
    }

    /// `error_modulus(t)`, falling back to [`default_error_modulus`].
    pub fn error_at(&self, t: f64) -> f64 {
        match &self.error_modulus {
            Some(f) => f(t),
            None => default_error_modulus(self.t0, t),
        }
    }

    /// Common grid of the gridded profiles, if any.
    pub fn grid(&self) -> Option<Grid2D> {
        self.profiles.values().find_map(|p| p.grid().copied())
    }
}

/// On-disk form: `{alpha, beta, T0, profiles: {name → csv}, parities,
/// decay_exponents, signs}`. Relative paths resolve against the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzManifest {
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(rename = "T0", default = "one")]
    pub t0: f64,
    pub profiles: BTreeMap<String, PathBuf>,
    #[serde(default)]
    pub parities: BTreeMap<String, [Parity; 2]>,
    #[serde(default)]
    pub decay_exponents: BTreeMap<String, f64>,
    #[serde(default)]
    pub signs: BTreeMap<String, SignRule>,
}

fn one() -> f64 {
    1.0
}

impl AnsatzManifest {
    pub fn from_json(text: &str) -> Result<Self, ProfileError> {
        serde_json::from_str(text).map_err(|e| ProfileError::Manifest(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, ProfileError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ProfileError::Manifest(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Loads every profile. A CSV may hold several profiles; the column named
    /// like the profile is used, or the only column if there is one.
    pub fn load(&self, base: &Path) -> Result<SelfSimilarAnsatz, ProfileError> {
        let mut a = SelfSimilarAnsatz::new(self.alpha, self.beta, self.t0)?;
        let mut grid: Option<Grid2D> = None;
        for (name, rel) in &self.profiles {
            let path = if rel.is_absolute() { rel.clone() } else { base.join(rel) };
            let table = load_profile_csv(&path, &[])?;
            let field = match table.get(name) {
                Some(f) => f.clone(),
                None if table.fields.len() == 1 => table.fields.values().next().unwrap().clone(),
                None => {
                    return Err(ProfileError::Manifest(format!(
                        "profiles.{name}: {} has no column '{name}'",
                        path.display()
                    )))
                }
            };
            match grid {
                None => grid = Some(*field.grid()),
                Some(g) if g != *field.grid() => {
                    return Err(ProfileError::Manifest(format!(
                        "profiles.{name}: grid differs from the other profiles"
                    )))
                }
                _ => {}
            }
            a.profiles.insert(name.clone(), Profile::Gridded(field));
        }
        for key in self
            .parities
            .keys()
            .chain(self.decay_exponents.keys())
            .chain(self.signs.keys())
        {
            if !self.profiles.contains_key(key) {
                return Err(ProfileError::Manifest(format!(
                    "'{key}' is declared but has no entry in profiles"
                )));
            }
        }
        a.parities = self.parities.clone();
        a.decay_exponents = self.decay_exponents.clone();
        a.signs = self.signs.clone();
        Ok(a)
    }
}
