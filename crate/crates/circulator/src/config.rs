//! External parameter files and unit handling.
//!
//! Parameter files are JSON objects whose keys mirror the [`SystemParams`]
//! field names. Numeric values are MHz (omega/2pi) exactly as quoted in the
//! literature and are multiplied by 2pi on ingestion; pass
//! [`UnitSystem::Angular`] to bypass the conversion. Unknown keys are
//! rejected (fail-closed configuration).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{AtomState, SystemParams};
use crate::{Error, Result, MHZ_TO_ANGULAR};

/// Unit system of numeric inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitSystem {
    /// MHz (omega/2pi); converts by 2pi on ingestion.
    #[default]
    Mhz,
    /// Values are already angular (rad/us).
    Angular,
}

impl UnitSystem {
    pub fn to_angular(self, value: f64) -> f64 {
        match self {
            UnitSystem::Mhz => value * MHZ_TO_ANGULAR,
            UnitSystem::Angular => value,
        }
    }

    pub fn from_angular(self, value: f64) -> f64 {
        match self {
            UnitSystem::Mhz => value / MHZ_TO_ANGULAR,
            UnitSystem::Angular => value,
        }
    }
}

fn atom_state_from_str(s: &str) -> Result<AtomState> {
    match s {
        "m+3" => Ok(AtomState::MPlus3),
        "m-3" => Ok(AtomState::MMinus3),
        "none" => Ok(AtomState::NoAtom),
        other => Err(Error::Config(format!(
            "unknown atom_state \"{other}\"; expected one of m+3, m-3, none"
        ))),
    }
}

pub fn atom_state_label(s: AtomState) -> &'static str {
    match s {
        AtomState::MPlus3 => "m+3",
        AtomState::MMinus3 => "m-3",
        AtomState::NoAtom => "none",
    }
}

/// Raw parameter file. Every field is optional; missing entries fall back to
/// the published defaults embedded in [`SystemParams::paper_defaults`]
/// (kappa_0 = 5, gamma = 3, g = 12, alpha^2 = 0.97, beta^2 = 0.03, working
/// point ratio 2.2).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub kappa_0: Option<f64>,
    pub kappa_a: Option<f64>,
    pub kappa_b: Option<f64>,
    pub gamma: Option<f64>,
    pub g: Option<f64>,
    /// Amplitude overlap of the ccw mode with sigma+ (dimensionless).
    pub alpha: Option<f64>,
    /// Amplitude overlap of the cw mode; derived from alpha when omitted.
    pub beta: Option<f64>,
    pub delta_rl: Option<f64>,
    pub delta_al: Option<f64>,
    /// Drive amplitude, sqrt(photons/us); defaults to the weak probe.
    pub epsilon: Option<f64>,
    pub n_max: Option<usize>,
    /// One of "m+3", "m-3", "none".
    pub atom_state: Option<String>,
}

impl ParamsFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: ParamsFile = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Ok(file)
    }

    /// Resolve against the embedded defaults. Rates and detunings are
    /// interpreted in `units`; alpha, beta, epsilon and n_max are
    /// unit-agnostic.
    pub fn resolve(&self, units: UnitSystem) -> Result<SystemParams> {
        let defaults = SystemParams::paper_defaults();
        let rate = |v: Option<f64>, dflt: f64| v.map(|x| units.to_angular(x)).unwrap_or(dflt);
        let mut params = SystemParams {
            kappa_0: rate(self.kappa_0, defaults.kappa_0),
            kappa_a: rate(self.kappa_a, defaults.kappa_a),
            kappa_b: rate(self.kappa_b, defaults.kappa_b),
            gamma: rate(self.gamma, defaults.gamma),
            g: rate(self.g, defaults.g),
            alpha: self.alpha.unwrap_or(defaults.alpha),
            beta: 0.0,
            delta_rl: rate(self.delta_rl, defaults.delta_rl),
            delta_al: rate(self.delta_al, defaults.delta_al),
            epsilon: 0.0,
            n_max: self.n_max.unwrap_or(defaults.n_max),
            atom_state: match &self.atom_state {
                Some(s) => atom_state_from_str(s)?,
                None => defaults.atom_state,
            },
        };
        params.beta = match (self.beta, self.alpha) {
            (Some(b), _) => b,
            (None, None) => defaults.beta,
            (None, Some(alpha)) => {
                let b2 = 1.0 - alpha * alpha;
                if b2 < -1e-12 {
                    return Err(Error::Config(format!("alpha = {alpha} exceeds 1")));
                }
                b2.max(0.0).sqrt()
            }
        };
        params.epsilon = self.epsilon.unwrap_or_else(|| params.default_probe_epsilon());
        params.validate()?;
        Ok(params)
    }
}

/// Snapshot of resolved parameters in external units, embedded in JSON
/// outputs for reproducibility.
#[derive(Debug, Clone, Serialize)]
pub struct ParamsSnapshot {
    pub units: &'static str,
    pub kappa_0: f64,
    pub kappa_a: f64,
    pub kappa_b: f64,
    pub kappa_tot: f64,
    pub gamma: f64,
    pub g: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta_rl: f64,
    pub delta_al: f64,
    pub epsilon: f64,
    pub n_max: usize,
    pub atom_state: String,
}

impl ParamsSnapshot {
    pub fn new(params: &SystemParams) -> Self {
        Self {
            units: "MHz (omega/2pi)",
            kappa_0: params.kappa_0 / MHZ_TO_ANGULAR,
            kappa_a: params.kappa_a / MHZ_TO_ANGULAR,
            kappa_b: params.kappa_b / MHZ_TO_ANGULAR,
            kappa_tot: params.kappa_tot() / MHZ_TO_ANGULAR,
            gamma: params.gamma / MHZ_TO_ANGULAR,
            g: params.g / MHZ_TO_ANGULAR,
            alpha: params.alpha,
            beta: params.beta,
            delta_rl: params.delta_rl / MHZ_TO_ANGULAR,
            delta_al: params.delta_al / MHZ_TO_ANGULAR,
            epsilon: params.epsilon,
            n_max: params.n_max,
            atom_state: atom_state_label(params.atom_state).to_string(),
        }
    }
}
