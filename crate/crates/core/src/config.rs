//! The full parameter set of one scenario and its prepared numerical form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lindblad::{
    build_rate_matrices, enumerate_transitions, secular_diagnostic, RateMatrix, ReservoirConfig, TransitionTable,
    TransitionThresholds, DEFAULT_EPS_AMP, DEFAULT_EPS_ZERO,
};
use crate::model::{build_hamiltonian, diagonalize, CouplingConfig, FieldConfig, Spectrum};
use crate::steadystate::{
    detect_subspaces, steady_state_with, InitialState, PopulationVector, SteadySolution, SubspaceDecomposition,
    DEFAULT_EPS_CONN,
};

/// Default step for finite-difference temperature derivatives.
pub const DEFAULT_DT: f64 = 1e-4;

fn default_eps_zero() -> f64 {
    DEFAULT_EPS_ZERO
}
fn default_eps_conn() -> f64 {
    DEFAULT_EPS_CONN
}
fn default_dt() -> f64 {
    DEFAULT_DT
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Transitions at or below this frequency are dropped.
    #[serde(default = "default_eps_zero")]
    pub eps_zero: f64,
    /// Connectivity threshold relative to `max |M|`.
    #[serde(default = "default_eps_conn")]
    pub eps_conn: f64,
    /// Temperature step for central differences.
    #[serde(rename = "dT", default = "default_dt")]
    pub dt: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_zero: DEFAULT_EPS_ZERO,
            eps_conn: DEFAULT_EPS_CONN,
            dt: DEFAULT_DT,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eps_zero", self.eps_zero), ("eps_conn", self.eps_conn), ("dT", self.dt)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(format!("tolerances.{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }

    pub fn thresholds(&self) -> TransitionThresholds {
        TransitionThresholds {
            eps_zero: self.eps_zero,
            eps_amp: DEFAULT_EPS_AMP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub fields: FieldConfig,
    #[serde(default)]
    pub coupling: CouplingConfig,
    pub reservoirs: ReservoirConfig,
    #[serde(default)]
    pub initial: InitialState,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        self.fields.validate()?;
        self.coupling.validate()?;
        self.reservoirs.validate()?;
        self.initial.validate()?;
        self.tolerances.validate()
    }
}

/// A configuration with its spectrum, transitions and rate matrices built.
#[derive(Debug, Clone)]
pub struct System {
    pub config: SystemConfig,
    pub spectrum: Spectrum,
    pub transitions: TransitionTable,
    pub rates: RateMatrix,
}

impl System {
    pub fn new(config: &SystemConfig) -> Result<System> {
        config.validate()?;
        let spectrum = diagonalize(&build_hamiltonian(&config.fields, &config.coupling))?;
        let transitions = enumerate_transitions(&spectrum, config.tolerances.thresholds());
        let rates = build_rate_matrices(&transitions, &config.reservoirs)?;
        // sweeps build thousands of systems; callers surface this once via `secular_warning`
        if let Some(msg) = secular_diagnostic(&transitions, &config.reservoirs) {
            log::debug!("{msg}");
        }
        Ok(System {
            config: config.clone(),
            spectrum,
            transitions,
            rates,
        })
    }

    /// Set when some transition frequency is within ten dissipation rates of zero.
    pub fn secular_warning(&self) -> Option<String> {
        secular_diagnostic(&self.transitions, &self.config.reservoirs)
    }

    pub fn decomposition(&self) -> SubspaceDecomposition {
        detect_subspaces(&self.rates.total, self.config.tolerances.eps_conn)
    }

    pub fn initial_populations(&self, decomposition: &SubspaceDecomposition) -> Result<PopulationVector> {
        self.config.initial.resolve(&self.spectrum, decomposition)
    }

    /// Steady state reached from the configured initial state.
    pub fn steady_state(&self) -> Result<SteadySolution> {
        let decomposition = self.decomposition();
        let initial = self.initial_populations(&decomposition)?;
        steady_state_with(&self.rates.total, decomposition, &initial)
    }
}
