//! Secular jump transitions, bath rates, and the population rate matrices.
//!
//! Every reservoir couples to its spin through σˣ. In the eigenbasis each
//! pair of levels `lower < upper` with a nonzero matrix element
//! `a = ⟨lower|σˣ_μ|upper⟩` contributes a decay `upper → lower` at rate
//! `2a²κ(n+1)` and an excitation `lower → upper` at rate `2a²κn`, with `n`
//! the Bose occupation of the reservoir at the transition frequency.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{pauli_word, Axis, Mat8, Spectrum, SpinLabel, DIM};

/// Default lower bound on retained transition frequencies (units of B₀).
pub const DEFAULT_EPS_ZERO: f64 = 1e-9;
/// Matrix elements below this magnitude are treated as exact zeros.
pub const DEFAULT_EPS_AMP: f64 = 1e-12;

/// Bath temperatures (k_B = 1) and flat-spectrum dissipation rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReservoirConfig {
    #[serde(rename = "T_L")]
    pub t_l: f64,
    #[serde(rename = "T_M")]
    pub t_m: f64,
    #[serde(rename = "T_R")]
    pub t_r: f64,
    #[serde(rename = "kappa_L")]
    pub kappa_l: f64,
    #[serde(rename = "kappa_M")]
    pub kappa_m: f64,
    #[serde(rename = "kappa_R")]
    pub kappa_r: f64,
}

impl ReservoirConfig {
    pub fn temperature(&self, label: SpinLabel) -> f64 {
        match label {
            SpinLabel::L => self.t_l,
            SpinLabel::M => self.t_m,
            SpinLabel::R => self.t_r,
        }
    }

    pub fn kappa(&self, label: SpinLabel) -> f64 {
        match label {
            SpinLabel::L => self.kappa_l,
            SpinLabel::M => self.kappa_m,
            SpinLabel::R => self.kappa_r,
        }
    }

    pub fn set_temperature(&mut self, label: SpinLabel, t: f64) {
        match label {
            SpinLabel::L => self.t_l = t,
            SpinLabel::M => self.t_m = t,
            SpinLabel::R => self.t_r = t,
        }
    }

    pub fn max_kappa(&self) -> f64 {
        self.kappa_l.max(self.kappa_m).max(self.kappa_r)
    }

    pub fn validate(&self) -> Result<()> {
        for label in SpinLabel::ALL {
            let t = self.temperature(label);
            let k = self.kappa(label);
            if !t.is_finite() || t < 0.0 {
                return Err(Error::invalid(format!("reservoirs.T_{label} must be finite and >= 0, got {t}")));
            }
            if !k.is_finite() || k < 0.0 {
                return Err(Error::invalid(format!("reservoirs.kappa_{label} must be finite and >= 0, got {k}")));
            }
        }
        if self.max_kappa() <= 0.0 {
            return Err(Error::invalid("at least one reservoir needs kappa > 0"));
        }
        Ok(())
    }
}

/// Mean bath occupation `1 / (exp(ω/T) − 1)`; exactly zero at `T = 0`.
pub fn planck_occupation(omega: f64, t: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::invalid(format!("occupation needs a positive frequency, got {omega}")));
    }
    if t < 0.0 || t.is_nan() {
        return Err(Error::invalid(format!("temperature must be >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (omega / t).exp_m1())
}

/// `∂n/∂T = (ω/T²) n (n + 1)`.
pub fn planck_occupation_dt(omega: f64, t: f64) -> Result<f64> {
    let n = planck_occupation(omega, t)?;
    if t == 0.0 || n == 0.0 {
        return Ok(0.0);
    }
    Ok(omega / (t * t) * n * (n + 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathRates {
    /// κn, the spectral density at +ω.
    pub absorb: f64,
    /// κ(n + 1), the spectral density at −ω.
    pub emit: f64,
}

pub fn bath_rates(omega: f64, t: f64, kappa: f64) -> Result<BathRates> {
    if !(kappa >= 0.0) {
        return Err(Error::invalid(format!("kappa must be >= 0, got {kappa}")));
    }
    let n = planck_occupation(omega, t)?;
    Ok(BathRates {
        absorb: kappa * n,
        emit: kappa * (n + 1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub reservoir: SpinLabel,
    pub lower: usize,
    pub upper: usize,
    pub frequency: f64,
    pub amplitude: f64,
}

/// Allowed transitions, grouped by reservoir.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransitionTable {
    per_reservoir: [Vec<Transition>; 3],
}

impl TransitionTable {
    pub fn for_reservoir(&self, label: SpinLabel) -> &[Transition] {
        &self.per_reservoir[label.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        self.per_reservoir.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.per_reservoir.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Smallest retained transition frequency, if any.
    pub fn min_frequency(&self) -> Option<f64> {
        self.iter().map(|t| t.frequency).reduce(f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionThresholds {
    pub eps_zero: f64,
    pub eps_amp: f64,
}

impl Default for TransitionThresholds {
    fn default() -> Self {
        TransitionThresholds {
            eps_zero: DEFAULT_EPS_ZERO,
            eps_amp: DEFAULT_EPS_AMP,
        }
    }
}

pub fn enumerate_transitions(spectrum: &Spectrum, thresholds: TransitionThresholds) -> TransitionTable {
    let mut table = TransitionTable::default();
    for label in SpinLabel::ALL {
        let a = spectrum.to_eigenbasis(&pauli_word(label, Axis::X).matrix);
        let list = &mut table.per_reservoir[label.index()];
        for lower in 0..DIM {
            for upper in lower + 1..DIM {
                let amplitude = a[(lower, upper)];
                let frequency = spectrum.energy(upper) - spectrum.energy(lower);
                if amplitude.abs() < thresholds.eps_amp || frequency <= thresholds.eps_zero {
                    continue;
                }
                list.push(Transition {
                    reservoir: label,
                    lower,
                    upper,
                    frequency,
                    amplitude,
                });
            }
        }
    }
    table
}

/// Per-reservoir population generators `M_μ` and their sum.
///
/// Column `j` holds the rates out of level `j`: `M[(i, j)]` for `i ≠ j` is the
/// rate `j → i`, and every column sums to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix {
    pub per_reservoir: [Mat8; 3],
    pub total: Mat8,
}

impl RateMatrix {
    pub fn reservoir(&self, label: SpinLabel) -> &Mat8 {
        &self.per_reservoir[label.index()]
    }

    fn from_parts(per_reservoir: [Mat8; 3]) -> Self {
        let total = per_reservoir[0] + per_reservoir[1] + per_reservoir[2];
        RateMatrix { per_reservoir, total }
    }
}

fn add_flow(m: &mut Mat8, from: usize, to: usize, rate: f64) {
    m[(to, from)] += rate;
    m[(from, from)] -= rate;
}

pub fn build_rate_matrices(table: &TransitionTable, reservoirs: &ReservoirConfig) -> Result<RateMatrix> {
    let mut parts = [Mat8::zeros(); 3];
    for tr in table.iter() {
        let kappa = reservoirs.kappa(tr.reservoir);
        if kappa == 0.0 {
            continue;
        }
        let rates = bath_rates(tr.frequency, reservoirs.temperature(tr.reservoir), kappa)?;
        let weight = 2.0 * tr.amplitude * tr.amplitude;
        let m = &mut parts[tr.reservoir.index()];
        add_flow(m, tr.upper, tr.lower, weight * rates.emit);
        add_flow(m, tr.lower, tr.upper, weight * rates.absorb);
    }
    Ok(RateMatrix::from_parts(parts))
}

/// `∂M_μ/∂T_μ`, the temperature derivative of one reservoir's generator.
pub fn rate_matrix_temperature_derivative(
    table: &TransitionTable,
    reservoirs: &ReservoirConfig,
    label: SpinLabel,
) -> Result<Mat8> {
    let mut m = Mat8::zeros();
    let kappa = reservoirs.kappa(label);
    if kappa == 0.0 {
        return Ok(m);
    }
    let t = reservoirs.temperature(label);
    for tr in table.for_reservoir(label) {
        // both absorb and emit shift by κ ∂n/∂T
        let d = 2.0 * tr.amplitude * tr.amplitude * kappa * planck_occupation_dt(tr.frequency, t)?;
        add_flow(&mut m, tr.upper, tr.lower, d);
        add_flow(&mut m, tr.lower, tr.upper, d);
    }
    Ok(m)
}

/// Flags configurations where the secular approximation is doubtful:
/// the largest κ exceeds a tenth of the smallest retained level spacing.
pub fn secular_diagnostic(table: &TransitionTable, reservoirs: &ReservoirConfig) -> Option<String> {
    let spacing = table.min_frequency()?;
    let kappa = reservoirs.max_kappa();
    (kappa > 0.1 * spacing).then(|| {
        format!("max kappa {kappa:e} exceeds a tenth of the smallest transition frequency {spacing:e}; secular rates may be unreliable")
    })
}
