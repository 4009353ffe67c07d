//! Heat currents, amplification, rectification and parameter sweeps.

use std::f64::consts::PI;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::config::{System, SystemConfig};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lindblad::{rate_matrix_temperature_derivative, RateMatrix};
use crate::model::{Mat8, Spectrum, SpinLabel, Vec8};
use crate::steadystate::{block, component_states, InitialState, PopulationVector, SteadySolution, SubspaceDecomposition};

/// Heat flowing from each reservoir into the system per unit time.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HeatCurrents {
    #[serde(rename = "Q_L")]
    pub q_l: f64,
    #[serde(rename = "Q_M")]
    pub q_m: f64,
    #[serde(rename = "Q_R")]
    pub q_r: f64,
}

impl HeatCurrents {
    pub fn get(&self, label: SpinLabel) -> f64 {
        match label {
            SpinLabel::L => self.q_l,
            SpinLabel::M => self.q_m,
            SpinLabel::R => self.q_r,
        }
    }

    pub fn total(&self) -> f64 {
        self.q_l + self.q_m + self.q_r
    }

    pub fn max_abs(&self) -> f64 {
        self.q_l.abs().max(self.q_m.abs()).max(self.q_r.abs())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.q_l, self.q_m, self.q_r]
    }
}

/// `Q_μ = ωᵀ M_μ ρ` for an arbitrary population vector.
pub fn currents_for(rates: &RateMatrix, spectrum: &Spectrum, populations: &Vec8) -> HeatCurrents {
    let q = |label| spectrum.energies.dot(&(rates.reservoir(label) * populations));
    HeatCurrents {
        q_l: q(SpinLabel::L),
        q_m: q(SpinLabel::M),
        q_r: q(SpinLabel::R),
    }
}

pub fn heat_currents(rates: &RateMatrix, spectrum: &Spectrum, steady: &SteadySolution) -> HeatCurrents {
    currents_for(rates, spectrum, &steady.populations())
}

/// Currents carried by each component's own steady state (weight one).
pub fn component_currents(rates: &RateMatrix, spectrum: &Spectrum, steady: &SteadySolution) -> Vec<HeatCurrents> {
    steady
        .component_states
        .iter()
        .map(|s| currents_for(rates, spectrum, s))
        .collect()
}

pub fn transient_currents(rates: &RateMatrix, spectrum: &Spectrum, trajectory: &[PopulationVector]) -> Vec<HeatCurrents> {
    trajectory
        .iter()
        .map(|p| currents_for(rates, spectrum, p.as_vector()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmplificationMethod {
    /// Exact derivative of the steady state by implicit differentiation of `M ρ = 0`.
    #[default]
    LinearResponse,
    /// Central difference with step `tolerances.dT`.
    CentralDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplificationResult {
    pub t_m: f64,
    pub alpha_l: f64,
    pub alpha_r: f64,
    pub dqm_dtm: f64,
    pub dql_dtm: f64,
    pub dqr_dtm: f64,
    /// False when `Q_M` is stationary in `T_M`; the alphas are NaN then.
    pub defined: bool,
}

impl AmplificationResult {
    fn from_derivatives(t_m: f64, d: [f64; 3]) -> Self {
        let [dl, dm, dr] = d;
        let defined = dm.abs() > 1e-9 * (dl.abs() + dr.abs()) && dm != 0.0;
        let (alpha_l, alpha_r) = if defined { (dl / dm, dr / dm) } else { (f64::NAN, f64::NAN) };
        AmplificationResult {
            t_m,
            alpha_l,
            alpha_r,
            dqm_dtm: dm,
            dql_dtm: dl,
            dqr_dtm: dr,
            defined,
        }
    }
}

fn with_t_m(config: &SystemConfig, t_m: f64) -> SystemConfig {
    let mut c = config.clone();
    c.reservoirs.t_m = t_m;
    c
}

/// `α_μ = ∂Q_μ/∂Q_M` at fixed `T_L`, `T_R`, varying `T_M`.
pub fn amplification(config: &SystemConfig, t_m: f64, method: AmplificationMethod) -> Result<AmplificationResult> {
    if !(t_m > 0.0) || !t_m.is_finite() {
        return Err(Error::invalid(format!("T_M must be > 0, got {t_m}")));
    }
    match method {
        AmplificationMethod::CentralDifference => {
            let dt = config.tolerances.dt;
            if t_m - dt <= 0.0 {
                return Err(Error::invalid(format!("T_M - dT must stay positive (T_M = {t_m}, dT = {dt})")));
            }
            let q = |t: f64| -> Result<HeatCurrents> {
                let sys = System::new(&with_t_m(config, t))?;
                let steady = sys.steady_state()?;
                Ok(heat_currents(&sys.rates, &sys.spectrum, &steady))
            };
            let (up, dn) = (q(t_m + dt)?, q(t_m - dt)?);
            let d = [up.q_l - dn.q_l, up.q_m - dn.q_m, up.q_r - dn.q_r].map(|x| x / (2.0 * dt));
            Ok(AmplificationResult::from_derivatives(t_m, d))
        }
        AmplificationMethod::LinearResponse => {
            let sys = System::new(&with_t_m(config, t_m))?;
            let steady = sys.steady_state()?;
            let dm = rate_matrix_temperature_derivative(&sys.transitions, &sys.config.reservoirs, SpinLabel::M)?;
            let drho = steady_state_derivative(&sys.rates.total, &dm, &steady);
            let rho = steady.populations();
            let w = &sys.spectrum.energies;
            let d = SpinLabel::ALL.map(|label| {
                let mut flow = sys.rates.reservoir(label) * drho;
                if label == SpinLabel::M {
                    flow += dm * rho;
                }
                w.dot(&flow)
            });
            Ok(AmplificationResult::from_derivatives(t_m, d))
        }
    }
}

/// `dρ` solving `M dρ = −dM ρ` per component, with component weights held fixed.
fn steady_state_derivative(total: &Mat8, dm: &Mat8, steady: &SteadySolution) -> Vec8 {
    let mut out = Vec8::zeros();
    for ((comp, state), w) in steady
        .decomposition
        .components()
        .iter()
        .zip(&steady.component_states)
        .zip(&steady.weights)
    {
        if comp.len() < 2 || *w == 0.0 {
            continue;
        }
        let m = block(total, comp);
        let d = block(dm, comp);
        let rho = DVector::from_iterator(comp.len(), comp.iter().map(|&i| state[i]));
        let svd = m.svd(true, true);
        let eps = svd.singular_values.max() * comp.len() as f64 * f64::EPSILON;
        let pinv = svd.pseudo_inverse(eps).expect("tolerance is nonnegative");
        let mut x = -(pinv * (d * &rho));
        let shift = x.sum();
        x -= rho * shift;
        for (a, &i) in comp.iter().enumerate() {
            out[i] += w * x[a];
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectificationResult {
    pub q_forward: f64,
    pub q_reverse: f64,
    pub r: f64,
}

/// Rectification `|Q_f + Q_r| / max(|Q_f|, |Q_r|)` of the left current
/// under exchange of `T_L` and `T_R`.
pub fn rectification(config: &SystemConfig) -> Result<RectificationResult> {
    if config.reservoirs.kappa_m != 0.0 {
        log::warn!("rectification assumes a two-terminal device but kappa_M = {}", config.reservoirs.kappa_m);
    }
    let q_l = |c: &SystemConfig| -> Result<f64> {
        let sys = System::new(c)?;
        let steady = sys.steady_state()?;
        Ok(heat_currents(&sys.rates, &sys.spectrum, &steady).q_l)
    };
    let q_forward = q_l(config)?;
    let mut swapped = config.clone();
    std::mem::swap(&mut swapped.reservoirs.t_l, &mut swapped.reservoirs.t_r);
    let q_reverse = q_l(&swapped)?;
    let floor = 1e-15 * config.reservoirs.max_kappa();
    let denom = q_forward.abs().max(q_reverse.abs());
    let r = if denom < floor { 0.0 } else { (q_forward + q_reverse).abs() / denom };
    Ok(RectificationResult { q_forward, q_reverse, r })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepFlag {
    #[default]
    None,
    /// More than one invariant subspace; the row depends on the initial state.
    Decoupled,
    /// `T_M` row whose `Q_M` changes sign before the next row.
    SignChange,
}

impl SweepFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepFlag::None => "",
            SweepFlag::Decoupled => "decoupled",
            SweepFlag::SignChange => "sign_change",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub currents: HeatCurrents,
    pub components: usize,
    pub flag: SweepFlag,
    /// Per-component currents, filled only for decoupled rows.
    pub component_currents: Vec<HeatCurrents>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaPolicy {
    /// Thread each steady state into the next angle's initial populations.
    CarryPrevious,
    /// Use `subspace_fraction = p` wherever the angle is decoupled.
    FixedP(f64),
}

/// Window around `sπ` treated as exactly longitudinal when `κ_M = 0`.
pub const LONGITUDINAL_SNAP: f64 = 1e-6;

struct ThetaPoint {
    theta: f64,
    system: System,
    decomposition: SubspaceDecomposition,
    states: Vec<Vec8>,
}

fn snap_theta(theta: f64, kappa_m: f64) -> f64 {
    if kappa_m == 0.0 {
        let s = (theta / PI).round();
        if (theta - s * PI).abs() < LONGITUDINAL_SNAP {
            return s * PI;
        }
    }
    theta
}

pub fn theta_sweep(
    config: &SystemConfig,
    thetas: &[f64],
    policy: ThetaPolicy,
    exec: Execution,
) -> Result<Vec<SweepRow>> {
    config.validate()?;
    if thetas.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("theta grid must be ascending"));
    }
    if let ThetaPolicy::FixedP(p) = policy {
        InitialState::SubspaceFraction(p).validate()?;
    }
    let points = exec.try_map(thetas, |&theta| {
        let mut c = config.clone();
        c.fields.theta = snap_theta(theta, c.reservoirs.kappa_m);
        let system = System::new(&c)?;
        let decomposition = system.decomposition();
        let states = component_states(&system.rates.total, &decomposition)?;
        Ok(ThetaPoint {
            theta,
            system,
            decomposition,
            states,
        })
    })?;

    let mut rows = Vec::with_capacity(points.len());
    let mut previous: Option<(Spectrum, Vec8)> = None;
    for pt in points {
        let sys = &pt.system;
        let initial = match (policy, &previous) {
            (ThetaPolicy::CarryPrevious, Some((spec, pops))) => {
                let v = sys.spectrum.reproject(spec, pops);
                PopulationVector::new(v / v.sum())?
            }
            (ThetaPolicy::FixedP(p), _) if pt.decomposition.len() > 1 => {
                InitialState::SubspaceFraction(p).resolve(&sys.spectrum, &pt.decomposition)?
            }
            _ => sys.initial_populations(&pt.decomposition)?,
        };
        let weights = pt.decomposition.components().iter().map(|c| initial.sum_over(c)).collect();
        let steady = SteadySolution {
            decomposition: pt.decomposition,
            component_states: pt.states,
            weights,
        };
        let currents = heat_currents(&sys.rates, &sys.spectrum, &steady);
        let components = steady.decomposition.len();
        let decoupled = components > 1;
        rows.push(SweepRow {
            value: pt.theta,
            currents,
            components,
            flag: if decoupled { SweepFlag::Decoupled } else { SweepFlag::None },
            component_currents: if decoupled {
                component_currents(&sys.rates, &sys.spectrum, &steady)
            } else {
                Vec::new()
            },
        });
        previous = Some((sys.spectrum.clone(), steady.populations()));
    }
    Ok(rows)
}

/// Bracket `[lower, upper]` around a zero of `Q_M(T_M)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignChange {
    pub lower: f64,
    pub upper: f64,
}

impl SignChange {
    pub fn critical(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TmSweep {
    pub rows: Vec<SweepRow>,
    pub sign_changes: Vec<SignChange>,
}

/// Bisection tolerance on the critical middle temperature.
pub const CRITICAL_TOL: f64 = 1e-6;

fn currents_at(config: &SystemConfig, t_m: f64) -> Result<(HeatCurrents, usize)> {
    let sys = System::new(&with_t_m(config, t_m))?;
    let steady = sys.steady_state()?;
    Ok((heat_currents(&sys.rates, &sys.spectrum, &steady), steady.decomposition.len()))
}

/// Currents versus `T_M` (strictly monotone grid, either direction) and the
/// bisected brackets of every `Q_M` sign change between neighbouring rows.
pub fn tm_sweep(config: &SystemConfig, t_ms: &[f64], exec: Execution) -> Result<TmSweep> {
    config.validate()?;
    if t_ms.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return Err(Error::invalid("T_M values must be finite and > 0"));
    }
    let ascending = t_ms.windows(2).all(|w| w[1] > w[0]);
    let descending = t_ms.windows(2).all(|w| w[1] < w[0]);
    if !ascending && !descending {
        return Err(Error::invalid("T_M grid must be strictly monotone"));
    }
    let values = exec.try_map(t_ms, |&t| currents_at(config, t))?;
    let mut rows: Vec<SweepRow> = t_ms
        .iter()
        .zip(values)
        .map(|(&t, (currents, components))| SweepRow {
            value: t,
            currents,
            components,
            flag: if components > 1 { SweepFlag::Decoupled } else { SweepFlag::None },
            component_currents: Vec::new(),
        })
        .collect();

    let brackets: Vec<(usize, f64, f64)> = (0..rows.len().saturating_sub(1))
        .filter(|&k| rows[k].currents.q_m * rows[k + 1].currents.q_m < 0.0)
        .map(|k| (k, rows[k].value.min(rows[k + 1].value), rows[k].value.max(rows[k + 1].value)))
        .collect();
    let refined = exec.try_map(&brackets, |&(k, lo, hi)| {
        let q_lo = if rows[k].value == lo { rows[k].currents.q_m } else { rows[k + 1].currents.q_m };
        bisect_q_m(config, lo, hi, q_lo)
    })?;
    for (&(k, _, _), _) in brackets.iter().zip(&refined) {
        rows[k].flag = SweepFlag::SignChange;
    }
    Ok(TmSweep {
        rows,
        sign_changes: refined,
    })
}

fn bisect_q_m(config: &SystemConfig, mut lo: f64, mut hi: f64, mut q_lo: f64) -> Result<SignChange> {
    while hi - lo > CRITICAL_TOL {
        let mid = 0.5 * (lo + hi);
        let q_mid = currents_at(config, mid)?.0.q_m;
        if q_mid == 0.0 {
            return Ok(SignChange { lower: mid, upper: mid });
        }
        if (q_mid < 0.0) == (q_lo < 0.0) {
            lo = mid;
            q_lo = q_mid;
        } else {
            hi = mid;
        }
    }
    Ok(SignChange { lower: lo, upper: hi })
}
