//! Named parameter sets for the figures (energies and temperatures in units of `B_0 = 1`).

use std::f64::consts::{FRAC_PI_2, PI};

use spinheat::lindblad::ReservoirConfig;
use spinheat::model::{CouplingConfig, FieldConfig};
use spinheat::steadystate::InitialState;
use spinheat::{SystemConfig, Tolerances};

use crate::error::{CliError, Result};

/// Dissipation rate shared by all figures.
pub const KAPPA: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub config: SystemConfig,
    /// Default `T_M` range for `sweep-tm` and `transistor`.
    pub t_m_range: (f64, f64),
    /// Default `T_L` range for `diode`.
    pub t_l_range: (f64, f64),
}

fn fields(b: [f64; 3], theta: f64) -> FieldConfig {
    FieldConfig {
        b_l: b[0],
        b_m: b[1],
        b_r: b[2],
        theta,
    }
}

fn baths(t: [f64; 3], kappa_m: f64) -> ReservoirConfig {
    ReservoirConfig {
        t_l: t[0],
        t_m: t[1],
        t_r: t[2],
        kappa_l: KAPPA,
        kappa_m,
        kappa_r: KAPPA,
    }
}

fn config(fields: FieldConfig, coupling: CouplingConfig, reservoirs: ReservoirConfig) -> SystemConfig {
    SystemConfig {
        fields,
        coupling,
        reservoirs,
        initial: InitialState::default(),
        tolerances: Tolerances::default(),
    }
}

/// The two-level mixture `p·e₁ + (1 − p)·e₅` in the ascending eigenbasis used
/// for the transient figures.
pub fn transient_initial(p: f64) -> InitialState {
    let mut v = [0.0; 8];
    v[0] = p;
    v[4] = 1.0 - p;
    InitialState::EigenPopulations(v)
}

const MODULATOR_T: [f64; 3] = [2.0, 0.02, 0.2];
const TRANSISTOR_T: [f64; 3] = [0.2, 0.1, 0.02];

fn preset(name: &'static str, summary: &'static str, config: SystemConfig) -> Preset {
    Preset {
        name,
        summary,
        config,
        t_m_range: (0.01, 3.0),
        t_l_range: (0.01, 3.0),
    }
}

fn modulator(name: &'static str, summary: &'static str, b: [f64; 3], j: (f64, f64)) -> Preset {
    preset(
        name,
        summary,
        config(fields(b, 0.0), CouplingConfig::ising(j.0, j.1), baths(MODULATOR_T, 0.0)),
    )
}

fn transient(name: &'static str, summary: &'static str, kappa_m: f64) -> Preset {
    let mut c = config(
        fields([1.5; 3], FRAC_PI_2),
        CouplingConfig::ising(0.8, 1.2),
        baths(MODULATOR_T, kappa_m),
    );
    c.initial = transient_initial(0.5);
    preset(name, summary, c)
}

fn mixed_coupling(name: &'static str, summary: &'static str, kappa_m: f64) -> Preset {
    let coupling = CouplingConfig {
        g: [1.0, 0.0, 1.0],
        ..CouplingConfig::ising(0.8, 1.2)
    };
    preset(name, summary, config(fields([1.5; 3], 0.0), coupling, baths(MODULATOR_T, kappa_m)))
}

fn transistor(name: &'static str, summary: &'static str, b: f64, j_mr: f64) -> Preset {
    let reservoirs = ReservoirConfig {
        kappa_m: KAPPA,
        ..baths(TRANSISTOR_T, KAPPA)
    };
    Preset {
        t_m_range: (0.001, 0.2),
        ..preset(name, summary, config(fields([b; 3], 0.0), CouplingConfig::ising(1.0, j_mr), reservoirs))
    }
}

fn diode(name: &'static str, summary: &'static str, b: [f64; 3], j: (f64, f64), transverse: bool) -> Preset {
    let theta = if transverse { FRAC_PI_2 } else { 0.1 * PI };
    let mut c = config(fields(b, theta), CouplingConfig::ising(j.0, j.1), baths([0.5; 3], 0.0));
    if transverse {
        c.initial = InitialState::SubspaceFraction(1.0);
    }
    preset(name, summary, c)
}

/// Every preset, in display order.
pub fn all() -> Vec<Preset> {
    let mut fig6 = modulator("fig6", "middle-temperature sweep: fig3b at theta = 0.1 pi, kappa_M = kappa_L", [1.5; 3], (0.8, 1.2));
    fig6.config.fields.theta = 0.1 * PI;
    fig6.config.reservoirs.kappa_m = KAPPA;

    let mut tf_xx = transient("tf-xx", "sigma^x sigma^x coupling in a transverse field", KAPPA);
    tf_xx.config.coupling.g = [1.0, 0.0, 0.0];
    tf_xx.config.initial = InitialState::default();

    let mut equilibrium = modulator("equilibrium", "all reservoirs at T = 0.5", [1.0; 3], (0.8, 1.2));
    equilibrium.config.fields.theta = 0.3;
    equilibrium.config.reservoirs = ReservoirConfig {
        t_l: 0.5,
        t_m: 0.5,
        t_r: 0.5,
        kappa_l: KAPPA,
        kappa_m: KAPPA,
        kappa_r: KAPPA,
    };

    vec![
        modulator("fig3a", "modulator, B = 0.3, J_LM = 0.8, J_MR = 1.2", [0.3; 3], (0.8, 1.2)),
        modulator("fig3b", "modulator, B = 1.5, J_LM = 0.8, J_MR = 1.2", [1.5; 3], (0.8, 1.2)),
        modulator("fig3c", "modulator, B = 3, J_LM = 0.8, J_MR = 1.2", [3.0; 3], (0.8, 1.2)),
        modulator("fig3d", "modulator, B = J = 0.1", [0.1; 3], (0.1, 0.1)),
        modulator("fig3e", "modulator, B = (1, 2, 3), J = 0.5", [1.0, 2.0, 3.0], (0.5, 0.5)),
        modulator("fig3f", "modulator, B = (1, 2, 3), J = 2", [1.0, 2.0, 3.0], (2.0, 2.0)),
        modulator("fig3g", "modulator, B = (1, 2, 3), J = 8", [1.0, 2.0, 3.0], (8.0, 8.0)),
        modulator("fig3h", "modulator, B = J = 10", [10.0; 3], (10.0, 10.0)),
        transient("fig4a", "transverse-field transients, kappa_M = 0", 0.0),
        transient("fig4b", "transverse-field transients, kappa_M = 0.1 kappa_L", 0.1 * KAPPA),
        transient("fig4c", "transverse-field transients, kappa_M = kappa_L", KAPPA),
        transistor("fig5ab", "transistor, B = 0.01, J_MR = 1.001", 0.01, 1.001),
        transistor("fig5cd", "transistor, B = 0.001, J_MR = 1.01", 0.001, 1.01),
        fig6,
        diode("fig7a", "diode from field asymmetry, B = (3, 2, 1)", [3.0, 2.0, 1.0], (0.1, 0.1), false),
        diode("fig7b", "diode from coupling asymmetry, J_LM = 1, J_MR = 0.1", [1.0; 3], (1.0, 0.1), false),
        diode("fig7c", "field-asymmetry diode in a transverse field", [3.0, 2.0, 1.0], (0.1, 0.1), true),
        diode("fig7d", "coupling-asymmetry diode in a transverse field", [1.0; 3], (1.0, 0.1), true),
        mixed_coupling("qzx-a", "zz + xx coupling, kappa_M = 0", 0.0),
        mixed_coupling("qzx-b", "zz + xx coupling, kappa_M = 0.1 kappa_L", 0.1 * KAPPA),
        mixed_coupling("qzx-c", "zz + xx coupling, kappa_M = kappa_L", KAPPA),
        tf_xx,
        equilibrium,
    ]
}

pub fn names() -> Vec<&'static str> {
    all().iter().map(|p| p.name).collect()
}

pub fn find(name: &str) -> Result<Preset> {
    all().into_iter().find(|p| p.name == name).ok_or_else(|| CliError::UnknownPreset {
        name: name.to_string(),
        available: names().join(", "),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid_and_unique() {
        let all = all();
        for p in &all {
            p.config.validate().unwrap();
        }
        let mut names = names();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), all.len());
    }

    #[test]
    fn caption_values() {
        let a = find("fig3a").unwrap().config;
        assert_eq!((a.fields.b_l, a.coupling.j_lm, a.coupling.j_mr), (0.3, 0.8, 1.2));
        assert_eq!((a.reservoirs.t_l, a.reservoirs.t_m, a.reservoirs.t_r), (2.0, 0.02, 0.2));
        assert_eq!((a.reservoirs.kappa_l, a.reservoirs.kappa_r), (1e-3, 1e-3));
        let e = find("fig3e").unwrap().config;
        assert_eq!([e.fields.b_l, e.fields.b_m, e.fields.b_r], [1.0, 2.0, 3.0]);
        let f4 = find("fig4b").unwrap().config;
        assert_eq!((f4.fields.b_m, f4.reservoirs.kappa_m), (1.5, 1e-4));
        let t = find("fig5ab").unwrap().config;
        assert_eq!((t.fields.b_r, t.coupling.j_lm, t.coupling.j_mr), (0.01, 1.0, 1.001));
        assert_eq!((t.reservoirs.t_l, t.reservoirs.t_r, t.reservoirs.kappa_m), (0.2, 0.02, 1e-3));
        let d = find("fig7b").unwrap().config;
        assert_eq!((d.coupling.j_lm, d.coupling.j_mr, d.reservoirs.t_r, d.reservoirs.kappa_m), (1.0, 0.1, 0.5, 0.0));
    }

    #[test]
    fn unknown_preset_lists_the_registry() {
        let err = find("fig9").unwrap_err().to_string();
        assert!(err.contains("fig3a") && err.contains("equilibrium"), "{err}");
    }
}
