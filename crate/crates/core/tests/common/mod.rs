#![allow(dead_code)]

use proptest::prelude::*;
use spinheat::lindblad::ReservoirConfig;
use spinheat::model::{CouplingConfig, FieldConfig};
use spinheat::steadystate::InitialState;
use spinheat::{SystemConfig, Tolerances};

pub fn config(fields: FieldConfig, coupling: CouplingConfig, reservoirs: ReservoirConfig) -> SystemConfig {
    SystemConfig {
        fields,
        coupling,
        reservoirs,
        initial: InitialState::default(),
        tolerances: Tolerances::default(),
    }
}

pub fn reservoirs(t: [f64; 3], k: [f64; 3]) -> ReservoirConfig {
    ReservoirConfig {
        t_l: t[0],
        t_m: t[1],
        t_r: t[2],
        kappa_l: k[0],
        kappa_m: k[1],
        kappa_r: k[2],
    }
}

pub fn fields() -> impl Strategy<Value = FieldConfig> {
    (0.2..3.0f64, 0.2..3.0f64, 0.2..3.0f64, 0.0..std::f64::consts::TAU)
        .prop_map(|(b_l, b_m, b_r, theta)| FieldConfig { b_l, b_m, b_r, theta })
}

/// Angles kept away from multiples of π/2.
pub fn skew_fields() -> impl Strategy<Value = FieldConfig> {
    (fields(), 0usize..4, 0.1..1.47f64).prop_map(|(f, quarter, offset)| FieldConfig {
        theta: quarter as f64 * std::f64::consts::FRAC_PI_2 + offset,
        ..f
    })
}

pub fn couplings() -> impl Strategy<Value = CouplingConfig> {
    (0.1..2.0f64, 0.1..2.0f64).prop_map(|(a, b)| CouplingConfig::ising(a, b))
}

pub fn anisotropic_couplings() -> impl Strategy<Value = CouplingConfig> {
    (0.1..2.0f64, 0.1..2.0f64, 0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64)
        .prop_map(|(j_lm, j_mr, gx, gy, gz)| CouplingConfig { j_lm, j_mr, g: [gx, gy, gz] })
}

pub fn baths() -> impl Strategy<Value = ReservoirConfig> {
    (
        prop::array::uniform3(0.05..3.0f64),
        prop::array::uniform3(1e-4..1e-2f64),
    )
        .prop_map(|(t, k)| reservoirs(t, k))
}

pub fn two_terminal_baths() -> impl Strategy<Value = ReservoirConfig> {
    baths().prop_map(|r| ReservoirConfig { kappa_m: 0.0, ..r })
}
