mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use spinheat::lindblad::ReservoirConfig;
use spinheat::model::{CouplingConfig, FieldConfig};
use spinheat::observables::{
    amplification, heat_currents, rectification, theta_sweep, tm_sweep, AmplificationMethod, HeatCurrents,
    ThetaPolicy,
};
use spinheat::steadystate::InitialState;
use spinheat::{Execution, System, SystemConfig};

fn currents(config: &SystemConfig) -> HeatCurrents {
    let sys = System::new(config).unwrap();
    let steady = sys.steady_state().unwrap();
    heat_currents(&sys.rates, &sys.spectrum, &steady)
}

fn scale(q: &HeatCurrents, config: &SystemConfig) -> f64 {
    let f = &config.fields;
    let b0 = f.b_l.max(f.b_m).max(f.b_r);
    q.max_abs().max(config.reservoirs.max_kappa() * b0 * b0)
}

fn swapped(config: &SystemConfig) -> SystemConfig {
    let mut s = config.clone();
    let (f, c, r) = (&mut s.fields, &mut s.coupling, &mut s.reservoirs);
    std::mem::swap(&mut f.b_l, &mut f.b_r);
    std::mem::swap(&mut c.j_lm, &mut c.j_mr);
    std::mem::swap(&mut r.t_l, &mut r.t_r);
    std::mem::swap(&mut r.kappa_l, &mut r.kappa_r);
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn first_law_holds_at_steady_state(
        f in common::fields(),
        c in common::anisotropic_couplings(),
        r in common::baths(),
    ) {
        let cfg = common::config(f, c, r);
        let q = currents(&cfg);
        prop_assert!(q.total().abs() <= 1e-10 * scale(&q, &cfg), "{q:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn two_terminal_currents_are_antisymmetric(
        f in common::fields(),
        c in common::anisotropic_couplings(),
        r in common::two_terminal_baths(),
    ) {
        let cfg = common::config(f, c, r);
        let q = currents(&cfg);
        prop_assert_eq!(q.q_m, 0.0);
        prop_assert!((q.q_l + q.q_r).abs() <= 1e-10 * scale(&q, &cfg));
    }

    #[test]
    fn swapping_the_ends_swaps_the_currents(
        f in common::skew_fields(),
        c in common::anisotropic_couplings(),
        r in common::baths(),
    ) {
        let cfg = common::config(f, c, r);
        let q = currents(&cfg);
        let s = currents(&swapped(&cfg));
        prop_assert!((q.q_l - s.q_r).abs() < 1e-10);
        prop_assert!((q.q_m - s.q_m).abs() < 1e-10);
        prop_assert!((q.q_r - s.q_l).abs() < 1e-10);
    }

    #[test]
    fn currents_are_symmetric_under_theta_mirror(
        f in common::skew_fields(),
        c in common::couplings(),
        r in common::baths(),
    ) {
        let q = currents(&common::config(f, c, r));
        let m = currents(&common::config(FieldConfig { theta: PI - f.theta, ..f }, c, r));
        for (a, b) in q.as_array().iter().zip(m.as_array()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn transverse_currents_are_affine_in_p(
        b in 0.2..3.0f64,
        c in common::couplings(),
        r in common::baths(),
        p in 0.0..1.0f64,
    ) {
        let at = |p: f64| {
            let mut cfg = common::config(FieldConfig::uniform(b, FRAC_PI_2), c, r);
            cfg.initial = InitialState::SubspaceFraction(p);
            currents(&cfg)
        };
        let (q0, q1, qp) = (at(0.0), at(1.0), at(p));
        for i in 0..3 {
            let affine = p * q1.as_array()[i] + (1.0 - p) * q0.as_array()[i];
            prop_assert!((qp.as_array()[i] - affine).abs() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn amplification_factors_sum_to_minus_one(
        f in common::skew_fields(),
        c in common::couplings(),
        t in prop::array::uniform3(0.1..2.0f64),
        kappa in 1e-4..1e-2f64,
    ) {
        let cfg = common::config(f, c, common::reservoirs(t, [kappa; 3]));
        let a = amplification(&cfg, t[1], AmplificationMethod::LinearResponse).unwrap();
        prop_assume!(a.defined);
        prop_assert!((a.alpha_l + a.alpha_r + 1.0).abs() < 1e-6, "{a:?}");
    }

    #[test]
    fn symmetric_diode_does_not_rectify(
        b in 0.2..3.0f64,
        theta in 0.05..1.5f64,
        j in 0.1..2.0f64,
        t in prop::array::uniform2(0.05..2.0f64),
        kappa in 1e-4..1e-2f64,
    ) {
        let r = common::reservoirs([t[0], 1.0, t[1]], [kappa, 0.0, kappa]);
        let cfg = common::config(FieldConfig::uniform(b, theta), CouplingConfig::ising(j, j), r);
        let res = rectification(&cfg).unwrap();
        prop_assert!(res.r < 1e-8, "{res:?}");
    }
}

#[test]
fn linear_response_agrees_with_central_differences() {
    let r = common::reservoirs([1.0, 0.6, 0.3], [1e-3; 3]);
    let cfg = common::config(FieldConfig::uniform(1.0, 0.3 * PI), CouplingConfig::ising(0.8, 1.2), r);
    let exact = amplification(&cfg, 0.6, AmplificationMethod::LinearResponse).unwrap();
    let fd = amplification(&cfg, 0.6, AmplificationMethod::CentralDifference).unwrap();
    assert!((exact.dqm_dtm - fd.dqm_dtm).abs() < 1e-6 * exact.dqm_dtm.abs());
    assert!((exact.alpha_l - fd.alpha_l).abs() < 1e-5 * exact.alpha_l.abs().max(1.0));
}

#[test]
fn equal_temperatures_carry_no_current() {
    let r = common::reservoirs([0.8; 3], [1e-3, 2e-3, 3e-3]);
    let q = currents(&common::config(FieldConfig::uniform(1.3, 0.4), CouplingConfig::ising(0.7, 1.1), r));
    assert!(q.max_abs() < 1e-15, "{q:?}");
}

#[test]
fn tm_sweep_reversed_gives_reversed_rows() {
    let r = ReservoirConfig { t_m: 1.0, ..common::reservoirs([1.0, 1.0, 0.1], [1e-3; 3]) };
    let cfg = common::config(FieldConfig::uniform(1.0, 0.1 * PI), CouplingConfig::ising(1.0, 1.0), r);
    let grid: Vec<f64> = (1..=20).map(|k| 0.1 * k as f64).collect();
    let rev: Vec<f64> = grid.iter().rev().copied().collect();
    let fwd = tm_sweep(&cfg, &grid, Execution::Sequential).unwrap();
    let bwd = tm_sweep(&cfg, &rev, Execution::Parallel).unwrap();
    for (a, b) in fwd.rows.iter().zip(bwd.rows.iter().rev()) {
        assert_eq!(a.value, b.value);
        assert_eq!(a.currents, b.currents);
    }
    assert_eq!(fwd.sign_changes.len(), bwd.sign_changes.len());
}

#[test]
fn matched_temperatures_row_is_zero() {
    let r = common::reservoirs([0.5, 0.5, 0.5], [1e-3; 3]);
    let cfg = common::config(FieldConfig::uniform(1.0, 0.1 * PI), CouplingConfig::ising(1.0, 0.6), r);
    let sweep = tm_sweep(&cfg, &[0.25, 0.5, 1.0], Execution::Sequential).unwrap();
    assert!(sweep.rows[1].currents.max_abs() < 1e-15);
}

#[test]
fn sweeps_do_not_depend_on_execution() {
    let r = common::reservoirs([1.0, 0.6, 0.3], [1e-3, 0.0, 1e-3]);
    let cfg = common::config(FieldConfig::uniform(1.0, 0.0), CouplingConfig::ising(0.8, 1.2), r);
    let thetas: Vec<f64> = (0..=40).map(|k| k as f64 * PI / 20.0).collect();
    let a = theta_sweep(&cfg, &thetas, ThetaPolicy::CarryPrevious, Execution::Sequential).unwrap();
    let b = theta_sweep(&cfg, &thetas, ThetaPolicy::CarryPrevious, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}
