//! The numeric pipeline against the closed forms in `analytic`.

mod common;

use proptest::prelude::*;
use spinheat::analytic::{
    bj_degenerate_steady, lf_blockade_check, lf_eigenvalues, lf_frequencies, lf_steady_kappa_m0, match_levels,
    tf_coefficients, tf_eigenvalues, tf_steady_populations,
};
use spinheat::lindblad::{enumerate_transitions, ReservoirConfig, TransitionThresholds};
use spinheat::model::{build_hamiltonian, diagonalize, pauli_word, Axis, CouplingConfig, FieldConfig, SpinLabel};
use spinheat::observables::heat_currents;
use spinheat::steadystate::{InitialState, PopulationVector};
use spinheat::System;

fn lf_system(f: FieldConfig, c: CouplingConfig, r: ReservoirConfig) -> System {
    System::new(&common::config(FieldConfig { theta: 0.0, ..f }, c, r)).unwrap()
}

/// Keeps every longitudinal transition frequency away from zero.
fn lf_nondegenerate(f: &FieldConfig, c: &CouplingConfig) -> bool {
    let w = lf_frequencies(f, c).all();
    let e = lf_eigenvalues(f, c);
    let mut sorted = e.to_vec();
    sorted.sort_by(f64::total_cmp);
    w.iter().all(|x| x.abs() > 0.05) && sorted.windows(2).all(|p| p[1] - p[0] > 1e-6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn lf_frequencies_match_transition_table(f in common::fields(), c in common::couplings()) {
        prop_assume!(lf_nondegenerate(&f, &c));
        let f = FieldConfig { theta: 0.0, ..f };
        let s = diagonalize(&build_hamiltonian(&f, &c)).unwrap();
        let table = enumerate_transitions(&s, TransitionThresholds::default());
        let a = lf_frequencies(&f, &c);
        for (label, expected) in [(SpinLabel::L, a.l.to_vec()), (SpinLabel::M, a.m.to_vec()), (SpinLabel::R, a.r.to_vec())] {
            // each L/R frequency appears twice, each M frequency once
            let reps = if label == SpinLabel::M { 1 } else { 2 };
            let mut want: Vec<f64> = expected.iter().flat_map(|w| std::iter::repeat_n(w.abs(), reps)).collect();
            let mut got: Vec<f64> = table.for_reservoir(label).iter().map(|t| t.frequency).collect();
            want.sort_by(f64::total_cmp);
            got.sort_by(f64::total_cmp);
            prop_assert_eq!(want.len(), got.len());
            for (x, y) in want.iter().zip(&got) {
                prop_assert!((x - y).abs() < 1e-12, "{label}: {want:?} vs {got:?}");
            }
        }
    }

    #[test]
    fn lf_eigenvalues_match_diagonalization(f in common::fields(), c in common::couplings()) {
        let f = FieldConfig { theta: 0.0, ..f };
        let s = diagonalize(&build_hamiltonian(&f, &c)).unwrap();
        let mut a = lf_eigenvalues(&f, &c).to_vec();
        a.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(s.energies.iter()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn lf_two_terminal_steady_state_is_product_form(
        f in common::fields(),
        c in common::couplings(),
        r in common::two_terminal_baths(),
        p in 0.0..1.0f64,
    ) {
        prop_assume!(lf_nondegenerate(&f, &c));
        let sys = lf_system(f, c, r);
        let d = sys.decomposition();
        prop_assert_eq!(d.len(), 2);
        let map = match_levels(&lf_eigenvalues(&f, &c), sys.spectrum.energies.as_slice()).unwrap();
        // weight p on the block with the middle spin up (bare 0)
        let mut init = nalgebra::SVector::<f64, 8>::zeros();
        init[map[0]] = p;
        init[map[2]] = 1.0 - p;
        let init = PopulationVector::new(init).unwrap();
        let steady = spinheat::steadystate::steady_state_with(&sys.rates.total, d, &init).unwrap();
        let numeric = steady.populations();
        let exact = lf_steady_kappa_m0(&f, &c, &r, p).unwrap();
        for k in 0..8 {
            prop_assert!((numeric[map[k]] - exact[k]).abs() < 1e-10, "level {k}: {} vs {}", numeric[map[k]], exact[k]);
        }
        let q = heat_currents(&sys.rates, &sys.spectrum, &steady);
        prop_assert!(q.max_abs() < 1e-12 * r.kappa_l.max(r.kappa_r));
    }

    #[test]
    fn lf_blockade_is_exact(f in common::fields(), c in common::couplings(), r in common::two_terminal_baths(), p in 0.0..1.0f64) {
        prop_assume!(lf_nondegenerate(&f, &c));
        let q = lf_blockade_check(&f, &c, &r, p).unwrap();
        prop_assert_eq!(q.as_array(), [0.0; 3]);
    }

    #[test]
    fn tf_closed_forms_match_pipeline(
        b in 0.3..3.0f64,
        j_lm in 0.1..2.5f64,
        j_mr in 0.1..2.5f64,
        r in common::baths(),
    ) {
        // the closed-form eigenvectors are 0/0 at J_LM = J_MR
        prop_assume!((j_lm - j_mr).abs() > 0.05);
        let f = FieldConfig::uniform(b, std::f64::consts::FRAC_PI_2);
        let c = CouplingConfig::ising(j_lm, j_mr);
        let sys = System::new(&common::config(f, c, r)).unwrap();

        let mut printed = tf_eigenvalues(b, j_lm, j_mr).unwrap().to_vec();
        printed.sort_by(f64::total_cmp);
        for (x, y) in printed.iter().zip(sys.spectrum.energies.iter()) {
            prop_assert!((x - y).abs() < 1e-8, "{printed:?} vs {}", sys.spectrum.energies);
        }

        let tf = tf_coefficients(b, j_lm, j_mr).unwrap();
        let map = match_levels(&tf.energies, sys.spectrum.energies.as_slice()).unwrap();
        for i in 0..8 {
            let overlap: f64 = (0..8).map(|k| tf.rows[(i, k)] * sys.spectrum.transform[(map[i], k)]).sum();
            prop_assert!((overlap.abs() - 1.0).abs() < 1e-9);
        }
        for label in SpinLabel::ALL {
            let numeric = sys.spectrum.to_eigenbasis(&pauli_word(label, Axis::X).matrix);
            // diagonal entries are pure dephasing and carry no transition
            for i in 0..8 {
                for j in (0..8).filter(|&j| j != i) {
                    let a = tf.coefficients[label.index()][(i, j)].abs();
                    prop_assert!((a - numeric[(map[i], map[j])].abs()).abs() < 1e-9);
                }
            }
        }

        let d = sys.decomposition();
        prop_assert_eq!(d.len(), 2);
        let states = spinheat::steadystate::component_states(&sys.rates.total, &d).unwrap();
        let exact = tf_steady_populations(b, j_lm, j_mr, &r).unwrap();
        for (sector, pops) in exact.iter().enumerate() {
            let comp = d.component_of(map[sector * 4]);
            for (a, p) in pops.iter().enumerate() {
                let idx = map[sector * 4 + a];
                prop_assert_eq!(d.component_of(idx), comp);
                prop_assert!((states[comp][idx] - p).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn bj_degenerate_matches_pipeline() {
    for b in [0.1, 10.0] {
        let r = common::reservoirs([2.0, 0.02, 0.2], [1e-3, 1e-3, 1e-3]);
        let exact = bj_degenerate_steady(b, &r).unwrap();
        assert!(exact.currents.max_abs() < 1e-15, "{:?}", exact.currents);
        let sys = lf_system(FieldConfig::uniform(b, 0.0), CouplingConfig::ising(b, b), r);
        let steady = sys.steady_state().unwrap();
        let numeric = steady.populations();
        // degenerate levels: map through the permutation instead of eigenvalues
        for k in 0..8 {
            let i = (0..8).find(|&i| sys.spectrum.transform[(i, k)] == 1.0).unwrap();
            assert!((numeric[i] - exact.populations[k]).abs() < 1e-9, "B={b}, bare {k}");
        }
    }
}

#[test]
fn bj_populations_lose_middle_dependence_when_hot() {
    let hot = bj_degenerate_steady(1.0, &common::reservoirs([0.7, 1e9, 0.3], [1e-3; 3])).unwrap();
    let lr = bj_degenerate_steady(1.0, &common::reservoirs([0.7, 1e12, 0.3], [1e-3; 3])).unwrap();
    for k in 0..8 {
        assert!((hot.populations[k] - lr.populations[k]).abs() < 1e-8);
    }
}

#[test]
fn tf_symmetric_couplings_are_reported_singular() {
    assert!(tf_coefficients(0.3, 0.1, 0.1).is_err());
    assert!(tf_eigenvalues(0.3, 0.1, 0.1).is_ok());
}

#[test]
fn tf_free_spins() {
    let mut w = tf_eigenvalues(2.0, 0.0, 0.0).unwrap();
    w.sort_by(f64::total_cmp);
    assert_eq!(w.map(|x| (x * 1e9).round() / 1e9), [-3.0, -1.0, -1.0, -1.0, 1.0, 1.0, 1.0, 3.0]);
    assert!(w.iter().sum::<f64>().abs() < 1e-12);
}

#[test]
fn initial_subspace_fraction_targets_even_sector() {
    let f = FieldConfig::uniform(1.5, std::f64::consts::FRAC_PI_2);
    let c = CouplingConfig::ising(0.8, 1.2);
    let sys = System::new(&common::config(f, c, common::reservoirs([2.0, 0.02, 0.2], [1e-3, 0.0, 1e-3]))).unwrap();
    let d = sys.decomposition();
    let init = InitialState::SubspaceFraction(1.0).resolve(&sys.spectrum, &d).unwrap();
    let tf = tf_coefficients(1.5, 0.8, 1.2).unwrap();
    let map = match_levels(&tf.energies, sys.spectrum.energies.as_slice()).unwrap();
    assert_eq!(init.get(map[0]), 1.0);
}
