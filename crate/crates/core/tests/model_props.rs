mod common;

use proptest::prelude::*;
use spinheat::model::{build_hamiltonian, diagonalize, pauli_word, Axis, CouplingConfig, FieldConfig, Mat8, SpinLabel};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spectrum_is_orthonormal_and_reconstructs(f in common::fields(), c in common::anisotropic_couplings()) {
        let h = build_hamiltonian(&f, &c);
        let s = diagonalize(&h).unwrap();
        let ortho = s.transform * s.transform.transpose() - Mat8::identity();
        prop_assert!(ortho.amax() < 1e-12);
        let d = s.to_eigenbasis(&h) - Mat8::from_diagonal(&s.energies);
        prop_assert!(d.amax() < 1e-10);
        prop_assert!(s.energies.sum().abs() < 1e-12);
        for w in s.energies.as_slice().windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn hamiltonian_is_periodic_in_theta(f in common::fields(), c in common::anisotropic_couplings()) {
        let shifted = FieldConfig { theta: f.theta + std::f64::consts::TAU, ..f };
        let diff = build_hamiltonian(&f, &c) - build_hamiltonian(&shifted, &c);
        prop_assert!(diff.amax() < 1e-14);
    }

    #[test]
    fn spin_flip_maps_theta_to_pi_minus_theta(f in common::fields(), c in common::couplings()) {
        let u = SpinLabel::ALL.iter().fold(Mat8::identity(), |acc, l| acc * pauli_word(*l, Axis::X).matrix);
        let mirrored = FieldConfig { theta: std::f64::consts::PI - f.theta, ..f };
        let lhs = build_hamiltonian(&mirrored, &c);
        let rhs = u * build_hamiltonian(&f, &c) * u.transpose();
        prop_assert!((lhs - rhs).amax() < 1e-14);
    }
}

#[test]
fn anisotropic_hamiltonian_stays_real_symmetric() {
    let f = FieldConfig::uniform(1.1, 0.9);
    let c = CouplingConfig { j_lm: 0.7, j_mr: 1.3, g: [0.4, 0.9, 0.2] };
    let h = build_hamiltonian(&f, &c);
    assert!((h - h.transpose()).amax() == 0.0);
    // ⟨↑↑↑|σʸ_L σʸ_M|↓↓↑⟩ = (−i)(−i) = −1
    let yy = pauli_word(SpinLabel::L, Axis::Y).real_product(&pauli_word(SpinLabel::M, Axis::Y)).unwrap();
    assert_eq!(yy[(0, 6)], -1.0);
}
