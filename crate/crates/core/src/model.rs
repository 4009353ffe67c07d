//! Three-spin Hamiltonian in the tensor-product ("bare") basis and its
//! diagonalization.
//!
//! Bare basis ordering: index `k` in `0..8` encodes the spins of L, M and R as
//! the bits `(k >> 2) & 1`, `(k >> 1) & 1` and `k & 1`, where a set bit means
//! spin down. Index 0 is `|↑↑↑⟩`, index 7 is `|↓↓↓⟩`, and L is the most
//! significant factor.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{SMatrix, SVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hilbert-space dimension of the chain.
pub const DIM: usize = 8;

pub type Mat8 = SMatrix<f64, DIM, DIM>;
pub type Vec8 = SVector<f64, DIM>;

/// Angles closer than this to a multiple of π/2 are treated as exact.
const ANGLE_SNAP: f64 = 1e-12;
/// Eigenvalues closer than this are considered degenerate when ordering.
const DEGENERACY_TOL: f64 = 1e-9;
/// Components smaller than this are ignored by the sign convention.
const SIGN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpinLabel {
    L,
    M,
    R,
}

impl SpinLabel {
    pub const ALL: [SpinLabel; 3] = [SpinLabel::L, SpinLabel::M, SpinLabel::R];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Bit position of this spin inside a bare-basis index.
    pub fn shift(self) -> u32 {
        match self {
            SpinLabel::L => 2,
            SpinLabel::M => 1,
            SpinLabel::R => 0,
        }
    }

    pub fn mask(self) -> usize {
        1 << self.shift()
    }
}

impl std::fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SpinLabel::L => "L",
            SpinLabel::M => "M",
            SpinLabel::R => "R",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// A single-site Pauli operator embedded in the 8-dimensional space.
///
/// σˣ and σᶻ are real; σʸ is purely imaginary and is stored as `i · matrix`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliWord {
    pub matrix: Mat8,
    pub imaginary: bool,
}

impl PauliWord {
    /// Product of two words that is known to be real (both real or both imaginary).
    pub fn real_product(&self, other: &PauliWord) -> Option<Mat8> {
        match (self.imaginary, other.imaginary) {
            (false, false) => Some(self.matrix * other.matrix),
            (true, true) => Some(-(self.matrix * other.matrix)),
            _ => None,
        }
    }
}

pub fn pauli_word(label: SpinLabel, axis: Axis) -> PauliWord {
    let mask = label.mask();
    let mut m = Mat8::zeros();
    for col in 0..DIM {
        let down = col & mask != 0;
        match axis {
            Axis::X => m[(col ^ mask, col)] = 1.0,
            // σʸ = i·[[0, -1], [1, 0]]
            Axis::Y => m[(col ^ mask, col)] = if down { -1.0 } else { 1.0 },
            Axis::Z => m[(col, col)] = if down { -1.0 } else { 1.0 },
        }
    }
    PauliWord {
        matrix: m,
        imaginary: axis == Axis::Y,
    }
}

/// Field amplitudes per spin and the common field angle.
///
/// The transverse component is `B sin θ` (along x) and the longitudinal one is
/// `B cos θ` (along z), so `θ = sπ` is the longitudinal configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    #[serde(rename = "B_L")]
    pub b_l: f64,
    #[serde(rename = "B_M")]
    pub b_m: f64,
    #[serde(rename = "B_R")]
    pub b_r: f64,
    #[serde(default)]
    pub theta: f64,
}

impl FieldConfig {
    pub fn uniform(b: f64, theta: f64) -> Self {
        FieldConfig {
            b_l: b,
            b_m: b,
            b_r: b,
            theta,
        }
    }

    pub fn amplitude(&self, label: SpinLabel) -> f64 {
        match label {
            SpinLabel::L => self.b_l,
            SpinLabel::M => self.b_m,
            SpinLabel::R => self.b_r,
        }
    }

    /// `(Bˣ, Bᶻ)` for one spin.
    pub fn components(&self, label: SpinLabel) -> (f64, f64) {
        let (s, c) = field_direction(self.theta);
        let b = self.amplitude(label);
        (b * s, b * c)
    }

    pub fn validate(&self) -> Result<()> {
        for label in SpinLabel::ALL {
            let b = self.amplitude(label);
            if !b.is_finite() || b < 0.0 {
                return Err(Error::invalid(format!("fields.B_{label} must be finite and >= 0, got {b}")));
            }
        }
        if !self.theta.is_finite() {
            return Err(Error::invalid("fields.theta must be finite"));
        }
        Ok(())
    }
}

/// `(sin θ, cos θ)` with multiples of π/2 landing exactly on 0 and ±1.
pub fn field_direction(theta: f64) -> (f64, f64) {
    let quarter = (theta / FRAC_PI_2).round();
    let mut rest = theta - quarter * FRAC_PI_2;
    if rest.abs() < ANGLE_SNAP {
        rest = 0.0;
    }
    let (s, c) = rest.sin_cos();
    match (quarter as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

fn default_anisotropy() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

/// Nearest-neighbour couplings. There is no direct L–R coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingConfig {
    #[serde(rename = "J_LM", default)]
    pub j_lm: f64,
    #[serde(rename = "J_MR", default)]
    pub j_mr: f64,
    /// Anisotropy `(gˣ, gʸ, gᶻ)`; `(0, 0, 1)` is the Ising chain.
    #[serde(default = "default_anisotropy")]
    pub g: [f64; 3],
}

impl Default for CouplingConfig {
    fn default() -> Self {
        CouplingConfig {
            j_lm: 0.0,
            j_mr: 0.0,
            g: default_anisotropy(),
        }
    }
}

impl CouplingConfig {
    pub fn ising(j_lm: f64, j_mr: f64) -> Self {
        CouplingConfig {
            j_lm,
            j_mr,
            g: default_anisotropy(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.j_lm.is_finite() || !self.j_mr.is_finite() {
            return Err(Error::invalid("coupling.J_LM and coupling.J_MR must be finite"));
        }
        if self.g.iter().any(|g| !g.is_finite() || !(0.0..=1.0).contains(g)) {
            return Err(Error::invalid(format!("coupling.g entries must lie in [0, 1], got {:?}", self.g)));
        }
        Ok(())
    }
}

pub fn build_hamiltonian(fields: &FieldConfig, coupling: &CouplingConfig) -> Mat8 {
    let mut h = Mat8::zeros();
    for label in SpinLabel::ALL {
        let (bx, bz) = fields.components(label);
        h += pauli_word(label, Axis::X).matrix * (0.5 * bx);
        h += pauli_word(label, Axis::Z).matrix * (0.5 * bz);
    }
    let pairs = [
        (SpinLabel::L, SpinLabel::M, coupling.j_lm),
        (SpinLabel::M, SpinLabel::R, coupling.j_mr),
    ];
    for (a, b, j) in pairs {
        for (axis, g) in [Axis::X, Axis::Y, Axis::Z].into_iter().zip(coupling.g) {
            if g == 0.0 {
                continue;
            }
            let product = pauli_word(a, axis)
                .real_product(&pauli_word(b, axis))
                .expect("same-axis Pauli products are real");
            h += product * (0.5 * j * g);
        }
    }
    h
}

/// Eigenvalues in ascending order and the bare-to-eigen transform.
///
/// Row `i` of `transform` is eigenvector `|i⟩` expressed in the bare basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub energies: Vec8,
    pub transform: Mat8,
}

impl Spectrum {
    pub fn energy(&self, i: usize) -> f64 {
        self.energies[i]
    }

    /// `Λ A Λᵀ`: a bare-basis operator in the eigenbasis.
    pub fn to_eigenbasis(&self, op: &Mat8) -> Mat8 {
        self.transform * op * self.transform.transpose()
    }

    /// Projects a bare-basis pure state onto eigenbasis populations.
    pub fn bare_state_populations(&self, bare_index: usize) -> Vec8 {
        Vec8::from_fn(|i, _| self.transform[(i, bare_index)].powi(2))
    }

    /// Populations of `other`'s eigenstates re-expressed in this eigenbasis,
    /// dropping coherences.
    pub fn reproject(&self, other: &Spectrum, populations: &Vec8) -> Vec8 {
        let overlap = self.transform * other.transform.transpose();
        Vec8::from_fn(|i, _| (0..DIM).map(|j| overlap[(i, j)].powi(2) * populations[j]).sum())
    }
}

pub fn diagonalize(h: &Mat8) -> Result<Spectrum> {
    let scale = h.amax().max(1.0);
    let asym = (h - h.transpose()).amax();
    if !asym.is_finite() || asym > 1e-12 * scale {
        return Err(Error::invalid(format!("Hamiltonian is not symmetric (max asymmetry {asym:e})")));
    }
    let eig = SymmetricEigen::new(*h);

    let mut pairs: Vec<(f64, Vec8)> = (0..DIM)
        .map(|k| (eig.eigenvalues[k], eig.eigenvectors.column(k).into_owned()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Within a degenerate cluster, order by the dominant bare component.
    let mut start = 0;
    while start < DIM {
        let mut end = start + 1;
        while end < DIM && pairs[end].0 - pairs[end - 1].0 <= DEGENERACY_TOL {
            end += 1;
        }
        pairs[start..end].sort_by_key(|(_, v)| dominant_index(v));
        start = end;
    }

    let mut energies = Vec8::zeros();
    let mut transform = Mat8::zeros();
    for (i, (value, mut v)) in pairs.into_iter().enumerate() {
        if let Some(first) = v.iter().find(|x| x.abs() > SIGN_TOL) {
            if *first < 0.0 {
                v = -v;
            }
        }
        energies[i] = value;
        transform.set_row(i, &v.transpose());
    }
    Ok(Spectrum { energies, transform })
}

fn dominant_index(v: &Vec8) -> usize {
    let mut best = 0;
    for k in 1..DIM {
        if v[k].abs() > v[best].abs() + SIGN_TOL {
            best = k;
        }
    }
    best
}
