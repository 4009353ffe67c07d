//! Closed-form results for the longitudinal (θ = 0) and transverse
//! (θ = π/2, equal fields, Ising coupling) chains.
//!
//! These are written independently of the numeric pipeline and serve as
//! oracles for it. Levels are numbered in "paper order" here:
//!
//! * longitudinal: level `k` is bare state `k` (0-based, `0 = |↑↑↑⟩`);
//! * transverse: levels `0..4` span the even sector of the global spin flip
//!   `σˣσˣσˣ` and levels `4..8` the odd sector, each ascending in energy.
//!
//! [`match_levels`] maps paper order onto the ascending numeric order.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lindblad::{planck_occupation, ReservoirConfig};
use crate::model::{CouplingConfig, FieldConfig, Mat8, SpinLabel, DIM};
use crate::observables::HeatCurrents;

/// Signed bath spectral density `J_μ(x)`: `κn(x)` for `x > 0` and
/// `κ(n(|x|) + 1)` for `x < 0`.
pub fn spectral_density(x: f64, t: f64, kappa: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::invalid("spectral density is singular at zero frequency"));
    }
    let n = planck_occupation(x.abs(), t)?;
    Ok(kappa * if x > 0.0 { n } else { n + 1.0 })
}

fn density(res: &ReservoirConfig, label: SpinLabel, x: f64) -> Result<f64> {
    spectral_density(x, res.temperature(label), res.kappa(label))
}

/// Eigenvalues of the longitudinal chain, one per bare state.
pub fn lf_eigenvalues(fields: &FieldConfig, coupling: &CouplingConfig) -> [f64; DIM] {
    let (bl, bm, br) = (fields.b_l, fields.b_m, fields.b_r);
    let (j1, j2) = (coupling.j_lm, coupling.j_mr);
    std::array::from_fn(|k| {
        let s = |label: SpinLabel| if k & label.mask() == 0 { 1.0 } else { -1.0 };
        let (sl, sm, sr) = (s(SpinLabel::L), s(SpinLabel::M), s(SpinLabel::R));
        0.5 * (sl * bl + sm * bm + sr * br + j1 * sl * sm + j2 * sm * sr)
    })
}

/// Transition frequencies of the longitudinal chain.
///
/// `l[0]`/`r[0]` belong to the block with the middle spin up, `l[1]`/`r[1]`
/// to the block with it down. `m` lists `|↑↑↑⟩↔|↑↓↑⟩`, `|↑↑↓⟩↔|↑↓↓⟩`,
/// `|↓↑↑⟩↔|↓↓↑⟩`, `|↓↑↓⟩↔|↓↓↓⟩`. Values may be negative when a coupling
/// outweighs the field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LfFrequencies {
    pub l: [f64; 2],
    pub m: [f64; 4],
    pub r: [f64; 2],
}

impl LfFrequencies {
    pub fn all(&self) -> Vec<f64> {
        self.l.iter().chain(&self.m).chain(&self.r).copied().collect()
    }
}

pub fn lf_frequencies(fields: &FieldConfig, coupling: &CouplingConfig) -> LfFrequencies {
    let (bl, bm, br) = (fields.b_l, fields.b_m, fields.b_r);
    let (j1, j2) = (coupling.j_lm, coupling.j_mr);
    LfFrequencies {
        l: [bl + j1, bl - j1],
        m: [bm + j1 + j2, bm + j1 - j2, bm - j1 + j2, bm - j1 - j2],
        r: [br + j2, br - j2],
    }
}

/// Pairs `(upper, lower)` flipped by each reservoir, with the index into the
/// matching [`LfFrequencies`] array.
const LF_PAIRS_L: [(usize, usize, usize); 4] = [(0, 4, 0), (1, 5, 0), (2, 6, 1), (3, 7, 1)];
const LF_PAIRS_M: [(usize, usize, usize); 4] = [(0, 2, 0), (1, 3, 1), (4, 6, 2), (5, 7, 3)];
const LF_PAIRS_R: [(usize, usize, usize); 4] = [(0, 1, 0), (4, 5, 0), (2, 3, 1), (6, 7, 1)];

/// Steady populations of the longitudinal chain without a middle bath:
/// a product of independent left and right two-level balances inside each
/// middle-spin block, with weight `p_tilde` on the middle-up block.
pub fn lf_steady_kappa_m0(
    fields: &FieldConfig,
    coupling: &CouplingConfig,
    reservoirs: &ReservoirConfig,
    p_tilde: f64,
) -> Result<[f64; DIM]> {
    if !(0.0..=1.0).contains(&p_tilde) {
        return Err(Error::invalid(format!("p_tilde must lie in [0, 1], got {p_tilde}")));
    }
    if reservoirs.kappa_l <= 0.0 || reservoirs.kappa_r <= 0.0 {
        return Err(Error::invalid("the two-terminal steady state needs kappa_L > 0 and kappa_R > 0"));
    }
    let f = lf_frequencies(fields, coupling);
    let mut rho = [0.0; DIM];
    for (block, weight) in [(0usize, p_tilde), (1, 1.0 - p_tilde)] {
        let lp = density(reservoirs, SpinLabel::L, f.l[block])?;
        let lm = density(reservoirs, SpinLabel::L, -f.l[block])?;
        let rp = density(reservoirs, SpinLabel::R, f.r[block])?;
        let rm = density(reservoirs, SpinLabel::R, -f.r[block])?;
        let norm = (lp + lm) * (rp + rm);
        // bare indices with the middle spin fixed: (L↑R↑, L↑R↓, L↓R↑, L↓R↓)
        let base = if block == 0 { [0, 1, 4, 5] } else { [2, 3, 6, 7] };
        for (k, value) in base.into_iter().zip([lp * rp, lp * rm, lm * rp, lm * rm]) {
            rho[k] = weight * value / norm;
        }
    }
    Ok(rho)
}

/// Product of factors in a fixed canonical order, so that algebraically
/// equal products are bitwise equal.
fn canonical_product(mut factors: Vec<(u8, f64)>) -> f64 {
    factors.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    factors.into_iter().fold(1.0, |acc, (_, x)| acc * x)
}

/// Heat currents of the longitudinal chain without a middle bath, evaluated
/// term by term on the product-form steady state. Every net rate cancels
/// exactly, so the result is `(0, 0, 0)` for any admissible input.
pub fn lf_blockade_check(
    fields: &FieldConfig,
    coupling: &CouplingConfig,
    reservoirs: &ReservoirConfig,
    p_tilde: f64,
) -> Result<HeatCurrents> {
    if reservoirs.kappa_l <= 0.0 || reservoirs.kappa_r <= 0.0 {
        return Err(Error::invalid("the two-terminal steady state needs kappa_L > 0 and kappa_R > 0"));
    }
    let f = lf_frequencies(fields, coupling);
    // Unnormalized populations as tagged factor lists. Tags: 0 = L+, 1 = L−, 2 = R+, 3 = R−.
    let factors = |block: usize| -> Result<[(u8, f64); 4]> {
        Ok([
            (0, density(reservoirs, SpinLabel::L, f.l[block])?),
            (1, density(reservoirs, SpinLabel::L, -f.l[block])?),
            (2, density(reservoirs, SpinLabel::R, f.r[block])?),
            (3, density(reservoirs, SpinLabel::R, -f.r[block])?),
        ])
    };
    let blocks = [factors(0)?, factors(1)?];
    let state = |k: usize| -> (usize, [(u8, f64); 2]) {
        let block = (k >> SpinLabel::M.shift()) & 1;
        let fl = blocks[block];
        let l = if k & SpinLabel::L.mask() == 0 { fl[0] } else { fl[1] };
        let r = if k & SpinLabel::R.mask() == 0 { fl[2] } else { fl[3] };
        (block, [l, r])
    };
    let weights = [p_tilde, 1.0 - p_tilde];
    let mut q = [0.0; 2];
    for (slot, pairs, freqs) in [(0, LF_PAIRS_L, f.l), (1, LF_PAIRS_R, f.r)] {
        let label = if slot == 0 { SpinLabel::L } else { SpinLabel::R };
        for (upper, lower, fi) in pairs {
            let w = freqs[fi];
            let (block, up_state) = state(upper);
            let (_, low_state) = state(lower);
            let tags = if slot == 0 { (1u8, 0u8) } else { (3u8, 2u8) };
            let emit = (tags.0, density(reservoirs, label, -w)?);
            let absorb = (tags.1, density(reservoirs, label, w)?);
            let down = canonical_product(vec![emit, up_state[0], up_state[1]]);
            let up = canonical_product(vec![absorb, low_state[0], low_state[1]]);
            let bl = blocks[block];
            let norm = (bl[0].1 + bl[1].1) * (bl[2].1 + bl[3].1);
            let gamma = 2.0 * (down - up) / norm;
            q[slot] -= weights[block] * w * gamma;
        }
    }
    Ok(HeatCurrents {
        q_l: q[0],
        q_m: 0.0,
        q_r: q[1],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BjSteady {
    /// Normalized populations in bare order.
    pub populations: [f64; DIM],
    pub currents: HeatCurrents,
}

/// Steady state of the longitudinal chain with `B_μ = J_LM = J_MR = B` and
/// all three baths attached.
pub fn bj_degenerate_steady(b: f64, reservoirs: &ReservoirConfig) -> Result<BjSteady> {
    if !(b > 0.0) {
        return Err(Error::invalid(format!("B must be > 0, got {b}")));
    }
    if reservoirs.kappa_l <= 0.0 || reservoirs.kappa_m <= 0.0 || reservoirs.kappa_r <= 0.0 {
        return Err(Error::invalid("the degenerate blockade needs all three kappas > 0"));
    }
    let jl = |x: f64| density(reservoirs, SpinLabel::L, x * b);
    let jm = |x: f64| density(reservoirs, SpinLabel::M, x * b);
    let jr = |x: f64| density(reservoirs, SpinLabel::R, x * b);
    let raw = [
        jl(2.0)? * jm(3.0)? * jm(-1.0)? * jm(1.0)? * jr(2.0)?,
        jl(2.0)? * jm(3.0)? * jm(-1.0)? * jm(1.0)? * jr(-2.0)?,
        jl(2.0)? * jm(-3.0)? * jm(-1.0)? * jm(1.0)? * jr(2.0)?,
        jl(2.0)? * jm(3.0)? * jm(-1.0)? * jm(-1.0)? * jr(-2.0)?,
        jl(-2.0)? * jm(3.0)? * jm(-1.0)? * jm(1.0)? * jr(2.0)?,
        jl(-2.0)? * jm(3.0)? * jm(-1.0)? * jm(1.0)? * jr(-2.0)?,
        jl(-2.0)? * jm(3.0)? * jm(-1.0)? * jm(-1.0)? * jr(2.0)?,
        jl(-2.0)? * jm(3.0)? * jm(1.0)? * jm(1.0)? * jr(-2.0)?,
    ];
    let norm: f64 = raw.iter().sum();
    let populations = raw.map(|x| x / norm);
    let fields = FieldConfig::uniform(b, 0.0);
    let coupling = CouplingConfig::ising(b, b);
    let currents = lf_currents(&lf_frequencies(&fields, &coupling), reservoirs, &populations)?;
    Ok(BjSteady { populations, currents })
}

/// Heat currents of the longitudinal chain for given bare populations.
/// Zero-frequency transitions carry no energy and are skipped.
pub fn lf_currents(f: &LfFrequencies, reservoirs: &ReservoirConfig, rho: &[f64; DIM]) -> Result<HeatCurrents> {
    let mut q = [0.0; 3];
    for (slot, (label, pairs, freqs)) in [
        (SpinLabel::L, LF_PAIRS_L, &f.l[..]),
        (SpinLabel::M, LF_PAIRS_M, &f.m[..]),
        (SpinLabel::R, LF_PAIRS_R, &f.r[..]),
    ]
    .into_iter()
    .enumerate()
    {
        if reservoirs.kappa(label) == 0.0 {
            continue;
        }
        for (upper, lower, fi) in pairs {
            let w = freqs[fi];
            if w == 0.0 {
                continue;
            }
            let absorb = density(reservoirs, label, w)?;
            let emit = density(reservoirs, label, -w)?;
            q[slot] += 2.0 * w * (absorb * rho[lower] - emit * rho[upper]);
        }
    }
    Ok(HeatCurrents {
        q_l: q[0],
        q_m: q[1],
        q_r: q[2],
    })
}

/// Maps each paper-order level to its index in the ascending numeric
/// spectrum by nearest eigenvalue. Fails if two levels claim the same
/// index, or if a level's nearest and second-nearest candidates are within
/// `1e-9` of each other.
pub fn match_levels(paper: &[f64; DIM], sorted: &[f64]) -> Result<[usize; DIM]> {
    if sorted.len() != DIM {
        return Err(Error::IndexMatch(format!("expected {DIM} sorted eigenvalues, got {}", sorted.len())));
    }
    let mut out = [0; DIM];
    let mut taken = [false; DIM];
    for (k, &value) in paper.iter().enumerate() {
        let mut dist: Vec<(f64, usize)> = sorted.iter().enumerate().map(|(i, s)| ((s - value).abs(), i)).collect();
        dist.sort_by(|a, b| a.0.total_cmp(&b.0));
        if dist[1].0 - dist[0].0 <= 1e-9 {
            return Err(Error::IndexMatch(format!("level {k} at {value} is ambiguous")));
        }
        let idx = dist[0].1;
        if taken[idx] {
            return Err(Error::IndexMatch(format!("sorted level {idx} claimed twice")));
        }
        taken[idx] = true;
        out[k] = idx;
    }
    Ok(out)
}

/// Tolerance on the imaginary part left by the radical chain.
pub const RADICAL_RESIDUE_TOL: f64 = 1e-8;

fn check_tf_inputs(b: f64, j_lm: f64, j_mr: f64) -> Result<()> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::invalid(format!("B must be finite and > 0, got {b}")));
    }
    if !j_lm.is_finite() || !j_mr.is_finite() {
        return Err(Error::invalid("couplings must be finite"));
    }
    Ok(())
}

/// Eigenvalues of the transverse Ising chain with equal fields, in the
/// printed order: four from the `d⁻` branch, then four from the `d⁺` branch.
pub fn tf_eigenvalues(b: f64, j_lm: f64, j_mr: f64) -> Result<[f64; DIM]> {
    check_tf_inputs(b, j_lm, j_mr)?;
    let c = -6.0 * b * b - 2.0 * j_lm * j_lm - 2.0 * j_mr * j_mr;
    let e = -3.0 * b.powi(4) + 2.0 * b * b * (j_lm * j_lm + j_mr * j_mr) + (j_lm * j_lm - j_mr * j_mr).powi(2);
    let p = c * c + 12.0 * e;
    let k = 1.0 / (4.0 * 6f64.sqrt());

    // (m2, m3 with the "+" sign choice, m3 with the "−" sign choice)
    let branch = |d: f64| -> (Complex64, Complex64, Complex64) {
        let q = 2.0 * c.powi(3) + 27.0 * d * d - 72.0 * c * e;
        let m2 = if p.abs() <= 1e-13 * c * c && q.abs() <= 1e-13 * c.abs().powi(3) {
            // uncoupled limit: the resolvent root is −4c directly
            Complex64::new(-4.0 * c, 0.0)
        } else {
            let s = Complex64::new(q * q - 4.0 * p.powi(3), 0.0).sqrt();
            let m1 = (4.0 * (q + s)).powf(1.0 / 3.0);
            m1 + 4.0 * p / m1 - 4.0 * c
        };
        let shift = 12.0 * 6f64.sqrt() * d / m2.sqrt();
        let base = -12.0 * c - m2;
        (m2, base - shift, base + shift)
    };
    let (m2m, m3mp, m3mm) = branch(-8.0 * b.powi(3));
    let (m2p, m3pp, m3pm) = branch(8.0 * b.powi(3));
    let (sm2m, sm2p) = (m2m.sqrt(), m2p.sqrt());
    let values = [
        -(m3mp.sqrt() + sm2m),
        m3mp.sqrt() - sm2m,
        -(m3mm.sqrt() - sm2m),
        m3mm.sqrt() + sm2m,
        -(m3pp.sqrt() + sm2p),
        m3pp.sqrt() - sm2p,
        -(m3pm.sqrt() - sm2p),
        m3pm.sqrt() + sm2p,
    ]
    .map(|z| z * k);
    let residue = values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if !(residue <= RADICAL_RESIDUE_TOL) {
        return Err(Error::RadicalBranch { residue });
    }
    Ok(values.map(|z| z.re))
}

/// Closed-form eigenstructure of the transverse Ising chain.
#[derive(Debug, Clone, PartialEq)]
pub struct TfAnalytic {
    /// Energies in paper order (even sector ascending, then odd ascending).
    pub energies: [f64; DIM],
    /// Row `i`: normalized eigenvector of level `i` in the bare basis.
    pub rows: Mat8,
    /// `⟨i|σˣ_μ|j⟩` within each sector, indexed by reservoir; zero across sectors.
    pub coefficients: [Mat8; 3],
}

/// Even-sector levels come from the `d⁺` branch, odd-sector levels from the
/// `d⁻` branch.
pub fn tf_coefficients(b: f64, j_lm: f64, j_mr: f64) -> Result<TfAnalytic> {
    let printed = tf_eigenvalues(b, j_lm, j_mr)?;
    let mut energies = [0.0; DIM];
    energies[..4].copy_from_slice(&printed[4..]);
    energies[4..].copy_from_slice(&printed[..4]);

    let (j1, j2) = (j_lm, j_mr);
    let mut rows = Mat8::zeros();
    // normalized (1, λ2, λ3, λ4) of each row, without the odd-sector signs
    let mut lambdas = [[0.0; 4]; DIM];
    for (i, &w) in energies.iter().enumerate() {
        let even = i < 4;
        // the closed forms are written for twice the eigenvalue
        let x = if even { 2.0 * w } else { -2.0 * w };
        let lpp = b + j1 + j2 + x;
        let lpm = b + j1 - j2 + x;
        let lmp = b - j1 + j2 + x;
        let lmm = b - j1 - j2 + x;
        let cubic_sign = if even { 1.0 } else { -1.0 };
        let y = 2.0 * w;
        let breve = 3.0 * b.powi(4) - (j1 * j1 - j2 * j2).powi(2) - 2.0 * b * b * (j1 * j1 + j2 * j2)
            + (cubic_sign * 6.0 * b.powi(3) + (b * b + (j1 - j2).powi(2)) * (j1 + j2)) * y
            + (3.0 * b * b + (j1 + j2).powi(2)) * y * y
            - (j1 + j2) * y.powi(3);
        let scale = b + j1.abs() + j2.abs();
        if lmp.abs().min(lpm.abs()).min(y.abs()) <= 1e-9 * scale {
            // happens e.g. at J_LM = J_MR for the levels at ±B/2
            return Err(Error::invalid("closed-form eigenvectors are singular at these parameters"));
        }
        let l3 = breve / (b * y * lmp * lpm);
        let row: [f64; DIM] = if even {
            let (l2, l4) = (lmm / lmp, lmm / lpm);
            [1.0, l2, l3, l4, l4, l3, l2, 1.0]
        } else {
            let (l2, l4) = (lpp / lpm, lpp / lmp);
            [-1.0, l2, -l3, -l4, l4, l3, -l2, 1.0]
        };
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !norm.is_finite() || row.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("closed-form eigenvectors are singular at these parameters"));
        }
        for (j, v) in row.iter().enumerate() {
            rows[(i, j)] = v / norm;
        }
        let flip = if even { 1.0 } else { -1.0 };
        lambdas[i] = [row[0] * flip, row[1], row[2] * flip, row[3] * flip].map(|v| v / norm);
    }

    // 1-based partner columns: L pairs k with 5−k, M pairs k with 4−k
    // (k = 1, 3) or 6−k (k = 2, 4), R pairs k with 3−k (k = 1, 2) or 7−k
    // (k = 3, 4). Entries with the sector sign on k ∈ `signed`.
    let partners: [([usize; 4], [usize; 2]); 3] = [
        ([4, 3, 2, 1], [1, 4]),
        ([3, 4, 1, 2], [1, 3]),
        ([2, 1, 4, 3], [1, 2]),
    ];
    let mut coefficients = [Mat8::zeros(); 3];
    for (mu, (partner, signed)) in partners.iter().enumerate() {
        for sector in 0..2 {
            let sign = if sector == 0 { 1.0 } else { -1.0 };
            for i in sector * 4..sector * 4 + 4 {
                for j in i + 1..sector * 4 + 4 {
                    let sum: f64 = (1..=4)
                        .map(|k| {
                            let s = if signed.contains(&k) { sign } else { 1.0 };
                            s * lambdas[i][k - 1] * lambdas[j][partner[k - 1] - 1]
                        })
                        .sum();
                    coefficients[mu][(i, j)] = 2.0 * sum;
                    coefficients[mu][(j, i)] = 2.0 * sum;
                }
            }
        }
    }
    Ok(TfAnalytic {
        energies,
        rows,
        coefficients,
    })
}

/// Normalized steady populations of each four-level sector of the
/// transverse Ising chain: `[even, odd]`, ascending within each.
pub fn tf_steady_populations(b: f64, j_lm: f64, j_mr: f64, reservoirs: &ReservoirConfig) -> Result<[[f64; 4]; 2]> {
    let tf = tf_coefficients(b, j_lm, j_mr)?;
    let mut out = [[0.0; 4]; 2];
    for (sector, slot) in out.iter_mut().enumerate() {
        let base = sector * 4;
        // mp[i][j] = M⁺_ij (upward i → j), mm[i][j] = M⁻_ij (downward j → i), i < j
        let mut mp = [[0.0; 4]; 4];
        let mut mm = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in i + 1..4 {
                let w = tf.energies[base + j] - tf.energies[base + i];
                for label in SpinLabel::ALL {
                    let kappa = reservoirs.kappa(label);
                    if kappa == 0.0 {
                        continue;
                    }
                    let a2 = tf.coefficients[label.index()][(base + i, base + j)].powi(2);
                    mp[i][j] += 2.0 * a2 * density(reservoirs, label, w)?;
                    mm[i][j] += 2.0 * a2 * density(reservoirs, label, -w)?;
                }
            }
        }
        *slot = kirchhoff_populations(&mp, &mm);
    }
    Ok(out)
}

/// The sixteen-term spanning-tree sums for a four-level rate network,
/// normalized by their total.
fn kirchhoff_populations(p: &[[f64; 4]; 4], m: &[[f64; 4]; 4]) -> [f64; 4] {
    let (p12, p13, p14, p23, p24, p34) = (p[0][1], p[0][2], p[0][3], p[1][2], p[1][3], p[2][3]);
    let (m12, m13, m14, m23, m24, m34) = (m[0][1], m[0][2], m[0][3], m[1][2], m[1][3], m[2][3]);
    let r1 = m12 * m13 * m14 + m12 * m13 * m24 + m12 * m13 * m34 + m12 * m14 * m23 + m12 * m14 * p34
        + m12 * m23 * m24 + m12 * m23 * m34 + m12 * m24 * p34
        + m13 * m14 * p23 + m13 * m14 * p24 + m13 * p23 * m24 + m13 * p23 * m34 + m13 * p24 * m34
        + m14 * m23 * p24 + m14 * p23 * p34 + m14 * p24 * p34;
    let r2 = p12 * m13 * m14 + p12 * m13 * m24 + p12 * m13 * m34 + p12 * m14 * m23 + p12 * m14 * p34
        + p12 * m23 * m24 + p12 * m23 * m34 + p12 * m24 * p34
        + p13 * m14 * m23 + m13 * p14 * m24 + p13 * m23 * m24 + p13 * m23 * m34 + p13 * m24 * p34
        + p14 * m23 * m24 + p14 * m23 * m34 + p14 * m24 * p34;
    let r3 = m12 * p13 * m14 + m12 * p13 * m24 + m12 * p13 * m34 + p12 * m14 * p23 + m12 * p14 * m34
        + p12 * p23 * m24 + p12 * p23 * m34 + p12 * p24 * m34
        + p13 * m14 * p23 + p13 * m14 * p24 + p13 * p23 * m24 + p13 * p23 * m34 + p13 * p24 * m34
        + p14 * p23 * m24 + p14 * p23 * m34 + p14 * p24 * m34;
    let r4 = m12 * m13 * p14 + p12 * m13 * p24 + m12 * p13 * p34 + m12 * p14 * m23 + m12 * p14 * p34
        + p12 * m23 * p24 + p12 * p23 * p34 + p12 * p24 * p34
        + m13 * p14 * p23 + m13 * p14 * p24 + p13 * m23 * p24 + p13 * p23 * p34 + p13 * p24 * p34
        + p14 * m23 * p24 + p14 * p23 * p34 + p14 * p24 * p34;
    let total = r1 + r2 + r3 + r4;
    [r1 / total, r2 / total, r3 / total, r4 / total]
}
