//! Invariant subspaces, per-component steady states, and transient
//! population dynamics of the rate equation `dρ/dt = M ρ`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{pauli_word, Axis, Mat8, Spectrum, SpinLabel, Vec8, DIM};

/// Entries above `-CLIP_TOL` are clipped to zero.
pub const CLIP_TOL: f64 = 1e-12;
/// Allowed deviation of a population vector's sum from 1.
pub const SUM_TOL: f64 = 1e-10;
/// Default connectivity threshold, relative to `max |M|`.
pub const DEFAULT_EPS_CONN: f64 = 1e-13;

/// Eigenbasis populations: nonnegative and summing to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationVector(Vec8);

impl PopulationVector {
    pub fn new(values: Vec8) -> Result<Self> {
        if values.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("populations must be finite"));
        }
        if let Some(p) = values.iter().find(|p| **p < -CLIP_TOL) {
            return Err(Error::invalid(format!("population {p:e} is negative")));
        }
        let clipped = values.map(|p| p.max(0.0));
        let sum = clipped.sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::invalid(format!("populations sum to {sum}, expected 1")));
        }
        Ok(PopulationVector(clipped))
    }

    pub fn uniform() -> Self {
        PopulationVector(Vec8::repeat(1.0 / DIM as f64))
    }

    /// Clips small negative round-off without checking the sum.
    fn clipped(values: Vec8) -> Self {
        PopulationVector(values.map(|p| if (-CLIP_TOL..0.0).contains(&p) { 0.0 } else { p }))
    }

    pub fn as_vector(&self) -> &Vec8 {
        &self.0
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn sum_over(&self, indices: &[usize]) -> f64 {
        indices.iter().map(|&i| self.0[i]).sum()
    }
}

/// Partition of the eight levels into dynamically disconnected blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceDecomposition {
    components: Vec<Vec<usize>>,
}

impl SubspaceDecomposition {
    /// Components are sorted internally and ordered by their smallest index.
    pub fn from_components(mut components: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = [false; DIM];
        for c in components.iter_mut() {
            if c.is_empty() {
                return Err(Error::invalid("empty subspace component"));
            }
            c.sort_unstable();
            for &i in c.iter() {
                if i >= DIM || seen[i] {
                    return Err(Error::invalid(format!("index {i} is out of range or repeated")));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::invalid("subspace components do not cover all levels"));
        }
        components.sort_by_key(|c| c[0]);
        Ok(SubspaceDecomposition { components })
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_of(&self, level: usize) -> usize {
        self.components
            .iter()
            .position(|c| c.contains(&level))
            .expect("decomposition covers every level")
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }
}

fn find(parent: &mut [usize; DIM], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Connected components of the graph with an edge wherever
/// `|M(i,j)| > eps_conn · max |M|`.
pub fn detect_subspaces(total: &Mat8, eps_conn: f64) -> SubspaceDecomposition {
    let threshold = eps_conn * total.amax();
    let mut parent: [usize; DIM] = std::array::from_fn(|i| i);
    for i in 0..DIM {
        for j in 0..DIM {
            if i != j && total[(i, j)].abs() > threshold {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = [usize::MAX; DIM];
    for i in 0..DIM {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(i);
    }
    SubspaceDecomposition::from_components(groups).expect("union-find yields a partition")
}

pub(crate) fn block(m: &Mat8, component: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(component.len(), component.len(), |a, b| m[(component[a], component[b])])
}

/// Normalized null vector of `M` restricted to `component`, scattered back
/// into an 8-vector that vanishes off the component.
///
/// The null-space dimension of a rate generator equals its number of closed
/// communicating classes, so that count is checked exactly from the sign
/// pattern of the rates. The stationary vector of the single closed class
/// comes from GTH state reduction, which never subtracts and keeps full
/// relative accuracy even when rates span hundreds of orders of magnitude.
/// Levels outside the closed class are transient and carry no weight.
pub fn solve_component(total: &Mat8, component: &[usize]) -> Result<Vec8> {
    let n = component.len();
    let mut out = Vec8::zeros();
    // q[a][b]: rate from component level a to component level b
    let mut q = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in 0..n {
            if a != b {
                q[a][b] = total[(component[b], component[a])].max(0.0);
            }
        }
    }
    let closed = closed_classes(&q);
    if closed.len() != 1 {
        return Err(Error::Degenerate {
            dimension: closed.len(),
            component: component.to_vec(),
        });
    }
    let class = &closed[0];
    let pi = gth_stationary(class.iter().map(|&a| class.iter().map(|&b| q[a][b]).collect()).collect());
    for (&a, p) in class.iter().zip(pi) {
        out[component[a]] = p;
    }
    Ok(out)
}

/// Closed communicating classes of the directed graph with an edge `a → b`
/// wherever `q[a][b] > 0`, each sorted, in order of their smallest member.
fn closed_classes(q: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let n = q.len();
    let mut reach: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| a == b || q[a][b] > 0.0).collect()).collect();
    for k in 0..n {
        for a in 0..n {
            if reach[a][k] {
                for b in 0..n {
                    if reach[k][b] {
                        reach[a][b] = true;
                    }
                }
            }
        }
    }
    let mut classes = Vec::new();
    let mut assigned = vec![false; n];
    for a in 0..n {
        if assigned[a] {
            continue;
        }
        let class: Vec<usize> = (0..n).filter(|&b| reach[a][b] && reach[b][a]).collect();
        for &b in &class {
            assigned[b] = true;
        }
        // closed: everything reachable from the class is inside it
        if (0..n).all(|b| !reach[a][b] || class.contains(&b)) {
            classes.push(class);
        }
    }
    classes
}

/// Stationary distribution of an irreducible chain with off-diagonal rates
/// `q[a][b]` by Grassmann–Taksar–Heyman elimination.
fn gth_stationary(mut q: Vec<Vec<f64>>) -> Vec<f64> {
    let n = q.len();
    let mut exit = vec![0.0; n];
    for k in (1..n).rev() {
        let s: f64 = (0..k).map(|j| q[k][j]).sum();
        exit[k] = s;
        for i in 0..k {
            let f = q[i][k] / s;
            if f == 0.0 {
                continue;
            }
            for j in 0..k {
                if j != i {
                    q[i][j] += f * q[k][j];
                }
            }
        }
    }
    let mut pi = vec![0.0; n];
    pi[0] = 1.0;
    for k in 1..n {
        pi[k] = (0..k).map(|i| pi[i] * q[i][k]).sum::<f64>() / exit[k];
    }
    let total: f64 = pi.iter().sum();
    pi.iter().map(|p| p / total).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadySolution {
    pub decomposition: SubspaceDecomposition,
    /// One normalized state per component, in decomposition order.
    pub component_states: Vec<Vec8>,
    pub weights: Vec<f64>,
}

impl SteadySolution {
    /// `Σ_c w_c · state_c`.
    pub fn populations(&self) -> Vec8 {
        self.component_states
            .iter()
            .zip(&self.weights)
            .fold(Vec8::zeros(), |acc, (s, w)| acc + s * *w)
    }

    /// The same per-component states with different weights.
    pub fn reweighted(&self, weights: Vec<f64>) -> Result<SteadySolution> {
        if weights.len() != self.weights.len() {
            return Err(Error::invalid("weight count does not match component count"));
        }
        Ok(SteadySolution {
            weights,
            ..self.clone()
        })
    }
}

/// Per-component steady states, solved once and reusable for any initial state.
pub fn component_states(total: &Mat8, decomposition: &SubspaceDecomposition) -> Result<Vec<Vec8>> {
    decomposition
        .components()
        .iter()
        .map(|c| solve_component(total, c))
        .collect()
}

pub fn steady_state(total: &Mat8, initial: &PopulationVector, eps_conn: f64) -> Result<SteadySolution> {
    let decomposition = detect_subspaces(total, eps_conn);
    steady_state_with(total, decomposition, initial)
}

pub fn steady_state_with(
    total: &Mat8,
    decomposition: SubspaceDecomposition,
    initial: &PopulationVector,
) -> Result<SteadySolution> {
    let component_states = component_states(total, &decomposition)?;
    let weights = decomposition.components().iter().map(|c| initial.sum_over(c)).collect();
    Ok(SteadySolution {
        decomposition,
        component_states,
        weights,
    })
}

/// `exp(M t) ρ(0)` at each requested time, one dense exponential per
/// component block so that component weights cannot leak.
pub fn evolve(
    total: &Mat8,
    decomposition: &SubspaceDecomposition,
    initial: &PopulationVector,
    times: &[f64],
) -> Result<Vec<PopulationVector>> {
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::invalid("evolution times must be finite and >= 0"));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("evolution times must be ascending"));
    }
    let blocks: Vec<DMatrix<f64>> = decomposition.components().iter().map(|c| block(total, c)).collect();
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let mut rho = Vec8::zeros();
        for (c, sub) in decomposition.components().iter().zip(&blocks) {
            let p0 = DVector::from_iterator(c.len(), c.iter().map(|&i| initial.get(i)));
            let weight = p0.sum();
            let mut pt = if t == 0.0 { p0 } else { (sub * t).exp() * p0 };
            // scaling-and-squaring drifts at large |M|t; the block weight is exact
            let drifted = pt.sum();
            if t > 0.0 && drifted > 0.0 {
                pt *= weight / drifted;
            }
            for (a, &i) in c.iter().enumerate() {
                rho[i] = pt[a];
            }
        }
        out.push(PopulationVector::clipped(rho));
    }
    Ok(out)
}

/// Slowest nonzero decay rate: the smallest `|Re λ|` over all block
/// eigenvalues once the single stationary eigenvalue of each block is removed.
pub fn relaxation_rate(total: &Mat8, decomposition: &SubspaceDecomposition) -> Option<f64> {
    let mut slowest: Option<f64> = None;
    for c in decomposition.components() {
        if c.len() < 2 {
            continue;
        }
        let mut rates: Vec<f64> = block(total, c).complex_eigenvalues().iter().map(|z| z.re.abs()).collect();
        rates.sort_by(f64::total_cmp);
        if let Some(&r) = rates.get(1) {
            if r > 0.0 {
                slowest = Some(slowest.map_or(r, |s: f64| s.min(r)));
            }
        }
    }
    slowest
}

/// Initial-state forms accepted by the configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    /// A pure bare-basis state, 1-based (`1` is `|↑↑↑⟩`); only its eigenbasis
    /// populations are kept.
    BareIndex(usize),
    /// Populations in the ascending eigenbasis.
    EigenPopulations([f64; DIM]),
    /// Weight `p` on the lowest level of the leading component and `1 − p`
    /// spread over the lowest levels of the others (see [`leading_order`]).
    SubspaceFraction(f64),
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::EigenPopulations([1.0 / DIM as f64; DIM])
    }
}

impl InitialState {
    pub fn validate(&self) -> Result<()> {
        match self {
            InitialState::BareIndex(k) if !(1..=DIM).contains(k) => {
                Err(Error::invalid(format!("initial.bare_index must be in 1..=8, got {k}")))
            }
            InitialState::EigenPopulations(p) => PopulationVector::new(Vec8::from_column_slice(p)).map(|_| ()),
            InitialState::SubspaceFraction(p) if !(0.0..=1.0).contains(p) => {
                Err(Error::invalid(format!("initial.subspace_fraction must lie in [0, 1], got {p}")))
            }
            _ => Ok(()),
        }
    }

    pub fn resolve(&self, spectrum: &Spectrum, decomposition: &SubspaceDecomposition) -> Result<PopulationVector> {
        self.validate()?;
        match self {
            InitialState::BareIndex(k) => PopulationVector::new(spectrum.bare_state_populations(k - 1)),
            InitialState::EigenPopulations(p) => PopulationVector::new(Vec8::from_column_slice(p)),
            InitialState::SubspaceFraction(p) => {
                let mut v = Vec8::zeros();
                let order = leading_order(spectrum, decomposition);
                let comps = decomposition.components();
                if order.len() == 1 {
                    v[comps[0][0]] = 1.0;
                } else {
                    let rest = (1.0 - p) / (order.len() - 1) as f64;
                    for (rank, &c) in order.iter().enumerate() {
                        v[comps[c][0]] = if rank == 0 { *p } else { rest };
                    }
                }
                PopulationVector::new(v)
            }
        }
    }
}

/// Component order used by [`InitialState::SubspaceFraction`].
///
/// Components are ranked by the global spin-flip parity `⟨σˣσˣσˣ⟩` of their
/// lowest level, highest first, then by their lowest level. In the
/// transverse Ising chain this puts the even-parity block first; where
/// parity does not separate the blocks, the block holding the ground state
/// leads.
pub fn leading_order(spectrum: &Spectrum, decomposition: &SubspaceDecomposition) -> Vec<usize> {
    let flip = SpinLabel::ALL
        .iter()
        .fold(Mat8::identity(), |acc, l| acc * pauli_word(*l, Axis::X).matrix);
    let parity = spectrum.to_eigenbasis(&flip);
    let mut order: Vec<usize> = (0..decomposition.len()).collect();
    let key = |c: usize| {
        let lowest = decomposition.components()[c][0];
        ((parity[(lowest, lowest)] * 1e6).round() as i64, lowest)
    };
    order.sort_by(|&a, &b| {
        let (pa, la) = key(a);
        let (pb, lb) = key(b);
        pb.cmp(&pa).then(la.cmp(&lb))
    });
    order
}
