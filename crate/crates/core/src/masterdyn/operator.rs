use serde::Serialize;

use super::space::{fire, StateSpace};
use crate::error::{Error, Result};
use crate::exactlin::RealMatrix;
use crate::markov::is_infinitesimal_stochastic;
use crate::netcore::ReactionNetwork;

/// Mass drift above which [`evolve`] renormalizes its result.
pub const TAIL_TOL: f64 = 1e-12;

/// Bound on the Poisson tail mass discarded by one [`expm_action`] call.
const SERIES_TAIL: f64 = 1e-15;

/// Largest `Λτ` handled in a single uniformization sub-step; keeps `e^{−Λτ}`
/// far from underflow.
const MAX_SUBSTEP: f64 = 32.0;

/// `r(τ) · Π_i ℓ_i (ℓ_i − 1) ⋯ (ℓ_i − m_i + 1)`; zero unless `ℓ ≥ m`.
pub fn propensity(rate: f64, input: &[u32], state: &[u32]) -> f64 {
    let mut falling = 1.0;
    for (&l, &m) in state.iter().zip(input) {
        if l < m {
            return 0.0;
        }
        for j in 0..m {
            falling *= f64::from(l - j);
        }
    }
    rate * falling
}

/// Sparse infinitesimal stochastic matrix on a [`StateSpace`]. Off-diagonal
/// entries are stored per column in row order; the diagonal is the negated sum of each
/// column's off-diagonal entries, accumulated in storage order, so every
/// column sums to exactly zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MasterOperator {
    dim: usize,
    columns: Vec<Vec<(usize, f64)>>,
    diag: Vec<f64>,
    /// Some transition was dropped because its target lies outside the space.
    pub boundary_truncated: bool,
}

impl MasterOperator {
    fn from_columns(mut columns: Vec<Vec<(usize, f64)>>, boundary_truncated: bool) -> Self {
        for col in columns.iter_mut() {
            col.sort_by_key(|e| e.0);
        }
        let diag = columns
            .iter()
            .map(|col| -col.iter().fold(0.0, |acc, &(_, v)| acc + v))
            .collect();
        Self {
            dim: columns.len(),
            columns,
            diag,
            boundary_truncated,
        }
    }

    /// Wraps a dense generator, which must be infinitesimal stochastic within
    /// `tol`. The diagonal is recomputed from the off-diagonal entries.
    pub fn from_dense(h: &RealMatrix, tol: f64) -> Result<Self> {
        if !is_infinitesimal_stochastic(h, tol) {
            return Err(Error::Precondition("matrix is not infinitesimal stochastic".into()));
        }
        let n = h.rows();
        let columns = (0..n)
            .map(|j| {
                (0..n)
                    .filter(|&i| i != j && h[(i, j)] > 0.0)
                    .map(|i| (i, h[(i, j)]))
                    .collect()
            })
            .collect();
        Ok(Self::from_columns(columns, false))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Off-diagonal entries of column `j` as `(row, value)`.
    pub fn column(&self, j: usize) -> &[(usize, f64)] {
        &self.columns[j]
    }

    /// Largest exit rate `max_j |H_jj|`.
    pub fn max_exit_rate(&self) -> f64 {
        self.diag.iter().fold(0.0, |m, d| m.max(d.abs()))
    }

    /// `‖H‖∞`, the largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut rows: Vec<f64> = self.diag.iter().map(|d| d.abs()).collect();
        for col in &self.columns {
            for &(i, v) in col {
                rows[i] += v.abs();
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = self.diag.iter().zip(v).map(|(d, x)| d * x).collect();
        for (j, col) in self.columns.iter().enumerate() {
            let x = v[j];
            if x != 0.0 {
                for &(i, h) in col {
                    out[i] += h * x;
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> RealMatrix {
        let mut m = RealMatrix::zeros(self.dim, self.dim);
        for (j, col) in self.columns.iter().enumerate() {
            m[(j, j)] = self.diag[j];
            for &(i, v) in col {
                m[(i, j)] += v;
            }
        }
        m
    }
}

fn add_entry(col: &mut Vec<(usize, f64)>, row: usize, value: f64) {
    match col.iter_mut().find(|(i, _)| *i == row) {
        Some(e) => e.1 += value,
        None => col.push((row, value)),
    }
}

/// Generator of the master equation on `space`: for every state `ℓ` and
/// transition `τ` with `ℓ ≥ m(τ)`, the propensity flows from `ℓ` to
/// `ℓ + n(τ) − m(τ)`. Targets outside the space drop the transition entirely.
pub fn master_hamiltonian(n: &ReactionNetwork, space: &StateSpace) -> MasterOperator {
    let mut truncated = false;
    let columns = space
        .states()
        .iter()
        .enumerate()
        .map(|(j, state)| {
            let mut col = Vec::new();
            for (k, t) in n.transitions().iter().enumerate() {
                let input = n.input(k).counts();
                let Some(next) = fire(state, input, n.output(k).counts()) else {
                    continue;
                };
                let Some(i) = space.index_of(&next) else {
                    truncated = true;
                    continue;
                };
                let p = propensity(t.rate, input, state);
                if i != j && p > 0.0 {
                    add_entry(&mut col, i, p);
                }
            }
            col
        })
        .collect();
    MasterOperator::from_columns(columns, truncated)
}

/// A scalar multiple of a basis vector `z^ℓ` in the coefficient
/// representation, acted on by creation and annihilation operators.
#[derive(Debug, Clone)]
struct Monomial {
    coeff: f64,
    state: Vec<u32>,
}

impl Monomial {
    /// `a_i`: `z^ℓ ↦ ℓ_i z^{ℓ − e_i}`, vanishing when `ℓ_i = 0`.
    fn annihilate(mut self, i: usize) -> Option<Self> {
        let l = self.state[i];
        if l == 0 {
            return None;
        }
        self.coeff *= f64::from(l);
        self.state[i] = l - 1;
        Some(self)
    }

    /// `a_i†`: `z^ℓ ↦ z^{ℓ + e_i}`.
    fn create(mut self, i: usize) -> Self {
        self.state[i] += 1;
        self
    }

    fn annihilate_all(self, m: &[u32]) -> Option<Self> {
        let mut cur = self;
        for (i, &k) in m.iter().enumerate() {
            for _ in 0..k {
                cur = cur.annihilate(i)?;
            }
        }
        Some(cur)
    }

    fn create_all(self, n: &[u32]) -> Self {
        let mut cur = self;
        for (i, &k) in n.iter().enumerate() {
            for _ in 0..k {
                cur = cur.create(i);
            }
        }
        cur
    }
}

/// The master Hamiltonian assembled from `Σ_τ r(τ) (a†^{n(τ)} − a†^{m(τ)}) a^{m(τ)}`,
/// applied to each basis vector of `space`. Transitions whose image leaves the
/// space are dropped, exactly as in [`master_hamiltonian`].
pub fn ladder_hamiltonian(n: &ReactionNetwork, space: &StateSpace) -> RealMatrix {
    let dim = space.len();
    let mut h = RealMatrix::zeros(dim, dim);
    for (j, state) in space.states().iter().enumerate() {
        let mut terms = Vec::new();
        for (k, t) in n.transitions().iter().enumerate() {
            let basis = Monomial {
                coeff: 1.0,
                state: state.clone(),
            };
            let Some(lowered) = basis.annihilate_all(n.input(k).counts()) else {
                continue;
            };
            let gain = lowered.clone().create_all(n.output(k).counts());
            let loss = lowered.create_all(n.input(k).counts());
            let Some(i) = space.index_of(&gain.state) else {
                continue;
            };
            debug_assert_eq!(loss.state, *state);
            if i != j && gain.coeff > 0.0 {
                terms.push((i, t.rate * gain.coeff, t.rate * loss.coeff));
            }
        }
        // accumulate per target row, then across rows in row order, matching
        // the sparse storage
        terms.sort_by_key(|e| e.0);
        let mut outflow = 0.0;
        let mut idx = 0;
        while idx < terms.len() {
            let row = terms[idx].0;
            let mut row_loss = 0.0;
            while idx < terms.len() && terms[idx].0 == row {
                h[(row, j)] += terms[idx].1;
                row_loss += terms[idx].2;
                idx += 1;
            }
            outflow += row_loss;
        }
        h[(j, j)] = -outflow;
    }
    h
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolveReport {
    pub psi: Vec<f64>,
    /// `|Σψ − 1|` before any renormalization.
    pub drift: f64,
    pub renormalized: bool,
    /// Number of uniformization sub-steps.
    pub substeps: usize,
    /// Upper bound on the discarded Poisson tail mass.
    pub tail_bound: f64,
}

/// `exp(tH) v` by uniformization, for any real `v`. Returns the result and a
/// bound on the discarded Poisson tail mass (relative to `‖v‖₁`).
pub fn expm_action(h: &MasterOperator, v: &[f64], t: f64) -> Result<(Vec<f64>, usize, f64)> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    if v.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: v.len(),
        });
    }
    let lambda = h.max_exit_rate() * (1.0 + 1e-12);
    if t == 0.0 || lambda == 0.0 {
        return Ok((v.to_vec(), 0, 0.0));
    }
    let substeps = ((lambda * t) / MAX_SUBSTEP).ceil().max(1.0) as usize;
    let tau = t / substeps as f64;
    let lt = lambda * tau;
    let step_tol = SERIES_TAIL / substeps as f64;

    // P = I + H/Λ has nonnegative entries.
    let p_apply = |x: &[f64]| -> Vec<f64> {
        let hx = h.apply(x);
        x.iter().zip(&hx).map(|(a, b)| a + b / lambda).collect()
    };

    let mut x = v.to_vec();
    let mut tail_total = 0.0;
    for _ in 0..substeps {
        let mut w = (-lt).exp();
        let mut term = x.clone();
        let mut acc: Vec<f64> = term.iter().map(|a| w * a).collect();
        let mut k = 0usize;
        loop {
            let next_w = w * lt / (k + 1) as f64;
            // Σ_{j>k} w_j ≤ w_{k+1} / (1 − λ/(k+2)) once k+2 > λ
            let ratio = lt / (k + 2) as f64;
            if ratio < 1.0 {
                let tail = next_w / (1.0 - ratio);
                if tail < step_tol {
                    tail_total += tail;
                    break;
                }
            }
            term = p_apply(&term);
            k += 1;
            w = next_w;
            for (a, b) in acc.iter_mut().zip(&term) {
                *a += w * b;
            }
            if k > 10_000 {
                return Err(Error::NoConvergence(k));
            }
        }
        x = acc;
    }
    Ok((x, substeps, tail_total))
}

/// Evolves a probability vector under the master equation for time `t`.
/// The result is renormalized only if its mass drifted by more than
/// [`TAIL_TOL`].
pub fn evolve(h: &MasterOperator, psi0: &[f64], t: f64) -> Result<EvolveReport> {
    if psi0.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::InvalidParameter("initial distribution must be nonnegative".into()));
    }
    let (mut psi, substeps, tail_bound) = expm_action(h, psi0, t)?;
    let mass0: f64 = psi0.iter().sum();
    let mass: f64 = psi.iter().sum();
    let drift = (mass - mass0).abs();
    let renormalized = drift > TAIL_TOL;
    if renormalized {
        for p in psi.iter_mut() {
            *p *= mass0 / mass;
        }
    }
    Ok(EvolveReport {
        psi,
        drift,
        renormalized,
        substeps,
        tail_bound,
    })
}
