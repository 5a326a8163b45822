//! Markov processes on finite state sets.
//!
//! A [`GraphWithRates`] is a directed multigraph whose edges carry positive
//! rates. Its Hamiltonian `H` is the infinitesimal generator: the master
//! equation is `dψ/dt = Hψ`. Operators are small dense matrices here.

mod equilibria;
mod graphs;
mod noether;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::RealMatrix;
use crate::netcore::ReactionNetwork;

pub use crate::exactlin::is_irreducible;
pub use equilibria::{component_equilibria, strong_components_of, terminal_classes};
pub use graphs::{generate_graph, graph_laplacian, GraphSpec, SimpleGraph};
pub use noether::{dirichlet_form, noether_check_chain, noether_check_process, NoetherReport};

/// Default absolute tolerance for operator predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A dense square operator on `ℝ^n`.
pub type Operator = RealMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphWithRates {
    pub num_states: usize,
    pub edges: Vec<Edge>,
}

impl GraphWithRates {
    pub fn new(num_states: usize, edges: Vec<Edge>) -> Result<Self> {
        for e in &edges {
            if e.source >= num_states || e.target >= num_states {
                return Err(Error::InvalidParameter(format!(
                    "edge {} -> {} outside {num_states} states",
                    e.source, e.target
                )));
            }
            if !(e.rate.is_finite() && e.rate > 0.0) {
                return Err(Error::NonPositiveRate(e.rate));
            }
        }
        Ok(Self { num_states, edges })
    }

    /// The complex graph of a reaction network, with its rate constants.
    pub fn from_network(n: &ReactionNetwork) -> Self {
        Self {
            num_states: n.num_complexes(),
            edges: n
                .transitions()
                .iter()
                .map(|t| Edge {
                    source: t.source,
                    target: t.target,
                    rate: t.rate,
                })
                .collect(),
        }
    }

    /// Weak reversibility of the underlying directed graph.
    pub fn is_weakly_reversible(&self) -> bool {
        let scc = strong_components_of(self);
        self.edges.iter().all(|e| scc[e.source] == scc[e.target])
    }
}

fn hamiltonian_entrywise(g: &GraphWithRates) -> Operator {
    let n = g.num_states;
    let mut h = RealMatrix::zeros(n, n);
    for e in &g.edges {
        if e.source != e.target {
            h[(e.target, e.source)] += e.rate;
        }
    }
    for j in 0..n {
        let out: f64 = (0..n).filter(|&i| i != j).map(|i| h[(i, j)]).sum();
        h[(j, j)] = -out;
    }
    h
}

/// `H = ∂ s†`, where the adjoint of `s : ℝ^T → ℝ^K` is taken with respect to
/// the inner product on `ℝ^T` that weights transition `τ` by `1/r(τ)`; this
/// makes `s† = diag(r)·sᵀ`.
fn hamiltonian_factored(g: &GraphWithRates) -> Operator {
    let (k, t) = (g.num_states, g.edges.len());
    let mut boundary = RealMatrix::zeros(k, t);
    let mut s_adj = RealMatrix::zeros(t, k);
    for (j, e) in g.edges.iter().enumerate() {
        boundary[(e.target, j)] += 1.0;
        boundary[(e.source, j)] -= 1.0;
        s_adj[(j, e.source)] = e.rate;
    }
    boundary.matmul(&s_adj)
}

/// Generator of the Markov process of a graph with rates:
/// `H_ij = Σ_{τ: j→i} r(τ)` off the diagonal, with the diagonal making every
/// column sum to zero. Built entrywise and as `∂ s†`; the two must agree to
/// `1e-12` relative.
pub fn hamiltonian(g: &GraphWithRates) -> Result<Operator> {
    let h = hamiltonian_entrywise(g);
    let f = hamiltonian_factored(g);
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    let diff = h.sub(&f).max_abs();
    if diff > 1e-12 * scale {
        return Err(Error::Internal(format!(
            "entrywise and factored Hamiltonians differ by {diff:e}"
        )));
    }
    Ok(h)
}

/// Zero column sums and nonnegative off-diagonal entries, within `tol`.
pub fn is_infinitesimal_stochastic(h: &Operator, tol: f64) -> bool {
    if !h.is_square() {
        return false;
    }
    let n = h.rows();
    (0..n).all(|j| {
        let sum: f64 = (0..n).map(|i| h[(i, j)]).sum();
        sum.abs() <= tol && (0..n).all(|i| i == j || h[(i, j)] >= -tol)
    })
}

/// Nonnegative entries and unit column sums, within `tol`.
pub fn is_stochastic(u: &Operator, tol: f64) -> bool {
    if !u.is_square() {
        return false;
    }
    let n = u.rows();
    u.data().iter().all(|&x| x >= -tol)
        && (0..n).all(|j| ((0..n).map(|i| u[(i, j)]).sum::<f64>() - 1.0).abs() <= tol)
}

/// Self-adjoint and infinitesimal stochastic, within `tol`.
pub fn is_dirichlet(h: &Operator, tol: f64) -> bool {
    is_infinitesimal_stochastic(h, tol) && h.asymmetry() <= tol
}
