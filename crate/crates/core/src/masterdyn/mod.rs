//! The master equation of a stochastic reaction network.
//!
//! States are population vectors `ℓ ∈ ℕ^S`. A transition `τ: m → n` fires
//! from `ℓ ≥ m` with propensity `r(τ) · Π_i ℓ_i^{\underline{m_i}}` (falling
//! powers, i.e. ordered choices of the input molecules) and moves the
//! population to `ℓ + n − m`. State spaces are finite: they are enumerated by
//! breadth-first search under a cap on the total count, and transitions that
//! would leave the space are dropped, which keeps the generator infinitesimal
//! stochastic.

mod operator;
mod poisson;
mod space;
mod ssa;

pub use operator::{
    expm_action, evolve, ladder_hamiltonian, master_hamiltonian, propensity, EvolveReport,
    MasterOperator, TAIL_TOL,
};
pub use poisson::{ack_report, ack_state, poisson_tail_mass, AckReport, ProductPoissonState};
pub use space::{
    condition_on_class, distribution_csv, enumerate_states, enumerate_states_from, moments,
    observable_values, point_mass, symmetry_scale, total_variation, StateSpace,
};
pub use ssa::{ssa_sample, SsaConfig, SsaResult, SsaSummary};
