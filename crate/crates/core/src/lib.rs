//! Reaction networks as stochastic and deterministic dynamical systems.
//!
//! - [`netcore`]: network data model, text DSL, Petri-net conversions.
//! - [`exactlin`]: exact integer rank/kernels and small dense float routines.
//! - [`structure`]: incidence matrices, components, deficiency, conservation laws.
//! - [`ratedyn`]: the rate equation, complex balance, deficiency-zero equilibria.
//! - [`markov`]: graphs with rates, generator predicates, Laplacians, Noether checks.
//! - [`masterdyn`]: population state spaces, the master equation, product-Poisson states, SSA.

pub mod error;
pub mod exactlin;
pub mod markov;
pub mod masterdyn;
pub mod netcore;
pub mod ratedyn;
pub mod structure;

pub use error::{Error, Result};
