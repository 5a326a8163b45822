//! The deterministic rate equation
//! `dx/dt = Σ_τ r(τ) (n(τ) − m(τ)) x^{m(τ)}`, its factored form
//! `dx/dt = Y H x^Y`, fixed-step integration, complex balance, and the
//! constructive equilibrium for weakly reversible deficiency-zero networks.

mod equilibrium;
mod integrate;

use crate::error::{Error, Result};
use crate::exactlin::{IntMatrix, RealMatrix};
use crate::markov::{hamiltonian, GraphWithRates, Operator};
use crate::netcore::ReactionNetwork;
use crate::structure::build_incidence;

pub use equilibrium::{deficiency_zero_equilibrium, EquilibriumResult};
pub use integrate::{integrate_rate, Trajectory, NEGATIVITY_TOL};

/// `x^Y`: the complex-space vector with entries `Π_i x_i^{Y_iκ}`, using
/// `0⁰ = 1`.
pub fn x_pow_y(x: &[f64], y: &IntMatrix) -> Vec<f64> {
    (0..y.cols())
        .map(|k| {
            (0..y.rows())
                .map(|i| x[i].powi(y[(i, k)] as i32))
                .product()
        })
        .collect()
}

/// `x^Y = exp(Yᵀ ln x)` for strictly positive `x`.
pub fn x_pow_y_log(x: &[f64], y: &IntMatrix) -> Vec<f64> {
    let ln_x: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    y.to_real().vecmat(&ln_x).into_iter().map(f64::exp).collect()
}

fn monomial(x: &[f64], m: &[u32]) -> f64 {
    x.iter().zip(m).map(|(xi, &e)| xi.powi(e as i32)).product()
}

/// Precomputed data for repeated evaluation of the rate equation.
#[derive(Debug, Clone)]
pub struct RateSystem<'a> {
    network: &'a ReactionNetwork,
    y: IntMatrix,
    y_real: RealMatrix,
    h: Operator,
}

impl<'a> RateSystem<'a> {
    pub fn new(network: &'a ReactionNetwork) -> Result<Self> {
        let y = build_incidence(network).y_mat;
        let h = hamiltonian(&GraphWithRates::from_network(network))?;
        Ok(Self {
            network,
            y_real: y.to_real(),
            y,
            h,
        })
    }

    pub fn network(&self) -> &ReactionNetwork {
        self.network
    }

    /// The complex-space Hamiltonian `H`.
    pub fn hamiltonian(&self) -> &Operator {
        &self.h
    }

    pub fn y(&self) -> &IntMatrix {
        &self.y
    }

    fn check_state(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.network.num_species() {
            return Err(Error::DimensionMismatch {
                expected: self.network.num_species(),
                found: x.len(),
            });
        }
        if let Some(v) = x.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "state entries must be finite and nonnegative, found {v}"
            )));
        }
        Ok(())
    }

    /// The classical sum, without validation. Also returns, per species,
    /// `Σ_τ r x^m (n_i + m_i)`, the magnitude against which rounding is judged.
    pub(crate) fn classical(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let s = x.len();
        let mut dx = vec![0.0; s];
        let mut scale = vec![0.0; s];
        for (j, t) in self.network.transitions().iter().enumerate() {
            let m = self.network.input(j).counts();
            let n = self.network.output(j).counts();
            let flux = t.rate * monomial(x, m);
            for i in 0..s {
                dx[i] += flux * (f64::from(n[i]) - f64::from(m[i]));
                scale[i] += flux.abs() * f64::from(n[i] + m[i]);
            }
        }
        (dx, scale)
    }

    /// `Y · H · x^Y`.
    pub fn factored(&self, x: &[f64]) -> Vec<f64> {
        self.y_real.matvec(&self.h.matvec(&x_pow_y(x, &self.y)))
    }

    /// Right-hand side of the rate equation, evaluated as the classical sum
    /// and checked against the factored form to `1e-12` relative.
    pub fn rhs(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_state(x)?;
        let (dx, scale) = self.classical(x);
        let alt = self.factored(x);
        let bound = 1e-12 * scale.iter().cloned().fold(0.0, f64::max);
        let diff = dx
            .iter()
            .zip(&alt)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if diff > bound && diff.is_finite() {
            return Err(Error::Internal(format!(
                "classical and factored rate equations differ by {diff:e}"
            )));
        }
        if dx.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("rate equation overflowed".into()));
        }
        Ok(dx)
    }

    /// Complex balance at `c`: for every complex the total outflow
    /// `Σ_{s(τ)=κ} r c^{m(τ)}` matches the inflow `Σ_{t(τ)=κ} r c^{m(τ)}`
    /// within `tol` relative to the larger side.
    pub fn is_complex_balanced(&self, c: &[f64], tol: f64) -> Result<bool> {
        self.check_state(c)?;
        if c.iter().any(|&v| v <= 0.0) {
            return Err(Error::InvalidParameter("complex balance needs c > 0".into()));
        }
        let k = self.network.num_complexes();
        let mut outflow = vec![0.0; k];
        let mut inflow = vec![0.0; k];
        for (j, t) in self.network.transitions().iter().enumerate() {
            let flux = t.rate * monomial(c, self.network.input(j).counts());
            outflow[t.source] += flux;
            inflow[t.target] += flux;
        }
        Ok(outflow
            .iter()
            .zip(&inflow)
            .all(|(o, i)| (o - i).abs() <= tol * o.max(*i)))
    }
}

/// `dx/dt` for the network at state `x ≥ 0`.
pub fn rate_rhs(n: &ReactionNetwork, x: &[f64]) -> Result<Vec<f64>> {
    RateSystem::new(n)?.rhs(x)
}

pub fn is_complex_balanced(n: &ReactionNetwork, c: &[f64], tol: f64) -> Result<bool> {
    RateSystem::new(n)?.is_complex_balanced(c, tol)
}
