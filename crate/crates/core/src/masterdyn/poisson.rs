use serde::Serialize;

use super::operator::MasterOperator;
use super::space::StateSpace;
use crate::error::{Error, Result};
use crate::exactlin::norm_inf;
use crate::netcore::ReactionNetwork;
use crate::ratedyn::is_complex_balanced;

fn ln_factorials(max: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(max as usize + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=max {
        acc += f64::from(k).ln();
        out.push(acc);
    }
    out
}

/// Product of independent Poisson distributions with means `x`, optionally
/// restricted to a conservation class `{ℓ : w·ℓ = k}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductPoissonState {
    pub x: Vec<f64>,
    pub class_constraint: Option<(Vec<i64>, i64)>,
}

impl ProductPoissonState {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if x.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidParameter("Poisson means must be positive".into()));
        }
        Ok(Self {
            x,
            class_constraint: None,
        })
    }

    pub fn restricted(mut self, w: Vec<i64>, k: i64) -> Self {
        self.class_constraint = Some((w, k));
        self
    }

    /// `ψ_ℓ ∝ Π_i x_i^{ℓ_i} / ℓ_i!` over the states of `space`, normalized.
    /// Weights are formed in log space.
    pub fn distribution(&self, space: &StateSpace) -> Result<Vec<f64>> {
        if space.states().first().is_some_and(|s| s.len() != self.x.len()) {
            return Err(Error::DimensionMismatch {
                expected: self.x.len(),
                found: space.states()[0].len(),
            });
        }
        let lf = ln_factorials(space.max_count());
        let ln_x: Vec<f64> = self.x.iter().map(|v| v.ln()).collect();
        let logs: Vec<Option<f64>> = space
            .states()
            .iter()
            .map(|s| {
                if let Some((w, k)) = &self.class_constraint {
                    let v: i64 = s.iter().zip(w).map(|(&c, &wi)| i64::from(c) * wi).sum();
                    if v != *k {
                        return None;
                    }
                }
                Some(
                    s.iter()
                        .zip(&ln_x)
                        .map(|(&c, lx)| f64::from(c) * lx - lf[c as usize])
                        .sum(),
                )
            })
            .collect();
        let top = logs
            .iter()
            .flatten()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return Err(Error::InvalidParameter("no state satisfies the class constraint".into()));
        }
        let weights: Vec<f64> = logs
            .iter()
            .map(|l| l.map_or(0.0, |l| (l - top).exp()))
            .collect();
        let sum: f64 = weights.iter().sum();
        Ok(weights.into_iter().map(|w| w / sum).collect())
    }
}

/// The product-Poisson state with means `x`, which must be a complex
/// balanced equilibrium of the rate equation (within `tol`).
pub fn ack_state(n: &ReactionNetwork, x: &[f64], space: &StateSpace, tol: f64) -> Result<Vec<f64>> {
    if !is_complex_balanced(n, x, tol)? {
        return Err(Error::Precondition(
            "means are not a complex balanced equilibrium".into(),
        ));
    }
    ProductPoissonState::new(x.to_vec())?.distribution(space)
}

/// `P(N > cap)` for `N ~ Poisson(mean)`.
pub fn poisson_tail_mass(mean: f64, cap: u64) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    let k0 = cap + 1;
    let ln_fact: f64 = (1..=k0).map(|k| (k as f64).ln()).sum();
    let mut term = (-mean + k0 as f64 * mean.ln() - ln_fact).exp();
    let mut sum = 0.0;
    let mut k = k0;
    while term > 0.0 {
        sum += term;
        k += 1;
        term *= mean / k as f64;
        if (k as f64) > mean && term < sum * 1e-17 {
            break;
        }
    }
    sum.min(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AckReport {
    /// `‖Hψ‖∞`.
    pub residual: f64,
    /// `‖Hψ‖∞ / ‖H‖∞`.
    pub relative_residual: f64,
    pub closed: bool,
    /// Mass of the untruncated product-Poisson state beyond the total-count cap.
    pub tail_mass: f64,
}

/// Equilibrium residual of `psi` under `h`, with the truncation tail mass of
/// the product-Poisson state with means `x`.
pub fn ack_report(h: &MasterOperator, space: &StateSpace, psi: &[f64], x: &[f64]) -> AckReport {
    let residual = norm_inf(&h.apply(psi));
    let scale = h.norm_inf();
    AckReport {
        residual,
        relative_residual: if scale > 0.0 { residual / scale } else { residual },
        closed: space.is_closed(),
        tail_mass: if space.is_closed() {
            0.0
        } else {
            poisson_tail_mass(x.iter().sum(), space.cap())
        },
    }
}
