use serde::Serialize;

use super::{x_pow_y, RateSystem};
use crate::error::{Error, Result};
use crate::exactlin::{least_squares, norm_inf};
use crate::markov::{component_equilibria, GraphWithRates};
use crate::netcore::ReactionNetwork;
use crate::structure::{build_incidence, deficiency};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumResult {
    /// Positive equilibrium concentrations.
    pub x: Vec<f64>,
    /// `ln ψ − Yᵀ ln x`, constant on each connected component.
    pub alpha: Vec<f64>,
    /// `‖H x^Y‖∞`.
    pub residual_master: f64,
    /// `‖Y H x^Y‖∞`.
    pub residual_rate: f64,
    /// The positive complex-space equilibrium `ψ` the construction started from.
    #[serde(skip)]
    pub psi: Vec<f64>,
}

/// Positive equilibrium of a weakly reversible deficiency-zero network.
///
/// Start from a positive `ψ ∈ ker H` (one equilibrium per component, summed),
/// solve `(Y∂)ᵀ β = ∂ᵀ ln ψ` in the least-squares sense, and set `x = exp β`.
/// Deficiency zero guarantees the system is consistent, so a residual above
/// `tol` is reported as a numerical failure. The result is then checked:
/// `‖H x^Y‖∞ ≤ tol`, and `α = ln ψ − Yᵀβ` is constant on components.
pub fn deficiency_zero_equilibrium(n: &ReactionNetwork, tol: f64) -> Result<EquilibriumResult> {
    let report = deficiency(n)?;
    if !report.weakly_reversible {
        return Err(Error::Precondition("network is not weakly reversible".into()));
    }
    if report.deficiency != 0 {
        return Err(Error::Precondition(format!(
            "network has deficiency {}",
            report.deficiency
        )));
    }

    let k = n.num_complexes();
    let s = n.num_species();
    let mut psi = vec![0.0; k];
    for v in component_equilibria(&GraphWithRates::from_network(n))? {
        for (p, q) in psi.iter_mut().zip(v) {
            *p += q;
        }
    }
    let ln_psi: Vec<f64> = psi.iter().map(|p| p.ln()).collect();

    let maps = build_incidence(n);
    let y = maps.y_mat.to_real();
    let boundary = maps.boundary.to_real();
    // (Y∂)ᵀ = ∂ᵀ Yᵀ, a |T| × |S| matrix.
    let a = boundary.transpose().matmul(&y.transpose());
    let rhs = boundary.vecmat(&ln_psi);
    let beta = if s == 0 {
        Vec::new()
    } else {
        least_squares(&a, &rhs)?.solution
    };

    let yt_beta = y.vecmat(&beta);
    let alpha: Vec<f64> = ln_psi.iter().zip(&yt_beta).map(|(l, b)| l - b).collect();
    let solve_residual = norm_inf(&boundary.vecmat(&alpha));
    if solve_residual > tol {
        return Err(Error::Numerical(format!(
            "(Y∂)ᵀβ = ∂ᵀ ln ψ left residual {solve_residual:e}"
        )));
    }

    let x: Vec<f64> = beta.iter().map(|b| b.exp()).collect();
    let sys = RateSystem::new(n)?;
    let hxy = sys.hamiltonian().matvec(&x_pow_y(&x, sys.y()));
    let residual_master = norm_inf(&hxy);
    let residual_rate = norm_inf(&y.matvec(&hxy));
    if residual_master > tol {
        return Err(Error::Numerical(format!(
            "constructed point has ‖H x^Y‖∞ = {residual_master:e}"
        )));
    }

    let alpha_scale = alpha.iter().fold(1.0f64, |m, a| m.max(a.abs()));
    let mut first = vec![None; report.num_components];
    for (kappa, &c) in report.component_of.iter().enumerate() {
        match first[c] {
            None => first[c] = Some(alpha[kappa]),
            Some(a0) if (alpha[kappa] - a0).abs() > tol * alpha_scale => {
                return Err(Error::Internal(format!(
                    "α is not constant on component {c}"
                )));
            }
            _ => {}
        }
    }

    Ok(EquilibriumResult {
        x,
        alpha,
        residual_master,
        residual_rate,
        psi,
    })
}
