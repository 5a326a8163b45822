use serde::Serialize;

use super::{is_dirichlet, is_infinitesimal_stochastic, is_stochastic, Operator};
use crate::error::{Error, Result};
use crate::exactlin::norm_inf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NoetherReport {
    pub commutes: bool,
    pub first_moment_conserved: bool,
    pub second_moment_conserved: bool,
}

fn check_dims(h: &Operator, o: &[f64]) -> Result<()> {
    if o.len() != h.rows() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            found: o.len(),
        });
    }
    if o.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("observable has non-finite values".into()));
    }
    Ok(())
}

fn assert_biconditional(r: NoetherReport) -> Result<NoetherReport> {
    if r.commutes != (r.first_moment_conserved && r.second_moment_conserved) {
        return Err(Error::Internal(format!(
            "Noether biconditional violated: {r:?}"
        )));
    }
    Ok(r)
}

/// Noether check for a Markov process with generator `h`: `[O,H] = 0` exactly
/// when the expected values of `O` and `O²` are both conserved.
pub fn noether_check_process(h: &Operator, o: &[f64], tol: f64) -> Result<NoetherReport> {
    if !is_infinitesimal_stochastic(h, tol) {
        return Err(Error::Precondition("operator is not infinitesimal stochastic".into()));
    }
    check_dims(h, o)?;
    let n = o.len();
    let mut comm = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            comm = comm.max(((o[i] - o[j]) * h[(i, j)]).abs());
        }
    }
    let o2: Vec<f64> = o.iter().map(|x| x * x).collect();
    assert_biconditional(NoetherReport {
        commutes: comm <= tol,
        first_moment_conserved: norm_inf(&h.vecmat(o)) <= tol,
        second_moment_conserved: norm_inf(&h.vecmat(&o2)) <= tol,
    })
}

/// Noether check for a Markov chain with stochastic matrix `u`.
pub fn noether_check_chain(u: &Operator, o: &[f64], tol: f64) -> Result<NoetherReport> {
    if !is_stochastic(u, tol) {
        return Err(Error::Precondition("operator is not stochastic".into()));
    }
    check_dims(u, o)?;
    let n = o.len();
    let mut comm = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            comm = comm.max(((o[i] - o[j]) * u[(i, j)]).abs());
        }
    }
    let moment = |w: &[f64]| {
        let wu = u.vecmat(w);
        wu.iter().zip(w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    };
    let o2: Vec<f64> = o.iter().map(|x| x * x).collect();
    assert_biconditional(NoetherReport {
        commutes: comm <= tol,
        first_moment_conserved: moment(o) <= tol,
        second_moment_conserved: moment(&o2) <= tol,
    })
}

/// `⟨ψ, Hψ⟩` for a Dirichlet operator, checked against the power-dissipation
/// sum `−½ Σ_{i≠j} H_ij (ψ_i − ψ_j)²`.
pub fn dirichlet_form(h: &Operator, psi: &[f64]) -> Result<f64> {
    if !is_dirichlet(h, super::DEFAULT_TOL) {
        return Err(Error::Precondition("operator is not Dirichlet".into()));
    }
    check_dims(h, psi)?;
    let hpsi = h.matvec(psi);
    let lhs: f64 = psi.iter().zip(&hpsi).map(|(a, b)| a * b).sum();
    let n = psi.len();
    let mut rhs = 0.0;
    let mut scale = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let term = h[(i, j)] * (psi[i] - psi[j]).powi(2);
                rhs -= 0.5 * term;
                scale += 0.5 * term.abs();
            }
        }
    }
    let diag_scale: f64 = (0..n).map(|i| (h[(i, i)] * psi[i] * psi[i]).abs()).sum();
    let bound = 1e-10 * scale.max(diag_scale).max(f64::MIN_POSITIVE);
    if (lhs - rhs).abs() > bound {
        return Err(Error::Internal(format!(
            "Dirichlet form sides differ: {lhs:e} vs {rhs:e}"
        )));
    }
    Ok(lhs)
}
