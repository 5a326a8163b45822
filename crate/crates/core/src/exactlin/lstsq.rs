use super::{norm2, RealMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub solution: Vec<f64>,
    /// `‖a·x − b‖₂` at the returned solution.
    pub residual: f64,
    /// Numerical rank detected by the pivoted factorization.
    pub rank: usize,
}

/// Applies the Householder reflector `I − τ·v·vᵀ` (with `v[0] = 1` implied by
/// the caller's storage) to `x[start..]`.
fn reflect(v: &[f64], tau: f64, x: &mut [f64]) {
    let dot: f64 = v.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
    let f = tau * dot;
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= f * vi;
    }
}

/// Builds a reflector sending `x` to `(β, 0, …, 0)`. Returns `(v, τ, β)`.
fn householder(x: &[f64]) -> (Vec<f64>, f64, f64) {
    let alpha = x[0];
    let sigma: f64 = x[1..].iter().map(|a| a * a).sum();
    let mut v = x.to_vec();
    v[0] = 1.0;
    if sigma == 0.0 {
        return (v, 0.0, alpha);
    }
    let norm = (alpha * alpha + sigma).sqrt();
    let beta = if alpha <= 0.0 { norm } else { -norm };
    let v0 = alpha - beta;
    for vi in v[1..].iter_mut() {
        *vi /= v0;
    }
    let tau = (beta - alpha) / beta;
    (v, tau, beta)
}

/// Minimum-norm least-squares solution of `a·x ≈ b`.
///
/// Householder QR with column pivoting determines the numerical rank `r`;
/// the leading `r` rows of `R` are then orthogonally compressed (a complete
/// orthogonal decomposition) so that rank-deficient systems return the
/// unique minimizer of smallest Euclidean norm.
pub fn least_squares(a: &RealMatrix, b: &[f64]) -> Result<LeastSquares> {
    let (m, n) = (a.rows(), a.cols());
    if n == 0 {
        return Err(Error::InvalidParameter("least squares needs at least one column".into()));
    }
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: b.len(),
        });
    }

    // Column-major working copy.
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut qtb = b.to_vec();
    let mut norms: Vec<f64> = cols.iter().map(|c| norm2(c)).collect();
    let steps = m.min(n);
    let mut diag = Vec::with_capacity(steps);

    for k in 0..steps {
        let p = (k..n)
            .max_by(|&i, &j| norms[i].total_cmp(&norms[j]))
            .expect("nonempty range");
        cols.swap(k, p);
        perm.swap(k, p);
        norms.swap(k, p);

        let (v, tau, beta) = householder(&cols[k][k..]);
        cols[k][k] = beta;
        for x in cols[k][k + 1..].iter_mut() {
            *x = 0.0;
        }
        for col in cols.iter_mut().skip(k + 1) {
            reflect(&v, tau, &mut col[k..]);
        }
        reflect(&v, tau, &mut qtb[k..]);
        diag.push(beta.abs());
        for j in (k + 1)..n {
            norms[j] = norm2(&cols[j][k + 1..]);
        }
    }

    let rmax = diag.first().copied().unwrap_or(0.0);
    let thresh = rmax * (m.max(n) as f64) * f64::EPSILON * 10.0;
    let rank = diag.iter().take_while(|&&d| d > thresh && d > 0.0).count();

    // T = R[0..rank, 0..n] (upper trapezoidal). Minimum-norm solution of
    // T·y = c via QR of Tᵀ = Z·S:  y = Z·S⁻ᵀ·c.
    let mut y = vec![0.0; n];
    if rank > 0 {
        let mut tt: Vec<Vec<f64>> = (0..rank)
            .map(|i| (0..n).map(|j| cols[j][i]).collect())
            .collect();
        let mut reflectors = Vec::with_capacity(rank);
        for k in 0..rank {
            let (v, tau, beta) = householder(&tt[k][k..]);
            tt[k][k] = beta;
            for x in tt[k][k + 1..].iter_mut() {
                *x = 0.0;
            }
            for row in tt.iter_mut().skip(k + 1) {
                reflect(&v, tau, &mut row[k..]);
            }
            reflectors.push((v, tau));
        }
        // Sᵀ is lower triangular with Sᵀ[i][k] = tt[i][k]; forward-substitute.
        let mut z = vec![0.0; rank];
        for i in 0..rank {
            let s: f64 = (0..i).map(|k| tt[i][k] * z[k]).sum();
            z[i] = (qtb[i] - s) / tt[i][i];
        }
        y[..rank].copy_from_slice(&z);
        for k in (0..rank).rev() {
            let (v, tau) = &reflectors[k];
            reflect(v, *tau, &mut y[k..]);
        }
    }

    let mut solution = vec![0.0; n];
    for (j, &p) in perm.iter().enumerate() {
        solution[p] = y[j];
    }
    let ax = a.matvec(&solution);
    let residual = norm2(&ax.iter().zip(b).map(|(p, q)| p - q).collect::<Vec<_>>());
    Ok(LeastSquares {
        solution,
        residual,
        rank,
    })
}
