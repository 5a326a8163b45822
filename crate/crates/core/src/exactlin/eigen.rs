use serde::Serialize;

use super::RealMatrix;
use crate::error::{Error, Result};

/// Absolute tolerance used to group nearly equal eigenvalues.
pub const DEFAULT_GROUPING_TOL: f64 = 1e-8;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Groups sorted eigenvalues whose consecutive gaps are ≤ `tol` and
    /// returns `(mean value, multiplicity)` for each group, in descending order.
    pub fn grouped(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut groups: Vec<(f64, usize, f64)> = Vec::new();
        for &v in &self.eigenvalues {
            match groups.last_mut() {
                Some((sum, count, last)) if (*last - v).abs() <= tol => {
                    *sum += v;
                    *count += 1;
                    *last = v;
                }
                _ => groups.push((v, 1, v)),
            }
        }
        groups
            .into_iter()
            .map(|(sum, count, _)| (sum / count as f64, count))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub spectrum: Spectrum,
    /// Column `k` is the unit eigenvector for `spectrum.eigenvalues[k]`.
    pub eigenvectors: RealMatrix,
}

/// Cyclic Jacobi eigendecomposition of a real symmetric matrix.
///
/// Rejects matrices whose asymmetry exceeds `1e-12·max|m_ij|`. The input is
/// symmetrized before rotation.
pub fn symmetric_eigen(m: &RealMatrix) -> Result<SymmetricEigen> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let n = m.rows();
    let scale = m.max_abs();
    let asym = m.asymmetry();
    if asym > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotSymmetric(asym));
    }

    let mut a = m.add(&m.transpose()).scale(0.5);
    let mut v = RealMatrix::identity(n);

    for _sweep in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off == 0.0 || off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let eigenvalues = order.iter().map(|&i| a[(i, i)]).collect();
    let mut eigenvectors = RealMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        for r in 0..n {
            eigenvectors[(r, k)] = v[(r, i)];
        }
    }
    Ok(SymmetricEigen {
        spectrum: Spectrum { eigenvalues },
        eigenvectors,
    })
}
