use super::{norm_inf, RealMatrix};
use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct PerronFrobenius {
    /// The Perron–Frobenius eigenvalue.
    pub r: f64,
    /// Positive eigenvector normalized to sum 1.
    pub v: Vec<f64>,
    pub iterations: usize,
}

fn reachable(n: usize, start: usize, edge: impl Fn(usize, usize) -> bool) -> usize {
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for (j, mark) in seen.iter_mut().enumerate() {
            if !*mark && edge(i, j) {
                *mark = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count
}

/// Irreducibility of a square matrix: the graph with an edge `j → i` whenever
/// `m_ij > tol` (off the diagonal) is strongly connected.
pub fn is_irreducible(m: &RealMatrix, tol: f64) -> bool {
    if !m.is_square() || m.rows() == 0 {
        return false;
    }
    let n = m.rows();
    let forward = reachable(n, 0, |i, j| i != j && m[(j, i)] > tol);
    let backward = reachable(n, 0, |i, j| i != j && m[(i, j)] > tol);
    forward == n && backward == n
}

/// Perron–Frobenius eigenpair of a nonnegative irreducible matrix, starting
/// from the uniform vector.
pub fn perron_frobenius(t: &RealMatrix) -> Result<PerronFrobenius> {
    let n = t.rows();
    perron_frobenius_from(t, &vec![1.0; n])
}

/// Power iteration on `t + I` from a given positive start vector. The `+I`
/// shift makes the iteration matrix primitive, so periodic matrices such as
/// `[[0,1],[1,0]]` converge too. Stops once `‖t·v − r·v‖∞ ≤ 1e-12·r`.
pub fn perron_frobenius_from(t: &RealMatrix, start: &[f64]) -> Result<PerronFrobenius> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch {
            expected: t.rows(),
            found: t.cols(),
        });
    }
    let n = t.rows();
    if start.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: start.len(),
        });
    }
    if t.data().iter().any(|&x| x < 0.0) {
        return Err(Error::Precondition("matrix has negative entries".into()));
    }
    if !is_irreducible(t, 0.0) {
        return Err(Error::Precondition("matrix is not irreducible".into()));
    }
    if start.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::InvalidParameter("start vector must be positive".into()));
    }

    let total: f64 = start.iter().sum();
    let mut v: Vec<f64> = start.iter().map(|x| x / total).collect();
    for it in 1..=MAX_ITERATIONS {
        let tv = t.matvec(&v);
        let r = tv.iter().sum::<f64>() / v.iter().sum::<f64>();
        let resid: Vec<f64> = tv.iter().zip(&v).map(|(a, b)| a - r * b).collect();
        if norm_inf(&resid) <= 1e-12 * r {
            return Ok(PerronFrobenius {
                r,
                v,
                iterations: it - 1,
            });
        }
        let mut w: Vec<f64> = tv.iter().zip(&v).map(|(a, b)| a + b).collect();
        let s: f64 = w.iter().sum();
        for x in w.iter_mut() {
            *x /= s;
        }
        v = w;
    }
    Err(Error::NoConvergence(MAX_ITERATIONS))
}
