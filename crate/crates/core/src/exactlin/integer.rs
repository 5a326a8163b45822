//! Exact elimination over the integers. All intermediate arithmetic is done
//! with big integers, so nothing here depends on a tolerance.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntMatrix;
use crate::error::{Error, Result};

fn to_big(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|&v| BigInt::from(v)).collect())
        .collect()
}

/// Fraction-free (Bareiss) forward elimination. Returns the pivot columns;
/// their count is the rank.
fn bareiss_pivots(m: &IntMatrix) -> Vec<usize> {
    let mut a = to_big(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                a[i][j] = num / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact rank over ℚ.
pub fn int_rank(m: &IntMatrix) -> usize {
    bareiss_pivots(m).len()
}

/// Columns of `m` that are pivots in row-echelon form. The corresponding
/// columns of `m` form a basis of its column space.
pub fn pivot_columns(m: &IntMatrix) -> Vec<usize> {
    bareiss_pivots(m)
}

fn content(row: &[BigInt]) -> BigInt {
    row.iter().fold(BigInt::zero(), |g, v| g.gcd(v))
}

fn reduce_content(row: &mut [BigInt]) {
    let g = content(row);
    if !g.is_zero() && !g.is_one() {
        for v in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

fn normalize(mut v: Vec<BigInt>) -> Result<Vec<i64>> {
    reduce_content(&mut v);
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
    }
    v.iter().map(|x| x.to_i64().ok_or(Error::Overflow)).collect()
}

/// Basis of the right kernel `{x : m·x = 0}` with integer entries.
///
/// Each vector has content 1 and a positive first nonzero entry. One vector
/// is produced per free column of the reduced echelon form, so the basis is
/// deterministic.
pub fn int_kernel_basis(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = to_big(m);
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // smallest nonzero pivot keeps entries small
        let Some(p) = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by(|&x, &y| a[x][c].abs().cmp(&a[y][c].abs()))
        else {
            continue;
        };
        a.swap(r, p);
        reduce_content(&mut a[r]);
        if a[r][c].is_negative() {
            for v in a[r].iter_mut() {
                *v = -&*v;
            }
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let g = a[r][c].gcd(&a[i][c]);
            let pr = &a[r][c] / &g;
            let pi = &a[i][c] / &g;
            let pivot_row = a[r].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                *x = &pr * &*x - &pi * y;
            }
            reduce_content(&mut a[i]);
        }
        pivots.push(c);
        r += 1;
    }

    let mut basis = Vec::new();
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    for f in (0..cols).filter(|&f| !is_pivot[f]) {
        let scale = pivots
            .iter()
            .enumerate()
            .filter(|&(i, _)| !a[i][f].is_zero())
            .fold(BigInt::one(), |l, (i, &c)| l.lcm(&a[i][c]));
        let mut x = vec![BigInt::zero(); cols];
        x[f] = scale.clone();
        for (i, &c) in pivots.iter().enumerate() {
            if !a[i][f].is_zero() {
                x[c] = -(&a[i][f] * &scale) / &a[i][c];
            }
        }
        basis.push(normalize(x)?);
    }
    Ok(basis)
}

/// Basis of the left kernel `{w : wᵀ·m = 0}`.
pub fn int_left_kernel_basis(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    int_kernel_basis(&m.transpose())
}
