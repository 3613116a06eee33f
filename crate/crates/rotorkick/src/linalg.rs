//! Symmetric tridiagonal eigensolver.
//!
//! The matrices handled by this crate never exceed a few hundred rows and are
//! symmetric tridiagonal by construction, so a dedicated implicit-shift QL
//! iteration (EISPACK `tql2` lineage) with eigenvector accumulation is used
//! instead of a general dense solver.

use ndarray::Array2;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("QL iteration for eigenvalue {index} did not converge within {max_sweeps} sweeps")]
    NoConvergence { index: usize, max_sweeps: usize },
    #[error("off-diagonal length {off_diagonal} does not match diagonal length {diagonal}")]
    ShapeMismatch { diagonal: usize, off_diagonal: usize },
    #[error("matrix must have at least one row")]
    Empty,
}

/// Eigendecomposition of a real symmetric tridiagonal matrix.
///
/// Eigenvalues are sorted ascending; column `k` of `vectors` is the unit
/// eigenvector paired with `values[k]`.
#[derive(Debug, Clone)]
pub struct TridiagonalEigen {
    pub values: Vec<f64>,
    pub vectors: Array2<f64>,
}

const MAX_SWEEPS: usize = 50;

/// Diagonalize the symmetric tridiagonal matrix with the given diagonal and
/// first off-diagonal.
pub fn eigh_tridiagonal(
    diagonal: &[f64],
    off_diagonal: &[f64],
) -> Result<TridiagonalEigen, LinalgError> {
    let n = diagonal.len();
    if n == 0 {
        return Err(LinalgError::Empty);
    }
    if off_diagonal.len() + 1 != n {
        return Err(LinalgError::ShapeMismatch {
            diagonal: n,
            off_diagonal: off_diagonal.len(),
        });
    }

    let mut d = diagonal.to_vec();
    let mut e = off_diagonal.to_vec();
    e.push(0.0);
    let mut z = Array2::<f64>::eye(n);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            // Look for a negligible off-diagonal element splitting the matrix.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(LinalgError::NoConvergence {
                    index: l,
                    max_sweeps: MAX_SWEEPS,
                });
            }

            // Wilkinson-style shift from the leading 2x2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0_f64, 1.0_f64);
            let mut p = 0.0;

            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let fk = z[[k, i + 1]];
                    z[[k, i + 1]] = s * z[[k, i]] + c * fk;
                    z[[k, i]] = c * z[[k, i]] - s * fk;
                }
            }
            if !underflow {
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }
    }

    // Selection-sort eigenpairs ascending.
    for i in 0..n {
        let mut k = i;
        for j in i + 1..n {
            if d[j] < d[k] {
                k = j;
            }
        }
        if k != i {
            d.swap(i, k);
            for row in 0..n {
                let tmp = z[[row, i]];
                z[[row, i]] = z[[row, k]];
                z[[row, k]] = tmp;
            }
        }
    }

    Ok(TridiagonalEigen {
        values: d,
        vectors: z,
    })
}
