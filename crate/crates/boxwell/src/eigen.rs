//! Dense symmetric eigensolver: cyclic Jacobi rotations, eigenvalues only.
//!
//! Deterministic by construction (fixed sweep order), adequate for the
//! desk-scale matrices used here (n ≤ 512). The diagonalized spectrum is
//! the exact reference the perturbation results are judged against.

use crate::hamiltonian::{build_matrix, split_parity, MatrixError, SymmetricMatrix};
use crate::params::ReducedParams;
use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Error)]
pub enum EigenError {
    #[error("Jacobi solver did not converge after {sweeps} sweeps (off-diagonal norm {off_diag_norm:e})")]
    NoConvergence { sweeps: usize, off_diag_norm: f64 },
    #[error("tolerance must lie in (0, 1), got {0}")]
    BadTolerance(f64),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Eigenvalues sorted ascending, reduced units.
    pub eigenvalues: Vec<f64>,
    /// Dimension of the matrix that was diagonalized.
    pub n: usize,
    /// Jacobi sweeps used (max over parity blocks when split).
    pub iterations: usize,
    /// Final off-diagonal Frobenius norm (max over blocks).
    pub off_diag_norm: f64,
    /// Set when the requested level count pushes against the truncation
    /// guidance n >= 4·n_levels.
    pub truncation_warning: bool,
}

fn off_diagonal_norm(m: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for r in 0..n {
        for s in 0..r {
            let v = m[r * n + s];
            sum += 2.0 * v * v;
        }
    }
    sum.sqrt()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps.
///
/// Sweeps run over the strict upper triangle in row order until the
/// off-diagonal Frobenius norm drops below `tol · ‖m‖_F`.
pub fn eigenvalues_symmetric(
    m: &SymmetricMatrix,
    tol: f64,
) -> Result<SpectrumResult, EigenError> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(EigenError::BadTolerance(tol));
    }
    let n = m.n();
    if n == 0 {
        return Ok(SpectrumResult {
            eigenvalues: vec![],
            n: 0,
            iterations: 0,
            off_diag_norm: 0.0,
            truncation_warning: false,
        });
    }
    let mut a = m.to_dense();
    let frob = m.frobenius_norm();
    let threshold = tol * frob;
    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a, n);
    while off > threshold && sweeps < MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // Rotation angle from the standard stable formulation.
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a, n);
    }
    if off > threshold {
        return Err(EigenError::NoConvergence {
            sweeps,
            off_diag_norm: off,
        });
    }
    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eigenvalues.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(SpectrumResult {
        eigenvalues,
        n,
        iterations: sweeps,
        off_diag_norm: off,
        truncation_warning: false,
    })
}

/// Lowest `n_levels` eigenvalues of the n x n Hamiltonian at coupling `rp`,
/// via parity-block diagonalization.
pub fn spectrum(
    n: usize,
    rp: &ReducedParams,
    n_levels: usize,
    tol: f64,
) -> Result<SpectrumResult, EigenError> {
    let m = build_matrix(n, rp)?;
    let blocks = split_parity(&m);
    let even = eigenvalues_symmetric(&blocks.even, tol)?;
    let odd = eigenvalues_symmetric(&blocks.odd, tol)?;
    let mut merged: Vec<f64> = even
        .eigenvalues
        .iter()
        .chain(odd.eigenvalues.iter())
        .copied()
        .collect();
    merged.sort_by(|x, y| x.partial_cmp(y).unwrap());
    merged.truncate(n_levels);
    Ok(SpectrumResult {
        eigenvalues: merged,
        n,
        iterations: even.iterations.max(odd.iterations),
        off_diag_norm: even.off_diag_norm.max(odd.off_diag_norm),
        truncation_warning: n < 4 * n_levels,
    })
}
