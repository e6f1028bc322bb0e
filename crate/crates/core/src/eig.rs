//! Eigenvalues of complex Hermitian matrices by cyclic Jacobi rotations.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the usual real Jacobi rotation, so the 2x2 pivot
//! block is diagonalized exactly. Only eigenvalues are accumulated.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HERMITIAN_TOL};

/// Sweep cap before reporting [`Error::NoConvergence`].
pub const MAX_SWEEPS: usize = 64;

/// Stop once the off-diagonal Frobenius norm drops below this fraction of `||A||_F`.
pub const CONVERGENCE_RTOL: f64 = 1e-13;

/// Default relative tolerance for positive-semidefiniteness decisions.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Number of full sweeps performed.
    pub iterations: usize,
    /// Off-diagonal Frobenius norm at exit.
    pub residual: f64,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `max(1, largest |eigenvalue|)`, the scale applied to PSD tolerances.
    pub fn psd_scale(&self) -> f64 {
        self.min().abs().max(self.max().abs()).max(1.0)
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.min() >= -tol * self.psd_scale()
    }
}

pub fn eigvals_hermitian(a: &ComplexMatrix) -> Result<Spectrum> {
    let deviation = a.hermitian_deviation();
    if deviation.is_nan() || deviation >= HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = a.dim();
    // Work on the exactly Hermitian part.
    let mut m = ComplexMatrix::from_fn(n, |r, c| {
        if r == c {
            Complex64::new(a[(r, r)].re, 0.0)
        } else {
            0.5 * (a[(r, c)] + a[(c, r)].conj())
        }
    });
    let norm = m.frobenius_norm();
    let target = CONVERGENCE_RTOL * norm;
    // Pivots below this cannot move the off-diagonal norm past the target.
    let negligible = 1e-3 * target / (n.max(1) as f64);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m);
        if off <= target {
            return Ok(finish(&m, sweeps, off));
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag <= negligible {
                    continue;
                }
                rotate(&mut m, p, q, apq, mag);
            }
        }
    }
}

fn rotate(m: &mut ComplexMatrix, p: usize, q: usize, apq: Complex64, mag: f64) {
    let n = m.dim();
    // e^{-i phi} with a_pq = |a_pq| e^{i phi}
    let phase = apq.conj() / mag;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = 0.5 * (aqq - app) / mag;
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m[(k, p)];
        let akq = m[(k, q)] * phase;
        let new_kp = akp * c - akq * s;
        let new_kq = akp * s + akq * c;
        m[(k, p)] = new_kp;
        m[(p, k)] = new_kp.conj();
        m[(k, q)] = new_kq;
        m[(q, k)] = new_kq.conj();
    }
    m[(p, p)] = Complex64::new(app - t * mag, 0.0);
    m[(q, q)] = Complex64::new(aqq + t * mag, 0.0);
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut acc = 0.0;
    for r in 0..n {
        for c in (r + 1)..n {
            acc += 2.0 * m[(r, c)].norm_sqr();
        }
    }
    acc.sqrt()
}

fn finish(m: &ComplexMatrix, iterations: usize, residual: f64) -> Spectrum {
    let mut values: Vec<f64> = m.diagonal().iter().map(|z| z.re).collect();
    values.sort_by(f64::total_cmp);
    Spectrum {
        values,
        iterations,
        residual,
    }
}

pub fn min_eig(a: &ComplexMatrix) -> Result<f64> {
    Ok(eigvals_hermitian(a)?.min())
}

pub fn max_eig(a: &ComplexMatrix) -> Result<f64> {
    Ok(eigvals_hermitian(a)?.max())
}

/// True iff `min_eig(A) >= -tol * max(1, largest |eigenvalue|)`.
pub fn is_psd(a: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(eigvals_hermitian(a)?.is_psd(tol))
}
