//! The polarization-scaling map
//!
//! ```text
//! Phi[X] = tr[X] I / d + 3 / (j(j+1)d) * sum_i lambda_i tr[X J_i] J_i,   d = 2j + 1
//! ```
//!
//! which scales the polarization vector `p_i = tr[rho J_i]` to `lambda_i p_i`
//! while preserving trace and the identity.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{kron, ComplexMatrix};
use crate::spin::{basis_ket, build_angular_momentum, SpinLabel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingTriple {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
}

impl ScalingTriple {
    pub const fn new(lambda1: f64, lambda2: f64, lambda3: f64) -> Self {
        Self {
            lambda1,
            lambda2,
            lambda3,
        }
    }

    pub const fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.lambda1, self.lambda2, self.lambda3]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|x| x.is_finite())
    }

    /// Componentwise product.
    pub fn hadamard(&self, other: &ScalingTriple) -> ScalingTriple {
        ScalingTriple::new(
            self.lambda1 * other.lambda1,
            self.lambda2 * other.lambda2,
            self.lambda3 * other.lambda3,
        )
    }

    pub fn squared(&self) -> ScalingTriple {
        self.hadamard(self)
    }

    pub fn with_lambda2_flipped(&self) -> ScalingTriple {
        ScalingTriple::new(self.lambda1, -self.lambda2, self.lambda3)
    }

    pub fn max_abs(&self) -> f64 {
        self.as_array().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.as_array().iter().map(|x| x * x).sum()
    }
}

impl From<[f64; 3]> for ScalingTriple {
    fn from([a, b, c]: [f64; 3]) -> Self {
        Self::new(a, b, c)
    }
}

impl std::str::FromStr for ScalingTriple {
    type Err = Error;

    /// Parses `"a,b,c"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::InvalidArgument(format!(
                "expected three comma-separated values, got {s:?}"
            )));
        }
        let mut vals = [0.0; 3];
        for (v, p) in vals.iter_mut().zip(&parts) {
            *v = p.parse().map_err(|_| {
                Error::InvalidArgument(format!("cannot parse {p:?} as a real number"))
            })?;
        }
        let t = ScalingTriple::from(vals);
        if !t.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "scaling parameters must be finite: {s:?}"
            )));
        }
        Ok(t)
    }
}

impl fmt::Display for ScalingTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.lambda1, self.lambda2, self.lambda3)
    }
}

/// Average spin projections `p_i = tr[X J_i]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarizationVector {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl PolarizationVector {
    pub fn as_array(&self) -> [f64; 3] {
        [self.p1, self.p2, self.p3]
    }

    pub fn norm(&self) -> f64 {
        self.as_array().iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Spin label plus scaling parameters; fully determines the map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapSpec {
    pub spin: SpinLabel,
    pub lambdas: ScalingTriple,
}

impl MapSpec {
    pub fn new(spin: SpinLabel, lambdas: impl Into<ScalingTriple>) -> Self {
        Self {
            spin,
            lambdas: lambdas.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    /// `3 / (j(j+1)(2j+1))`, from the integer `2j`.
    fn weight(&self) -> f64 {
        let tj = u64::from(self.spin.two_j());
        12.0 / (tj * (tj + 1) * (tj + 2)) as f64
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_dim(x, self.dim())?;
        let am = build_angular_momentum(self.spin);
        Ok(self.apply_with(x, am.components()))
    }

    fn apply_with(&self, x: &ComplexMatrix, js: [&ComplexMatrix; 3]) -> ComplexMatrix {
        let d = self.dim();
        let mut out = ComplexMatrix::identity(d).scale(x.trace() / d as f64);
        let w = self.weight();
        for (lambda, j) in self.lambdas.as_array().into_iter().zip(js) {
            if lambda == 0.0 {
                continue;
            }
            let coeff = x.trace_product(j) * (w * lambda);
            out += &j.scale(coeff);
        }
        out
    }

    /// `Phi_self o Phi_other`; both maps must act on the same spin.
    pub fn compose(&self, other: &MapSpec) -> Result<MapSpec> {
        if self.spin != other.spin {
            return Err(Error::InvalidArgument(format!(
                "cannot compose maps on spin {} and spin {}",
                self.spin, other.spin
            )));
        }
        Ok(MapSpec::new(
            self.spin,
            self.lambdas.hadamard(&other.lambdas),
        ))
    }

    /// `Phi^2`, which has parameters `lambda_i^2`.
    pub fn compose_self(&self) -> MapSpec {
        MapSpec::new(self.spin, self.lambdas.squared())
    }

    /// Smallest eigenvalue of `Phi[X]` from the polarization of `X` alone:
    /// `(tr[X] - 3/(j+1) * |(lambda_i tr[X J_i])_i|) / d`. Exact for any Hermitian `X`.
    pub fn min_eig_closed_form(&self, x: &ComplexMatrix) -> Result<f64> {
        check_dim(x, self.dim())?;
        let deviation = x.hermitian_deviation();
        if deviation >= crate::matrix::HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let p = polarization(x, self.spin)?;
        let scaled = self.lambdas.hadamard(&ScalingTriple::from(p.as_array()));
        let j = self.spin.j();
        Ok((x.trace().re - 3.0 / (j + 1.0) * scaled.norm_sqr().sqrt()) / self.dim() as f64)
    }

    /// Choi matrix `(Phi (x) Id)[|psi+><psi+|]` built by applying the map to every
    /// matrix unit: `(1/d) sum_{m,m'} Phi[|m><m'|] (x) |m><m'|`. Unit trace.
    pub fn choi_definitional(&self) -> ComplexMatrix {
        let d = self.dim();
        let am = build_angular_momentum(self.spin);
        let kets: Vec<_> = self
            .spin
            .two_m_values()
            .map(|m| basis_ket(self.spin, m).expect("valid projection"))
            .collect();
        let mut out = ComplexMatrix::zeros(d * d);
        for bra in &kets {
            for ket in &kets {
                let unit = outer(ket.amplitudes(), bra.amplitudes());
                let image = self.apply_with(&unit, am.components());
                out += &kron(&image, &unit);
            }
        }
        out.scale_real(1.0 / d as f64)
    }

    /// Choi matrix in closed form:
    /// `(1/d^2) [I (x) I + 3/(j(j+1)) (l1 J1(x)J1 - l2 J2(x)J2 + l3 J3(x)J3)]`.
    pub fn choi_closed_form(&self) -> ComplexMatrix {
        let d = self.dim();
        let am = build_angular_momentum(self.spin);
        let c = 3.0 / self.spin.casimir();
        let [l1, l2, l3] = self.lambdas.as_array();
        let mut out = ComplexMatrix::identity(d * d);
        for (coeff, j) in [(l1, &am.j1), (-l2, &am.j2), (l3, &am.j3)] {
            if coeff != 0.0 {
                out += &kron(j, j).scale_real(c * coeff);
            }
        }
        out.scale_real(1.0 / (d * d) as f64)
    }

    /// Partial transpose (second factor) of the Choi matrix. Since `J2^T = -J2`
    /// in the `|j m>` basis this is the Choi matrix with `lambda2 -> -lambda2`.
    pub fn choi_partial_transpose(&self) -> ComplexMatrix {
        MapSpec::new(self.spin, self.lambdas.with_lambda2_flipped()).choi_closed_form()
    }

    /// `(Phi (x) Phi)[Y]` as `(Id (x) Phi) o (Phi (x) Id)`, one tensor side at a time.
    pub fn apply_tensor2(&self, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.dim();
        check_dim(y, d * d)?;
        let am = build_angular_momentum(self.spin);
        let js = am.components();
        let first = self.map_blocks(y, Side::First, js);
        Ok(self.map_blocks(&first, Side::Second, js))
    }

    /// Applies the map to one tensor factor of a `d^2`-dimensional operator.
    pub fn apply_on_factor(&self, y: &ComplexMatrix, side: Side) -> Result<ComplexMatrix> {
        let d = self.dim();
        check_dim(y, d * d)?;
        let am = build_angular_momentum(self.spin);
        Ok(self.map_blocks(y, side, am.components()))
    }

    fn map_blocks(&self, y: &ComplexMatrix, side: Side, js: [&ComplexMatrix; 3]) -> ComplexMatrix {
        let d = self.dim();
        let idx = |outer: usize, inner: usize| match side {
            // the mapped factor carries the `inner` index
            Side::First => inner * d + outer,
            Side::Second => outer * d + inner,
        };
        let mut out = ComplexMatrix::zeros(d * d);
        for o in 0..d {
            for op in 0..d {
                let block = ComplexMatrix::from_fn(d, |r, c| y[(idx(o, r), idx(op, c))]);
                let image = self.apply_with(&block, js);
                for r in 0..d {
                    for c in 0..d {
                        out[(idx(o, r), idx(op, c))] = image[(r, c)];
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "j={} lambda=({})", self.spin, self.lambdas)
    }
}

/// Tensor factor selector for bipartite operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

/// `p_i = Re tr[X J_i]`.
pub fn polarization(x: &ComplexMatrix, spin: SpinLabel) -> Result<PolarizationVector> {
    check_dim(x, spin.dim())?;
    let am = build_angular_momentum(spin);
    let [p1, p2, p3] = am.components().map(|j| x.trace_product(j).re);
    Ok(PolarizationVector { p1, p2, p3 })
}

fn outer(ket: &[Complex64], bra: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(ket.len(), |r, c| ket[r] * bra[c].conj())
}

fn check_dim(x: &ComplexMatrix, expected: usize) -> Result<()> {
    if x.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            actual: x.dim(),
        });
    }
    Ok(())
}
