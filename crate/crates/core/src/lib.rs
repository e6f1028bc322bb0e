//! Spin polarization-scaling maps
//!
//! For a spin-`j` particle the map
//! `Phi[X] = tr[X] I/(2j+1) + 3/(j(j+1)(2j+1)) sum_i lambda_i tr[X J_i] J_i`
//! rescales the polarization vector componentwise by `(lambda1, lambda2, lambda3)`.
//! This crate builds the map, its Choi matrix and tensor square, and decides
//! positivity, complete positivity, the PPT bound on entanglement breaking and
//! the corresponding properties of `Phi^2`.

pub mod classify;
pub mod eig;
pub mod error;
pub mod map;
pub mod matrix;
pub mod scan;
pub mod spin;

pub use classify::{classify, ClassificationReport, Counterexample};
pub use eig::{eigvals_hermitian, is_psd, min_eig, Spectrum, DEFAULT_PSD_TOL};
pub use error::{Error, Result};
pub use map::{MapSpec, PolarizationVector, ScalingTriple};
pub use matrix::{kron, partial_transpose_second, ComplexMatrix, PureState};
pub use scan::{Property, ScanConfig, ScanRecord};
pub use spin::{
    basis_ket, build_angular_momentum, maximally_entangled, AngularMomentum, SpinLabel,
};

pub use num_complex::Complex64;
