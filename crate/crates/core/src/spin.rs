//! Spin labels, angular momentum matrices and the standard `|j m>` states.
//!
//! The basis is ordered by descending magnetic quantum number: index 0 holds
//! `m = j`, index `2j` holds `m = -j`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, PureState};

/// Half-integer spin `j >= 1/2`, stored exactly as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinLabel {
    two_j: u32,
}

impl SpinLabel {
    pub const HALF: SpinLabel = SpinLabel { two_j: 1 };
    pub const ONE: SpinLabel = SpinLabel { two_j: 2 };

    pub fn new(two_j: u32) -> Result<Self> {
        if two_j == 0 {
            return Err(Error::InvalidSpin("j = 0 is not supported".into()));
        }
        Ok(Self { two_j })
    }

    pub fn two_j(self) -> u32 {
        self.two_j
    }

    pub fn j(self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    /// Hilbert space dimension `2j + 1`.
    pub fn dim(self) -> usize {
        self.two_j as usize + 1
    }

    /// `j(j+1)`, evaluated from the integer `2j(2j+2)/4`.
    pub fn casimir(self) -> f64 {
        let tj = u64::from(self.two_j);
        (tj * (tj + 2)) as f64 / 4.0
    }

    /// Values of `2m` in basis order (descending).
    pub fn two_m_values(self) -> impl DoubleEndedIterator<Item = i64> {
        let tj = i64::from(self.two_j);
        (0..=tj).map(move |k| tj - 2 * k)
    }

    /// Basis index of `2m`, if it is a valid projection.
    pub fn index_of(self, two_m: i64) -> Option<usize> {
        let tj = i64::from(self.two_j);
        if two_m.abs() > tj || (tj - two_m) % 2 != 0 {
            return None;
        }
        Some(((tj - two_m) / 2) as usize)
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_j.is_multiple_of(2) {
            write!(f, "{}", self.two_j / 2)
        } else {
            write!(f, "{}/2", self.two_j)
        }
    }
}

impl Serialize for SpinLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts `"n/2"` (or `"n/1"`), integers, and decimals that are a multiple of 1/2 within 1e-9.
impl FromStr for SpinLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || {
            Error::InvalidSpin(format!(
                "cannot parse {s:?} as a spin (expected n/2, integer or decimal)"
            ))
        };
        let two_j = if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "2" => num,
                "1" => num.checked_mul(2).ok_or_else(bad)?,
                _ => return Err(bad()),
            }
        } else if let Ok(n) = s.parse::<u32>() {
            n.checked_mul(2).ok_or_else(bad)?
        } else {
            let x: f64 = s.parse().map_err(|_| bad())?;
            let twice = 2.0 * x;
            if !twice.is_finite() || twice < 0.0 || twice > f64::from(u32::MAX) {
                return Err(bad());
            }
            if (twice - twice.round()).abs() > 1e-9 {
                return Err(Error::InvalidSpin(format!("{s} is not a multiple of 1/2")));
            }
            twice.round() as u32
        };
        SpinLabel::new(two_j)
    }
}

/// The Cartesian angular momentum components `(J1, J2, J3)` for one spin.
#[derive(Debug, Clone)]
pub struct AngularMomentum {
    pub spin: SpinLabel,
    pub j1: ComplexMatrix,
    pub j2: ComplexMatrix,
    pub j3: ComplexMatrix,
}

impl AngularMomentum {
    pub fn components(&self) -> [&ComplexMatrix; 3] {
        [&self.j1, &self.j2, &self.j3]
    }

    /// `J+ = J1 + i J2`
    pub fn raising(&self) -> ComplexMatrix {
        &self.j1 + &self.j2.scale(Complex64::i())
    }

    /// `J- = J1 - i J2`
    pub fn lowering(&self) -> ComplexMatrix {
        &self.j1 - &self.j2.scale(Complex64::i())
    }
}

/// Builds `J1, J2, J3` from the ladder elements `<m+1|J+|m> = sqrt((j-m)(j+m+1))`.
pub fn build_angular_momentum(spin: SpinLabel) -> AngularMomentum {
    let d = spin.dim();
    let tj = i64::from(spin.two_j());
    let mut j3 = ComplexMatrix::zeros(d);
    let mut j1 = ComplexMatrix::zeros(d);
    let mut j2 = ComplexMatrix::zeros(d);
    for (k, two_m) in spin.two_m_values().enumerate() {
        j3[(k, k)] = Complex64::new(two_m as f64 / 2.0, 0.0);
        if k == 0 {
            continue;
        }
        // J+ maps column k (projection m) to row k-1 (projection m+1).
        // (j-m)(j+m+1) = (2j-2m)(2j+2m+2)/4, exact in integers.
        let ladder = (((tj - two_m) * (tj + two_m + 2)) as f64 / 4.0).sqrt();
        let half = 0.5 * ladder;
        j1[(k - 1, k)] = Complex64::new(half, 0.0);
        j1[(k, k - 1)] = Complex64::new(half, 0.0);
        // J2 = (J+ - J-) / 2i
        j2[(k - 1, k)] = Complex64::new(0.0, -half);
        j2[(k, k - 1)] = Complex64::new(0.0, half);
    }
    AngularMomentum { spin, j1, j2, j3 }
}

/// `|j m>` for the projection `m = two_m / 2`.
pub fn basis_ket(spin: SpinLabel, two_m: i64) -> Result<PureState> {
    let idx = spin.index_of(two_m).ok_or(Error::ProjectionOutOfRange {
        two_j: spin.two_j(),
        two_m,
    })?;
    let mut amps = vec![Complex64::new(0.0, 0.0); spin.dim()];
    amps[idx] = Complex64::new(1.0, 0.0);
    PureState::new(amps)
}

/// `(2j+1)^{-1/2} sum_m |j m>|j m>`
pub fn maximally_entangled(spin: SpinLabel) -> PureState {
    let d = spin.dim();
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    for k in 0..d {
        amps[k * d + k] = amp;
    }
    PureState::normalized(amps).expect("nonzero amplitudes")
}
