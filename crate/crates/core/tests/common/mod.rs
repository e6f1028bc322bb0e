#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spinscale::{Complex64, ComplexMatrix, PureState, ScalingTriple, SpinLabel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, |_, _| gaussian(rng))
}

pub fn random_hermitian(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let a = random_matrix(d, rng);
    (&a + &a.adjoint()).scale_real(0.5)
}

pub fn random_state(d: usize, rng: &mut impl Rng) -> PureState {
    PureState::normalized((0..d).map(|_| gaussian(rng)).collect()).unwrap()
}

/// Random full-rank density matrix `G G^H / tr`.
pub fn random_density(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = random_matrix(d, rng);
    let p = g.matmul(&g.adjoint());
    let tr = p.trace().re;
    p.scale_real(1.0 / tr)
}

/// Product of random complex Givens rotations and phases.
pub fn random_unitary(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(d);
    for _ in 0..3 {
        for p in 0..d {
            for q in (p + 1)..d {
                let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let mut g = ComplexMatrix::identity(d);
                let (c, s) = (theta.cos(), theta.sin());
                g[(p, p)] = Complex64::new(c, 0.0);
                g[(q, q)] = Complex64::new(c, 0.0);
                g[(p, q)] = Complex64::from_polar(-s, phi);
                g[(q, p)] = Complex64::from_polar(s, -phi);
                u = u.matmul(&g);
            }
        }
        let phases = ComplexMatrix::from_fn(d, |r, c| {
            if r == c {
                Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        u = u.matmul(&phases);
    }
    u
}

pub fn random_triple(rng: &mut impl Rng, half_width: f64) -> ScalingTriple {
    ScalingTriple::new(
        rng.random_range(-half_width..=half_width),
        rng.random_range(-half_width..=half_width),
        rng.random_range(-half_width..=half_width),
    )
}

pub fn spin(two_j: u32) -> SpinLabel {
    SpinLabel::new(two_j).unwrap()
}
