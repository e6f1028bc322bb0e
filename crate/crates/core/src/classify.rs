//! Classification of a polarization-scaling map against the hierarchy
//! positive / completely positive / PPT Choi / `Phi^2` CP / `Phi^2` PPT,
//! plus the tools that probe 2-tensor-stable positivity directly.
//!
//! Numeric Choi eigenvalues are authoritative. Closed-form region
//! inequalities for `j = 1/2` and `j = 1` are reported alongside as
//! cross-checks only.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::eig::eigvals_hermitian;
use crate::error::Result;
use crate::map::{MapSpec, ScalingTriple};
use crate::matrix::PureState;
use crate::spin::{basis_ket, build_angular_momentum, SpinLabel};

/// Slack for closed-form inequalities evaluated on rounded grid values.
pub const CLOSED_FORM_SLACK: f64 = 1e-12;

/// Uniform probes drawn by [`counterexample_hunt`] once the grid is exhausted.
pub const HUNT_RANDOM_PROBES: usize = 4096;

/// Radius `(j+1)/(3j)` of the positivity cube `max |lambda_i| <= (j+1)/(3j)`.
pub fn positivity_radius(spin: SpinLabel) -> f64 {
    let tj = f64::from(spin.two_j());
    (tj + 2.0) / (3.0 * tj)
}

/// Sufficient: `sum lambda_i^2 <= ((j+1)/(3j))^2`.
pub fn positivity_sufficient(map: &MapSpec) -> bool {
    let r = positivity_radius(map.spin);
    map.lambdas.norm_sqr() <= r * r
}

/// Necessary: `max |lambda_i| <= 1` (up to `tol`).
pub fn positivity_necessary(map: &MapSpec, tol: f64) -> bool {
    map.lambdas.max_abs() <= 1.0 + tol
}

/// Exact criterion `max |lambda_i| <= (j+1)/(3j)` (up to `tol`).
///
/// The minimal eigenvalue of `Phi[rho]` depends on `rho` only through its
/// polarization, which ranges over the ball of radius `j`; the quadratic
/// `sum lambda_i^2 p_i^2` is maximal at a pole of that ball.
pub fn positivity_exact(map: &MapSpec, tol: f64) -> bool {
    map.lambdas.max_abs() <= positivity_radius(map.spin) + tol
}

/// Smallest eigenvalue of `Phi[rho]` over all states:
/// `(1 - 3j/(j+1) * max |lambda_i|) / d`.
pub fn min_positivity_eig(map: &MapSpec) -> f64 {
    (1.0 - map.lambdas.max_abs() / positivity_radius(map.spin)) / map.dim() as f64
}

/// Brute-force positivity probe: the minimum of the closed-form smallest
/// eigenvalue of `Phi[|phi><phi|]` over `samples` random pure states.
///
/// Even-numbered draws are Haar random (normalized complex Gaussian vectors);
/// odd-numbered draws are spin-coherent states along uniformly random axes,
/// which reach the polarization sphere `|p| = j`. Deterministic in `seed`.
pub fn positivity_sampling_oracle(map: &MapSpec, samples: usize, seed: u64) -> (f64, PureState) {
    let samples = samples.max(1);
    let am = build_angular_momentum(map.spin);
    let js = am.components();
    let d = map.dim();
    let j = map.spin.j();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut best = f64::INFINITY;
    let mut best_state = None;
    for k in 0..samples {
        let state = if k % 2 == 0 {
            haar_state(d, &mut rng)
        } else {
            let cos_theta: f64 = rng.random_range(-1.0..=1.0);
            let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            spin_coherent_state(map.spin, cos_theta.acos(), phi)
        };
        let norm_sqr: f64 = state.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        let scaled: f64 = map
            .lambdas
            .as_array()
            .iter()
            .zip(js)
            .map(|(l, op)| (l * state.expectation(op).re).powi(2))
            .sum();
        let value = (norm_sqr - 3.0 / (j + 1.0) * scaled.sqrt()) / d as f64;
        if value < best {
            best = value;
            best_state = Some(state);
        }
    }
    (best, best_state.expect("at least one sample"))
}

fn haar_state(d: usize, rng: &mut impl Rng) -> PureState {
    loop {
        let amps: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if let Ok(s) = PureState::normalized(amps) {
            return s;
        }
    }
}

/// Spin-coherent state with polarization `j (sin t cos f, sin t sin f, cos t)`:
/// amplitudes `sqrt(C(2j, j+m)) cos(t/2)^(j+m) sin(t/2)^(j-m) e^{i(j-m)f}`.
pub fn spin_coherent_state(spin: SpinLabel, theta: f64, phi: f64) -> PureState {
    let tj = spin.two_j() as i32;
    let (c, s) = ((0.5 * theta).cos(), (0.5 * theta).sin());
    let amps = spin
        .two_m_values()
        .map(|two_m| {
            let up = ((tj as i64 + two_m) / 2) as i32;
            let down = tj - up;
            let mag = binomial(tj as u32, up as u32).sqrt() * c.powi(up) * s.powi(down);
            Complex64::from_polar(mag, f64::from(down) * phi)
        })
        .collect();
    PureState::normalized(amps).expect("coherent state has unit norm")
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Complete positivity from the smallest eigenvalue of the Choi matrix.
pub fn is_cp(map: &MapSpec, tol: f64) -> Result<(bool, f64)> {
    let spec = eigvals_hermitian(&map.choi_closed_form())?;
    Ok((spec.is_psd(tol), spec.min()))
}

/// Closed-form CP regions: the tetrahedron `1 +- l3 >= |l1 +- l2|` for
/// `j = 1/2`; `4 - 9 sum l_i^2 + 27 l1 l2 l3 >= 0` with `|l_i| <= 2/3` for
/// `j = 1`. `None` for other spins.
pub fn cp_closed_form(map: &MapSpec) -> Option<bool> {
    let l = &map.lambdas;
    match map.spin.two_j() {
        1 => Some(tetrahedron_slack(l) >= -CLOSED_FORM_SLACK),
        2 => Some(
            qutrit_cubic(l, 1.0) >= -CLOSED_FORM_SLACK && qutrit_box_slack(l) >= -CLOSED_FORM_SLACK,
        ),
        _ => None,
    }
}

/// `min over signs of (1 +- l3 - |l1 +- l2|)`; nonnegative inside the qubit CP tetrahedron.
pub fn tetrahedron_slack(l: &ScalingTriple) -> f64 {
    let a = 1.0 + l.lambda3 - (l.lambda1 + l.lambda2).abs();
    let b = 1.0 - l.lambda3 - (l.lambda1 - l.lambda2).abs();
    a.min(b)
}

/// `1 - (|l1| + |l2| + |l3|)`; nonnegative inside the qubit PPT octahedron.
pub fn octahedron_slack(l: &ScalingTriple) -> f64 {
    1.0 - l.as_array().iter().map(|x| x.abs()).sum::<f64>()
}

/// `4 - 9 (l1^2 + l2^2 + l3^2) + sign * 27 l1 l2 l3`.
pub fn qutrit_cubic(l: &ScalingTriple, sign: f64) -> f64 {
    4.0 - 9.0 * l.norm_sqr() + sign * 27.0 * l.lambda1 * l.lambda2 * l.lambda3
}

/// `2/3 - max |l_i|`.
pub fn qutrit_box_slack(l: &ScalingTriple) -> f64 {
    2.0 / 3.0 - l.max_abs()
}

/// PPT test on the Choi matrix: a necessary condition for entanglement breaking.
/// True iff both the Choi matrix and its partial transpose are PSD.
/// Returns the smallest eigenvalue of the partial transpose.
pub fn ppt_necessary_eb(map: &MapSpec, tol: f64) -> Result<(bool, f64)> {
    let (cp, _) = is_cp(map, tol)?;
    let spec = eigvals_hermitian(&map.choi_partial_transpose())?;
    Ok((cp && spec.is_psd(tol), spec.min()))
}

/// CP of `Phi^2`, necessary for 2-tensor-stable positivity.
pub fn phi2_cp(map: &MapSpec, tol: f64) -> Result<(bool, f64)> {
    is_cp(&map.compose_self(), tol)
}

/// PPT test on the Choi matrix of `Phi^2`, necessary for 2-local entanglement annihilation.
pub fn phi2_ppt(map: &MapSpec, tol: f64) -> Result<bool> {
    Ok(ppt_necessary_eb(&map.compose_self(), tol)?.0)
}

/// `min_eig((Phi (x) Phi)[|state><state|])`; negative values rule out
/// 2-tensor-stable positivity.
pub fn tensor2_witness(map: &MapSpec, state: &PureState) -> Result<f64> {
    let out = map.apply_tensor2(&state.projector())?;
    Ok(eigvals_hermitian(&out)?.min())
}

/// Schmidt-rank-2 probe `(|j,j>|j,j> + |j,-j>|j,-j>) / sqrt(2)`.
/// For `j = 1` this is `(|1,1>|1,1> + |1,-1>|1,-1>) / sqrt(2)`.
pub fn canonical_witness_state(spin: SpinLabel) -> PureState {
    let tj = i64::from(spin.two_j());
    let top = basis_ket(spin, tj).expect("m = j");
    let bottom = basis_ket(spin, -tj).expect("m = -j");
    let a = top.tensor(&top);
    let b = bottom.tensor(&bottom);
    let amps = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x + y)
        .collect();
    PureState::normalized(amps).expect("nonzero")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Counterexample {
    pub lambdas: ScalingTriple,
    /// Smallest eigenvalue of the `Phi^2` Choi matrix.
    pub phi2_choi_min_eig: f64,
    /// Smallest eigenvalue of `(Phi (x) Phi)` applied to the canonical probe state.
    pub witness: f64,
}

/// Searches for a map whose square is CP but whose tensor square sends the
/// canonical Schmidt-rank-2 state to a non-PSD operator (witness `< -10 tol`).
///
/// Grid points of `[-1, 1]^3` (`grid_steps` per axis, endpoints included) are
/// visited in lambda1-major order, followed by [`HUNT_RANDOM_PROBES`] uniform
/// draws seeded by `seed`. Returns the first hit.
pub fn counterexample_hunt(
    spin: SpinLabel,
    grid_steps: usize,
    seed: u64,
    tol: f64,
) -> Result<Option<Counterexample>> {
    let state = canonical_witness_state(spin);
    let probe = |l: ScalingTriple| -> Result<Option<Counterexample>> {
        let map = MapSpec::new(spin, l);
        let (ok, cert) = phi2_cp(&map, tol)?;
        if !ok {
            return Ok(None);
        }
        let witness = tensor2_witness(&map, &state)?;
        Ok((witness < -10.0 * tol).then_some(Counterexample {
            lambdas: l,
            phi2_choi_min_eig: cert,
            witness,
        }))
    };

    let axis = crate::scan::linspace(-1.0, 1.0, grid_steps);
    for &a in &axis {
        for &b in &axis {
            for &c in &axis {
                if let Some(hit) = probe(ScalingTriple::new(a, b, c))? {
                    return Ok(Some(hit));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..HUNT_RANDOM_PROBES {
        let l = ScalingTriple::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        if let Some(hit) = probe(l)? {
            return Ok(Some(hit));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormValue {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub j: SpinLabel,
    pub lambda: [f64; 3],
    pub positive_sufficient: bool,
    pub positive_necessary: bool,
    pub positive_exact: bool,
    pub cp: bool,
    /// Choi matrix PSD and PPT (both signs of the `lambda2` term).
    #[serde(rename = "ppt")]
    pub ppt_both_signs: bool,
    pub phi2_cp: bool,
    pub phi2_ppt: bool,
    pub min_positivity_eig: f64,
    pub min_choi_eig: f64,
    pub min_ptchoi_eig: f64,
    pub min_phi2_choi_eig: f64,
    pub min_phi2_ptchoi_eig: f64,
    pub closed_form_values: Option<Vec<ClosedFormValue>>,
    pub notes: Vec<String>,
    pub tol: f64,
}

impl ClassificationReport {
    /// `cp => positive_exact => positive_necessary`, `positive_sufficient => positive_exact`,
    /// `ppt => cp`, `phi2_ppt => phi2_cp`.
    pub fn implications_hold(&self) -> bool {
        let imp = |a: bool, b: bool| !a || b;
        imp(self.cp, self.positive_exact)
            && imp(self.positive_exact, self.positive_necessary)
            && imp(self.positive_sufficient, self.positive_exact)
            && imp(self.ppt_both_signs, self.cp)
            && imp(self.phi2_ppt, self.phi2_cp)
    }

    pub fn closed_form(&self, name: &str) -> Option<f64> {
        self.closed_form_values
            .as_ref()?
            .iter()
            .find(|v| v.name == name)
            .map(|v| v.value)
    }
}

pub fn classify(map: &MapSpec, tol: f64) -> Result<ClassificationReport> {
    let phi2 = map.compose_self();
    let choi = eigvals_hermitian(&map.choi_closed_form())?;
    let ptchoi = eigvals_hermitian(&map.choi_partial_transpose())?;
    let phi2_choi = eigvals_hermitian(&phi2.choi_closed_form())?;
    let phi2_ptchoi = eigvals_hermitian(&phi2.choi_partial_transpose())?;

    let cp = choi.is_psd(tol);
    let phi2_cp = phi2_choi.is_psd(tol);
    // A PSD Choi matrix certifies positivity even inside the tolerance band.
    let positive_exact = positivity_exact(map, tol) || cp;
    let positive_necessary = positivity_necessary(map, tol) || positive_exact;

    let mut notes = Vec::new();
    let closed_form_values = closed_form_values(map);
    match map.spin.two_j() {
        1 => notes.push("j = 1/2: the PPT test is equivalent to entanglement breaking".to_string()),
        2 => {
            let l2 = phi2.lambdas;
            if qutrit_cubic(&l2, 1.0) >= -CLOSED_FORM_SLACK && !phi2_cp {
                notes.push(format!(
                    "quartic condition holds but the Phi^2 Choi matrix is not PSD (max lambda_i^2 = {} > 2/3)",
                    l2.max_abs()
                ));
            }
        }
        _ => {}
    }

    let report = ClassificationReport {
        j: map.spin,
        lambda: map.lambdas.as_array(),
        positive_sufficient: positivity_sufficient(map),
        positive_necessary,
        positive_exact,
        cp,
        ppt_both_signs: cp && ptchoi.is_psd(tol),
        phi2_cp,
        phi2_ppt: phi2_cp && phi2_ptchoi.is_psd(tol),
        min_positivity_eig: min_positivity_eig(map),
        min_choi_eig: choi.min(),
        min_ptchoi_eig: ptchoi.min(),
        min_phi2_choi_eig: phi2_choi.min(),
        min_phi2_ptchoi_eig: phi2_ptchoi.min(),
        closed_form_values,
        notes,
        tol,
    };
    debug_assert!(
        report.implications_hold(),
        "implication chain violated: {report:?}"
    );
    Ok(report)
}

fn closed_form_values(map: &MapSpec) -> Option<Vec<ClosedFormValue>> {
    let l = map.lambdas;
    let sq = l.squared();
    let v = |name, value| ClosedFormValue { name, value };
    match map.spin.two_j() {
        1 => Some(vec![
            v("tetrahedron_slack", tetrahedron_slack(&l)),
            v("octahedron_slack", octahedron_slack(&l)),
            v("phi2_tetrahedron_slack", tetrahedron_slack(&sq)),
            v("phi2_octahedron_slack", octahedron_slack(&sq)),
        ]),
        2 => Some(vec![
            v("cubic_plus", qutrit_cubic(&l, 1.0)),
            v("cubic_minus", qutrit_cubic(&l, -1.0)),
            v("box_slack", qutrit_box_slack(&l)),
            v("quartic", qutrit_cubic(&sq, 1.0)),
            v("quartic_minus", qutrit_cubic(&sq, -1.0)),
            v("phi2_box_slack", qutrit_box_slack(&sq)),
        ]),
        _ => None,
    }
}
