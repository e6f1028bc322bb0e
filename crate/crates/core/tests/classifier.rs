mod common;

use common::*;
use proptest::prelude::*;
use spinscale::classify::*;
use spinscale::scan::linspace;
use spinscale::{
    eigvals_hermitian, maximally_entangled, MapSpec, ScalingTriple, SpinLabel,
    DEFAULT_PSD_TOL as TOL,
};

fn near_boundary(r: &ClassificationReport) -> bool {
    let margin = 1e-7;
    [
        r.min_choi_eig,
        r.min_ptchoi_eig,
        r.min_phi2_choi_eig,
        r.min_phi2_ptchoi_eig,
        r.min_positivity_eig,
    ]
    .iter()
    .any(|v| v.abs() < margin)
        || (r.lambda.iter().fold(0.0f64, |m, x| m.max(x.abs())) - 1.0).abs() < margin
        || (r.lambda.iter().map(|x| x * x).sum::<f64>().sqrt() - positivity_radius(r.j)).abs()
            < margin
}

fn booleans(r: &ClassificationReport) -> [bool; 7] {
    [
        r.positive_sufficient,
        r.positive_necessary,
        r.positive_exact,
        r.cp,
        r.ppt_both_signs,
        r.phi2_cp,
        r.phi2_ppt,
    ]
}

#[test]
fn booleans_invariant_under_signed_permutations() {
    let mut rng = rng(41);
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let flips = [
        [1.0, 1.0, 1.0],
        [-1.0, -1.0, 1.0],
        [-1.0, 1.0, -1.0],
        [1.0, -1.0, -1.0],
    ];
    for tj in 1..=3 {
        let s = spin(tj);
        let mut checked = 0;
        while checked < 40 {
            let l = random_triple(&mut rng, 1.0).as_array();
            let base = classify(&MapSpec::new(s, l), TOL).unwrap();
            if near_boundary(&base) {
                continue;
            }
            checked += 1;
            for p in &perms {
                for f in &flips {
                    let img = [l[p[0]] * f[0], l[p[1]] * f[1], l[p[2]] * f[2]];
                    let other = classify(&MapSpec::new(s, img), TOL).unwrap();
                    assert_eq!(
                        booleans(&base),
                        booleans(&other),
                        "2j={tj} {l:?} -> {img:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn ppt_invariant_under_single_sign_flip() {
    let mut rng = rng(42);
    for tj in 1..=3 {
        let s = spin(tj);
        for _ in 0..40 {
            let l = random_triple(&mut rng, 1.0);
            let (base, cert) = ppt_necessary_eb(&MapSpec::new(s, l), TOL).unwrap();
            if cert.abs() < 1e-7 || is_cp(&MapSpec::new(s, l), TOL).unwrap().1.abs() < 1e-7 {
                continue;
            }
            for k in 0..3 {
                let mut a = l.as_array();
                a[k] = -a[k];
                assert_eq!(
                    ppt_necessary_eb(&MapSpec::new(s, a), TOL).unwrap().0,
                    base,
                    "{l:?} flip {k}"
                );
            }
        }
    }
}

#[test]
fn maximally_entangled_witnesses_every_phi2_cp_failure() {
    let mut rng = rng(43);
    for tj in 1..=3 {
        let s = spin(tj);
        let psi = maximally_entangled(s);
        for _ in 0..60 {
            let m = MapSpec::new(s, random_triple(&mut rng, 1.0));
            let (ok, cert) = phi2_cp(&m, TOL).unwrap();
            let w = tensor2_witness(&m, &psi).unwrap();
            assert!((w - cert).abs() < 1e-12);
            if !ok {
                assert!(w < 0.0);
            }
        }
    }
}

#[test]
fn product_states_stay_psd_inside_positivity_cube() {
    let mut rng = rng(44);
    for tj in 1..=3 {
        let s = spin(tj);
        let r = positivity_radius(s);
        for _ in 0..20 {
            let m = MapSpec::new(s, random_triple(&mut rng, r));
            let a = random_state(s.dim(), &mut rng);
            let b = random_state(s.dim(), &mut rng);
            assert!(tensor2_witness(&m, &a.tensor(&b)).unwrap() >= -TOL);
        }
    }
}

#[test]
fn closed_form_cp_matches_numeric_on_grid() {
    let axis = linspace(-1.0, 1.0, 11);
    for s in [SpinLabel::HALF, SpinLabel::ONE] {
        for &a in &axis {
            for &b in &axis {
                for &c in &axis {
                    let m = MapSpec::new(s, [a, b, c]);
                    assert_eq!(cp_closed_form(&m), Some(is_cp(&m, TOL).unwrap().0), "{m}");
                }
            }
        }
    }
}

#[test]
fn sampling_oracle_never_contradicts_exact_positivity() {
    let mut rng = rng(45);
    for tj in 1..=4 {
        let s = spin(tj);
        for seed in 0..10 {
            let m = MapSpec::new(s, random_triple(&mut rng, 1.0));
            let (min, _) = positivity_sampling_oracle(&m, 2_000, seed);
            if positivity_exact(&m, TOL) {
                assert!(min >= -TOL, "{m}: {min}");
            }
            assert!(min >= min_positivity_eig(&m) - 1e-12);
        }
    }
}

#[test]
fn phi2_ppt_implies_phi2_cp_on_grid() {
    let axis = linspace(-1.0, 1.0, 9);
    for &a in &axis {
        for &b in &axis {
            for &c in &axis {
                let m = MapSpec::new(SpinLabel::ONE, [a, b, c]);
                if phi2_ppt(&m, TOL).unwrap() {
                    assert!(phi2_cp(&m, TOL).unwrap().0);
                }
            }
        }
    }
}

#[test]
fn report_serializes_with_short_ppt_key() {
    let r = classify(&MapSpec::new(SpinLabel::HALF, [1.0, 1.0, 1.0]), TOL).unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    assert_eq!(v["cp"], true);
    assert_eq!(v["ppt"], false);
    assert_eq!(v["j"], "1/2");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn implication_chain(tj in 1u32..=4, l1 in -1.5..1.5f64, l2 in -1.5..1.5f64, l3 in -1.5..1.5f64) {
        let m = MapSpec::new(SpinLabel::new(tj).unwrap(), ScalingTriple::new(l1, l2, l3));
        let r = classify(&m, TOL).unwrap();
        prop_assert!(r.implications_hold());
        let choi_scale = eigvals_hermitian(&m.choi_closed_form()).unwrap().psd_scale();
        let pt_scale = eigvals_hermitian(&m.choi_partial_transpose()).unwrap().psd_scale();
        prop_assert_eq!(r.cp, r.min_choi_eig >= -TOL * choi_scale);
        prop_assert_eq!(r.ppt_both_signs, r.cp && r.min_ptchoi_eig >= -TOL * pt_scale);
    }
}
