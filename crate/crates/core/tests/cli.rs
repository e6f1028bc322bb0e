use std::path::Path;
use std::process::{Command, Output};

use spinscale::{ComplexMatrix, MapSpec, SpinLabel};

fn spinscale(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinscale"))
        .args(args)
        .env_remove("SPINSCALE_TOL")
        .output()
        .expect("run spinscale")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn classify_qubit_identity_json() {
    let out = spinscale(&["classify", "--j", "1/2", "--lambda", "1,1,1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["cp"], true);
    assert_eq!(v["ppt"], false);
}

#[test]
fn classify_depolarizing_all_true() {
    let out = spinscale(&["classify", "--j", "1", "--lambda", "0,0,0", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in [
        "positive_sufficient",
        "positive_necessary",
        "positive_exact",
        "cp",
        "ppt",
        "phi2_cp",
        "phi2_ppt",
    ] {
        assert_eq!(v[key], true, "{key}");
    }
    let table = spinscale(&["classify", "--j", "1", "--lambda", "0,0,0"]);
    assert!(String::from_utf8_lossy(&table.stdout).contains("completely positive"));
}

#[test]
fn classify_qutrit_cube_corner() {
    let exact = 2.0_f64 / 3.0;
    let arg = format!("{exact},{exact},{exact}");
    let v = json(&spinscale(&[
        "classify", "--j", "1", "--lambda", &arg, "--json",
    ]));
    assert_eq!(v["cp"], true);
    assert!(v["min_choi_eig"].as_f64().unwrap().abs() < 1e-12);

    // seven-digit rounding sits 3.3e-8 outside the box clause
    let rounded = "0.6666667,0.6666667,0.6666667";
    let v = json(&spinscale(&[
        "classify", "--j", "1", "--lambda", rounded, "--json",
    ]));
    assert!(v["min_choi_eig"].as_f64().unwrap().abs() < 1e-8);
    let v = json(&spinscale(&[
        "classify", "--j", "1", "--lambda", rounded, "--json", "--tol", "1e-8",
    ]));
    assert_eq!(v["cp"], true);
}

#[test]
fn negative_lambdas_parse() {
    let out = spinscale(&[
        "classify",
        "--j",
        "3/2",
        "--lambda",
        "-0.2,0.1,-0.3",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["lambda"][0], -0.2);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["classify", "--j", "0", "--lambda", "1,1,1"],
        vec!["classify", "--j", "1/3", "--lambda", "1,1,1"],
        vec!["classify", "--j", "1", "--lambda", "1,1"],
        vec!["classify", "--j", "1"],
        vec!["scan", "--j", "1", "--steps", "1"],
        vec!["scan", "--j", "1", "--properties", "cp,eb"],
        vec!["scan", "--j", "1", "--min", "1", "--max", "-1"],
        vec![
            "boundary",
            "--j",
            "1",
            "--direction",
            "0,0,0",
            "--property",
            "cp",
        ],
        vec!["bogus"],
    ] {
        assert_eq!(spinscale(&args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(spinscale(&["--help"]).status.code(), Some(0));
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_spinscale"))
        .args([
            "classify",
            "--j",
            "1",
            "--lambda",
            "0.6666667,0.6666667,0.6666667",
            "--json",
        ])
        .env("SPINSCALE_TOL", "1e-8")
        .output()
        .unwrap();
    let v = json(&out);
    assert_eq!(v["tol"], 1e-8);
    assert_eq!(v["cp"], true);
}

#[test]
fn scan_qutrit_cp_matches_closed_form_region() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cp.csv");
    let out = spinscale(&[
        "scan",
        "--j",
        "1",
        "--steps",
        "21",
        "--properties",
        "cp",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (header, rows) = read_csv(&path);
    assert_eq!(
        header,
        ["lambda1", "lambda2", "lambda3", "cp", "min_choi_eig"]
    );
    assert_eq!(rows.len(), 21 * 21 * 21);
    for row in &rows {
        let l: Vec<f64> = row[..3].iter().map(|x| x.parse().unwrap()).collect();
        let cubic =
            4.0 - 9.0 * (l[0] * l[0] + l[1] * l[1] + l[2] * l[2]) + 27.0 * l[0] * l[1] * l[2];
        let inside = cubic >= -1e-12 && l.iter().all(|x| x.abs() <= 2.0 / 3.0);
        assert_eq!(row[3] == "1", inside, "{row:?}");
    }
    // lambda1-major ordering
    assert_eq!(&rows[0][..3], ["-1", "-1", "-1"]);
    assert_eq!(&rows[1][..3], ["-1", "-1", "-0.9"]);
    assert_eq!(&rows[21][..3], ["-1", "-0.9", "-1"]);
}

#[test]
fn scan_qubit_cp_count_matches_tetrahedron() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.csv");
    let out = spinscale(&[
        "scan",
        "--j",
        "1/2",
        "--steps",
        "21",
        "--properties",
        "cp",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = read_csv(&path);
    let axis = spinscale::scan::linspace(-1.0, 1.0, 21);
    let mut expected = 0;
    for &a in &axis {
        for &b in &axis {
            for &c in &axis {
                if (a + b).abs() <= 1.0 + c + 1e-12 && (a - b).abs() <= 1.0 - c + 1e-12 {
                    expected += 1;
                }
            }
        }
    }
    assert_eq!(rows.iter().filter(|r| r[3] == "1").count(), expected);
}

#[test]
fn scan_is_deterministic_and_coherent_with_classify() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let common = [
        "scan",
        "--j",
        "1",
        "--steps",
        "7",
        "--seed",
        "5",
        "--audit-symmetry",
    ];
    let run = |p: &Path, workers: &str| {
        let mut args = common.to_vec();
        args.extend(["--workers", workers, "--output", p.to_str().unwrap()]);
        let out = spinscale(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(String::from_utf8_lossy(&out.stderr).contains("symmetry audit: 0 violations"));
    };
    run(&a, "1");
    run(&b, "4");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let (header, rows) = read_csv(&a);
    assert_eq!(
        header.join(","),
        "lambda1,lambda2,lambda3,pos,cp,ppt,phi2_cp,phi2_ppt,min_choi_eig,min_ptchoi_eig,min_phi2_choi_eig"
    );
    for row in rows.iter().step_by(17) {
        let lambda = row[..3].join(",");
        let v = json(&spinscale(&[
            "classify", "--j", "1", "--lambda", &lambda, "--json",
        ]));
        let flags = ["positive_exact", "cp", "ppt", "phi2_cp", "phi2_ppt"];
        for (k, key) in flags.iter().enumerate() {
            assert_eq!(
                row[3 + k] == "1",
                v[key].as_bool().unwrap(),
                "{lambda} {key}"
            );
        }
        for (k, key) in ["min_choi_eig", "min_ptchoi_eig", "min_phi2_choi_eig"]
            .iter()
            .enumerate()
        {
            let csv_val: f64 = row[8 + k].parse().unwrap();
            assert!((csv_val - v[key].as_f64().unwrap()).abs() <= 1e-12);
        }
    }
}

#[test]
fn boundary_examples() {
    let radius = |args: &[&str]| -> f64 {
        let out = spinscale(args);
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8_lossy(&out.stdout).trim().parse().unwrap()
    };
    let r = radius(&[
        "boundary",
        "--j",
        "1",
        "--direction",
        "1,1,1",
        "--property",
        "cp",
    ]);
    assert!((r - 2.0 / 3f64.sqrt()).abs() < 1e-6, "{r}");
    let r = radius(&[
        "boundary",
        "--j",
        "1/2",
        "--direction",
        "1,0,0",
        "--property",
        "ppt",
    ]);
    assert!((r - 1.0).abs() < 1e-6);
    let r = radius(&[
        "boundary",
        "--j",
        "1",
        "--direction",
        "1,0,0",
        "--property",
        "pos",
    ]);
    assert!((r - 2.0 / 3.0).abs() < 1e-6);
    let r = radius(&[
        "boundary",
        "--j",
        "1",
        "--direction",
        "-1,0,0",
        "--property",
        "phi2cp",
    ]);
    assert!((r - (2.0f64 / 3.0).sqrt()).abs() < 1e-6);
}

#[test]
fn choi_export() {
    let out = spinscale(&["choi", "--j", "1/2", "--lambda", "1,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let m = ComplexMatrix::from_json_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    let psi = spinscale::maximally_entangled(SpinLabel::HALF).projector();
    assert!(m.max_abs_diff(&psi) < 1e-15);

    let out = spinscale(&["choi", "--j", "1", "--lambda", "0,0,0"]);
    let m = ComplexMatrix::from_json_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert!(m.max_abs_diff(&ComplexMatrix::identity(9).scale_real(1.0 / 9.0)) < 1e-16);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pt.json");
    let out = spinscale(&[
        "choi",
        "--j",
        "3/2",
        "--lambda",
        "0.3,-0.4,0.5",
        "--partial-transpose",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let back = ComplexMatrix::from_json_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let want = MapSpec::new(SpinLabel::new(3).unwrap(), [0.3, -0.4, 0.5]).choi_partial_transpose();
    assert_eq!(back.frobenius_distance(&want), 0.0);
}

#[test]
fn hunt_and_replay() {
    let out = spinscale(&["hunt", "--j", "1", "--steps", "21", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let field = |name: &str| -> String {
        text.lines()
            .find_map(|l| {
                l.strip_prefix(name)
                    .map(|v| v.trim_start_matches(" = ").to_string())
            })
            .unwrap()
    };
    let witness: f64 = field("witness_min_eig").parse().unwrap();
    assert!(witness < -1e-8);
    let lambda = field("lambda");
    let v = json(&spinscale(&[
        "classify", "--j", "1", "--lambda", &lambda, "--json",
    ]));
    assert_eq!(v["phi2_cp"], true);

    let out = spinscale(&["hunt", "--j", "1/2", "--steps", "11"]);
    assert_eq!(out.status.code(), Some(3));
}
