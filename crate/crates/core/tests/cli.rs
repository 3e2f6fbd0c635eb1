use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_revtype");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("run revtype")
}

fn run_env(args: &[&str], threads: &str) -> Output {
    Command::new(BIN)
        .args(args)
        .env("REVTYPE_THREADS", threads)
        .output()
        .expect("run revtype")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn classify_catalog_surfaces() {
    let o = run(&["classify", "--catalog", "sphere", "--param", "r=1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["fit"]["verdict"], "SphereType");
    assert!((v["fit"]["A"][0][0].as_f64().unwrap() - 2.0).abs() < 1e-6);

    let o = run(&["classify", "--catalog", "catenoid", "--param", "c=1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["fit"]["verdict"], "NullType");

    let o = run(&[
        "classify",
        "--catalog",
        "torus",
        "--param",
        "R=3",
        "--param",
        "r=1",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["fit"]["verdict"], "NotCoordinateFiniteType");
}

#[test]
fn inconclusive_exits_two() {
    // residual 0.906 sits below a rejection threshold of 2
    let o = run(&["classify", "--catalog", "torus", "--tol-reject", "2"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["fit"]["verdict"], "Inconclusive");
}

#[test]
fn input_errors_exit_one() {
    for args in [
        &["classify", "--catalog", "nowhere"][..],
        &["classify", "--catalog", "broken-line"],
        &[
            "classify",
            "--catalog",
            "torus",
            "--param",
            "R=1",
            "--param",
            "r=2",
        ],
        &["classify", "--profile", "/nonexistent/profile.toml"],
        &["classify", "--catalog", "sphere", "--grid", "1x32"],
        &["classify", "--catalog", "sphere", "--format", "xml"],
        &["classify"],
        &["verify", "eq3", "--catalog", "sphere"],
        &["verify", "eq14", "--catalog", "sphere"],
        &["case2", "--lambda", "1:0"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(code(&o), 1, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn parse_errors_report_offsets() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(
        &path,
        "name = \"bad\"\nf = \"sin(s\"\ng = \"s\"\ns_min = 0.1\ns_max = 1.0\n",
    )
    .unwrap();
    let o = run(&["classify", "--profile", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("offset 5"), "{}", stderr(&o));
}

#[test]
fn verify_checks() {
    let o = run(&["verify", "eq2", "--catalog", "torus"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(json(&o)["max_residual"].as_f64().unwrap() <= 1e-8);

    let o = run(&["verify", "eq8", "--catalog", "sphere", "--param", "r=2"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["max_residual"].as_f64().unwrap() <= 1e-12);

    let o = run(&[
        "verify",
        "eq15",
        "--catalog",
        "catenoid",
        "--lambda",
        "0",
        "--mu",
        "0",
    ]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["max_residual"].as_f64().unwrap() <= 1e-10);

    let o = run(&[
        "verify",
        "eq14",
        "--catalog",
        "sphere",
        "--lambda",
        "2",
        "--mu",
        "2",
    ]);
    assert_eq!(code(&o), 0);

    let o = run(&[
        "verify",
        "eq14",
        "--catalog",
        "torus",
        "--lambda",
        "2",
        "--mu",
        "2",
    ]);
    assert_eq!(code(&o), 2);

    let o = run(&[
        "verify",
        "eq9-vs-eq1",
        "--catalog",
        "catenoid",
        "--samples",
        "200",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["n_points"], 200);
}

#[test]
fn csv_has_one_row_per_sample() {
    let o = run(&[
        "verify",
        "eq2",
        "--catalog",
        "sphere",
        "--ns",
        "8",
        "--ntheta",
        "6",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "s,theta,residual");
    assert_eq!(lines.len(), 1 + 48);

    let o = run(&[
        "classify",
        "--catalog",
        "catenoid",
        "--grid",
        "4x4",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("s,theta,x1,x2,x3,lap1,lap2,lap3,residual\n"));
    assert_eq!(text.lines().count(), 17);
}

#[test]
fn case2_points() {
    let o = run(&["case2", "--lambda", "0", "--mu", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["certificate"]["argmin"]["c0"], 12.0);

    let o = run(&["case2", "--lambda", "1", "--mu", "1"]);
    assert_eq!(code(&o), 2);
    let v = json(&o);
    assert_eq!(v["certificate"]["points_scanned"], 0);
    assert_eq!(v["certificate"]["diagonal_skipped"], 1);
}

fn report_bytes(args: &[&str], threads: &str, path: &Path) -> Vec<u8> {
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--output", path.to_str().unwrap()]);
    let o = run_env(&full, threads);
    assert!(code(&o) == 0, "{}", stderr(&o));
    std::fs::read(path).unwrap()
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    for args in [
        &["classify", "--catalog", "torus"][..],
        &[
            "verify",
            "eq9-vs-eq1",
            "--catalog",
            "sphere",
            "--seed",
            "11",
            "--samples",
            "100",
        ],
        &["verify", "eq2", "--catalog", "catenoid", "--format", "csv"],
    ] {
        let a = report_bytes(args, "1", &p);
        let b = report_bytes(args, "4", &p);
        let c = report_bytes(args, "4", &p);
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
        assert_eq!(b, c, "{args:?}");
    }
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let o = run_env(&["classify", "--catalog", "sphere"], "zero");
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("REVTYPE_THREADS"));
}

#[test]
fn catalog_export_round_trips_through_classify() {
    let o = run(&["catalog", "list"]);
    assert_eq!(code(&o), 0);
    let names: Vec<String> = json(&o)
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(names, ["catenoid", "sphere", "torus", "broken-line"]);

    let o = run(&["catalog", "export", "sphere", "--param", "r=2"]);
    assert_eq!(code(&o), 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sphere.toml");
    std::fs::write(&path, &o.stdout).unwrap();
    let o = run(&["classify", "--profile", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["fit"]["verdict"], "SphereType");
    assert_eq!(v["config"]["source"]["kind"], "file");
}

#[test]
fn shipped_profiles_load() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("profiles");
    for (file, verdict) in [
        ("catenoid.toml", Some("NullType")),
        ("sphere_r3.toml", Some("SphereType")),
        ("torus_5_2.toml", Some("NotCoordinateFiniteType")),
        ("cone_broken.toml", None),
    ] {
        let o = run(&["classify", "--profile", dir.join(file).to_str().unwrap()]);
        match verdict {
            Some(v) => {
                assert_eq!(code(&o), 0, "{file}: {}", stderr(&o));
                assert_eq!(json(&o)["fit"]["verdict"], v);
            }
            None => assert_eq!(code(&o), 1, "{file}"),
        }
    }
}
