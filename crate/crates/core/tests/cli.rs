use std::path::Path;
use std::process::{Command, Output};

fn fracconn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracconn"))
        .args(args)
        .output()
        .expect("failed to launch fracconn")
}

fn drop_runtime(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| {
            if l.starts_with('#') {
                l.to_string()
            } else {
                let mut cols: Vec<&str> = l.split(',').collect();
                cols.pop();
                cols.join(",")
            }
        })
        .collect()
}

#[test]
fn scaling_reruns_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = fracconn(&[
            "scaling",
            "--measure",
            "sierpinski_carpet",
            "--m-grid",
            "128:1024:4",
            "--trials",
            "3",
            "--seed",
            "9",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = std::fs::read_to_string(a).unwrap();
    let b = std::fs::read_to_string(b).unwrap();
    assert_eq!(drop_runtime(&a), drop_runtime(&b));
    let mut lines = a.lines();
    assert!(lines.next().unwrap().starts_with("# measure="));
    assert_eq!(lines.next().unwrap(), fracconn::experiments::SCALING_HEADER);
    assert_eq!(lines.count(), 12);
}

#[test]
fn config_file_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"measure": {"kind": "unit_square"}, "m_grid": [64, 128], "trials": 2, "seed": 5, "experiment": "scaling"}"#,
    )
    .unwrap();
    let o = fracconn(&["scaling", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let records = fracconn::experiments::read_scaling_csv(text.as_bytes()).unwrap();
    assert_eq!(records.len(), 4);
    assert!(records.iter().all(|r| r.measure_id == "unit_square"));

    let o = fracconn(&["lonely", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn threshold_and_mst_agree() {
    let t = fracconn(&[
        "threshold",
        "--measure",
        "unit_disk",
        "--m",
        "300",
        "--seed",
        "2",
    ]);
    assert!(t.status.success());
    let mst = fracconn(&["mst", "--measure", "unit_disk", "--m", "300", "--seed", "2"]);
    let oracle = fracconn(&[
        "mst",
        "--oracle",
        "--measure",
        "unit_disk",
        "--m",
        "300",
        "--seed",
        "2",
    ]);
    assert!(mst.status.success() && oracle.status.success());
    assert_eq!(mst.stdout, oracle.stdout);
    let text = String::from_utf8(mst.stdout).unwrap();
    let longest = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert_eq!(text.lines().count(), 300);
    let t = String::from_utf8(t.stdout).unwrap();
    assert!(
        t.contains(&fracconn::experiments::fmt_f64(longest / 2.0)),
        "{t}"
    );
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(
        fracconn(&["scaling", "--measure", "koch_curve", "--m", "10"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(fracconn(&["scaling", "--bogus"]).status.code(), Some(1));
    assert_eq!(
        fracconn(&[
            "sample",
            "--measure",
            r#"{"kind":"unit_square","ambient_dim":3}"#,
            "--m",
            "5"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        fracconn(&["scaling", "--m-grid", "10:5:3"]).status.code(),
        Some(1)
    );
    assert_eq!(fracconn(&[]).status.code(), Some(1));
    assert_eq!(fracconn(&["--help"]).status.code(), Some(0));
}

#[test]
fn runtime_errors_exit_with_two() {
    let missing = Path::new("/nonexistent-dir/out.csv");
    let o = fracconn(&["sample", "--m", "5", "--out", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unreadable_input_is_a_usage_error() {
    let o = fracconn(&["fit", "--input", "/nonexistent-dir/in.csv"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fit_reads_a_scaling_file() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("s.csv");
    let o = fracconn(&[
        "scaling",
        "--m-grid",
        "256:4096:5",
        "--trials",
        "4",
        "--seed",
        "1",
        "--out",
        data.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let o = fracconn(&["fit", "--input", data.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("predictor,slope,intercept,r2,m_min,m_max"));
}

#[test]
fn sample_writes_coordinates() {
    let o = fracconn(&[
        "sample",
        "--measure",
        "unit_cube",
        "--m",
        "20",
        "--seed",
        "3",
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "x,y,z");
    assert_eq!(body.len(), 21);
}

#[test]
fn lonely_and_occupancy_emit_rows() {
    let o = fracconn(&[
        "occupancy",
        "--m-grid",
        "256:512:2",
        "--trials",
        "5",
        "--c-grid",
        "1,4",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = String::from_utf8(o.stdout).unwrap();
    assert_eq!(rows.lines().filter(|l| !l.starts_with('#')).count(), 5);
    let o = fracconn(&["lonely", "--m", "512", "--trials", "3"]);
    assert!(o.status.success());
    assert_eq!(
        String::from_utf8(o.stdout)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with('#'))
            .count(),
        4
    );
}
