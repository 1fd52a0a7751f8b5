use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn cvqfl(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvqfl"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("run cvqfl")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Value after `key: ` on the first matching line.
fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key)?.strip_prefix(": "))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
}

#[test]
fn zero_matrix_round_trips_exactly() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("zero.csv");
    fs::write(&input, "0,0,0\n0,0,0\n").unwrap();
    let o = cvqfl(&["encode", input.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(
        field(&text, "round-trip error").parse::<f64>().unwrap(),
        0.0
    );
    assert_eq!(field(&text, "bs/ps pairs"), "4");
}

#[test]
fn seeded_encodings() {
    let dir = TempDir::new().unwrap();
    let o = cvqfl(&["encode", "--size", "8", "--seed", "3"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let err: f64 = field(&stdout(&o), "round-trip error").parse().unwrap();
    assert!(err <= 1e-9);

    let o = cvqfl(&["encode", "--size", "64"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "bs/ps pairs"), "4032");
}

#[test]
fn delta_has_flat_spectrum() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("delta.csv");
    fs::write(&input, "1,0,0,0\n0,0,0,0\n0,0,0,0\n0,0,0,0\n").unwrap();
    let o = cvqfl(&["qft", input.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let re = fs::read_to_string(dir.path().join("qft/spectrum_re.csv")).unwrap();
    let im = fs::read_to_string(dir.path().join("qft/spectrum_im.csv")).unwrap();
    for (text, expected) in [(re, 0.25), (im, 0.0)] {
        let values: Vec<f64> = text
            .lines()
            .flat_map(|l| l.split(','))
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(values.len(), 16);
        assert!(values.iter().all(|v| (v - expected).abs() <= 1e-12));
    }
}

#[test]
fn qft_counts_and_oracle_error() {
    let dir = TempDir::new().unwrap();
    let o = cvqfl(&["qft", "--size", "32", "--seed", "7"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let err: f64 = field(&stdout(&o), "max error vs oracle").parse().unwrap();
    assert!(err <= 1e-9);

    let o = cvqfl(&["qft", "--size", "64"], dir.path());
    assert_eq!(field(&stdout(&o), "row gates"), "384");
}

#[test]
fn compile_dft_and_random() {
    let dir = TempDir::new().unwrap();
    let o = cvqfl(&["compile", "--dft", "8"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(field(&text, "pairs"), "28");
    assert!(field(&text, "reconstruction error").parse::<f64>().unwrap() <= 1e-10);
    let mesh = fs::read_to_string(dir.path().join("compile/mesh.txt")).unwrap();
    assert!(mesh.starts_with("clements 8\n"));
    assert_eq!(mesh.lines().count(), 1 + 28 + 1);

    let o = cvqfl(&["compile", "--size", "6", "--seed", "2"], dir.path());
    assert_eq!(field(&stdout(&o), "pairs"), "15");
}

#[test]
fn compile_identity_from_csv() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("id.csv");
    fs::write(&input, "1,0,0\n0,1,0\n0,0,1\n").unwrap();
    let o = cvqfl(&["compile", input.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let mesh = fs::read_to_string(dir.path().join("compile/mesh.txt")).unwrap();
    for line in mesh.lines().skip(1).take(3) {
        let theta: f64 = line.split_whitespace().nth(2).unwrap().parse().unwrap();
        assert_eq!(theta.abs(), 0.0, "{line}");
    }
}

#[test]
fn heat_tables() {
    let dir = TempDir::new().unwrap();
    let o = cvqfl(&["heat"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let report = fs::read_to_string(dir.path().join("heat/report.csv")).unwrap();
    assert_eq!(report.lines().count(), 1 + 5);

    let o = cvqfl(&["heat", "--steps", "0"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let report = fs::read_to_string(dir.path().join("heat/report.csv")).unwrap();
    let rows: Vec<&str> = report.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("0,0,"));
}

#[test]
fn filter_report_rows() {
    let dir = TempDir::new().unwrap();
    let o = cvqfl(&["filter", "--pgm"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let report = fs::read_to_string(dir.path().join("filter/report.csv")).unwrap();
    assert!(report.starts_with("metric,classical,cv_qfl\n"));
    assert!(report.contains("Bins retained,317 / 4096"));
    assert!(report.contains("SNR improvement (dB),"));
    let pgm = fs::read(dir.path().join("filter/field_cv.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n64 64\n255\n"));
}

#[test]
fn reruns_are_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for args in [
        &["filter", "--seed", "5"][..],
        &["heat"][..],
        &["qft", "--size", "16"][..],
        &["compile", "--size", "5"][..],
        &["report"][..],
    ] {
        assert_eq!(cvqfl(args, a.path()).status.code(), Some(0));
        assert_eq!(cvqfl(args, b.path()).status.code(), Some(0));
    }
    let mut compared = 0;
    for sub in ["filter", "heat", "qft", "compile", "report"] {
        for entry in fs::read_dir(a.path().join(sub)).unwrap() {
            let name = entry.unwrap().file_name();
            let x = fs::read(a.path().join(sub).join(&name)).unwrap();
            let y = fs::read(b.path().join(sub).join(&name)).unwrap();
            assert_eq!(x, y, "{sub}/{name:?}");
            compared += 1;
        }
    }
    assert!(compared > 10);
}

#[test]
fn bad_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.csv");
    let ragged = dir.path().join("ragged.csv");
    fs::write(&ragged, "1,2\n3\n").unwrap();
    let config = dir.path().join("bad.json");
    fs::write(&config, "{\"alpha\": \"hot\"}").unwrap();
    let odd = dir.path().join("odd.csv");
    fs::write(&odd, "1,2,3\n4,5,6\n7,8,9\n").unwrap();
    let not_unitary = dir.path().join("nu.csv");
    fs::write(&not_unitary, "1,1\n0,1\n").unwrap();

    let cases: Vec<Vec<&str>> = vec![
        vec!["encode", missing.to_str().unwrap()],
        vec!["encode", ragged.to_str().unwrap()],
        vec!["heat", "--config", config.to_str().unwrap()],
        vec!["heat", "--size", "12"],
        vec!["qft", odd.to_str().unwrap()],
        vec!["compile", not_unitary.to_str().unwrap()],
        vec!["report", "--size", "10"],
        vec!["encode", "--lambda", "-1"],
    ];
    for args in cases {
        let o = cvqfl(&args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn tolerance_failures_exit_one() {
    let dir = TempDir::new().unwrap();
    let o = cvqfl(&["compile", "--size", "6", "--tol", "0"], dir.path());
    // a random unitary does not reconstruct bit-exactly
    assert_eq!(o.status.code(), Some(1));
    let o = cvqfl(&["encode", "--tol", "0"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}
