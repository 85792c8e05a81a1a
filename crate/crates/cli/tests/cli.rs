use std::path::Path;
use std::process::{Command, Output};

use tfcore::io::{read_if_track, read_matrix, read_signal};

fn tf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tf")).args(args).output().expect("tf runs")
}

fn ok(args: &[&str]) -> Output {
    let out = tf(args);
    assert!(out.status.success(), "tf {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for stem in [&a, &b] {
        ok(&["gen", "bandlimited", "--n", "256", "--dt", "0.0625", "--band", "-2", "2", "--seed", "7", "--out", s(stem)]);
    }
    for ext in ["csv", "json"] {
        let x = std::fs::read(a.with_extension(ext)).unwrap();
        let y = std::fs::read(b.with_extension(ext)).unwrap();
        assert_eq!(x, y, "{ext} differs");
    }
}

#[test]
fn tone_wigner_peaks_in_the_same_column_on_every_row() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("tone");
    let w = dir.path().join("w");
    ok(&["gen", "tone", "--n", "256", "--dt", "0.0625", "--xi0", "1", "--out", s(&sig)]);
    ok(&["wigner", "--input", s(&sig), "--boundary", "periodized", "--out", s(&w)]);
    let m = read_matrix(&w).unwrap();
    assert_eq!((m.rows(), m.cols()), (256, 512));
    let argmax = |k: usize| {
        let row = m.real_row(k).unwrap();
        (0..row.len()).max_by(|&i, &j| row[i].total_cmp(&row[j])).unwrap()
    };
    let j0 = argmax(0);
    assert!((m.freq_axis()[j0] - 1.0).abs() < 1e-12);
    assert!((0..m.rows()).all(|k| argmax(k) == j0));
}

#[test]
fn stft_magnitude_follows_the_chirp_ridge() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("chirp");
    let v = dir.path().join("v");
    ok(&["gen", "chirp", "--n", "512", "--dt", "0.03125", "--rate", "0.5", "--out", s(&sig)]);
    ok(&["stft", "--input", s(&sig), "--window-a", "1", "--oversample", "2", "--out", s(&v)]);
    let m = read_matrix(&v).unwrap();
    let df = m.freq_step();
    let mut checked = 0;
    for k in 0..m.rows() {
        let t = m.time_axis()[k];
        if t.abs() > 5.0 {
            continue;
        }
        let row = m.complex_row(k).unwrap();
        let j = (0..row.len()).max_by(|&a, &b| row[a].norm().total_cmp(&row[b].norm())).unwrap();
        assert!((m.freq_axis()[j] - 0.5 * t).abs() <= df, "t = {t}");
        checked += 1;
    }
    assert!(checked > 300);
}

#[test]
fn zero_signal_if_succeeds_with_nothing_compared() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("zero");
    let out = dir.path().join("if");
    let g = tfcore::Grid::centered(0.125, 64).unwrap();
    let z = tfcore::Signal::new(g, vec![tfcore::Complex64::new(0.0, 0.0); 64]).unwrap();
    tfcore::io::write_signal(&sig, &z).unwrap();
    let res = ok(&["if", "--input", s(&sig), "--out", s(&out)]);
    assert!(String::from_utf8_lossy(&res.stderr).contains("warning"));
    let summary: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("if.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["n_compared"], 0);
    assert_eq!(read_if_track(&dir.path().join("if.phase")).unwrap().n_valid(), 0);
}

#[test]
fn missing_input_fails_without_leaving_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w");
    let res = tf(&["wigner", "--input", s(&dir.path().join("absent")), "--out", s(&out)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&res.stderr).is_empty());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn same_input_and_output_stem_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("x");
    ok(&["gen", "random", "--n", "32", "--dt", "0.1", "--out", s(&sig)]);
    let res = tf(&["if", "--input", s(&sig), "--out", s(&sig)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(read_signal(&sig).is_ok());
}

#[test]
fn verify_subset_runs_only_the_selected_identities() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("report");
    let res = ok(&["verify", "--only", "marginals,energy", "--out", s(&stem)]);
    let table = String::from_utf8_lossy(&res.stdout);
    assert!(table.contains("marginals") && table.contains("energy"));
    assert!(!table.contains("cone_slope"));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(stem.with_extension("json")).unwrap()).unwrap();
    let names: Vec<&str> = report["records"].as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["marginals", "energy"]);
    assert_eq!(report["all_pass"], true);
}

#[test]
fn verify_fails_under_perturbation() {
    let res = tf(&["verify", "--only", "marginals", "--perturb", "1e-3"]);
    assert_eq!(res.status.code(), Some(1));
}
