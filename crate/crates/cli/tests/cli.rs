use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::Rng;
use tropihar::diagnostics::{chi_square_two_sample, Grid2D};
use tropihar::oracle::rejection_uniform;
use tropihar_core::samplers::random_stream;
use tropihar_core::{sample_segment, TropicalPolytope};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tropihar"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn tropihar")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

const SECTION4: &str = r#"{"vertices": [[0,0,0,0],[0,1,3,1],[0,1,2,5],[0,2,5,10]]}"#;

fn sample_config(dir: &Path, kernel: &str, extra: &str) -> PathBuf {
    write(dir, "p.json", SECTION4);
    write(
        dir,
        "run.json",
        &format!(
            r#"{{"kernel": "{kernel}", "polytope": "p.json", "iterations": 5, "burn_in": 10,
                "n_samples": 300, "seed": 4 {extra}}}"#
        ),
    )
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sample_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sample_config(dir.path(), "vertex-ext", "");
    let out = dir.path().join("a.csv");
    let o = run(&["sample", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x_1,x_2,x_3,x_4"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 300);
    assert!(rows.iter().all(|r| r.split(',').count() == 4));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a.csv.report.json")).unwrap())
            .unwrap();
    assert_eq!(report["sample_count"], 300);
    assert_eq!(report["kernel"], "vertex-ext");
    assert_eq!(report["inner_steps"], 310 * 5);
}

#[test]
fn same_seed_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sample_config(dir.path(), "extrapolation-subset", r#", "chains": 3"#);
    let (a, b, c) = (
        dir.path().join("a.csv"),
        dir.path().join("b.csv"),
        dir.path().join("c.csv"),
    );
    for (out, seed) in [(&a, "9"), (&b, "9"), (&c, "10")] {
        assert_eq!(
            code(&run(&[
                "sample",
                "--config",
                s(&cfg),
                "--seed",
                seed,
                "--out",
                s(out)
            ])),
            0
        );
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn jsonl_and_stdout_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sample_config(dir.path(), "vertexnu", r#", "nu": 3"#);
    let o = run(&["sample", "--config", s(&cfg), "--format", "jsonl"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 300);
    assert!(rows.iter().all(|r| r.len() == 4 && r[0] == 0.0));
}

#[test]
fn kernel_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sample_config(dir.path(), "vertex2", "");
    let out = dir.path().join("a.csv");
    assert_eq!(
        code(&run(&[
            "sample",
            "--config",
            s(&cfg),
            "--kernel",
            "extrapolation",
            "--out",
            s(&out)
        ])),
        0
    );
    let report = fs::read_to_string(dir.path().join("a.csv.report.json")).unwrap();
    assert!(report.contains("\"extrapolation\""));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sample_config(dir.path(), "vertex2", "");
    assert_eq!(
        code(&run(&["sample", "--config", s(&cfg), "--kernel", "nope"])),
        2
    );
    assert_eq!(
        code(&run(&[
            "sample",
            "--config",
            s(&dir.path().join("missing.json"))
        ])),
        2
    );
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"kernel": "vertex2", "polytope": "p.json", "n_samples": 3, "typo": 1}"#,
    );
    assert_eq!(code(&run(&["sample", "--config", s(&bad)])), 2);
    let not_json = write(dir.path(), "x.json", "kernel = vertex2");
    assert_eq!(code(&run(&["sample", "--config", s(&not_json)])), 2);
    let outside = write(
        dir.path(),
        "out.json",
        r#"{"kernel": "vertex2", "polytope": "p.json", "n_samples": 3, "x0": [0, 9, -9, 0]}"#,
    );
    assert_eq!(code(&run(&["sample", "--config", s(&outside)])), 2);
    let mh = write(
        dir.path(),
        "mh.json",
        r#"{"kernel": "vertex-ext", "polytope": "p.json", "n_samples": 3,
            "target": {"mu": [0, 1, 3, 4], "sigma": 1}}"#,
    );
    assert_eq!(code(&run(&["sample", "--config", s(&mh)])), 2);
}

#[test]
fn mixing_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "thin.json", "[[0,0,0],[0,10,10.5],[0,10.5,10]]");
    let cfg = write(
        dir.path(),
        "run.json",
        r#"{"kernel": "vertex-ext", "polytope": "thin.json", "iterations": 100, "n_samples": 100,
            "max_rejects": 1, "extension_scale": 10}"#,
    );
    let o = run(&["sample", "--config", s(&cfg)]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn trees_histogram_has_fifteen_topologies() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "trees.json",
        r#"{"m": 4, "x0": [0.1, 1, 0.67, 1, 0.67, 1], "iterations": 30, "n_samples": 10000,
            "seed": 5, "newick": true, "out": "t.csv"}"#,
    );
    let o = run(&["sample-trees", "--config", s(&cfg)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert_eq!(
        csv.lines().next(),
        Some("d_1_2,d_1_3,d_1_4,d_2_3,d_2_4,d_3_4")
    );
    assert_eq!(csv.lines().count(), 10_001);
    let hist: serde_json::Map<String, serde_json::Value> = serde_json::from_str(
        &fs::read_to_string(dir.path().join("t.csv.topologies.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(hist.len(), 15);
    assert_eq!(
        hist.values().map(|v| v.as_u64().unwrap()).sum::<u64>(),
        10_000
    );
    let nwk = fs::read_to_string(dir.path().join("t.csv.nwk")).unwrap();
    assert_eq!(nwk.lines().count(), 10_000);
    assert!(nwk.lines().all(|l| l.starts_with('(') && l.ends_with(");")));

    let o = run(&[
        "diagnose",
        "--samples",
        s(&dir.path().join("t.csv")),
        "--mode",
        "topology",
    ]);
    assert_eq!(code(&o), 0);
    let again: serde_json::Map<String, serde_json::Value> =
        serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(again, hist);
}

#[test]
fn diagnose_uniformity_reports_p_values() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "tri.csv", "0,0,0\n0,3,1\n0,2,5\n");
    let samples = dir.path().join("o.csv");
    let o = run(&[
        "oracle",
        "--polytope",
        s(&p),
        "--n",
        "4000",
        "--seed",
        "1",
        "--out",
        s(&samples),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&[
        "diagnose",
        "--samples",
        s(&samples),
        "--mode",
        "uniformity",
        "--polytope",
        s(&p),
        "--seed",
        "2",
        "--bins",
        "10",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["reference_count"], 4000);
    let pv = report["chi_square"][0]["p_value"].as_f64().unwrap();
    assert!(pv > 0.0 && pv <= 1.0);
}

#[test]
fn diagnose_segment_runs_ks() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "seg.json", "[[0,0,0],[0,3,1]]");
    let cfg = write(
        dir.path(),
        "run.json",
        r#"{"kernel": "extrapolation", "polytope": "seg.json", "n_samples": 2000, "seed": 1, "out": "s.csv"}"#,
    );
    assert_eq!(code(&run(&["sample", "--config", s(&cfg)])), 0);
    let o = run(&[
        "diagnose",
        "--samples",
        s(&dir.path().join("s.csv")),
        "--mode",
        "segment",
        "--config",
        s(&cfg),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["ks"]["n"], 2000);
    assert!(report["ks"]["p_value"].as_f64().unwrap() >= 0.001);
}

#[test]
fn diagnose_usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("none.csv");
    assert_eq!(
        code(&run(&[
            "diagnose",
            "--samples",
            s(&missing),
            "--mode",
            "topology"
        ])),
        2
    );
    let pts = write(dir.path(), "pts.csv", "x_1,x_2,x_3\n0,1,2\n");
    assert_eq!(
        code(&run(&[
            "diagnose",
            "--samples",
            s(&pts),
            "--mode",
            "uniformity"
        ])),
        2
    );
    // Not ultrametric: the two largest of d12, d13, d23 differ.
    let bad = write(dir.path(), "u.csv", "d_1_2,d_1_3,d_2_3\n1,2,3\n");
    assert_eq!(
        code(&run(&[
            "diagnose",
            "--samples",
            s(&bad),
            "--mode",
            "topology"
        ])),
        2
    );
}

#[test]
fn oracle_on_a_segment_is_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "seg.json", "[[0,0,0],[0,3,1]]");
    let o = run(&["oracle", "--polytope", s(&p), "--n", "10"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

fn hexagon() -> TropicalPolytope {
    TropicalPolytope::from_rows(&[[0.0, 0.0, 0.0], [0.0, 3.0, 1.0], [0.0, 2.0, 5.0]]).unwrap()
}

fn grid() -> Grid2D {
    Grid2D {
        x: (0.0, 3.0),
        y: (0.0, 5.0),
        bins: 20,
    }
}

fn pairs(pts: &[tropihar_core::TropicalPoint]) -> Vec<(f64, f64)> {
    pts.iter().map(|x| (x[1], x[2])).collect()
}

#[test]
fn oracle_split_halves_are_calibrated() {
    let p = hexagon();
    let reps = 100;
    let mut ok = 0;
    for rep in 0..reps {
        let pts = rejection_uniform(&p, 4000, 1000 + rep, 1e-9)
            .unwrap()
            .samples;
        let (a, b) = pts.split_at(2000);
        if chi_square_two_sample(&pairs(a), &pairs(b), &grid())
            .unwrap()
            .p_value
            >= 0.001
        {
            ok += 1;
        }
    }
    assert!(ok >= 99, "{ok}/{reps} calibration runs passed");
}

#[test]
fn edge_biased_sampler_is_detected() {
    let p = hexagon();
    let n = 20_000;
    let oracle = rejection_uniform(&p, n, 17, 1e-9).unwrap().samples;
    let uniform = rejection_uniform(&p, n, 18, 1e-9).unwrap().samples;
    // A third of the points replaced by points on tropical edges between vertices.
    let mut rng = random_stream(19, 0);
    let biased: Vec<_> = uniform
        .into_iter()
        .map(|x| {
            if rng.random::<f64>() < 1.0 / 3.0 {
                let i = rng.random_range(0..3);
                let j = (i + rng.random_range(1..3)) % 3;
                sample_segment(p.vertex(i), p.vertex(j), &mut rng).unwrap()
            } else {
                x
            }
        })
        .collect();
    let test = chi_square_two_sample(&pairs(&oracle), &pairs(&biased), &grid()).unwrap();
    assert!(test.p_value < 1e-6, "p = {}", test.p_value);
}
