use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use multipool::cli::curve::CurveTable;

fn multipool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multipool"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn design_then_validate() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["json", "csv"] {
        let path = dir.path().join(format!("d.{format}"));
        let o = multipool(&[
            "design",
            "--q",
            "7",
            "--m",
            "8",
            "--format",
            format,
            "--output",
            s(&path),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        assert!(stdout(&o).contains("n = 49, t = 56, compression ratio n/t = 0.875"));
        let args = if format == "json" {
            vec!["validate", s(&path)]
        } else {
            vec!["validate", s(&path), "--q", "7", "--m", "8"]
        };
        let o = multipool(&args);
        assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains("multipool: yes"));
    }
}

#[test]
fn design_small_and_out_of_bound() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    let o = multipool(&["design", "--q", "2", "--m", "2", "--output", s(&path)]);
    assert!(stdout(&o).contains("n = 4, t = 4"));
    let o = multipool(&["design", "--q", "2", "--m", "2"]);
    assert!(
        stdout(&o).contains("[0,2],\n    [1,3],\n    [0,3],\n    [1,2]"),
        "{}",
        stdout(&o)
    );

    let o = multipool(&["design", "--q", "7", "--m", "9"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("multiplicity exceeds q+1"));
    assert_eq!(stderr(&o).lines().count(), 1);
}

#[test]
fn validate_fano_fixtures() {
    for name in ["fano.json", "fano.csv"] {
        let path = fixture(name);
        let o = multipool(&["validate", s(&path), "--q", "3", "--m", "3"]);
        assert_eq!(code(&o), 0, "{name}: {}{}", stdout(&o), stderr(&o));
    }
    // The JSON fixture records q and m itself.
    assert_eq!(code(&multipool(&["validate", s(&fixture("fano.json"))])), 0);
}

#[test]
fn validate_corrupted_files() {
    let dir = tempfile::tempdir().unwrap();
    let fano = std::fs::read_to_string(fixture("fano.csv")).unwrap();

    let missing_row: String = fano.lines().skip(1).map(|l| format!("{l}\n")).collect();
    let path = dir.path().join("short.csv");
    std::fs::write(&path, missing_row).unwrap();
    let o = multipool(&["validate", s(&path), "--q", "3", "--m", "3"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("column sum"), "{}", stdout(&o));

    let bad = fano.replacen("1,0,0,1,1,0,0", "1,0,0,1,2,0,0", 1);
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, bad).unwrap();
    let o = multipool(&["validate", s(&path), "--q", "3", "--m", "3"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2, column 5"), "{}", stderr(&o));

    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"format_version\": 1,\n  \"q\": oops\n}\n").unwrap();
    let o = multipool(&["validate", s(&path)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

fn curve(args: &[&str]) -> CurveTable {
    let mut full = vec!["analyze"];
    full.extend_from_slice(args);
    let o = multipool(&full);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    CurveTable::from_csv(&stdout(&o)).unwrap()
}

fn column(t: &CurveTable, name: &str) -> Vec<f64> {
    t.column(name).unwrap().into_iter().map(Option::unwrap).collect()
}

#[test]
fn sensitivity_curves_fall_with_multiplicity() {
    let mut previous: Option<Vec<f64>> = None;
    for m in 2..=10 {
        let t = curve(&[
            "--statistic",
            "sens",
            "--sweep",
            "rho",
            "--grid",
            "0:0.2:0.005",
            "--q",
            "16",
            "--m",
            &m.to_string(),
            "--pfp",
            "0.02",
            "--pfn",
            "0.02",
        ]);
        let sens = column(&t, "sens");
        assert_eq!(sens.len(), 41);
        if let Some(prev) = &previous {
            assert!(sens.iter().zip(prev).all(|(now, before)| now <= before), "m={m}");
        }
        previous = Some(sens);
    }
}

#[test]
fn tolerating_one_negative_cuts_false_negatives() {
    let at = |nc: &str| {
        column(
            &curve(&[
                "--statistic",
                "e_Tfn",
                "--sweep",
                "rho",
                "--grid",
                "0:0.2:0.01",
                "--q",
                "16",
                "--m",
                "8",
                "--nc",
                nc,
                "--n",
                "256",
                "--pfp",
                "0.02",
                "--pfn",
                "0.02",
            ]),
            "e_Tfn",
        )
    };
    let (comp, ncomp) = (at("0"), at("1"));
    assert!(ncomp.iter().zip(&comp).all(|(a, b)| a <= b));
}

#[test]
fn analyze_output_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let o = multipool(&[
        "analyze",
        "--statistic",
        "typeI",
        "--sweep",
        "m",
        "--values",
        "1,2,3,4,5,6",
        "--rho",
        "0.03",
        "--q",
        "16",
        "--pfp",
        "0.01",
        "--pfn",
        "0.05",
        "--output",
        s(&path),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("m,typeI,rho,q,nc,pfp,pfn,n\n"));
    assert!(!text.contains('\r'));
    assert_eq!(CurveTable::from_csv(&text).unwrap().to_csv(), text);

    let single = curve(&[
        "--statistic",
        "spec",
        "--sweep",
        "nc",
        "--values",
        "1",
        "--pfp",
        "0.02",
    ]);
    assert_eq!(single.rows.len(), 1);
}

#[test]
fn analyze_variance_bound_only_without_noise() {
    let args = [
        "analyze",
        "--statistic",
        "var_Tfp_bound",
        "--sweep",
        "rho",
        "--grid",
        "0:0.1:0.01",
    ];
    assert_eq!(code(&multipool(&args)), 0);
    let mut noisy = args.to_vec();
    noisy.extend(["--pfn", "0.01"]);
    let o = multipool(&noisy);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("not applicable"));
    assert_eq!(
        code(&multipool(&["analyze", "--statistic", "sens", "--sweep", "rho"])),
        2
    );
}

#[test]
fn simulate_noiseless_has_no_false_negatives() {
    let o = multipool(&[
        "simulate", "--q", "8", "--m", "3", "--rho", "0.05", "--trials", "20000", "--seed", "5",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["empirical"]["max_false_negatives"], 0);
    assert_eq!(report["empirical"]["mean_tfn"]["value"], 0.0);
    assert_eq!(report["all_pass"], true);
}

#[test]
fn simulate_default_cell() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = multipool(&[
        "simulate",
        "--q",
        "16",
        "--m",
        "6",
        "--rho",
        "0.05",
        "--pfp",
        "0.02",
        "--pfn",
        "0.02",
        "--n",
        "256",
        "--trials",
        "100000",
        "--seed",
        "2024",
        "--output",
        s(&path),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("all pass: true"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[7]["kind"], "not_applicable");
}

#[test]
fn simulate_invalid_input() {
    let base = [
        "simulate", "--q", "16", "--m", "6", "--rho", "0.05", "--seed", "1",
    ];
    let run = |extra: &[&str]| {
        let mut args = base.to_vec();
        args.extend_from_slice(extra);
        code(&multipool(&args))
    };
    assert_eq!(run(&["--trials", "0"]), 2);
    assert_eq!(run(&["--trials", "10", "--pfp", "1.5"]), 2);
    assert_eq!(run(&["--trials", "10", "--n", "100"]), 2);
    assert_eq!(run(&["--trials", "10", "--nc", "7"]), 2);
}

#[test]
fn tune_examples() {
    let o = multipool(&["tune", "--rho", "0.01", "--q", "10", "--epsilon", "0.01"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("m = 4\n"), "{out}");
    assert!(out.contains("raw bound = 3.7"), "{out}");
    assert!(out.contains("compression ratio q/m = 2.5"), "{out}");

    let o = multipool(&["tune", "--rho", "0.0001", "--q", "16", "--epsilon", "0.99"]);
    assert!(stdout(&o).contains("m = 1\n"));

    let o = multipool(&["tune", "--rho", "0.2", "--q", "32", "--epsilon", "1e-9"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("raw bound"));
}

#[test]
fn help_exits_cleanly() {
    let o = multipool(&["--help"]);
    assert_eq!(code(&o), 0);
    for sub in ["design", "validate", "analyze", "simulate", "tune"] {
        assert!(stdout(&o).contains(sub));
    }
}
