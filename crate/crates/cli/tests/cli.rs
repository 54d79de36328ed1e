//! End-to-end checks of the sunsieve binary plus the independent
//! brute-force witness audit. The naive scanner here shares no code with
//! the library: primality and factor counting are plain trial division.

use std::process::{Command, Output};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use sunsieve_cli::report::{audit_file, read_report, Format};
use sunsieve_cli::scan::compute_row;
use sunsieve_cli::witness::WitnessKind;

fn sunsieve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sunsieve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn naive_is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn naive_omega(mut m: u64) -> u32 {
    let mut count = 0;
    let mut d = 2u64;
    while d * d <= m {
        while m % d == 0 {
            m /= d;
            count += 1;
        }
        d += 1;
    }
    if m > 1 {
        count += 1;
    }
    count
}

fn naive_values(n: u64, y: u64) -> (u64, u64) {
    let x = n - y;
    (x + n * y, x * x + n * y * y)
}

fn naive_smallest(task: WitnessKind, n: u64) -> Option<u64> {
    (1..n).find(|&y| {
        let (v1, v2) = naive_values(n, y);
        match task {
            WitnessKind::SunPrime => naive_is_prime(v1) && naive_is_prime(v2),
            WitnessKind::Almost3 => naive_omega(v1) <= 3,
            WitnessKind::Almost4 => naive_omega(v2) <= 4,
            WitnessKind::Combined11 => naive_omega(v1) + naive_omega(v2) <= 11,
        }
    })
}

#[test]
fn smallest_witness_matches_independent_scan() {
    let mut rng = StdRng::seed_from_u64(0xC0FFEE);
    for _ in 0..200 {
        let n = rng.gen_range(2..=2000);
        let row = compute_row(WitnessKind::SunPrime, n);
        assert_eq!(row.y, naive_smallest(WitnessKind::SunPrime, n), "n={n}");
    }
    for task in [
        WitnessKind::Almost3,
        WitnessKind::Almost4,
        WitnessKind::Combined11,
    ] {
        for _ in 0..100 {
            let n = rng.gen_range(2..=2000);
            let row = compute_row(task, n);
            assert_eq!(row.y, naive_smallest(task, n), "task={task} n={n}");
        }
    }
}

#[test]
fn verify_stdout_row_is_bit_exact() {
    let out = sunsieve(&["verify", "--task", "sun-prime", "--from", "10", "--to", "11"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "n,kind,y,x,value1,omega1,value2,omega2\n10,sun-prime,3,7,37,1,139,1\n"
    );
}

#[test]
fn verify_file_run_audits_clean() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = sunsieve(&[
        "verify",
        "--task",
        "sun-prime",
        "--from",
        "2",
        "--to",
        "102",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["scanned"], 100);
    assert_eq!(summary["witnesses"], 100);
    assert_eq!(summary["failures"].as_array().unwrap().len(), 0);
    assert_eq!(summary["partial"], false);
    let audit = audit_file(&path, Format::Csv).unwrap();
    assert_eq!(audit.rows, 100);
    assert!(audit.mismatches.is_empty());
}

#[test]
fn verify_json_format_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let out = sunsieve(&[
        "verify",
        "--task",
        "almost-4",
        "--from",
        "2",
        "--to",
        "52",
        "--out",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let rows = read_report(&path, Format::Json).unwrap();
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| r.kind == WitnessKind::Almost4));
    let audit = audit_file(&path, Format::Json).unwrap();
    assert!(audit.mismatches.is_empty());
}

#[test]
fn checkpoint_mismatch_is_an_operational_error() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("scan.csv");
    let ck_path = dir.path().join("scan.ck");
    let partial = sunsieve(&[
        "verify",
        "--task",
        "sun-prime",
        "--from",
        "2",
        "--to",
        "3000",
        "--out",
        out_path.to_str().unwrap(),
        "--checkpoint",
        ck_path.to_str().unwrap(),
        "--max-blocks",
        "1",
    ]);
    assert!(partial.status.success());
    assert!(ck_path.exists());

    let clash = sunsieve(&[
        "verify",
        "--task",
        "almost-3",
        "--from",
        "2",
        "--to",
        "3000",
        "--out",
        out_path.to_str().unwrap(),
        "--checkpoint",
        ck_path.to_str().unwrap(),
    ]);
    assert_eq!(clash.status.code(), Some(1));
    let err = String::from_utf8(clash.stderr).unwrap();
    assert!(err.contains("different scan"), "{err}");
}

#[test]
fn operational_errors_exit_1() {
    let no_out = sunsieve(&[
        "verify", "--task", "sun-prime", "--from", "2", "--to", "50", "--checkpoint", "x.ck",
    ]);
    assert_eq!(no_out.status.code(), Some(1));

    let bad_range = sunsieve(&["verify", "--task", "sun-prime", "--from", "1", "--to", "50"]);
    assert_eq!(bad_range.status.code(), Some(1));

    let usage = sunsieve(&["verify", "--task", "sun-prime", "--no-such-flag"]);
    assert_eq!(usage.status.code(), Some(1));

    let help = sunsieve(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn density_subcommand_reports_profile() {
    let out = sunsieve(&["density", "--n", "10", "--variant", "2", "--z", "12"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["n"], 10);
    assert_eq!(doc["variant"], 2);
    let rho: Vec<(u64, u64)> = serde_json::from_value(doc["rho"].clone()).unwrap();
    assert_eq!(rho.iter().map(|&(p, _)| p).collect::<Vec<_>>(), [2, 3, 5, 7, 11]);
    assert!(doc["g_z"].as_f64().unwrap() > 0.0);
}

#[test]
fn weights_subcommand_reports_constants() {
    let out = sunsieve(&["weights", "--r", "3", "--delta", "0.5", "--degree", "1"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((doc["big_lambda"].as_f64().unwrap() - 2.7712437491614224).abs() < 1e-12);
    assert_eq!(doc["admissible"], true);
    assert!(doc["main_term_constant"].as_f64().unwrap() > 0.0);

    let bad = sunsieve(&["weights", "--r", "1", "--delta", "0.5", "--degree", "1"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn eval_emits_twelve_digit_csv() {
    let out = sunsieve(&[
        "sieve-functions", "eval", "--u-min", "2", "--u-max", "4.5", "--step", "0.5",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "u,F,f,D,integral");
    assert_eq!(lines.len(), 7);
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 5);
        let u: f64 = cells[0].parse().unwrap();
        let upper: f64 = cells[1].parse().unwrap();
        let lower: f64 = cells[2].parse().unwrap();
        assert!(upper >= lower);
        if u > 4.0 {
            assert!(cells[3].is_empty() && cells[4].is_empty());
        } else {
            let d: f64 = cells[3].parse().unwrap();
            assert!(d >= 0.0);
        }
        // 12 significant digits: mantissa dot + 11 decimals
        assert_eq!(cells[1].split('e').next().unwrap().len(), 13);
    }
}
