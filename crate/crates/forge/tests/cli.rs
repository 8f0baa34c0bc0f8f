use std::fs;
use std::process::{Command, Output};

use forge::catalog::{find_builtin, load_dir};
use forge::lab::Settings;
use forge::suites::{run_suite, tower_demo, Suite};

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn settings() -> Settings {
    Settings {
        timing: false,
        ..Settings::default()
    }
}

#[test]
fn catalog_list_names_every_entry() {
    let out = forge(&["catalog", "list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "C2", "C3", "C4", "C8", "C9", "C2xC2", "C2xC4", "D8", "Q8", "C3xC3", "Heis27", "Mod27",
    ] {
        assert!(
            text.lines()
                .any(|l| l.split_whitespace().next() == Some(name)),
            "{name}"
        );
    }
}

#[test]
fn single_commands_emit_schema_one() {
    for cmd in ["xp", "nu", "schur", "imrho", "fibre"] {
        let out = forge(&[cmd, "catalog:D8", "--no-timing"]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{cmd}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["entries"][0]["name"], "D8");
        assert_eq!(v["entries"][0]["status"], "pass");
    }
}

#[test]
fn schur_report_has_all_routes() {
    let out = forge(&["schur", "catalog:Q8", "--no-timing"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let h2 = &v["entries"][0]["h2"];
    for route in ["w_over_r", "ker_mu", "bar"] {
        assert_eq!(h2[route], serde_json::json!([]), "{route}");
    }
    assert_eq!(h2["expected_basis"], "oracle");
}

#[test]
fn presentation_file_and_csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let pres = dir.path().join("v4.pres");
    fs::write(&pres, "group V4\ngens a, b\nrels a^2, b^2, [a,b]\n").unwrap();
    let csv = dir.path().join("out.csv");
    let out = forge(&[
        "xp",
        pres.to_str().unwrap(),
        "--format",
        "csv",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let mut rows = text.lines();
    assert!(rows.next().unwrap().starts_with("name,p,order,status,xp"));
    assert!(rows.next().unwrap().starts_with("V4,2,4,pass,32,"));
}

#[test]
fn exit_codes() {
    // unknown entry and unreadable file: usage errors
    assert_eq!(forge(&["xp", "catalog:nope"]).status.code(), Some(2));
    assert_eq!(forge(&["xp", "/nonexistent.pres"]).status.code(), Some(2));
    assert_eq!(forge(&["verify", "--suite", "nope"]).status.code(), Some(2));
    // coset limit exceeded
    let out = forge(&["nu", "catalog:C3xC3", "--max-cosets", "50"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["entries"][0]["status"], "error");
    assert!(v["entries"][0]["error"]
        .as_str()
        .unwrap()
        .starts_with("C3xC3:"));
    // P not a p-group
    let dir = tempfile::tempdir().unwrap();
    let s3 = dir.path().join("s3.pres");
    fs::write(&s3, "gens a, b; rels a^3, b^2, (a*b)^2").unwrap();
    assert_eq!(forge(&["xp", s3.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn failing_check_exits_one() {
    let mut entry = find_builtin("C4").unwrap();
    entry.p = Some(3);
    let report = run_suite(Suite::DlCommute, &[entry], &settings());
    assert_eq!(report.exit_code(), 1);
    assert_eq!(report.entries[0].failed_checks(), vec!["catalog_prime"]);
}

#[test]
fn verify_directory_catalog() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("b.pres"), "group C4\ngens a\nrels a^4\n").unwrap();
    fs::write(dir.path().join("a.pres"), "gens a, b; rels a^2, b^2, [a,b]").unwrap();
    fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let entries = load_dir(dir.path()).unwrap();
    let names: Vec<&str> = entries.iter().map(|e| e.name.as_str()).collect();
    assert_eq!(names, ["a", "C4"]);
    let out = forge(&[
        "verify",
        "--suite",
        "rtrivial",
        "--catalog",
        dir.path().to_str().unwrap(),
        "--no-timing",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["C4", "a"]);
}

#[test]
fn suites_are_deterministic() {
    let entries: Vec<_> = ["C2xC2", "D8", "Q8", "C9"]
        .iter()
        .map(|n| find_builtin(n).unwrap())
        .collect();
    let a = run_suite(Suite::All, &entries, &settings()).to_json();
    let b = run_suite(Suite::All, &entries, &settings()).to_json();
    assert_eq!(a, b);
    assert!(!a.contains("elapsed_ms"));
    let out1 = forge(&["verify", "--suite", "imrho", "--no-timing"]);
    let out2 = forge(&["verify", "--suite", "imrho", "--no-timing"]);
    assert_eq!(out1.stdout, out2.stdout);
    assert_eq!(out1.status.code(), Some(0));
}

#[test]
fn suite_names_round_trip() {
    for s in Suite::EVERY {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert!("schurr".parse::<Suite>().is_err());
}

#[test]
fn suite_examples() {
    let pick = |names: &[&str]| {
        names
            .iter()
            .map(|n| find_builtin(n).unwrap())
            .collect::<Vec<_>>()
    };
    let r = run_suite(Suite::Schur, &pick(&["C2"]), &settings());
    assert_eq!(r.exit_code(), 0);
    let h2 = &r.entries[0].h2;
    assert_eq!(h2.w_over_r, Some(vec![]));
    assert_eq!(h2.ker_mu, Some(vec![]));
    assert_eq!(h2.bar, Some(vec![]));
    let r = run_suite(Suite::Rtrivial, &pick(&["D8", "Q8", "C4"]), &settings());
    assert_eq!(r.exit_code(), 0);
    assert!(r
        .entries
        .iter()
        .all(|e| e.orders.r == Some(1) && e.find("r_trivial").unwrap().passed));
    let t = tower_demo(2, 3, &settings());
    assert_eq!(t.exit_code(), 0);
    assert!(t.entries[0]
        .checks
        .iter()
        .any(|c| c.name == "xp_surjective_C8_C4"));
    let t = tower_demo(3, 2, &settings());
    assert!(t.entries[0].find("nu_surjective_C9_C3").unwrap().passed);
    let t = tower_demo(5, 1, &settings());
    assert_eq!(t.exit_code(), 0);
}
