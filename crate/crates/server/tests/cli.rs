//! The command-line front end, driven through `cli_main`.

use evotrace::store::load_run;
use evotrace_server::cli_main;

fn cli(args: &[&str]) -> i32 {
    cli_main(std::iter::once("evotrace").chain(args.iter().copied()))
}

#[test]
fn run_validate_measures_project() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r");
    let out_s = out.to_str().unwrap();
    let code = cli(&["run", "--problem", "dtlz3", "--algorithm", "nsga2", "--pop", "16", "--generations", "12", "--seed", "42", "--n", "10", "--out", out_s]);
    assert_eq!(code, 0);
    let log = load_run(&out).unwrap();
    assert_eq!(log.problem.n, 10);
    assert_eq!(log.config.seed, 42);

    assert_eq!(cli(&["validate", out_s]), 0);

    let csv_path = dir.path().join("q.csv");
    assert_eq!(cli(&["measures", out_s, "--csv", csv_path.to_str().unwrap()]), 0);
    let text = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("generation,igd,hv,sp,ms"));
    assert_eq!(lines.count(), 12);

    let again = dir.path().join("r.csv");
    assert_eq!(cli(&["measures", out_s, "--recompute", "--csv", again.to_str().unwrap()]), 0);
    assert_eq!(std::fs::read_to_string(&again).unwrap(), text);

    assert_eq!(cli(&["project", out_s, "--from", "2", "--to", "4", "--perplexity", "5", "--iterations", "100"]), 0);
    assert_eq!(std::fs::read_dir(out.join("projections")).unwrap().count(), 1);
    assert_eq!(cli(&["project", out_s, "--from", "1", "--to", "20"]), 1);
}

#[test]
fn sms_emoa_with_options() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s");
    let code = cli(&[
        "run", "--problem", "zdt1", "--algorithm", "sms-emoa", "--pop", "10", "--generations", "5", "--lambda", "3",
        "--mutation-prob", "1.0", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let log = load_run(&out).unwrap();
    assert_eq!(log.config.operators.lambda, 3);
    assert!(log.generations.iter().all(|g| g.mutation_events.len() == 6));
}

#[test]
fn validate_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v");
    assert_eq!(cli(&["run", "--problem", "dtlz2", "--pop", "8", "--generations", "3", "--out", out.to_str().unwrap()]), 0);
    let path = out.join("individuals.jsonl");
    let text = std::fs::read_to_string(&path).unwrap();
    let tampered = text.replacen("\"death_generation\":null", "\"death_generation\":1", 1);
    assert_ne!(tampered, text);
    std::fs::write(&path, tampered).unwrap();
    assert_eq!(cli(&["validate", out.to_str().unwrap()]), 1);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&["run", "--problem", "dtlz9", "--out", "x"]), 2);
    assert_eq!(cli(&["run", "--pop", "ten"]), 2);
    assert_eq!(cli(&["frobnicate"]), 2);
    assert_eq!(cli(&[]), 2);
}

#[test]
fn runtime_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cli(&["validate", dir.path().join("missing").to_str().unwrap()]), 1);
    assert_eq!(cli(&["run", "--problem", "dtlz2", "--pop", "1", "--out", dir.path().join("x").to_str().unwrap()]), 1);
}
