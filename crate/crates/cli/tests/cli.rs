//! End-to-end runs of the `twobridge` binary.

use std::io::Write;
use std::process::{Command, Output};

use twobridge_core::word::enumerate_words;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twobridge")).args(args).output().expect("binary runs")
}

fn run_with_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twobridge"))
        .args(args)
        .env("TWOBRIDGE_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn simplify_prints_signature() {
    let o = run(&["simplify", "R^2LR", "--isosig"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "fLLQcbcdeeetsfxxh\n");
}

#[test]
fn build_prints_signature() {
    let o = run(&["build", "RL", "--isosig"]);
    assert_eq!(stdout(&o), "cPcbbbiht\n");
}

#[test]
fn bounds_json_report() {
    let o = run(&["bounds", "RLR", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["petronio_vesnin"], 2.0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["tet_count"], 4);
}

#[test]
fn malformed_word_is_input_error() {
    let o = run(&["build", "Q"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("unexpected character"));
}

#[test]
fn unknown_subcommand_is_input_error() {
    assert_eq!(run(&["frobnicate", "RL"]).status.code(), Some(1));
}

#[test]
fn non_family_word_rejected_by_angles() {
    assert_eq!(run(&["angles", "R^3L^2"]).status.code(), Some(1));
}

#[test]
fn help_exits_cleanly() {
    let o = run(&["survey", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("certified_minimal"));
}

#[test]
fn survey_row_count_matches_enumeration() {
    for (args, c) in
        [(vec!["survey", "--max-n", "4"], None), (vec!["survey", "--max-n", "5", "--C", "2"], Some(2))]
    {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0));
        let expected = enumerate_words(args[2].parse().unwrap(), &[1, 2], c).unwrap().count();
        assert_eq!(stdout(&o).lines().count(), expected + 1);
    }
}

#[test]
fn survey_is_deterministic_across_thread_counts() {
    let args = ["survey", "--max-n", "5"];
    let one = stdout(&run_with_threads(&args, "1"));
    let four = stdout(&run_with_threads(&args, "4"));
    assert_eq!(one, four);
    assert_eq!(one, stdout(&run_with_threads(&args, "4")));
}

#[test]
fn words_from_file() {
    let dir = std::env::temp_dir().join(format!("twobridge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("words.txt");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# two words\nRL\n\nR^2LR").unwrap();
    let o = run(&["build", "--isosig", "--file", path.to_str().unwrap()]);
    assert_eq!(stdout(&o), "cPcbbbiht\ngLLPQccdefffhggaaof\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn volume_of_figure_eight() {
    let o = run(&["volume", "RL", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["maximized_volume"].as_f64().unwrap() - 2.029_883_212_8).abs() < 1e-9);
}

#[test]
fn angles_verify() {
    let o = run(&["angles", "RL^2RL^2R^2L", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn csv_bounds_columns() {
    let o = run(&["bounds", "--csv", "RLR", "RL^2R"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("word,n_inner,C,tet_count"));
}
