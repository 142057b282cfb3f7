//! Drives the `wcolim` binary and checks exit codes and output.

use std::path::PathBuf;
use std::process::{Command, Output};

use wcolim_cli::{parse_scenario, run_scenario, Report, RunOptions, REPORT_VERSION};

fn scenario(name: &str) -> String {
    format!("{}/scenarios/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn wcolim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wcolim")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// A scratch file removed on drop.
struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str, text: &str) -> Self {
        let path = std::env::temp_dir().join(format!("wcolim-{}-{name}", std::process::id()));
        std::fs::write(&path, text).unwrap();
        Scratch(path)
    }

    fn path(&self) -> &str {
        self.0.to_str().unwrap()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.0);
    }
}

#[test]
fn passing_scenarios_exit_zero() {
    for name in ["cone_homology.json", "span_colimits.json", "replacements.json", "cubes.json", "dwyer_kan.json", "doubling_unit.json"] {
        let o = wcolim(&["run", &scenario(name)]);
        assert_eq!(code(&o), 0, "{name}: {}{}", stdout(&o), stderr(&o));
    }
}

#[test]
fn invalid_definitions_exit_two_with_a_path() {
    let o = wcolim(&["run", &scenario("invalid_d_squared.json")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("complexes.bad: d∘d ≠ 0 starting in degree 2"), "{}", stderr(&o));
}

#[test]
fn unsound_windows_exit_three_unless_allowed() {
    let o = wcolim(&["run", &scenario("unsound_window.json")]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let o = wcolim(&["run", "--allow-heuristic", &scenario("unsound_window.json")]);
    assert_ne!(code(&o), 3, "{}", stderr(&o));
    assert!(stdout(&o).contains("heuristic"), "{}", stdout(&o));
}

#[test]
fn failed_expectations_exit_one() {
    let f = Scratch::new("wrong.json", r#"{
  "name": "wrong expectation",
  "complexes": { "Z": { "ranks": { "0": 1 } } },
  "tasks": [ { "command": "homology", "complex": "Z", "expect": { "0": "Z/2" } } ]
}"#);
    let o = wcolim(&["run", f.path()]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn parse_errors_report_line_and_column() {
    let f = Scratch::new("broken.json", "{\n  \"name\": \"x\",\n  \"tasks\": [ oops ]\n}\n");
    let o = wcolim(&["run", f.path()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains(&format!("{}:3:", f.path())), "{}", stderr(&o));
}

#[test]
fn unknown_fields_are_rejected() {
    let f = Scratch::new("unknown.json", r#"{ "name": "x", "complexs": {}, "tasks": [] }"#);
    let o = wcolim(&["run", f.path()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("complexs"), "{}", stderr(&o));
}

#[test]
fn missing_files_exit_two() {
    let o = wcolim(&["run", "/nonexistent/scenario.json"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).starts_with("error: cannot read"));
}

#[test]
fn empty_task_lists_give_a_header_only_report() {
    let f = Scratch::new("empty.json", r#"{ "name": "nothing to do", "tasks": [] }"#);
    let o = wcolim(&["run", "--format", "structured", f.path()]);
    assert_eq!(code(&o), 0);
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.version, REPORT_VERSION);
    assert!(r.passed && r.tasks.is_empty() && r.caveats.is_empty());
}

#[test]
fn structured_output_is_deterministic() {
    let args = ["run", "--format", "structured", &scenario("span_colimits.json")];
    let (a, b) = (wcolim(&args), wcolim(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    let r: Report = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(r.to_json().trim_end(), stdout(&a).trim_end());
}

#[test]
fn subcommands_select_their_tasks() {
    let o = wcolim(&["hocolim", "--format", "structured", &scenario("span_colimits.json")]);
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!r.tasks.is_empty());
    assert!(r.tasks.iter().all(|t| t.command == "hocolim"));
}

#[test]
fn validate_runs_without_a_validate_task() {
    let o = wcolim(&["validate", "--format", "structured", &scenario("cubes.json")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.tasks.len(), 1);
    assert_eq!(r.tasks[0].command, "validate");
}

#[test]
fn window_flags_are_parsed() {
    let o = wcolim(&["run", "--window", "3:1", &scenario("cone_homology.json")]);
    assert_eq!(code(&o), 2);
    let o = wcolim(&["homology", "--window", "-1:2", &scenario("cone_homology.json")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn corpus_runs_are_seeded() {
    let args = ["corpus", "--seed", "5", "--count", "4", "--format", "structured"];
    let (a, b) = (wcolim(&args), wcolim(&args));
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn library_and_binary_agree() {
    let path = scenario("cubes.json");
    let s = parse_scenario(&std::fs::read_to_string(&path).unwrap(), &path).unwrap();
    let lib = run_scenario(&s, &RunOptions::default()).unwrap().report.to_json();
    let bin = stdout(&wcolim(&["run", "--format", "structured", &path]));
    assert_eq!(lib.trim_end(), bin.trim_end());
}
