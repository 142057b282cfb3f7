//! Runs JSON scenarios against `wcolim-core` and reports verdicts.
//!
//! A scenario names complexes, maps, categories, dg-categories, weights,
//! diagrams, functors and cubes, then lists tasks over those names. Every
//! definition is checked before any task runs; failures are located by a
//! dotted path such as `complexes.C.differentials.2`.

pub mod report;
pub mod resolve;
pub mod scenario;
pub mod tasks;

use std::time::{Duration, Instant};

use thiserror::Error;
use wcolim_core::colim::Cofibrancy;
use wcolim_core::corpus;

pub use report::{render_text, Report, Status, TaskReport, REPORT_VERSION};
pub use resolve::Env;
pub use scenario::Scenario;
pub use tasks::{RunOptions, Settings};

use scenario::TaskSpec;

/// A problem located at a dotted path in the scenario.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {message}")]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("invalid input: {0}")]
    Invalid(Diagnostic),
    #[error("unsound window or truncation: {0}")]
    Unsound(Diagnostic),
}

impl CliError {
    /// 2 for unreadable or invalid input, 3 for unsound windows.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Unsound(_) => 3,
            _ => 2,
        }
    }
}

pub fn parse_scenario(text: &str, path: &str) -> Result<Scenario, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn load_scenario(path: &str) -> Result<Scenario, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.into(), message: e.to_string() })?;
    parse_scenario(&text, path)
}

/// A finished run: the deterministic report plus wall-clock timings, which
/// only the text rendering shows.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub timings: Vec<Duration>,
}

impl Outcome {
    /// 0 when every task passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.report.passed {
            0
        } else {
            1
        }
    }
}

fn run_task(env: &Env, spec: &TaskSpec, at: &str, opts: &RunOptions, settings: Settings) -> Result<TaskReport, CliError> {
    let win = |w| opts.window.unwrap_or(w);
    let n = |n| opts.truncation.unwrap_or(n);
    match spec {
        TaskSpec::Validate {} => Ok(tasks::validate(env)),
        TaskSpec::Homology { complex, window, expect } => {
            tasks::homology_task(env, at, complex, opts.window.or(*window), expect.as_ref())
        }
        TaskSpec::Wcolim { weight, diagram, window, expect } => {
            tasks::wcolim_task(env, at, weight, diagram, opts.window.or(*window), expect.as_ref())
        }
        TaskSpec::BarCompare { weight, diagram, truncation, window } => tasks::bar_compare_task(
            env,
            at,
            weight,
            diagram,
            opts.truncation.or(*truncation),
            win(*window),
            settings,
        ),
        TaskSpec::Hocolim { category, diagram, truncation, window, expect } => tasks::hocolim_task(
            env,
            at,
            category,
            diagram,
            n(*truncation),
            win(*window),
            expect.as_ref(),
            settings,
        ),
        TaskSpec::Cofrep { weight, truncation, window } => {
            tasks::cofrep_task(env, at, weight, n(*truncation), win(*window), settings)
        }
        TaskSpec::Reedy { weight, diagram, truncation } => tasks::reedy_task(env, at, weight, diagram, n(*truncation)),
        TaskSpec::Cube { left, right } => tasks::cube_task(env, at, left, right),
        TaskSpec::DoldKan { complex, top } => tasks::dold_kan_task(env, at, complex, *top),
        TaskSpec::DwyerKan { functor, truncation, window } => {
            tasks::dwyer_kan_task(env, at, functor, n(*truncation), win(*window), settings)
        }
        TaskSpec::Collapse { weight, object, truncation, window } => {
            tasks::collapse_task(env, at, weight, object, n(*truncation), win(*window), settings)
        }
    }
}

/// Builds every definition, then runs the tasks selected by `opts.only`.
pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Result<Outcome, CliError> {
    let env = Env::build(s).map_err(CliError::Invalid)?;
    let mut reports = Vec::new();
    let mut timings = Vec::new();
    let selected = s
        .tasks
        .iter()
        .enumerate()
        .filter(|(_, t)| opts.only.as_deref().is_none_or(|c| c == t.spec.command()));
    for (k, task) in selected {
        let at = format!("tasks.{k}");
        let settings = Settings { allow_heuristic: opts.allow_heuristic || task.allow_heuristic };
        let start = Instant::now();
        let r = run_task(&env, &task.spec, &at, opts, settings)?;
        timings.push(start.elapsed());
        reports.push(r.settle(k, task.expect_failure));
    }
    if reports.is_empty() && opts.only.as_deref() == Some("validate") {
        reports.push(tasks::validate(&env));
        timings.push(Duration::ZERO);
    }
    Ok(Outcome { report: Report::new(s.name.clone(), env.caveats(), reports), timings })
}

/// Random bar comparisons over connective hosts with certified cell weights
/// and the least sound truncation for `window`. Instances whose truncation
/// exceeds `max_truncation` are skipped and listed as caveats.
pub fn run_corpus(seed: u64, count: usize, window: [i32; 2], max_truncation: usize) -> Result<Outcome, CliError> {
    let mut rng = corpus::rng(seed);
    let mut reports = Vec::new();
    let mut timings = Vec::new();
    let mut skipped = Vec::new();
    for k in 0..count {
        let host = corpus::random_connective_host(&mut rng, 2);
        let w = corpus::random_weight_cell(&mut rng, &host.host, 2);
        let d = std::sync::Arc::new(corpus::random_diagram(&mut rng, &host));
        let at = format!("instance {k}");
        let bar = wcolim_core::colim::BarConstruction::new(w.presheaf().clone(), d.clone(), 0)
            .map_err(|e| tasks::colim_err(&at, e))?;
        let Some(n) = bar.sound_truncation((window[0], window[1])).filter(|&n| n <= max_truncation) else {
            skipped.push(format!("{at}: no sound truncation up to {max_truncation}"));
            continue;
        };
        let weight = resolve::Weight { presheaf: w.presheaf().clone(), cofibrancy: Cofibrancy::Certified };
        let settings = Settings { allow_heuristic: false };
        let start = Instant::now();
        let r = tasks::bar_compare_on(&weight, &d, Some(n), window, settings, &at, at.clone())?;
        timings.push(start.elapsed());
        reports.push(r.settle(k, false));
    }
    let name = format!("corpus seed {seed}");
    Ok(Outcome { report: Report::new(name, skipped, reports), timings })
}
