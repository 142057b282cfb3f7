use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wcolim_cli::{load_scenario, render_text, run_corpus, run_scenario, CliError, Outcome, RunOptions};

#[derive(Parser)]
#[command(name = "wcolim", version, about = "Exact homotopy weighted colimits over the integers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(clap::Args, Clone)]
struct Flags {
    /// Homology window `a:b`, overriding task windows.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_window)]
    window: Option<[i32; 2]>,
    /// Truncation level, overriding task truncations.
    #[arg(long = "truncate", global = true)]
    truncation: Option<usize>,
    /// Accept heuristic truncations instead of exiting with status 3.
    #[arg(long, global = true)]
    allow_heuristic: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task in a scenario.
    Run { file: String },
    /// Check all definitions.
    Validate { file: String },
    Homology { file: String },
    Wcolim { file: String },
    BarCompare { file: String },
    Hocolim { file: String },
    Cofrep { file: String },
    Reedy { file: String },
    Cube { file: String },
    DoldKan { file: String },
    DwyerKan { file: String },
    Collapse { file: String },
    /// Bar comparisons on seeded random instances.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        max_truncation: usize,
    },
}

fn parse_window(s: &str) -> Result<[i32; 2], String> {
    let (a, b) = s.split_once(':').ok_or("expected a:b")?;
    let a: i32 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: i32 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a > b {
        return Err(format!("empty window {a}:{b}"));
    }
    Ok([a, b])
}

fn scenario(file: &str, only: Option<&str>, flags: &Flags) -> Result<Outcome, CliError> {
    let s = load_scenario(file)?;
    let opts = RunOptions {
        window: flags.window,
        truncation: flags.truncation,
        allow_heuristic: flags.allow_heuristic,
        only: only.map(str::to_string),
    };
    run_scenario(&s, &opts)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags = &cli.flags;
    let outcome = match &cli.command {
        Command::Run { file } => scenario(file, None, flags),
        Command::Validate { file } => scenario(file, Some("validate"), flags),
        Command::Homology { file } => scenario(file, Some("homology"), flags),
        Command::Wcolim { file } => scenario(file, Some("wcolim"), flags),
        Command::BarCompare { file } => scenario(file, Some("bar-compare"), flags),
        Command::Hocolim { file } => scenario(file, Some("hocolim"), flags),
        Command::Cofrep { file } => scenario(file, Some("cofrep"), flags),
        Command::Reedy { file } => scenario(file, Some("reedy"), flags),
        Command::Cube { file } => scenario(file, Some("cube"), flags),
        Command::DoldKan { file } => scenario(file, Some("dold-kan"), flags),
        Command::DwyerKan { file } => scenario(file, Some("dwyer-kan"), flags),
        Command::Collapse { file } => scenario(file, Some("collapse"), flags),
        Command::Corpus { seed, count, max_truncation } => {
            run_corpus(*seed, *count, flags.window.unwrap_or([-1, 3]), *max_truncation)
        }
    };
    match outcome {
        Ok(o) => {
            match flags.format {
                Format::Text => print!("{}", render_text(&o.report, &o.timings)),
                Format::Structured => println!("{}", o.report.to_json()),
            }
            ExitCode::from(o.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
