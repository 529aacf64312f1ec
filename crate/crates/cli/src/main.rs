//! `essence`: validate projects against the kernel alpha ontology, run
//! iterations and scenarios, and export `.owx` documents.
//!
//! Exit codes: 0 success (complete and consistent where that applies),
//! 1 checks ran but failed, 2 usage, parse or schema error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "essence",
    version,
    about = "Kernel alphas as a runnable, checkable ontology"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the built-in ontology (`kernel.owx`) and default state tables
    /// (`state-tables.toml`) into a directory.
    Init {
        dir: PathBuf,
        /// Overwrite existing files.
        #[arg(long)]
        force: bool,
    },
    /// Completeness and consistency verdicts for a project (`.project` or `.owx`).
    Check {
        project: PathBuf,
        /// Extra ontology axioms layered on the built-in ontology.
        #[arg(long)]
        ontology: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Strict)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Apply an events file to a project and report alpha state transitions.
    #[command(group(clap::ArgGroup::new("target").required(true).args(["out", "in_place"])))]
    RunIteration {
        project: PathBuf,
        events: PathBuf,
        /// Where to write the updated project.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overwrite the input project.
        #[arg(long)]
        in_place: bool,
    },
    /// Run one of the deterministic scenarios.
    Scenario {
        #[command(subcommand)]
        scenario: ScenarioCommand,
    },
    /// Serialize the merged ontology and the project's assertions as `.owx`.
    ExportOwl {
        project: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        ontology: Option<PathBuf>,
    },
    /// Check a golden-fixture directory against its manifest.
    VerifyFixtures { dir: PathBuf },
}

#[derive(Args, Clone)]
struct ScenarioOptions {
    /// Write the trace as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum ScenarioCommand {
    Automation {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        opts: ScenarioOptions,
    },
    Distribution {
        #[arg(long, default_value_t = 5)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        k: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        opts: ScenarioOptions,
    },
    SelfEvolution {
        #[arg(long)]
        project: PathBuf,
        #[arg(long, default_value_t = 100)]
        limit: u64,
        #[command(flatten)]
        opts: ScenarioOptions,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Strict,
    Infer,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
