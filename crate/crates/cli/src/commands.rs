use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use essence_core::checker::{with_checker_extension, CheckReport};
use essence_core::fixtures::verify_fixtures;
use essence_core::kernel::{builtin_alpha_ontology, default_state_tables, StateTable};
use essence_core::owl_xml::{parse_owl_xml, serialize_owl_xml, OwlDocument};
use essence_core::project::{island_states, load_events, load_project, ProjectModel};
use essence_core::reasoner::ReasoningMode;
use essence_core::scenarios::{
    run_automation_scenario, run_distribution_scenario, run_self_evolution_scenario, ScenarioError,
    ScenarioReport,
};
use essence_core::{Ontology, SignatureMode};

use crate::{Command, Format, Mode, ScenarioCommand, ScenarioOptions};

pub const STATE_TABLES_ENV: &str = "ESSENCE_STATE_TABLES";
pub const ONTOLOGY_FILE: &str = "kernel.owx";
pub const STATE_TABLES_FILE: &str = "state-tables.toml";

/// Anything that maps to exit code 2.
#[derive(Debug)]
pub struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn fail<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError(msg.into()))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn exit(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

pub fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Init { dir, force } => cmd_init(&dir, force),
        Command::Check {
            project,
            ontology,
            mode,
            format,
        } => cmd_check(&project, ontology.as_deref(), mode, format),
        Command::RunIteration {
            project,
            events,
            out,
            in_place,
        } => {
            let target = if in_place {
                project.clone()
            } else {
                out.expect("clap enforces the group")
            };
            cmd_run_iteration(&project, &events, &target)
        }
        Command::Scenario { scenario } => cmd_scenario(scenario),
        Command::ExportOwl {
            project,
            out,
            ontology,
        } => cmd_export_owl(&project, &out, ontology.as_deref()),
        Command::VerifyFixtures { dir } => {
            let findings = verify_fixtures(&dir);
            for f in &findings {
                println!("{f}");
            }
            if findings.is_empty() {
                println!("all fixtures verified");
            }
            Ok(exit(findings.is_empty()))
        }
    }
}

fn state_tables() -> Result<StateTable, CliError> {
    match std::env::var_os(STATE_TABLES_ENV) {
        Some(path) => {
            let path = PathBuf::from(path);
            StateTable::from_toml(&read(&path)?)
                .map_err(|e| CliError(format!("{}: {e}", path.display())))
        }
        None => Ok(default_state_tables()),
    }
}

/// Built-in ontology, plus the axioms of `extra` when given.
fn ontology(extra: Option<&Path>) -> Result<Ontology, CliError> {
    let mut o = builtin_alpha_ontology();
    if let Some(path) = extra {
        let doc =
            parse_owl_xml(&read(path)?).map_err(|e| CliError(format!("{}:{e}", path.display())))?;
        layer(&mut o, &doc.ontology, path)?;
    }
    Ok(o)
}

fn layer(base: &mut Ontology, extra: &Ontology, path: &Path) -> Result<(), CliError> {
    base.set_mode(SignatureMode::Lenient);
    base.extend_from(extra)
        .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    base.set_mode(SignatureMode::Strict);
    Ok(())
}

/// A `.owx` project contributes both axioms and assertions; anything else is
/// read as a `.project` file.
fn load_any_project(path: &Path, ontology: &mut Ontology) -> Result<ProjectModel, CliError> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "owx") {
        let doc = parse_owl_xml(&text).map_err(|e| CliError(format!("{}:{e}", path.display())))?;
        layer(ontology, &doc.ontology, path)?;
        return Ok(ProjectModel::from_assertions(&doc.abox));
    }
    load_project(&text, &state_tables()?).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn cmd_init(dir: &Path, force: bool) -> Result<ExitCode, CliError> {
    let owx = dir.join(ONTOLOGY_FILE);
    let tables = dir.join(STATE_TABLES_FILE);
    if !force {
        for path in [&owx, &tables] {
            if path.exists() {
                return fail(format!(
                    "{} exists; pass --force to overwrite",
                    path.display()
                ));
            }
        }
    }
    fs::create_dir_all(dir).map_err(|e| CliError(format!("{}: {e}", dir.display())))?;
    let doc = OwlDocument::new(builtin_alpha_ontology(), Default::default());
    write(&owx, &serialize_owl_xml(&doc))?;
    write(&tables, essence_core::kernel::DEFAULT_STATE_TABLES)?;
    println!("wrote {}", owx.display());
    println!("wrote {}", tables.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(
    project: &Path,
    extra: Option<&Path>,
    mode: Mode,
    format: Format,
) -> Result<ExitCode, CliError> {
    let mut o = ontology(extra)?;
    let model = load_any_project(project, &mut o)?;
    let mode = match mode {
        Mode::Strict => ReasoningMode::Strict,
        Mode::Infer => ReasoningMode::Infer,
    };
    let report = CheckReport::run(&model, &o, mode);
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Structured => print!("{}", report.to_json()),
    }
    Ok(exit(report.passed()))
}

fn cmd_run_iteration(project: &Path, events: &Path, target: &Path) -> Result<ExitCode, CliError> {
    let table = state_tables()?;
    let model = load_project(&read(project)?, &table)
        .map_err(|e| CliError(format!("{}: {e}", project.display())))?;
    let events =
        load_events(&read(events)?).map_err(|e| CliError(format!("{}: {e}", events.display())))?;
    let next = match model.apply_events(&events) {
        Ok(next) => next,
        Err(e) => {
            eprintln!("error: {e}; project left unchanged");
            return Ok(ExitCode::from(1));
        }
    };
    let before = model.alpha_states(&table);
    for (iri, after) in next.alpha_states(&table) {
        let inst = next
            .alpha_instance(&iri)
            .expect("state of a known instance");
        match before.get(&iri) {
            Some(prev) if prev.index != after.index => {
                println!("{iri} ({}): {prev} -> {after}", inst.alpha)
            }
            Some(_) => println!("{iri} ({}): {after} (unchanged)", inst.alpha),
            None => println!("{iri} ({}): new, {after}", inst.alpha),
        }
        for island in island_states(inst, &table) {
            println!("  warning: {iri} state `{island}` is achieved but an earlier state is not");
        }
    }
    println!("applied {} event(s)", events.len());
    write(target, &next.to_toml())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_scenario(command: ScenarioCommand) -> Result<ExitCode, CliError> {
    let (result, opts): (Result<ScenarioReport, ScenarioError>, ScenarioOptions) = match command {
        ScenarioCommand::Automation { seed, opts } => (Ok(run_automation_scenario(seed)), opts),
        ScenarioCommand::Distribution { n, k, seed, opts } => {
            (run_distribution_scenario(n, k, seed), opts)
        }
        ScenarioCommand::SelfEvolution {
            project,
            limit,
            opts,
        } => {
            let model = load_project(&read(&project)?, &state_tables()?)
                .map_err(|e| CliError(format!("{}: {e}", project.display())))?;
            (run_self_evolution_scenario(&model, limit), opts)
        }
    };
    let report = match result {
        Ok(report) => report,
        Err(ScenarioError::LimitExceeded { remaining, report }) => {
            eprintln!("repair limit reached with {remaining} gap(s) left");
            *report
        }
        Err(e) => return fail(e.to_string()),
    };
    if let Some(path) = &opts.trace {
        write(path, &report.trace_jsonl())?;
    }
    match opts.format {
        Format::Structured => print!("{}", report.summary_json()),
        Format::Text => {
            println!("scenario {} (seed {})", report.scenario, report.seed);
            for r in &report.trace {
                println!("  {:>3} {} {} {}", r.step, r.actor, r.action, r.payload);
            }
            println!(
                "consistency (strict): {}",
                if report.consistency.consistent {
                    "consistent"
                } else {
                    "INCONSISTENT"
                }
            );
            for f in &report.consistency.findings {
                println!("  {f}");
            }
            println!(
                "completeness: {}",
                if report.completeness.complete {
                    "complete"
                } else {
                    "INCOMPLETE"
                }
            );
            for r in &report.completeness.unfulfilled {
                println!("  gap: {r} is not fulfilled");
            }
        }
    }
    Ok(exit(report.passed()))
}

fn cmd_export_owl(project: &Path, out: &Path, extra: Option<&Path>) -> Result<ExitCode, CliError> {
    let mut o = ontology(extra)?;
    let model = load_any_project(project, &mut o)?;
    let doc = OwlDocument::new(with_checker_extension(&o), model.assertions());
    write(out, &serialize_owl_xml(&doc))?;
    println!("wrote {}", out.display());
    Ok(ExitCode::SUCCESS)
}
