//! `deloc`: command-line front end for the delocalized invariants toolkit.

mod commands;
mod convert;
mod job;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::commands::Ctx;
use crate::job::{Backend, Command, JobFile};
use crate::report::{Failure, Report, EXIT_OK, EXIT_VALIDATION};

#[derive(Parser, Debug)]
#[command(name = "deloc", version, about = "Delocalized traces, determinant maps and eta invariants")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Ball sizes, class counts and growth fits of a group.
    GroupInfo(Common),
    /// Delocalized trace of a group-algebra element, with optional seminorm bound.
    Trace(Common),
    /// Delocalized determinant of an invertible path.
    Tau(Common),
    /// Delocalized eta invariant from an operator, a spectrum or the circle deck model.
    Eta(Common),
    /// Compare tau of the rho path with minus half the eta invariant.
    Theorem43(Common),
    /// Equivariant index from fixed-point data.
    Lefschetz(Common),
    /// Recognize a complex number in a cyclotomic field.
    Recognize(Common),
    /// Run the acceptance criteria.
    Suite(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// JSON job file.
    #[arg(long)]
    job: Option<PathBuf>,
    #[arg(long, value_enum)]
    backend: Option<Backend>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    workers: Option<usize>,
    /// Report path; defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Sub {
    fn split(self) -> (Command, Common) {
        match self {
            Sub::GroupInfo(c) => (Command::GroupInfo, c),
            Sub::Trace(c) => (Command::Trace, c),
            Sub::Tau(c) => (Command::Tau, c),
            Sub::Eta(c) => (Command::Eta, c),
            Sub::Theorem43(c) => (Command::Theorem43, c),
            Sub::Lefschetz(c) => (Command::Lefschetz, c),
            Sub::Recognize(c) => (Command::Recognize, c),
            Sub::Suite(c) => (Command::Suite, c),
        }
    }
}

fn load_job(command: Command, args: &Common) -> Result<JobFile, Failure> {
    let job = match &args.job {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::at("--job", format!("cannot read {}: {e}", path.display())))?;
            JobFile::parse(&text)?
        }
        None if command == Command::Suite => JobFile::empty(),
        None => return Err(Failure::at("--job", format!("{} requires a job file", command.name()))),
    };
    if let Some(c) = job.command {
        if c != command {
            return Err(Failure::at(
                "command",
                format!("job is for {} but {} was invoked", c.name(), command.name()),
            ));
        }
    }
    if args.workers == Some(0) || job.workers == Some(0) {
        return Err(Failure::at("workers", "worker count must be at least 1"));
    }
    Ok(job)
}

fn execute(command: Command, args: &Common, report: &mut Report) -> Result<Vec<Failure>, Failure> {
    let job = load_job(command, args)?;
    let backend = args.backend.or(job.backend).unwrap_or_default();
    let workers = args.workers.or(job.workers).unwrap_or_else(rayon::current_num_threads);
    report.config = json!({
        "backend": backend,
        "workers": workers,
        "tolerances": job.tolerances,
    });
    report.job = json!({
        "schema_version": job.schema_version,
        "command": command,
        "source": args.job,
        "parameters": job.parameters,
    });
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Failure::Computation(format!("cannot start worker pool: {e}")))?;
    let ctx = Ctx { backend, tol: &job.tolerances };
    let out = pool.install(|| commands::run(command, &job.parameters, &ctx))?;
    report.job["parameters"] = out.parameters;
    report.results = out.results;
    report.timing.items = out.items;
    Ok(out.soft_failures)
}

fn write_report(report: &Report, out: Option<&PathBuf>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(report).map_err(|e| e.to_string())?;
    match out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let (command, args) = cli.command.split();
    let start = Instant::now();
    let mut report = Report::new();
    let failures = match execute(command, &args, &mut report) {
        Ok(soft) => soft,
        Err(hard) => vec![hard],
    };
    report.errors = failures.iter().map(Failure::to_entry).collect();
    report.timing.wall_seconds = start.elapsed().as_secs_f64();
    // Validation outranks computation failures.
    let code = failures.iter().map(Failure::exit_code).max_by_key(|&c| c == EXIT_VALIDATION).unwrap_or(EXIT_OK);
    let out = args.out.as_ref();
    if let Err(m) = write_report(&report, out) {
        eprintln!("deloc: {m}");
        return ExitCode::from(report::EXIT_COMPUTATION as u8);
    }
    match failures.first() {
        None => eprintln!("deloc {}: ok in {:.3}s", command.name(), report.timing.wall_seconds),
        Some(_) => {
            for e in &report.errors {
                match &e.pointer {
                    Some(p) => eprintln!("deloc {}: {} error at {p}: {}", command.name(), e.kind, e.message),
                    None => eprintln!("deloc {}: {} error: {}", command.name(), e.kind, e.message),
                }
            }
        }
    }
    ExitCode::from(code as u8)
}
