//! `delpezzo`: exact-arithmetic workbench for pencils of cubic surfaces.
//!
//! Exit codes: 0 = verified / contradiction certified, 1 = mathematical
//! failure or counterexample, 2 = input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use delpezzo::error::Error;
use delpezzo_cli::report::{render_text, Report, Verdict};
use delpezzo_cli::run::{execute_str, Command};

#[derive(Parser)]
#[command(
    name = "delpezzo",
    about = "Exact intersection numbers, untwisting words, line selections, staircase \
             ledgers, valuation graphs and infeasibility certificates for pencils of \
             cubic surfaces",
    after_help = "EXAMPLES:\n  delpezzo k2 --config model.json\n  delpezzo exclude --config sweep.json --jobs 8\n  delpezzo exclude --config case_b.json --format json --out report.json\n  delpezzo verify --report report.json"
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Path to the JSON config document.
    #[arg(long)]
    config: PathBuf,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Also write the JSON report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Commands {
    /// Intersection numbers of the fibration and the sufficiency check.
    K2(CommonArgs),
    /// Untwist the maximal curves of a pencil and print the involution word.
    Untwist(CommonArgs),
    /// Select a line through the center with its certified bound.
    Lines(CommonArgs),
    /// Per-level staircase constants, class recursion and ledger checks.
    Staircase(CommonArgs),
    /// Path counts, aggregates and the multiplicity/discrepancy identity.
    Graph(CommonArgs),
    /// Exclusion certificate for one parameter cell, or a grid sweep.
    Exclude(CommonArgs),
    /// Re-verify every certificate in a previously written report.
    Verify {
        /// Path to the JSON report.
        #[arg(long)]
        report: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err((err, code)) => {
            eprintln!("error: {err}");
            code
        }
    }
}

fn error_exit(e: &Error) -> ExitCode {
    match e {
        Error::Input(_) | Error::Unsupported(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn run(cli: Cli) -> Result<ExitCode, (Error, ExitCode)> {
    let (command, args) = match cli.command {
        Commands::K2(a) => (Command::K2, a),
        Commands::Untwist(a) => (Command::Untwist, a),
        Commands::Lines(a) => (Command::Lines, a),
        Commands::Staircase(a) => (Command::Staircase, a),
        Commands::Graph(a) => (Command::Graph, a),
        Commands::Exclude(a) => (Command::Exclude, a),
        Commands::Verify { report, format } => return verify(report, format),
    };
    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| (Error::input(format!("--jobs: {e}")), ExitCode::from(2)))?;
    }
    let text = fs::read_to_string(&args.config).map_err(|e| {
        (
            Error::input(format!("cannot read {}: {e}", args.config.display())),
            ExitCode::from(2),
        )
    })?;
    let report = execute_str(command, &text).map_err(|e| {
        let code = error_exit(&e);
        (e, code)
    })?;
    emit(&report, args.format, args.out.as_deref())
        .map_err(|e| (e, ExitCode::from(1)))?;
    Ok(match report.verdict {
        Verdict::Verified | Verdict::ContradictionCertified => ExitCode::SUCCESS,
        Verdict::Counterexample => ExitCode::from(1),
        Verdict::InputError => ExitCode::from(2),
    })
}

fn emit(report: &Report, format: Format, out: Option<&std::path::Path>) -> Result<(), Error> {
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Internal(format!("serialize report: {e}")))?;
    match format {
        Format::Json => println!("{json}"),
        Format::Text => print!("{}", render_text(report)),
    }
    if let Some(path) = out {
        fs::write(path, json.as_bytes())
            .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn verify(path: PathBuf, format: Format) -> Result<ExitCode, (Error, ExitCode)> {
    let text = fs::read_to_string(&path).map_err(|e| {
        (
            Error::input(format!("cannot read {}: {e}", path.display())),
            ExitCode::from(2),
        )
    })?;
    let report: Report = serde_json::from_str(&text).map_err(|e| {
        (
            Error::input(format!("report: {e}")),
            ExitCode::from(2),
        )
    })?;
    match report.verify() {
        Ok(()) => {
            let line = format!(
                "verify: {} certificate(s) of {:?} re-verified\n",
                report.certificates.len(),
                report.command
            );
            match format {
                Format::Text => print!("{line}"),
                Format::Json => println!(
                    "{}",
                    serde_json::json!({
                        "command": "verify",
                        "verdict": "verified",
                        "certificates": report.certificates.len(),
                    })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => Err((e, ExitCode::from(1))),
    }
}
