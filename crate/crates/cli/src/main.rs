use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use frobcc::pipeline::{
    info, parse_problem, run_oracle, run_pipeline, PipelineError, PipelineOptions, ProblemSpec, RunReport, Strategy,
};

/// Count the geometrically connected components of Proj(F_q[x]/I).
#[derive(Debug, Parser)]
#[command(name = "frobcc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full pipeline and report the component count.
    Count {
        file: PathBuf,
        /// `ext` certifies termination through Ext; `heuristic` stops on a plateau.
        #[arg(long, value_enum, default_value_t = StrategyArg::Ext)]
        strategy: StrategyArg,
        /// Seed for the parameter-system search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest Koszul exponent tried before giving up.
        #[arg(long, default_value_t = PipelineOptions::default().t_max)]
        t_max: u32,
        #[arg(long)]
        json: bool,
        /// Log each stage to stderr.
        #[arg(long)]
        verbose: bool,
    },
    /// Count through the minimal-prime graph (square-free monomial ideals only).
    Oracle {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Report dim R, ℓ and the parameter system.
    Info {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Ext,
    Heuristic,
}

const EXIT_INPUT: u8 = 2;

fn load(path: &Path) -> Result<ProblemSpec, (u8, String)> {
    let text = std::fs::read_to_string(path).map_err(|e| (EXIT_INPUT, format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&text).map_err(|e| (EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn failure(e: PipelineError) -> (u8, String) {
    (e.exit_code() as u8, e.to_string())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn format_report(report: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "components: {}", report.components);
    let _ = writeln!(out, "geometrically connected: {}", yes_no(report.connected_geom));
    let _ = writeln!(out, "dim R: {}", report.dim_r);
    if let Some(ell) = report.ell {
        let _ = writeln!(out, "ell: {ell}");
    }
    if let Some(n) = report.stab_n {
        let _ = writeln!(out, "stabilization N: {n}");
    }
    if !report.hsop.is_empty() {
        let forms: Vec<String> = report.hsop.iter().map(|h| format!("{} (degree {})", h.form, h.degree)).collect();
        let _ = writeln!(out, "parameters: {}", forms.join(", "));
    }
    if !report.chain.is_empty() {
        let _ = writeln!(out, "image chain: {:?}", report.chain);
    }
    let status = if report.certified { "certified" } else { "UNCERTIFIED" };
    let _ = writeln!(out, "strategy: {} ({status})", report.strategy);
    out
}

fn to_json<T: ?Sized + Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

/// Writes to stdout; a reader that went away (`| head`) is not an error.
fn emit(text: &str) -> Result<(), (u8, String)> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err((1, format!("cannot write output: {e}"))),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), (u8, String)> {
    match cli.command {
        Command::Count { file, strategy, seed, t_max, json, verbose } => {
            let level = if verbose { log::LevelFilter::Info } else { log::LevelFilter::Warn };
            env_logger::Builder::new().filter_level(level).parse_env("RUST_LOG").init();
            let spec = load(&file)?;
            log::info!("read {} generators in {} variables", spec.ideal.generators().len(), spec.ring.nvars());
            let strategy = match strategy {
                StrategyArg::Ext => Strategy::Ext,
                StrategyArg::Heuristic => Strategy::Heuristic,
            };
            let opts = PipelineOptions { strategy, seed, t_max, ..PipelineOptions::default() };
            let report = run_pipeline(&spec, &opts).map_err(failure)?;
            emit(&if json { to_json(&report) } else { format_report(&report) })?;
        }
        Command::Oracle { file, json } => {
            let report = run_oracle(&load(&file)?).map_err(failure)?;
            emit(&if json { to_json(&report) } else { format_report(&report) })?;
        }
        Command::Info { file, seed, json } => {
            let opts = PipelineOptions { seed, ..PipelineOptions::default() };
            let report = info(&load(&file)?, &opts).map_err(failure)?;
            let text = if json {
                to_json(&report)
            } else {
                let mut out = format!("dim R: {}\nell: {}\n", report.dim_r, report.ell);
                for h in &report.hsop {
                    let _ = writeln!(out, "parameter: {} (degree {})", h.form, h.degree);
                }
                out
            };
            emit(&text)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
