mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tablecheck::expr::{parse, ExprError};
use tablecheck::quantity::{evaluate, QuantityOptions};
use tablecheck::verify::{load_corpus, run_corpus, IdentityRecord, Tolerances, VerifyOptions};

/// Numerically verify integral-table and series identities.
#[derive(Parser, Debug)]
#[command(name = "tablecheck", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify every record of a corpus file.
    Verify {
        file: PathBuf,
        /// Absolute tolerance added to every budget.
        #[arg(long, default_value_t = tablecheck::verify::ABS_TOL, value_parser = positive)]
        tol_abs: f64,
        /// Tolerance relative to |rhs|.
        #[arg(long, default_value_t = tablecheck::verify::REL_TOL, value_parser = positive)]
        tol_rel: f64,
        /// Multiple of the budget a discrepancy must reach to refute.
        #[arg(long, default_value_t = tablecheck::verify::REFUTE_FACTOR, value_parser = positive)]
        refute_factor: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Worker threads.
        #[arg(long, default_value_t = default_jobs(), value_parser = clap::value_parser!(u32).range(1..))]
        jobs: u32,
    },
    /// Evaluate one expression, which may contain integrals and sums.
    Eval { expression: String },
    /// Print the ids and notes of a corpus without evaluating it.
    List { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

fn default_jobs() -> u32 {
    std::thread::available_parallelism().map_or(1, |n| n.get() as u32)
}

const USAGE: u8 = 2;

fn read_corpus(path: &PathBuf) -> Result<Vec<IdentityRecord>, ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("tablecheck: cannot read {}: {e}", path.display());
        ExitCode::from(USAGE)
    })?;
    load_corpus(&text).map_err(|e| {
        eprintln!("tablecheck: {}: {e}", path.display());
        ExitCode::from(USAGE)
    })
}

fn show_expr_error(src: &str, e: &ExprError) {
    let span = e.span();
    eprintln!("tablecheck: {e}");
    eprintln!("  {src}");
    let width = src[span.start..span.end.min(src.len())].chars().count().max(1);
    let pad = src[..span.start.min(src.len())].chars().count();
    eprintln!("  {}{}", " ".repeat(pad), "^".repeat(width));
}

fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Verify {
            file,
            tol_abs,
            tol_rel,
            refute_factor,
            format,
            jobs,
        } => {
            let records = match read_corpus(&file) {
                Ok(r) => r,
                Err(code) => return code,
            };
            let opts = VerifyOptions {
                tolerances: Tolerances {
                    abs_tol: tol_abs,
                    rel_tol: tol_rel,
                    refute_factor,
                    ..Tolerances::default()
                },
                ..VerifyOptions::default()
            };
            let run = run_corpus(&records, &opts, jobs as usize);
            match format {
                Format::Text => print!("{}", report::text(&run)),
                Format::Json => print!("{}", report::json(&run)),
            }
            for r in run.reports.iter().filter(|r| !r.matches) {
                let why = r.verdict.message.as_deref().unwrap_or("");
                eprintln!("tablecheck: {} expected {}, got {} {why}", r.id, r.expected, r.verdict.tag);
            }
            if run.summary.all_match() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Eval { expression } => {
            let e = match parse(&expression) {
                Ok(e) => e,
                Err(err) => {
                    show_expr_error(&expression, &err);
                    return ExitCode::from(USAGE);
                }
            };
            match evaluate(&e, &QuantityOptions::default()) {
                Ok(r) if e.is_closed_form() => {
                    println!("{}", r.value);
                    ExitCode::SUCCESS
                }
                Ok(r) => {
                    println!("{} ± {:.1e}", r.value, r.err);
                    ExitCode::SUCCESS
                }
                Err(err) => {
                    eprintln!("tablecheck: {err}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::List { file } => {
            let records = match read_corpus(&file) {
                Ok(r) => r,
                Err(code) => return code,
            };
            for r in &records {
                println!("{}  {}", r.id, r.note);
            }
            ExitCode::SUCCESS
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse())
}
