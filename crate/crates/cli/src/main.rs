use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qpb_core::suite::{exit_code, EXIT_USAGE};
use qpb_core::{emit_report, run_suite, ReportFormat, Suite, SuiteConfig};

#[derive(Parser)]
#[command(
    name = "qpb",
    version,
    about = "Verify canonical commutation relations numerically and exactly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print its check reports.
    Verify(VerifyArgs),
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// fourier, poisson, kk, weyl, uncertainty, ladder or all
    suite: String,
    #[arg(long, default_value_t = 256)]
    n_points: usize,
    #[arg(long, default_value_t = 8.0)]
    half_extent: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, default_value_t = 64)]
    n_trunc: usize,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override a check tolerance, as check_id=value. Repeatable.
    #[arg(long = "tolerance", value_name = "CHECK_ID=VALUE", num_args = 1.., value_parser = parse_override)]
    tolerance: Vec<(String, f64)>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (id, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected check_id=value, got {s:?}"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|e| format!("bad tolerance value {value:?}: {e}"))?;
    Ok((id.trim().to_string(), value))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Verify(args) => verify(args),
    }
}

fn verify(args: VerifyArgs) -> ExitCode {
    let suite: Suite = match args.suite.parse() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("qpb: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let cfg = SuiteConfig {
        suite,
        n_points: args.n_points,
        half_extent: args.half_extent,
        hbar: args.hbar,
        n_trunc: args.n_trunc,
        omega: args.omega,
        tolerance_overrides: args.tolerance.into_iter().collect::<BTreeMap<_, _>>(),
        seed: args.seed,
    };
    let outcome = run_suite(&cfg);
    let reports = match &outcome {
        Ok(r) => r,
        Err(e) => {
            eprintln!("qpb: {e}");
            return ExitCode::from(exit_code(&outcome));
        }
    };
    let format = match args.format {
        Format::Json => ReportFormat::Json,
        Format::Table => ReportFormat::Table,
    };
    let text = emit_report(reports, format);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("qpb: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(exit_code(&outcome))
}
