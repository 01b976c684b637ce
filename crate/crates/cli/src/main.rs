use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use optoqfi_cli::checks::{self, MAX_REL_ERR};
use optoqfi_cli::config::Config;
use optoqfi_cli::sweep::{run_sweep, SweepRequest};
use optoqfi_cli::table1::{self, Table1Options};
use optoqfi_cli::{dump, init_threads, CliError};

/// QFI bounds for a driven nonlinear optomechanical system.
#[derive(Parser)]
#[command(name = "optoqfi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time or frequency sweep of the closed-form QFI, as CSV.
    Sweep { config: PathBuf },
    /// Reproduce the single-shot QFI table.
    Table1 {
        /// Append Cramér-Rao sensitivities and the frequency-shift rows.
        #[arg(long)]
        sensitivity: bool,
        /// Override |mu_c|^2 (disables the comparison).
        #[arg(long)]
        mu_sq: Option<f64>,
    },
    /// Compare the truncated Fock-space oracle with the closed forms.
    OracleCheck {
        #[arg(long, default_value = "default")]
        preset: String,
        /// Fixed initial step; allows a single halving.
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Mechanics solution sampled on the [sweep] grid.
    Mechanics {
        #[command(subcommand)]
        action: MechanicsAction,
    },
}

#[derive(Subcommand)]
enum MechanicsAction {
    Dump { config: PathBuf },
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let stdout = std::io::stdout().lock();
    match cli.command {
        Command::Sweep { config } => {
            let req = SweepRequest::from_config(&Config::load(&config)?)?;
            run_sweep(&req)?;
        }
        Command::Table1 { sensitivity, mu_sq } => {
            let t = table1::table1(Table1Options { sensitivity, mu_sq })?;
            table1::write_csv(&t, stdout)?;
            if t.comparable && !t.passes() {
                return Err(CliError::Deviation("table values outside tolerance".into()));
            }
        }
        Command::OracleCheck { preset, dt } => {
            let cases = checks::preset(&preset)?;
            let report = checks::oracle_check(&cases, &checks::config(dt))?;
            checks::write_csv(&report, stdout)?;
            let worst = report.max_rel_err();
            let verdict = if report.passes() { "PASS" } else { "FAIL" };
            eprintln!("{verdict}: max relative error {worst:e} (limit {MAX_REL_ERR:e})");
            if !report.passes() {
                return Err(CliError::Deviation(format!("max relative error {worst:e}")));
            }
        }
        Command::Mechanics {
            action: MechanicsAction::Dump { config },
        } => {
            let rows = dump::mechanics_dump(&Config::load(&config)?)?;
            dump::write_csv(&rows, stdout)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
