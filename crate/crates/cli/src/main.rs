use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fluxswap_cli::commands;
use fluxswap_cli::config::{OutputFlags, ScenarioFlags};
use fluxswap_cli::{exit, exit_code};

#[derive(Parser)]
#[command(
    name = "fluxswap",
    version,
    about = "Entanglement swapping between two qubit-cavity systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one scenario over measurement times and write the series.
    Run {
        #[command(flatten)]
        scenario: ScenarioFlags,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Sweep one scenario for several ω₂ = Ω₂ values, one file each.
    Scan {
        #[command(flatten)]
        scenario: ScenarioFlags,
        #[command(flatten)]
        output: OutputFlags,
        /// Comma-separated ω₂ values.
        #[arg(long, value_delimiter = ',')]
        omega2_list: Vec<f64>,
    },
    /// Write the data and a gnuplot script for one of figures 1 to 5.
    Figures {
        id: u8,
        #[arg(long, short, default_value = ".")]
        output_dir: PathBuf,
    },
    /// Compare against a Fock space `factor` times larger; exit 2 on failure.
    CheckTruncation {
        #[command(flatten)]
        scenario: ScenarioFlags,
        /// End of the checked time window (defaults to the grid end).
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 2)]
        factor: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Run { scenario, output } => commands::run(scenario, output),
        Command::Scan {
            scenario,
            output,
            omega2_list,
        } => commands::scan(scenario, output, omega2_list),
        Command::Figures { id, output_dir } => commands::figures(*id, output_dir),
        Command::CheckTruncation {
            scenario,
            t_max,
            factor,
        } => commands::check_truncation(scenario, *t_max, *factor),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
