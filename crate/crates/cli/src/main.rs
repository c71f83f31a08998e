use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rindler_lab::selfcheck::render_table;
use rindler_lab::{run_scenario, run_selfcheck, CliError, Experiment, ScenarioConfig, SelfcheckOptions};

#[derive(Parser)]
#[command(name = "rindler-lab", version, about = "1/c² composite-system experiments in Rindler and Minkowski frames")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ScenarioArgs {
    /// Scenario file with `key = value` lines.
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path; overrides the `output` key.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Shifted-frame coordinate consistency on random events.
    FramesCheck(ScenarioArgs),
    /// Photon exchange between clocks at different heights.
    Redshift(ScenarioArgs),
    /// Stationary c.m. of a supported clock.
    Equilibrium(ScenarioArgs),
    /// Trajectory after the internal energy changes.
    Drift(ScenarioArgs),
    /// Two-path visibility of a clock with internal levels.
    Visibility(ScenarioArgs),
    /// Decay of the gap between the expanded and bracket Hamiltonians.
    ExpansionCheck(ScenarioArgs),
    /// Run the full invariant suite.
    Selfcheck,
}

fn run(command: Command) -> Result<(), CliError> {
    let (experiment, args) = match command {
        Command::Selfcheck => {
            let outcomes = run_selfcheck(&SelfcheckOptions::default());
            print!("{}", render_table(&outcomes));
            let failed: Vec<String> = outcomes
                .iter()
                .filter(|o| !o.passed)
                .map(|o| o.id.to_string())
                .collect();
            return if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Invariant(format!("failing checks: {}", failed.join(", "))))
            };
        }
        Command::FramesCheck(a) => (Experiment::FramesCheck, a),
        Command::Redshift(a) => (Experiment::Redshift, a),
        Command::Equilibrium(a) => (Experiment::Equilibrium, a),
        Command::Drift(a) => (Experiment::Drift, a),
        Command::Visibility(a) => (Experiment::Visibility, a),
        Command::ExpansionCheck(a) => (Experiment::ExpansionCheck, a),
    };
    let config = ScenarioConfig::load(&args.config)?;
    let mut stdout = std::io::stdout().lock();
    for path in run_scenario(experiment, &config, args.out.as_deref(), &mut stdout)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rindler-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
