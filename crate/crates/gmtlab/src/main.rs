use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gmtlab::{run_scenario, summary, write_artifacts, Overrides, Pipeline, Scenario};

#[derive(Debug, Parser)]
#[command(name = "gmtlab", version, about = "Scenario runner for grid measure experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the pipeline named in the scenario file.
    Run(RunArgs),
    /// Split the scenario's measure into good and bad parts.
    Decompose(RunArgs),
    /// Check the localized estimates over points and radii.
    Estimates(RunArgs),
    /// Lower-density certificates at the sampled points.
    Certify(RunArgs),
    /// Singular-ratio scan at the sampled points.
    Scan(RunArgs),
    /// Print a scenario file with every default filled in.
    Resolve(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    scenario: PathBuf,
    /// Spatial dimension.
    #[arg(long = "grid-n")]
    grid_n: Option<usize>,
    /// Cells per side.
    #[arg(long = "grid-N")]
    grid_cells: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

impl RunArgs {
    fn overrides(&self, pipeline: Option<Pipeline>) -> Overrides {
        Overrides {
            pipeline,
            grid_n: self.grid_n,
            grid_cells: self.grid_cells,
            out: self.out.as_ref().map(|p| p.display().to_string()),
            seed: self.seed,
        }
    }
}

fn execute(cli: Cli) -> gmtlab::Result<()> {
    let (args, pipeline) = match &cli.command {
        Command::Run(a) => (a, None),
        Command::Decompose(a) => (a, Some(Pipeline::Decompose)),
        Command::Estimates(a) => (a, Some(Pipeline::Estimates)),
        Command::Certify(a) => (a, Some(Pipeline::Certify)),
        Command::Scan(a) => (a, Some(Pipeline::Scan)),
        Command::Resolve(a) => (a, None),
    };
    let mut scenario = Scenario::load(&args.scenario)?;
    scenario.apply(&args.overrides(pipeline));
    if let Command::Resolve(_) = cli.command {
        let resolved = scenario.resolve()?;
        println!("{}", serde_json::to_string_pretty(&resolved).expect("scenarios serialize"));
        return Ok(());
    }
    let report = run_scenario(scenario)?;
    let paths = write_artifacts(&report)?;
    print!("{}", summary(&report));
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gmtlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
