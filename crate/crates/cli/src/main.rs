mod error;
mod output;
mod plot;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};
use numerov_core::{preset, run_scenario, run_sweep, ScenarioConfig, PRESET_NAMES};

use crate::error::CliError;
use crate::output::Manifest;

/// Matrix Numerov solver for 1D Schrödinger problems with pseudo-delta
/// barriers and position-dependent mass.
#[derive(Parser)]
#[command(name = "numerov", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve every variant and write energies, wavefunctions and profiles.
    Solve(RunArgs),
    /// Solve, then check the barrier variants and write report.txt.
    Validate(RunArgs),
    /// Run the config's sweep block.
    Sweep(RunArgs),
    /// Render SVG figures for an existing output directory.
    Plot {
        /// Directory written by solve, validate or sweep.
        dir: PathBuf,
    },
    /// Print a preset as TOML, or write it to a file.
    DumpPreset {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List preset names.
    ListPresets,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).multiple(false)))]
struct RunArgs {
    /// Scenario TOML file.
    #[arg(long, group = "source")]
    config: Option<PathBuf>,
    /// Built-in scenario name.
    #[arg(long, group = "source")]
    preset: Option<String>,
    /// Output directory. Defaults to $NUMEROV_OUT_DIR/<scenario>.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override solve.n_modes.
    #[arg(long)]
    modes: Option<usize>,
    /// Override grid.n_points.
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long, env = "NUMEROV_OUT_DIR", hide = true)]
    out_root: Option<PathBuf>,
}

impl RunArgs {
    fn load(&self) -> Result<ScenarioConfig, CliError> {
        let mut config = match (&self.config, &self.preset) {
            (Some(path), _) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                ScenarioConfig::from_toml(&text)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
            }
            (None, Some(name)) => preset(name)?,
            (None, None) => unreachable!("clap requires a source"),
        };
        if let Some(m) = self.modes {
            config.solve.n_modes = m;
        }
        if let Some(n) = self.grid_points {
            config.grid.n_points = n;
        }
        config.check()?;
        Ok(config)
    }

    fn out_dir(&self, config: &ScenarioConfig) -> PathBuf {
        match (&self.out, &self.out_root) {
            (Some(dir), _) => dir.clone(),
            (None, Some(root)) => root.join(&config.name),
            (None, None) => PathBuf::from("numerov-out").join(&config.name),
        }
    }
}

fn create(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Returns whether every validation check passed.
fn run(args: &RunArgs, command: &str) -> Result<bool, CliError> {
    let config = args.load()?;
    let grid = config.grid.build()?;
    let dir = args.out_dir(&config);
    let mut manifest = Manifest::new(command, &config, args.preset.as_deref(), &grid);

    if command == "sweep" {
        if config.sweep.is_none() {
            return Err(CliError::Usage(format!(
                "scenario `{}` has no [sweep] block",
                config.name
            )));
        }
        let t = Instant::now();
        let sweep = run_sweep(&config)?;
        manifest.timings.solve_s = t.elapsed().as_secs_f64();
        let t = Instant::now();
        create(&dir)?;
        output::write_sweep(&dir.join("sweep.csv"), &sweep)?;
        manifest.add_file("sweep.csv", "sweep");
        output::write_sweep_summary(&dir.join("sweep_summary.csv"), &sweep)?;
        manifest.add_file("sweep_summary.csv", "sweep_summary");
        manifest.timings.write_s = t.elapsed().as_secs_f64();
        manifest.write(&dir)?;
        eprintln!("wrote {}", dir.display());
        return Ok(true);
    }

    if command == "validate"
        && config
            .effective_variants()
            .iter()
            .all(|v| v.barriers.is_empty())
    {
        return Err(CliError::Usage(format!(
            "scenario `{}` has no barrier variant; nothing to validate",
            config.name
        )));
    }

    let t = Instant::now();
    let result = run_scenario(&config)?;
    manifest.timings.solve_s = t.elapsed().as_secs_f64();
    let t = Instant::now();
    create(&dir)?;
    output::write_scenario(&dir, &config, &result, &mut manifest)?;
    let mut passed = true;
    if command == "validate" {
        let (text, ok) = report::render(&result);
        let path = dir.join("report.txt");
        fs::write(&path, &text).map_err(|e| CliError::io(&path, e))?;
        manifest.add_file("report.txt", "report");
        for line in text
            .lines()
            .filter(|l| l.starts_with("FAIL") || l.starts_with("overall"))
        {
            println!("{line}");
        }
        passed = ok;
    }
    manifest.timings.write_s = t.elapsed().as_secs_f64();
    manifest.write(&dir)?;
    eprintln!("wrote {}", dir.display());
    Ok(passed)
}

fn dispatch(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Solve(a) => run(&a, "solve"),
        Command::Validate(a) => run(&a, "validate"),
        Command::Sweep(a) => run(&a, "sweep"),
        Command::Plot { dir } => {
            for f in plot::plot_dir(&dir)? {
                println!("{}", dir.join(f).display());
            }
            Ok(true)
        }
        Command::DumpPreset { name, out } => {
            let text = preset(&name)?.to_toml()?;
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| CliError::io(&path, e))?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::ListPresets => {
            for name in PRESET_NAMES {
                let description = preset(name)?.description.unwrap_or_default();
                println!("{name}\t{description}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
