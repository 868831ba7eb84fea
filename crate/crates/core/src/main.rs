use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use v2x_coverage::harness::{
    emit_csv, emit_svg, load_config, oracle_agreement_grid, preset, run_sweep, SweepSpec,
};
use v2x_coverage::units::db_to_linear;
use v2x_coverage::{
    coverage, estimate_coverage, Carrier, QuadratureSpec, RoadCase, ScenarioConfig, VehicleModel,
};

/// Downlink coverage analysis for urban V2X networks.
#[derive(Parser)]
#[command(name = "v2xcov", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate coverage/outage once and print the result.
    Coverage(CoverageArgs),
    /// Run a parameter sweep and emit CSV/SVG curves.
    Sweep(SweepArgs),
    /// Run the analytic-vs-Monte-Carlo agreement grid; nonzero exit on failure.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Ppp,
    Pcp,
}

impl From<ModelArg> for VehicleModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Ppp => VehicleModel::Ppp,
            ModelArg::Pcp => VehicleModel::Pcp,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RoadCaseArg {
    Both,
    OnlyLos,
    OnlyNlos,
}

impl From<RoadCaseArg> for RoadCase {
    fn from(c: RoadCaseArg) -> Self {
        match c {
            RoadCaseArg::Both => RoadCase::Both,
            RoadCaseArg::OnlyLos => RoadCase::OnlyLos,
            RoadCaseArg::OnlyNlos => RoadCase::OnlyNlos,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FrequencyArg {
    Mmwave,
    Sub6,
}

#[derive(Args)]
struct CoverageArgs {
    /// Scenario config file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "pcp")]
    model: ModelArg,
    #[arg(long, value_enum, default_value = "both")]
    road_case: RoadCaseArg,
    /// Override the config's carrier.
    #[arg(long, value_enum)]
    frequency: Option<FrequencyArg>,
    /// Override the SINR threshold, dB.
    #[arg(long, allow_negative_numbers = true)]
    threshold_db: Option<f64>,
    /// Override the serving distance, grid units of 100 m.
    #[arg(long)]
    serving_distance: Option<f64>,
    /// Also run a Monte Carlo estimate with this many trials.
    #[arg(long, default_value_t = 0)]
    mc_trials: u64,
    /// Override the RNG seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep config file (scenario + sweep keys).
    config: Option<PathBuf>,
    /// Named preset layout: table2, fig4, or fig5.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Monte Carlo trials per sweep point (0 = analytic only).
    #[arg(long)]
    mc_trials: Option<u64>,
    /// Override the RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Scenario config file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Trials per grid cell.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Override the RNG seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn load_scenario(path: &Option<PathBuf>) -> anyhow::Result<(ScenarioConfig, SweepSpec)> {
    match path {
        Some(p) => Ok(load_config(p).with_context(|| format!("loading {}", p.display()))?),
        None => Ok(v2x_coverage::harness::parse_config("")?),
    }
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let quad = QuadratureSpec::default();
    match cli.command {
        Command::Coverage(args) => {
            let (mut cfg, _) = load_scenario(&args.config)?;
            if let Some(f) = args.frequency {
                cfg.frequency_profile = match f {
                    FrequencyArg::Mmwave => Carrier::MmWave,
                    FrequencyArg::Sub6 => Carrier::Sub6,
                };
            }
            if let Some(t) = args.threshold_db {
                cfg.threshold = db_to_linear(t);
            }
            if let Some(r0) = args.serving_distance {
                cfg.serving_distance = r0;
            }
            if let Some(seed) = args.seed {
                cfg.rng_seed = seed;
            }
            let model: VehicleModel = args.model.into();
            let road_case: RoadCase = args.road_case.into();
            let res = coverage(&cfg, model, road_case, &quad)?;
            println!("p_cov  = {:.9}", res.p_cov);
            println!("p_out  = {:.9}", res.p_out);
            println!(
                "factors: noise {:.9}, los {:.9}, nlos {:.9} (quad err {:.2e})",
                res.noise_factor, res.los_factor, res.nlos_factor, res.quad_error
            );
            if args.mc_trials > 0 {
                let est =
                    estimate_coverage(&cfg, model, road_case, args.mc_trials, cfg.rng_seed)?;
                println!(
                    "monte carlo: p_cov {:.6} +- {:.6} (99% CI, {} trials)",
                    est.p_hat, est.ci99_half_width, est.trials
                );
            }
        }
        Command::Sweep(args) => {
            let (mut cfg, mut sweep) = match (&args.preset, &args.config) {
                (Some(name), _) => preset(name)?,
                (None, path) => load_scenario(path)?,
            };
            if let Some(t) = args.mc_trials {
                sweep.mc_trials = t;
            }
            if let Some(seed) = args.seed {
                cfg.rng_seed = seed;
            }
            let started = Instant::now();
            let curve = run_sweep(&cfg, &sweep, &quad)?;
            eprintln!(
                "swept {} points in {:.1}s",
                curve.points.len(),
                started.elapsed().as_secs_f64()
            );
            match (&args.out_csv, &args.out_svg) {
                (None, None) => print!("{}", v2x_coverage::harness::csv_string(&curve)),
                (csv, svg) => {
                    if let Some(path) = csv {
                        emit_csv(&curve, path)?;
                        eprintln!("wrote {}", path.display());
                    }
                    if let Some(path) = svg {
                        emit_svg(&curve, path)?;
                        eprintln!("wrote {}", path.display());
                    }
                }
            }
        }
        Command::Validate(args) => {
            let (mut cfg, _) = load_scenario(&args.config)?;
            if let Some(seed) = args.seed {
                cfg.rng_seed = seed;
            }
            let started = Instant::now();
            let report = oracle_agreement_grid(&cfg, args.trials, &quad)?;
            for cell in &report.cells {
                println!(
                    "{} {:<40} analytic {:.6}  mc {:.6} in [{:.6}, {:.6}]",
                    if cell.agrees { "PASS" } else { "FAIL" },
                    cell.label(),
                    cell.analytic_p_cov,
                    cell.estimate.p_hat,
                    cell.ci_low,
                    cell.ci_high,
                );
            }
            println!(
                "{}/{} cells agree (need {}), {:.1}s",
                report.agreeing,
                report.cells.len(),
                report.required,
                started.elapsed().as_secs_f64()
            );
            if !report.passed() {
                bail!(
                    "oracle agreement failed: {}/{} cells",
                    report.agreeing,
                    report.cells.len()
                );
            }
        }
    }
    Ok(())
}
