use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qprep::env::EnvConfig;
use qprep::harness::{self, ExperimentSpec, Variant, ABLATION_VARIANTS, PAPER_SEED_COUNT};
use qprep::Result;

#[derive(Parser)]
#[command(name = "qprep", version, about = "Two-qubit state preparation with DQN and GRAPE")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one variant over a set of seeds.
    Train {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, num_args = 1..)]
        seed: Vec<u64>,
        /// `reward+policy`, e.g. `diff_weighted+adaptive`.
        #[arg(long)]
        variant: Option<String>,
    },
    /// Run the GRAPE baseline.
    Grape {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "out/grape")]
        out: PathBuf,
    },
    /// Exhaustively search all pulse sequences for the best final fidelity.
    Oracle {
        #[arg(long)]
        n_pulses: usize,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Train several variants on paired seeds and compare them.
    Compare {
        #[command(flatten)]
        sweep: SweepArgs,
    },
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use seeds 0..50 instead of the configured ones.
    #[arg(long)]
    full_seeds: bool,
}

fn load(config: Option<&Path>) -> Result<ExperimentSpec> {
    match config {
        Some(p) => ExperimentSpec::load(p),
        None => Ok(ExperimentSpec::default()),
    }
}

impl SweepArgs {
    fn spec(&self) -> Result<ExperimentSpec> {
        let mut spec = load(self.config.as_deref())?;
        if let Some(out) = &self.out {
            spec.output_dir = out.clone();
        }
        if self.full_seeds {
            spec.seeds = (0..PAPER_SEED_COUNT).collect();
        }
        Ok(spec)
    }
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable output"));
}

fn experiment(spec: &ExperimentSpec) -> Result<()> {
    let report = harness::run_experiment(spec)?;
    print_json(&report.summary);
    for c in &report.comparisons {
        eprintln!(
            "seed {}: {} vs {}: auc {:+.4}, greedy {:+.4}",
            c.seed,
            c.variant,
            c.baseline,
            c.auc_delta(),
            c.greedy_delta()
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train { sweep, seed, variant } => {
            let mut spec = sweep.spec()?;
            if !seed.is_empty() {
                spec.seeds = seed;
            }
            if let Some(name) = variant {
                spec.variants = vec![name.parse::<Variant>()?];
            }
            spec.variants.truncate(1);
            experiment(&spec)
        }
        Command::Compare { sweep } => {
            let mut spec = sweep.spec()?;
            if spec.variants.len() < 2 {
                spec.variants = ABLATION_VARIANTS.to_vec();
            }
            experiment(&spec)
        }
        Command::Grape { config, out } => {
            let spec = load(config.as_deref())?;
            let report = harness::run_grape(&spec.env, &spec.grape, &out)?;
            print_json(&serde_json::json!({
                "final_fidelity": report.result.final_fidelity,
                "iterations": report.result.iterations,
                "out": out,
            }));
            Ok(())
        }
        Command::Oracle { n_pulses, config } => {
            let env = match config {
                Some(p) => ExperimentSpec::load(&p)?.env,
                None => EnvConfig::default(),
            };
            let res = harness::brute_force_optimum(&EnvConfig { n_pulses, ..env })?;
            let pulses: Vec<[f64; 2]> = res.best_sequence.iter().map(|a| [a.u1(), a.u2()]).collect();
            print_json(&serde_json::json!({
                "n_pulses": n_pulses,
                "f_star": res.f_star,
                "sequences_evaluated": res.sequences_evaluated,
                "best_sequence": res.best_sequence,
                "pulses": pulses,
            }));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
