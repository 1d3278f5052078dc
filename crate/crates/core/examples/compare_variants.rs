// Paired-seed comparison of reward and exploration variants, written to disk.

use std::path::Path;

use qprep::env::EnvConfig;
use qprep::harness::{self, ExperimentSpec, ABLATION_VARIANTS};

pub fn run_example(out: &Path, episodes: usize) -> qprep::Result<harness::ExperimentReport> {
    let mut spec = ExperimentSpec {
        env: EnvConfig::with_pulses(10),
        variants: ABLATION_VARIANTS.to_vec(),
        seeds: vec![0, 1, 2],
        output_dir: out.to_path_buf(),
        ..ExperimentSpec::default()
    };
    spec.train.episodes = episodes;

    let report = harness::run_experiment(&spec)?;
    for row in &report.summary {
        println!(
            "{:28} mean {:.4} median {:.4}",
            row.variant.name(),
            row.mean_final_fidelity,
            row.median_final_fidelity
        );
    }
    for c in &report.comparisons {
        println!(
            "seed {} {} vs {}: AUC {:+.4} greedy {:+.4}",
            c.seed,
            c.variant,
            c.baseline,
            c.auc_delta(),
            c.greedy_delta()
        );
    }
    println!("{} files under {}", report.files.len() + 1, out.display());
    Ok(report)
}

#[allow(dead_code)]
fn main() -> qprep::Result<()> {
    let episodes = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    run_example(Path::new("out/compare"), episodes).map(|_| ())
}
