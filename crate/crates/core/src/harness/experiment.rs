use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentSpec, Variant};
use super::oracle::{brute_force_optimum, ORACLE_LIMIT};
use super::output::{self, FileEntry};
use crate::dqn::{self, EpisodeRecord};
use crate::env::{ControlAction, EnvConfig, ACTION_COUNT};
use crate::error::{Error, Result};
use crate::grape::{self, ControlField, GrapeParams, GrapeResult};

/// Fidelities above the exhaustive optimum by more than this are reported as errors.
const ORACLE_SLACK: f64 = 1e-12;

/// One training run of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutcome {
    pub variant: Variant,
    pub seed: u64,
    pub n_pulses: usize,
    /// Final fidelity of the reported greedy sequence.
    pub greedy_fidelity: f64,
    pub policy_round: usize,
    /// Mean final fidelity over the learning curve.
    pub auc: f64,
    pub actions: Vec<ControlAction>,
    #[serde(skip)]
    pub episodes: Vec<EpisodeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub variant: Variant,
    #[serde(rename = "N")]
    pub n_pulses: usize,
    pub mean_final_fidelity: f64,
    pub median_final_fidelity: f64,
    pub per_seed: Vec<f64>,
    pub seeds: Vec<u64>,
    /// Exhaustive optimum at the same horizon, when it was affordable.
    pub f_star: Option<f64>,
}

/// Learning-curve area and final greedy fidelity of two variants trained on the same seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedComparison {
    pub seed: u64,
    pub baseline: Variant,
    pub variant: Variant,
    pub baseline_auc: f64,
    pub variant_auc: f64,
    pub baseline_greedy: f64,
    pub variant_greedy: f64,
}

impl PairedComparison {
    pub fn auc_delta(&self) -> f64 {
        self.variant_auc - self.baseline_auc
    }

    pub fn greedy_delta(&self) -> f64 {
        self.variant_greedy - self.baseline_greedy
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub runs: Vec<RunOutcome>,
    pub summary: Vec<SummaryRow>,
    pub comparisons: Vec<PairedComparison>,
    pub f_star: Option<f64>,
    /// Every file written, manifest excluded.
    pub files: Vec<FileEntry>,
}

pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty slice");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

/// Groups runs by variant, in first-seen order.
pub fn summarize(runs: &[RunOutcome], f_star: Option<f64>) -> Vec<SummaryRow> {
    let mut variants: Vec<Variant> = Vec::new();
    for r in runs {
        if !variants.contains(&r.variant) {
            variants.push(r.variant);
        }
    }
    variants
        .into_iter()
        .map(|v| {
            let mine: Vec<&RunOutcome> = runs.iter().filter(|r| r.variant == v).collect();
            let per_seed: Vec<f64> = mine.iter().map(|r| r.greedy_fidelity).collect();
            SummaryRow {
                variant: v,
                n_pulses: mine[0].n_pulses,
                mean_final_fidelity: per_seed.iter().sum::<f64>() / per_seed.len() as f64,
                median_final_fidelity: median(&per_seed),
                seeds: mine.iter().map(|r| r.seed).collect(),
                per_seed,
                f_star,
            }
        })
        .collect()
}

/// Pairs every variant after the first with the first one, seed by seed.
pub fn paired_comparisons(runs: &[RunOutcome], variants: &[Variant]) -> Vec<PairedComparison> {
    let Some((&baseline, rest)) = variants.split_first() else {
        return Vec::new();
    };
    let find = |v: Variant, seed: u64| runs.iter().find(|r| r.variant == v && r.seed == seed);
    let mut out = Vec::new();
    for &v in rest {
        for base in runs.iter().filter(|r| r.variant == baseline) {
            if let Some(other) = find(v, base.seed) {
                out.push(PairedComparison {
                    seed: base.seed,
                    baseline,
                    variant: v,
                    baseline_auc: base.auc,
                    variant_auc: other.auc,
                    baseline_greedy: base.greedy_fidelity,
                    variant_greedy: other.greedy_fidelity,
                });
            }
        }
    }
    out
}

fn comparison_csv(rows: &[PairedComparison]) -> String {
    use std::fmt::Write as _;
    let mut out = String::from("seed,baseline,variant,baseline_auc,variant_auc,baseline_greedy,variant_greedy\n");
    for c in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            c.seed,
            c.baseline,
            c.variant,
            output::format_sig12(c.baseline_auc),
            output::format_sig12(c.variant_auc),
            output::format_sig12(c.baseline_greedy),
            output::format_sig12(c.variant_greedy),
        )
        .unwrap();
    }
    out
}

fn run_stem(v: Variant, seed: u64) -> String {
    format!("{}-{}_seed{seed}", v.reward, v.policy)
}

#[derive(Serialize)]
struct PolicyFile<'a> {
    #[serde(flatten)]
    run: &'a RunOutcome,
    pulses: Vec<[f64; 2]>,
}

fn run_one(spec: &ExperimentSpec, variant: Variant, seed: u64, f_star: Option<f64>) -> Result<(RunOutcome, Vec<FileEntry>)> {
    let cfg = spec.training_config(variant, seed);
    let res = dqn::train(&cfg)?;
    if let Some(bound) = f_star {
        let reported = res
            .episodes
            .iter()
            .flat_map(|e| std::iter::once(e.final_fidelity).chain(e.greedy_fidelity))
            .chain(std::iter::once(res.greedy_fidelity));
        if let Some(f) = reported.into_iter().find(|&f| f > bound + ORACLE_SLACK) {
            return Err(Error::Numeric(format!(
                "{variant} seed {seed} reported fidelity {f} above the exhaustive optimum {bound}"
            )));
        }
    }
    let run = RunOutcome {
        variant,
        seed,
        n_pulses: cfg.env.n_pulses,
        greedy_fidelity: res.greedy_fidelity,
        policy_round: res.policy_round,
        auc: res.auc(),
        actions: res.policy.clone(),
        episodes: res.episodes.clone(),
    };
    let stem = run_stem(variant, seed);
    let root = &spec.output_dir;
    let policy = PolicyFile {
        run: &run,
        pulses: res.policy.iter().map(|a| [a.u1(), a.u2()]).collect(),
    };
    let checkpoint = serde_json::to_string(&res.network.to_checkpoint()).expect("serializable checkpoint");
    let files = vec![
        output::write_file(root, &format!("curves/{stem}.csv"), output::curve_csv(&res.episodes).as_bytes())?,
        output::write_file(root, &format!("policies/{stem}.json"), output::pretty_json(&policy).as_bytes())?,
        output::write_file(root, &format!("networks/{stem}.json"), checkpoint.as_bytes())?,
    ];
    Ok((run, files))
}

fn horizon_is_enumerable(n: usize) -> bool {
    (ACTION_COUNT as u64).checked_pow(n as u32).is_some_and(|c| c <= ORACLE_LIMIT)
}

/// Trains every variant on every seed and writes curves, policies, checkpoints,
/// `summary.json`, `comparison.csv` (two or more variants) and `manifest.json`
/// under `spec.output_dir`.
///
/// When the horizon is small enough to enumerate, every fidelity a run
/// reports is checked against the exhaustive optimum.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let root = &spec.output_dir;
    std::fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;

    let f_star = if horizon_is_enumerable(spec.env.n_pulses) {
        Some(brute_force_optimum(&spec.env)?.f_star)
    } else {
        None
    };

    let jobs: Vec<(Variant, u64)> = spec
        .variants
        .iter()
        .flat_map(|&v| spec.seeds.iter().map(move |&s| (v, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<(RunOutcome, Vec<FileEntry>)> = pool.install(|| {
        jobs.par_iter()
            .map(|&(v, s)| run_one(spec, v, s, f_star))
            .collect::<Result<_>>()
    })?;

    let mut runs = Vec::with_capacity(outcomes.len());
    let mut files = Vec::new();
    for (run, f) in outcomes {
        runs.push(run);
        files.extend(f);
    }
    let summary = summarize(&runs, f_star);
    let comparisons = paired_comparisons(&runs, &spec.variants);
    files.push(output::write_file(root, "summary.json", output::pretty_json(&summary).as_bytes())?);
    if spec.variants.len() > 1 {
        files.push(output::write_file(root, "comparison.csv", comparison_csv(&comparisons).as_bytes())?);
    }
    files.push(output::write_file(root, "spec.json", output::pretty_json(spec).as_bytes())?);
    output::write_manifest(root, &files)?;
    Ok(ExperimentReport {
        runs,
        summary,
        comparisons,
        f_star,
        files,
    })
}

#[derive(Debug, Clone)]
pub struct GrapeReport {
    pub result: GrapeResult,
    pub files: Vec<FileEntry>,
}

#[derive(Serialize)]
struct GrapeSummary<'a> {
    n_slices: usize,
    seed: u64,
    iterations: usize,
    final_fidelity: f64,
    params: &'a GrapeParams,
}

/// GRAPE from a seeded uniform random field; writes `grape_cost.csv`,
/// `grape_controls.csv`, `grape.json` and `manifest.json` into `out`.
pub fn run_grape(env: &EnvConfig, params: &GrapeParams, out: &Path) -> Result<GrapeReport> {
    env.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let init = ControlField::random(env.total_time, params.n_slices, &mut rng)?;
    let result = grape::optimize(&env.initial, &env.target, init, &params.ascent)?;
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let summary = GrapeSummary {
        n_slices: params.n_slices,
        seed: params.seed,
        iterations: result.iterations,
        final_fidelity: result.final_fidelity,
        params,
    };
    let files = vec![
        output::write_file(out, "grape_cost.csv", output::grape_cost_csv(&result).as_bytes())?,
        output::write_file(out, "grape_controls.csv", output::grape_controls_csv(&result).as_bytes())?,
        output::write_file(out, "grape.json", output::pretty_json(&summary).as_bytes())?,
    ];
    output::write_manifest(out, &files)?;
    Ok(GrapeReport { result, files })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
    }

    fn outcome(variant: &str, seed: u64, greedy: f64, auc: f64) -> RunOutcome {
        RunOutcome {
            variant: variant.parse().unwrap(),
            seed,
            n_pulses: 4,
            greedy_fidelity: greedy,
            policy_round: 1,
            auc,
            actions: Vec::new(),
            episodes: Vec::new(),
        }
    }

    #[test]
    fn summary_groups_by_variant() {
        let runs = [
            outcome("sparse", 0, 0.2, 0.1),
            outcome("diff_weighted", 0, 0.9, 0.5),
            outcome("sparse", 1, 0.4, 0.3),
        ];
        let rows = summarize(&runs, None);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].variant.to_string(), "sparse+adaptive");
        assert_eq!(rows[0].per_seed, vec![0.2, 0.4]);
        assert!((rows[0].mean_final_fidelity - 0.3).abs() < 1e-15);
        assert_eq!(rows[1].seeds, vec![0]);

        let variants: Vec<Variant> = vec!["diff_weighted".parse().unwrap(), "sparse".parse().unwrap()];
        let cmp = paired_comparisons(&runs, &variants);
        assert_eq!(cmp.len(), 1);
        assert_eq!(cmp[0].seed, 0);
        assert!((cmp[0].auc_delta() + 0.4).abs() < 1e-15);
    }
}
