//! Monte Carlo estimation of the probability that a sampled graph has a
//! Hamiltonian decomposition, by the matching oracle and by construction.

use rayon::prelude::*;
use serde::Serialize;

use crate::construct::{build_a, build_h_on, HamDecomposition};
use crate::error::{Error, Result};
use crate::model::{incidence, skeleton, SkeletonGraph, StepGraphon};
use crate::polytope::{positive_certificate, Status};
use crate::realize::{graph_has_decomposition, realize, RealizationOutcome, DEFAULT_ATTEMPTS};
use crate::refine::lemma1_normalize;
use crate::sampling::rng::{derive_seed, tag};
use crate::sampling::{empirical_concentration, sample_graph, saturate_graph, BalancedMatrix, SampledGraph};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Wilson score interval for `successes` out of `trials` at level `z`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let t = trials as f64;
    let p = successes as f64 / t;
    let z2 = z * z;
    let denom = 1.0 + z2 / t;
    let center = (p + z2 / (2.0 * t)) / denom;
    let half = z * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Seed of trial `trial` under `master`.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    derive_seed(derive_seed(master, tag::TRIAL), trial)
}

/// Everything the constructive pipeline produced for one sampled graph.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    /// Empirical concentration vector is interior for the original skeleton.
    pub x_interior: bool,
    /// Graphon after normalization, and the graph's blocks under its partition.
    pub normalized: Option<StepGraphon>,
    pub graph: Option<SampledGraph>,
    pub skeleton: Option<SkeletonGraph>,
    pub a: Option<BalancedMatrix>,
    pub pattern: Option<HamDecomposition>,
    pub outcome: Option<RealizationOutcome>,
    /// First step that failed, if any.
    pub failure: Option<String>,
}

impl PipelineRun {
    pub fn success(&self) -> bool {
        self.outcome.as_ref().is_some_and(RealizationOutcome::is_success)
    }
}

/// Runs the constructive pipeline on `g` sampled from `w`: empirical
/// concentration and interior check, normalization of `w`, re-derived blocks,
/// `A(x)`, a pattern decomposition of the saturated graph, and its
/// realization inside `g` (or inside the saturated graph when `saturated`).
/// `normalized` may carry a precomputed normalization of `w`.
pub fn run_pipeline(
    w: &StepGraphon,
    normalized: Option<&Result<StepGraphon>>,
    g: &SampledGraph,
    seed: u64,
    attempts: usize,
    saturated: bool,
) -> PipelineRun {
    let mut run = PipelineRun {
        x_interior: false,
        normalized: None,
        graph: None,
        skeleton: None,
        a: None,
        pattern: None,
        outcome: None,
        failure: None,
    };
    let fail = |mut run: PipelineRun, msg: String| {
        run.failure = Some(msg);
        run
    };
    let s = skeleton(w);
    let x = match empirical_concentration(g, w.blocks()) {
        Ok(x) => x,
        Err(e) => return fail(run, e.to_string()),
    };
    match positive_certificate(&incidence(&s), x.entries()) {
        Ok(c) if c.status == Status::Interior => run.x_interior = true,
        Ok(c) => return fail(run, format!("empirical concentration vector is {}", c.status)),
        Err(e) => return fail(run, e.to_string()),
    }
    let computed;
    let normalized = match normalized {
        Some(n) => n,
        None => {
            computed = lemma1_normalize(w);
            &computed
        }
    };
    let w2 = match normalized {
        Ok(w2) => w2.clone(),
        Err(e) => return fail(run, format!("normalization: {e}")),
    };
    let s2 = skeleton(&w2);
    let g2 = g.with_partition(w2.partition());
    let target = if saturated { saturate_graph(&g2, &s2) } else { g2.clone() };
    run.normalized = Some(w2.clone());
    run.skeleton = Some(s2.clone());
    run.graph = Some(target.clone());

    let x2 = match empirical_concentration(&g2, w2.blocks()) {
        Ok(x) => x,
        Err(e) => return fail(run, e.to_string()),
    };
    let a = match build_a(x2.entries(), g.n() as u64, &s2) {
        Ok(a) => a,
        Err(e) => return fail(run, e.to_string()),
    };
    run.a = Some(a.clone());
    let pattern = match build_h_on(&a, g2.blocks(), &s2) {
        Ok(h) => h,
        Err(e) => return fail(run, e.to_string()),
    };
    run.pattern = Some(pattern.clone());
    match realize(&a, &pattern, &target, &s2, seed, attempts) {
        Ok(outcome) => {
            if let Some((phase, msg)) = &outcome.diagnostics.failure {
                if !outcome.is_success() {
                    run.failure = Some(format!("realization phase {phase}: {msg}"));
                }
            }
            run.outcome = Some(outcome);
            run
        }
        Err(e) => fail(run, e.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub n: usize,
    pub oracle: bool,
    pub constructive: bool,
    pub x_interior: bool,
    /// Constructive decomposition re-checked against the graph's edges and the oracle.
    pub witness_verified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarloConfig {
    pub n: usize,
    pub trials: u64,
    pub master_seed: u64,
    pub attempts: usize,
    /// Worker threads; `None` uses rayon's global pool.
    pub threads: Option<usize>,
}

impl MonteCarloConfig {
    pub fn new(n: usize, trials: u64, master_seed: u64) -> Self {
        Self { n, trials, master_seed, attempts: DEFAULT_ATTEMPTS, threads: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub n: usize,
    pub trials: u64,
    pub successes_oracle: u64,
    pub successes_constructive: u64,
    pub x_interior: u64,
    /// Oracle success rate.
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub constructive_estimate: f64,
    pub constructive_ci_low: f64,
    pub constructive_ci_high: f64,
    pub master_seed: u64,
    /// Constructive successes the oracle or the edge check did not confirm.
    pub witness_violations: u64,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

pub const CSV_HEADER: &str = "trial,seed,n,oracle,constructive,x_interior";

impl MonteCarloReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.trial,
                r.seed,
                r.n,
                u8::from(r.oracle),
                u8::from(r.constructive),
                u8::from(r.x_interior)
            ));
        }
        out
    }
}

fn run_trial(w: &StepGraphon, normalized: &Result<StepGraphon>, config: &MonteCarloConfig, trial: u64) -> TrialRecord {
    let seed = trial_seed(config.master_seed, trial);
    let g = sample_graph(w, config.n, seed);
    let oracle = graph_has_decomposition(&g);
    let run = run_pipeline(w, Some(normalized), &g, seed, config.attempts, false);
    let constructive = run.success();
    let witness_verified = match run.outcome.as_ref().and_then(|o| o.decomposition.as_ref()) {
        Some(h) => oracle && h.check_edges(&g.adjacency()).is_ok(),
        None => true,
    };
    TrialRecord { trial, seed, n: config.n, oracle, constructive, x_interior: run.x_interior, witness_verified }
}

/// Runs `config.trials` independent trials in parallel. The report depends
/// only on the inputs, not on scheduling.
pub fn montecarlo(w: &StepGraphon, config: &MonteCarloConfig) -> Result<MonteCarloReport> {
    if config.n == 0 || config.trials == 0 {
        return Err(Error::InvalidGraphon("n and trials must be positive".into()));
    }
    let normalized = lemma1_normalize(w);
    let work = || -> Vec<TrialRecord> {
        (0..config.trials).into_par_iter().map(|t| run_trial(w, &normalized, config, t)).collect()
    };
    let records = match config.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Io(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    let count = |f: fn(&TrialRecord) -> bool| records.iter().filter(|r| f(r)).count() as u64;
    let successes_oracle = count(|r| r.oracle);
    let successes_constructive = count(|r| r.constructive);
    let trials = config.trials;
    let (ci_low, ci_high) = wilson_interval(successes_oracle as usize, trials as usize, Z95);
    let (constructive_ci_low, constructive_ci_high) =
        wilson_interval(successes_constructive as usize, trials as usize, Z95);
    Ok(MonteCarloReport {
        n: config.n,
        trials,
        successes_oracle,
        successes_constructive,
        x_interior: count(|r| r.x_interior),
        estimate: successes_oracle as f64 / trials as f64,
        ci_low,
        ci_high,
        constructive_estimate: successes_constructive as f64 / trials as f64,
        constructive_ci_low,
        constructive_ci_high,
        master_seed: config.master_seed,
        witness_violations: count(|r| r.constructive && !r.witness_verified),
        records,
    })
}
