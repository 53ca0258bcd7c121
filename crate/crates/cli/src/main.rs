use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hprop_core::driver::io::{load_graphon, save_graph, save_graphon};
use hprop_core::driver::{analyze, montecarlo, run_pipeline, MonteCarloConfig};
use hprop_core::rational::{format_rational, parse_rational};
use hprop_core::realize::{graph_has_decomposition, DEFAULT_ATTEMPTS};
use hprop_core::refine::refine_once;
use hprop_core::sampling::sample_graph;
use hprop_core::Error;

#[derive(Parser)]
#[command(name = "hprop", version, about = "Hamiltonian decompositions of graphs sampled from step-graphons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check conditions A and B and print the verdict.
    Analyze {
        file: PathBuf,
        /// Print the machine-readable report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Sample a graph and write it as JSON.
    Sample {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample a graph and try to build a Hamiltonian decomposition of it.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Realize inside the saturated graph instead of the sampled one.
        #[arg(long)]
        saturated: bool,
        #[arg(long, default_value_t = DEFAULT_ATTEMPTS)]
        attempts: usize,
    },
    /// Estimate the probability of a decomposition over many samples.
    Montecarlo {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Write one row per trial.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Worker threads (defaults to RAYON_NUM_THREADS or the core count).
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_ATTEMPTS)]
        attempts: usize,
        #[arg(long)]
        json: bool,
    },
    /// Split one block of the partition and write the refined graphon.
    Refine {
        file: PathBuf,
        /// Block to split, 1-based.
        #[arg(long)]
        block: usize,
        /// Split point, strictly inside the block ("p/q" or decimal).
        #[arg(long)]
        at: String,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Input problems exit with 2, unsuccessful outcomes with 1.
enum Failure {
    Input(Error),
    Outcome(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { file, json } => {
            let report = analyze(&load_graphon(file)?);
            if json {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("plain JSON"));
            } else {
                print!("{report}");
            }
        }
        Command::Sample { file, n, seed, out } => {
            let g = sample_graph(&load_graphon(file)?, n, seed);
            save_graph(&out, &g)?;
            println!("wrote {} nodes, {} edges to {}", g.n(), g.edges().len(), out.display());
        }
        Command::Decompose { file, n, seed, saturated, attempts } => {
            let w = load_graphon(file)?;
            let g = sample_graph(&w, n, seed);
            println!(
                "oracle: {}",
                if graph_has_decomposition(&g) { "decomposition exists" } else { "no decomposition" }
            );
            let run = run_pipeline(&w, None, &g, seed, attempts, saturated);
            println!("x interior: {}", run.x_interior);
            if let Some(a) = &run.a {
                println!("A (scale {}):", a.scale());
                for row in a.counts() {
                    println!("  {}", row.iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
                }
            }
            match run.outcome.as_ref().and_then(|o| o.decomposition.as_ref()) {
                Some(h) => {
                    println!("decomposition: {} cycles (nodes 0-based)", h.cycles().len());
                    for c in h.cycles() {
                        println!("  {}", c.iter().map(usize::to_string).collect::<Vec<_>>().join(" -> "));
                    }
                }
                None => {
                    let why = run.failure.unwrap_or_else(|| "no decomposition found".into());
                    return Err(Failure::Outcome(format!("constructive pipeline failed: {why}")));
                }
            }
        }
        Command::Montecarlo { file, n, trials, seed, csv, threads, attempts, json } => {
            let w = load_graphon(file)?;
            let mut config = MonteCarloConfig::new(n, trials, seed);
            config.threads = threads;
            config.attempts = attempts;
            let report = montecarlo(&w, &config)?;
            if let Some(path) = csv {
                std::fs::write(&path, report.to_csv()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("plain JSON"));
            } else {
                println!("n = {}, trials = {}, seed = {}", report.n, report.trials, report.master_seed);
                println!(
                    "oracle: {}/{} = {:.4} (95% CI {:.4}-{:.4})",
                    report.successes_oracle, report.trials, report.estimate, report.ci_low, report.ci_high
                );
                println!(
                    "constructive: {}/{} = {:.4} (95% CI {:.4}-{:.4})",
                    report.successes_constructive,
                    report.trials,
                    report.constructive_estimate,
                    report.constructive_ci_low,
                    report.constructive_ci_high
                );
                println!("x interior: {}/{}", report.x_interior, report.trials);
            }
            if report.witness_violations > 0 {
                return Err(Failure::Outcome(format!(
                    "{} unconfirmed constructive witnesses",
                    report.witness_violations
                )));
            }
        }
        Command::Refine { file, block, at, out } => {
            let w = load_graphon(file)?;
            let t = parse_rational(&at)?;
            if block == 0 {
                return Err(Error::InvalidRefinement("blocks are numbered from 1".into()).into());
            }
            let rec = refine_once(&w, block - 1, &t)?;
            save_graphon(&out, &rec.refined)?;
            let sigma: Vec<String> = rec.refined.partition().breakpoints().iter().map(format_rational).collect();
            println!("sigma = ({}) written to {}", sigma.join(", "), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Outcome(msg)) => {
            eprintln!("hprop: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("hprop: {e}");
            ExitCode::from(2)
        }
    }
}
