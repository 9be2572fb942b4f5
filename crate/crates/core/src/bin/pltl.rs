use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pltl_learn::bench::{generate, GenParams};
use pltl_learn::engine::check_ltl;
use pltl_learn::learner::{learn, no_solution_message, Outcome};
use pltl_learn::ltl::parse_ltl;
use pltl_learn::manifest::{load_chain, load_sample};

/// Learn minimal probabilistic LTL formulas separating Markov chains.
#[derive(Parser)]
#[command(name = "pltl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a formula from a sample manifest.
    Learn {
        #[arg(long)]
        sample: PathBuf,
        /// Largest formula size (K); required unless the manifest sets it.
        #[arg(long)]
        max_size: Option<usize>,
        /// Largest temporal depth (D).
        #[arg(long)]
        max_depth: Option<usize>,
        /// Margin a threshold atom must exceed.
        #[arg(long)]
        delta: Option<f64>,
        /// Atoms used as the fixed side of Boolean combinations (L).
        #[arg(long)]
        bool_limit: Option<usize>,
        /// Worker threads for model checking (default: all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Print per-size search counts.
        #[arg(long)]
        stats: bool,
        /// Report every solution of the minimal size.
        #[arg(long)]
        all_minimal: bool,
        /// Stop at the first solution found.
        #[arg(long)]
        eager_return: bool,
    },
    /// Print the satisfaction probability of an LTL formula on one chain.
    Check {
        /// A `.json` chain, or a `.tra` file next to its `.lab` file.
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Write a generated sample and its manifest.
    Benchgen {
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Generator parameter, `key=value`; repeatable.
        #[arg(long = "param", value_parser = GenParams::parse_pair)]
        params: Vec<(String, String)>,
    },
}

const EXIT_NO_SOLUTION: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INPUT)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Learn {
            sample,
            max_size,
            max_depth,
            delta,
            bool_limit,
            jobs,
            stats,
            all_minimal,
            eager_return,
        } => {
            let loaded = match load_sample(&sample) {
                Ok(l) => l,
                Err(e) => return fail(e),
            };
            let Some(mut config) = loaded.config(max_size) else {
                return fail("--max-size is required when the manifest does not set max_size");
            };
            config.max_depth = max_depth.unwrap_or(config.max_depth);
            config.delta = delta.unwrap_or(config.delta);
            config.bool_limit = bool_limit.unwrap_or(config.bool_limit);
            config.jobs = jobs;
            config.all_minimal = all_minimal;
            config.eager_return = eager_return;
            let outcome = match learn(&loaded.sample, &config) {
                Ok(o) => o,
                Err(e) => return fail(e),
            };
            let code = match &outcome {
                Outcome::Solution { formulas, .. } => {
                    for (i, l) in formulas.iter().enumerate() {
                        if i > 0 {
                            println!();
                        }
                        println!("formula: {}", l.formula);
                        println!("size: {}", l.size());
                        match l.margin {
                            Some(m) => println!("margin: {m:.6}"),
                            None => println!("margin: n/a"),
                        }
                        println!("source: {}", l.source);
                    }
                    ExitCode::SUCCESS
                }
                Outcome::NoSolution {
                    max_size,
                    max_depth,
                    delta,
                    ..
                } => {
                    println!("{}", no_solution_message(*max_size, *max_depth, *delta));
                    ExitCode::from(EXIT_NO_SOLUTION)
                }
            };
            if stats {
                println!();
                println!("{}", outcome.stats());
                eprintln!("{}", outcome.stats().timing_report());
            }
            code
        }
        Command::Check { model, formula } => {
            let m = match load_chain(&model) {
                Ok(m) => m,
                Err(e) => return fail(e),
            };
            let phi = match parse_ltl(&formula) {
                Ok(f) => f,
                Err(e) => return fail(format!("formula: {e}")),
            };
            match check_ltl(&m, &phi) {
                Ok(v) => {
                    for (s, p) in v.values().iter().enumerate() {
                        println!("state {s}: {p:.9}");
                    }
                    println!("v_I = {:.9}", v.initial());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Benchgen {
            name,
            seed,
            out,
            params,
        } => {
            let mut gp = GenParams::new();
            for (k, v) in params {
                gp.set(k, v);
            }
            let written = generate(&name, seed, &gp).and_then(|g| {
                let path = g.write(&out)?;
                Ok((g, path))
            });
            match written {
                Ok((g, path)) => {
                    println!("planted: {}", g.planted);
                    println!("manifest: {}", path.display());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
    }
}
