//! Search for a minimal consistent PLTL⁺ formula.
//!
//! Sizes are explored in increasing order. For each size the enumerator
//! builds the retained formulas, the threshold search model checks them on
//! every chain, and formulas that cannot separate the sample on their own
//! are scored and combined pairwise. The search stops once the size being
//! enumerated exceeds the best solution found, or the size limit.

pub mod cover;
pub mod enumerate;
pub mod stats;
pub mod threshold;

use std::collections::HashSet;
use std::fmt;
use std::time::Instant;

use thiserror::Error;

use crate::dtmc::{Sample, SampleError};
use crate::engine::{check_ltl, EngineError};
use crate::ltl::{Ltl, Pltl};

use cover::{unsuitable, CoverSearch, ScoredCandidate};
use enumerate::Enumerator;
use stats::{RunStats, SizeStats};
use threshold::{pts, PtsOutcome};

pub const DEFAULT_MAX_DEPTH: usize = 2;
pub const DEFAULT_DELTA: f64 = 0.05;
pub const DEFAULT_BOOL_LIMIT: usize = 10;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("the proposition universe is empty")]
    EmptyAp,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error("model checking {formula} on {chain} failed: {source}")]
    Engine {
        formula: String,
        chain: String,
        source: EngineError,
    },
    #[error("learned formula {formula} failed re-verification")]
    Unsound { formula: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// `K`: largest formula size searched.
    pub max_size: usize,
    /// `D`: largest temporal depth.
    pub max_depth: usize,
    /// `delta`: margin a threshold atom must exceed.
    pub delta: f64,
    /// `L`: atoms used as the fixed side of combinations.
    pub bool_limit: usize,
    /// Worker threads for model checking; 0 uses the global pool.
    pub jobs: usize,
    /// Stop at the first solution of any kind.
    pub eager_return: bool,
    /// Also report other solutions of the minimal size.
    pub all_minimal: bool,
}

impl Config {
    pub fn new(max_size: usize) -> Self {
        Config {
            max_size,
            max_depth: DEFAULT_MAX_DEPTH,
            delta: DEFAULT_DELTA,
            bool_limit: DEFAULT_BOOL_LIMIT,
            jobs: 0,
            eager_return: false,
            all_minimal: false,
        }
    }

    pub fn validate(&self) -> Result<(), LearnError> {
        if self.max_size < 1 {
            return Err(LearnError::Config("max size must be at least 1".into()));
        }
        if !(self.delta > 0.0 && self.delta < 0.1) {
            return Err(LearnError::Config(format!(
                "delta must lie in (0, 0.1), got {}",
                self.delta
            )));
        }
        if self.bool_limit < 1 {
            return Err(LearnError::Config("bool limit must be at least 1".into()));
        }
        Ok(())
    }
}

/// Which procedure produced a formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Threshold,
    Combination,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Threshold => "threshold",
            Source::Combination => "combination",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Learned {
    pub formula: Pltl,
    /// `p - n` of the body; combinations have none.
    pub margin: Option<f64>,
    pub source: Source,
}

impl Learned {
    pub fn size(&self) -> usize {
        self.formula.size()
    }
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Solution {
        formulas: Vec<Learned>,
        stats: RunStats,
    },
    NoSolution {
        max_size: usize,
        max_depth: usize,
        delta: f64,
        stats: RunStats,
    },
}

impl Outcome {
    pub fn stats(&self) -> &RunStats {
        match self {
            Outcome::Solution { stats, .. } | Outcome::NoSolution { stats, .. } => stats,
        }
    }

    pub fn formulas(&self) -> &[Learned] {
        match self {
            Outcome::Solution { formulas, .. } => formulas,
            Outcome::NoSolution { .. } => &[],
        }
    }
}

/// The no-solution certificate.
pub fn no_solution_message(max_size: usize, max_depth: usize, delta: f64) -> String {
    format!("no formula in the search space (K={max_size}, D={max_depth}, δ={delta})")
}

/// Per-chain satisfaction of `phi` at the initial state, by direct model
/// checking of every atom.
pub fn evaluate_pltl(phi: &Pltl, sample: &Sample) -> Result<Vec<(bool, bool)>, LearnError> {
    let mut out = Vec::with_capacity(sample.len());
    for (idx, (positive, m)) in sample.chains().enumerate() {
        let mut error = None;
        let holds = phi.eval_with(&mut |r, body: &Ltl| match check_ltl(m, body) {
            Ok(v) => v.initial() > r,
            Err(source) => {
                error.get_or_insert(LearnError::Engine {
                    formula: body.to_string(),
                    chain: chain_name(positive, idx, sample),
                    source,
                });
                false
            }
        });
        if let Some(e) = error {
            return Err(e);
        }
        out.push((positive, holds));
    }
    Ok(out)
}

fn chain_name(positive: bool, idx: usize, sample: &Sample) -> String {
    if positive {
        format!("positive #{idx}")
    } else {
        format!("negative #{}", idx - sample.positives().len())
    }
}

/// True iff `phi` holds on every positive and on no negative.
pub fn check_consistency(phi: &Pltl, sample: &Sample) -> Result<bool, LearnError> {
    Ok(evaluate_pltl(phi, sample)?
        .into_iter()
        .all(|(positive, holds)| positive == holds))
}

/// Evolving state of one learning run.
#[derive(Debug)]
pub struct SearchState<'s> {
    sample: &'s Sample,
    config: Config,
    enumerator: Enumerator,
    heap: CoverSearch,
    discarded: Vec<HashSet<Ltl>>,
    best: Option<(usize, Vec<Learned>)>,
    next_size: usize,
    done: bool,
    stats: RunStats,
}

impl<'s> SearchState<'s> {
    pub fn new(sample: &'s Sample, config: Config) -> Result<Self, LearnError> {
        config.validate()?;
        Ok(SearchState {
            enumerator: Enumerator::new(sample.ap(), config.max_depth)?,
            heap: CoverSearch::new(config.bool_limit),
            discarded: vec![HashSet::new()],
            best: None,
            next_size: 1,
            done: false,
            stats: RunStats::default(),
            sample,
            config,
        })
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn enumerator(&self) -> &Enumerator {
        &self.enumerator
    }

    /// Formulas discarded at size `n`.
    pub fn discarded(&self, n: usize) -> Option<&HashSet<Ltl>> {
        self.discarded.get(n)
    }

    pub fn heap(&self) -> &CoverSearch {
        &self.heap
    }

    pub fn best_size(&self) -> Option<usize> {
        self.best.as_ref().map(|(s, _)| *s)
    }

    pub fn stats(&self) -> &RunStats {
        &self.stats
    }

    /// Largest size still worth enumerating or combining into.
    fn bound(&self) -> usize {
        match self.best_size() {
            None => self.config.max_size,
            Some(s) if self.config.all_minimal => s.min(self.config.max_size),
            Some(s) => (s - 1).min(self.config.max_size),
        }
    }

    fn offer(&mut self, learned: Learned) {
        let size = learned.size();
        match &mut self.best {
            Some((best, list)) if *best == size => {
                let printed = learned.formula.to_string();
                if self.config.all_minimal && list.iter().all(|l| l.formula.to_string() != printed)
                {
                    list.push(learned);
                }
            }
            Some((best, _)) if *best < size => {}
            _ => self.best = Some((size, vec![learned])),
        }
    }

    /// Run one size. Returns false once the search is over.
    pub fn step(&mut self) -> Result<bool, LearnError> {
        let n = self.next_size;
        if self.done || n > self.bound() {
            self.done = true;
            return Ok(false);
        }

        let start = Instant::now();
        let mut row = SizeStats {
            size: n,
            ..SizeStats::default()
        };
        if n == 1 {
            row.constructed = self.enumerator.formulas(1).len();
            row.checked = row.constructed;
        } else {
            let counts = self.enumerator.grow();
            row.constructed = counts.constructed;
            row.pruned_temporal = counts.pruned_temporal;
            row.pruned_boolean = counts.pruned_boolean;
            row.pruned_duplicate = counts.pruned_duplicate;
            row.checked = counts.retained;
        }
        self.stats.timings.enumerate += start.elapsed();

        let start = Instant::now();
        let outcome = pts(self.enumerator.level(n), self.sample, self.config.delta)?;
        self.stats.engine_calls += row.checked * self.sample.len();
        self.stats.timings.threshold += start.elapsed();

        match outcome {
            PtsOutcome::Found(atoms) => {
                let top = atoms[0].threshold.margin();
                for atom in atoms {
                    if !self.config.all_minimal && atom.threshold.margin() < top {
                        break;
                    }
                    self.offer(Learned {
                        formula: atom.formula(),
                        margin: Some(atom.threshold.margin()),
                        source: Source::Threshold,
                    });
                }
                self.discarded.push(HashSet::new());
                self.done = true;
            }
            PtsOutcome::Partition { discarded, pool } => {
                let start = Instant::now();
                row.discarded = discarded.len();
                row.pooled = pool.len();
                self.enumerator.remove(n, &discarded);
                self.discarded.push(discarded);
                let scored: Vec<ScoredCandidate> = pool
                    .iter()
                    .filter(|e| !unsuitable(e))
                    .map(ScoredCandidate::new)
                    .collect();
                row.scored = scored.len();
                self.heap.extend(scored);
                for combo in self.heap.search(self.bound(), self.config.all_minimal) {
                    self.offer(Learned {
                        formula: combo.formula,
                        margin: None,
                        source: Source::Combination,
                    });
                }
                if self.config.eager_return && self.best.is_some() {
                    self.done = true;
                }
                self.stats.timings.cover += start.elapsed();
            }
        }
        self.stats.sizes.push(row);
        self.next_size += 1;
        Ok(!self.done)
    }

    /// Re-verify the best solution and report.
    pub fn finish(mut self) -> Result<Outcome, LearnError> {
        let start = Instant::now();
        let result = match self.best.take() {
            None => Outcome::NoSolution {
                max_size: self.config.max_size,
                max_depth: self.config.max_depth,
                delta: self.config.delta,
                stats: RunStats::default(),
            },
            Some((_, formulas)) => {
                for l in &formulas {
                    self.stats.engine_calls += l.formula.atoms().len() * self.sample.len();
                    if l.size() > self.config.max_size
                        || !check_consistency(&l.formula, self.sample)?
                    {
                        return Err(LearnError::Unsound {
                            formula: l.formula.to_string(),
                        });
                    }
                }
                Outcome::Solution {
                    formulas,
                    stats: RunStats::default(),
                }
            }
        };
        self.stats.timings.verify += start.elapsed();
        Ok(match result {
            Outcome::Solution { formulas, .. } => Outcome::Solution {
                formulas,
                stats: self.stats,
            },
            Outcome::NoSolution {
                max_size,
                max_depth,
                delta,
                ..
            } => Outcome::NoSolution {
                max_size,
                max_depth,
                delta,
                stats: self.stats,
            },
        })
    }
}

/// Learn a minimal consistent formula of size at most `config.max_size`.
pub fn learn(sample: &Sample, config: &Config) -> Result<Outcome, LearnError> {
    let run = || {
        let mut state = SearchState::new(sample, config.clone())?;
        while state.step()? {}
        state.finish()
    };
    if config.jobs == 0 {
        return run();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| LearnError::Config(format!("worker pool: {e}")))?
        .install(run)
}
