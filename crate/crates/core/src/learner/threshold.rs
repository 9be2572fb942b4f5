//! Probabilistic threshold search over one enumerated size.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::dtmc::{Dtmc, Sample};
use crate::engine::check_ltl;
use crate::ltl::{Ltl, Pltl};

use super::enumerate::print_order;
use super::LearnError;

/// Vectors within this distance of all-zero or all-one count as constant.
pub const CONSTANT_TOLERANCE: f64 = 1e-12;

/// Least positive and greatest negative initial-state probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdResult {
    pub min_positive: f64,
    pub max_negative: f64,
}

impl ThresholdResult {
    pub fn from_values(positives: &[f64], negatives: &[f64]) -> Self {
        ThresholdResult {
            min_positive: positives.iter().copied().fold(f64::INFINITY, f64::min),
            max_negative: negatives.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn margin(&self) -> f64 {
        self.min_positive - self.max_negative
    }

    pub fn midpoint(&self) -> f64 {
        (self.min_positive + self.max_negative) / 2.0
    }

    pub fn is_consistent(&self, delta: f64) -> bool {
        self.margin() > delta
    }
}

/// What one formula evaluates to on one chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainEval {
    pub initial: f64,
    pub all_zero: bool,
    pub all_one: bool,
}

/// A formula with its evaluation on every chain of the sample.
#[derive(Debug, Clone)]
pub struct FormulaEval {
    pub formula: Ltl,
    pub positives: Vec<ChainEval>,
    pub negatives: Vec<ChainEval>,
}

impl FormulaEval {
    pub fn positive_values(&self) -> Vec<f64> {
        self.positives.iter().map(|e| e.initial).collect()
    }

    pub fn negative_values(&self) -> Vec<f64> {
        self.negatives.iter().map(|e| e.initial).collect()
    }

    pub fn threshold(&self) -> ThresholdResult {
        ThresholdResult::from_values(&self.positive_values(), &self.negative_values())
    }

    /// Zero everywhere on every positive chain, or one everywhere on every
    /// negative chain. Such a formula cannot occur in a minimal consistent
    /// formula.
    pub fn is_inconsistent(&self) -> bool {
        self.positives.iter().all(|e| e.all_zero) || self.negatives.iter().all(|e| e.all_one)
    }
}

/// A consistent threshold atom found by the search.
#[derive(Debug, Clone)]
pub struct FoundAtom {
    pub body: Ltl,
    pub threshold: ThresholdResult,
}

impl FoundAtom {
    pub fn formula(&self) -> Pltl {
        Pltl::atom(self.threshold.midpoint(), self.body.clone())
    }
}

/// A formula kept for Boolean combination, with its initial-state values.
#[derive(Debug, Clone)]
pub struct PoolEntry {
    pub formula: Ltl,
    pub positives: Vec<f64>,
    pub negatives: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum PtsOutcome {
    /// Every consistent atom of this size, by decreasing margin.
    Found(Vec<FoundAtom>),
    /// No formula separates the sample.
    Partition {
        discarded: HashSet<Ltl>,
        pool: Vec<PoolEntry>,
    },
}

fn eval_chain(
    formula: &Ltl,
    m: &Dtmc,
    label: impl Fn() -> String,
) -> Result<ChainEval, LearnError> {
    let v = check_ltl(m, formula).map_err(|source| LearnError::Engine {
        formula: formula.to_string(),
        chain: label(),
        source,
    })?;
    Ok(ChainEval {
        initial: v.initial(),
        all_zero: v.is_all_zero(CONSTANT_TOLERANCE),
        all_one: v.is_all_one(CONSTANT_TOLERANCE),
    })
}

/// Evaluate formulas on every chain. Engine calls run in parallel on the
/// current rayon pool; results keep the input order.
pub fn evaluate(formulas: &[Ltl], sample: &Sample) -> Result<Vec<FormulaEval>, LearnError> {
    formulas
        .par_iter()
        .map(|f| {
            let positives = sample
                .positives()
                .par_iter()
                .enumerate()
                .map(|(i, m)| eval_chain(f, m, || format!("positive #{i}")))
                .collect::<Result<Vec<_>, _>>()?;
            let negatives = sample
                .negatives()
                .par_iter()
                .enumerate()
                .map(|(i, m)| eval_chain(f, m, || format!("negative #{i}")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(FormulaEval {
                formula: f.clone(),
                positives,
                negatives,
            })
        })
        .collect()
}

/// Check `F_n` (given by depth) against the sample.
///
/// Formulas are visited depth by depth, each depth in printed order.
pub fn pts(by_depth: &[Vec<Ltl>], sample: &Sample, delta: f64) -> Result<PtsOutcome, LearnError> {
    let ordered: Vec<Ltl> = by_depth.iter().flat_map(|set| print_order(set)).collect();
    let evals = evaluate(&ordered, sample)?;
    Ok(classify(evals, delta))
}

/// Split evaluated formulas into consistent atoms, discarded formulas and
/// the Boolean-combination pool.
pub fn classify(evals: Vec<FormulaEval>, delta: f64) -> PtsOutcome {
    let mut found: Vec<FoundAtom> = evals
        .iter()
        .filter_map(|e| {
            let t = e.threshold();
            t.is_consistent(delta).then(|| FoundAtom {
                body: e.formula.clone(),
                threshold: t,
            })
        })
        .collect();
    if !found.is_empty() {
        // stable: equal margins keep the visiting order
        found.sort_by(|a, b| b.threshold.margin().total_cmp(&a.threshold.margin()));
        return PtsOutcome::Found(found);
    }
    let mut discarded = HashSet::new();
    let mut pool = Vec::new();
    for e in evals {
        if e.is_inconsistent() {
            discarded.insert(e.formula);
        } else {
            pool.push(PoolEntry {
                positives: e.positive_values(),
                negatives: e.negative_values(),
                formula: e.formula,
            });
        }
    }
    PtsOutcome::Partition { discarded, pool }
}
