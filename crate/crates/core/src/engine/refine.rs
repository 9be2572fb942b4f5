//! Prophecy refinement.
//!
//! Given a chain and a temporal formula `psi` with propositional operands,
//! every state `s` is split into `(s, 1)` and `(s, 0)`: the chain conditioned
//! on `psi` holding, respectively failing, along the path from `s`. The
//! conditioned process is again a Markov chain, and the truth of `psi`
//! becomes a state label. Repeating this innermost-first turns any formula of
//! the enumeration grammar into a propositional one.

use super::EngineError;
use crate::dtmc::{Chain, Dtmc};

/// Copies whose conditional probability falls below this are dropped.
pub const MIN_FACTOR: f64 = 1e-12;

/// Slack accepted on probability inputs before they are clamped.
const RANGE_SLACK: f64 = 1e-9;

/// Temporal formula being resolved, with its operands evaluated per state.
#[derive(Debug, Clone, Copy)]
pub enum Prophecy<'a> {
    Next(&'a [bool]),
    Finally(&'a [bool]),
    Globally(&'a [bool]),
    Until(&'a [bool], &'a [bool]),
}

impl Prophecy<'_> {
    /// Truth of the formula at `s` given its truth `next_truth` at the
    /// successor `t`.
    fn holds(&self, s: usize, t: usize, next_truth: bool) -> bool {
        match *self {
            Prophecy::Next(a) => a[t],
            Prophecy::Finally(a) => a[s] || next_truth,
            Prophecy::Globally(a) => a[s] && next_truth,
            Prophecy::Until(a, b) => b[s] || (a[s] && next_truth),
        }
    }
}

/// A chain whose states are copies of original states, each carrying the
/// prophesied truth values of the formulas resolved so far.
#[derive(Debug, Clone)]
pub struct RefinedChain {
    original_states: usize,
    origin: Vec<usize>,
    prophecy: Vec<Vec<bool>>,
    weight: Vec<f64>,
    /// `labels[state][column]`: base propositions, then one fresh column per
    /// resolved formula.
    labels: Vec<Vec<bool>>,
    rows: Vec<Vec<(usize, f64)>>,
}

impl RefinedChain {
    /// The unrefined chain with the given proposition columns,
    /// `columns[c][s]`.
    pub fn from_dtmc(m: &Dtmc, columns: &[Vec<bool>]) -> Self {
        let n = m.num_states();
        RefinedChain {
            original_states: n,
            origin: (0..n).collect(),
            prophecy: vec![Vec::new(); n],
            weight: vec![1.0; n],
            labels: (0..n)
                .map(|s| columns.iter().map(|c| c[s]).collect())
                .collect(),
            rows: (0..n).map(|s| m.successors(s).to_vec()).collect(),
        }
    }

    pub fn original_states(&self) -> usize {
        self.original_states
    }

    pub fn origin(&self, state: usize) -> usize {
        self.origin[state]
    }

    pub fn prophecy(&self, state: usize) -> &[bool] {
        &self.prophecy[state]
    }

    pub fn weight(&self, state: usize) -> f64 {
        self.weight[state]
    }

    pub fn num_columns(&self) -> usize {
        self.labels.first().map_or(0, Vec::len)
    }

    pub fn label(&self, state: usize, column: usize) -> bool {
        self.labels[state][column]
    }

    pub fn column(&self, column: usize) -> Vec<bool> {
        self.labels.iter().map(|l| l[column]).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|(_, p)| p).sum())
            .collect()
    }

    /// Sum of copy weights per original state.
    pub fn weight_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.original_states];
        for (s, w) in self.origin.iter().zip(&self.weight) {
            sums[*s] += w;
        }
        sums
    }

    /// Largest deviation from one among row sums and per-state weight sums.
    pub fn stochastic_defect(&self) -> f64 {
        self.row_sums()
            .into_iter()
            .chain(self.weight_sums())
            .map(|v| (v - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `V(s) = sum of weight(t)` over copies `t` of `s` with `truth[t]`.
    pub fn fold_back(&self, truth: &[bool]) -> Vec<f64> {
        let mut v = vec![0.0; self.original_states];
        for t in 0..self.rows.len() {
            if truth[t] {
                v[self.origin[t]] += self.weight[t];
            }
        }
        v.into_iter().map(|x| x.clamp(0.0, 1.0)).collect()
    }

    /// Split every state on the truth of `psi`, where `p[t] = Pr_t(psi)`.
    /// The new truth column is appended last.
    pub fn refine(&self, psi: Prophecy<'_>, p: &[f64]) -> Result<RefinedChain, EngineError> {
        let n = self.rows.len();
        let mut factor = Vec::with_capacity(n);
        for (state, &v) in p.iter().enumerate() {
            if !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&v) || v.is_nan() {
                return Err(EngineError::OutOfRange { state, value: v });
            }
            let v = v.clamp(0.0, 1.0);
            factor.push([1.0 - v, v]);
        }

        // copy index of (t, truth)
        let mut slot = vec![[usize::MAX; 2]; n];
        let mut out = RefinedChain {
            original_states: self.original_states,
            origin: Vec::new(),
            prophecy: Vec::new(),
            weight: Vec::new(),
            labels: Vec::new(),
            rows: Vec::new(),
        };
        for t in 0..n {
            for truth in [true, false] {
                let f = factor[t][usize::from(truth)];
                if f < MIN_FACTOR {
                    continue;
                }
                slot[t][usize::from(truth)] = out.origin.len();
                out.origin.push(self.origin[t]);
                let mut bits = self.prophecy[t].clone();
                bits.push(truth);
                out.prophecy.push(bits);
                out.weight.push(self.weight[t] * f);
                let mut label = self.labels[t].clone();
                label.push(truth);
                out.labels.push(label);
            }
        }
        for t in 0..n {
            for truth in [true, false] {
                if slot[t][usize::from(truth)] == usize::MAX {
                    continue;
                }
                let denom = factor[t][usize::from(truth)];
                let mut row = Vec::new();
                for &(u, prob) in &self.rows[t] {
                    for next_truth in [true, false] {
                        let target = slot[u][usize::from(next_truth)];
                        if target == usize::MAX || psi.holds(t, u, next_truth) != truth {
                            continue;
                        }
                        let q = prob * factor[u][usize::from(next_truth)] / denom;
                        if q > 0.0 {
                            row.push((target, q));
                        }
                    }
                }
                out.rows.push(row);
            }
        }
        Ok(out)
    }
}

impl Chain for RefinedChain {
    fn num_states(&self) -> usize {
        self.rows.len()
    }

    fn successors(&self, state: usize) -> &[(usize, f64)] {
        &self.rows[state]
    }
}
