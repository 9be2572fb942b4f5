use std::collections::BTreeMap;

use super::{Dtmc, DtmcError, Issue, ROW_SUM_TOLERANCE};

#[derive(Debug, Clone, PartialEq)]
pub struct Action {
    pub name: String,
    pub dist: Vec<(usize, f64)>,
}

/// Memoryless randomized strategy: for each state, a distribution over the
/// names of its available actions.
pub type Strategy = Vec<Vec<(String, f64)>>;

/// A labeled Markov decision process.
#[derive(Debug, Clone)]
pub struct Mdp {
    ap: Vec<String>,
    init: usize,
    labels: Vec<Vec<usize>>,
    actions: Vec<Vec<Action>>,
}

impl Mdp {
    pub fn new(
        ap: Vec<String>,
        init: usize,
        labels: Vec<Vec<usize>>,
        actions: Vec<Vec<Action>>,
    ) -> Result<Self, DtmcError> {
        let n = actions.len();
        let mut issues = Vec::new();
        if labels.len() != n {
            issues.push(Issue::LabelRows {
                labels: labels.len(),
                states: n,
            });
        }
        if init >= n {
            issues.push(Issue::InitOutOfRange { init, states: n });
        }
        for (s, acts) in actions.iter().enumerate() {
            for a in acts {
                let sum: f64 = a.dist.iter().map(|(_, p)| p).sum();
                if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                    issues.push(Issue::RowSum { state: s, sum });
                }
                for &(t, _) in &a.dist {
                    if t >= n {
                        issues.push(Issue::DanglingTarget {
                            source: s,
                            target: t,
                        });
                    }
                }
            }
        }
        if !issues.is_empty() {
            return Err(DtmcError::Invalid(issues));
        }
        Ok(Mdp {
            ap,
            init,
            labels,
            actions,
        })
    }

    pub fn num_states(&self) -> usize {
        self.actions.len()
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn ap(&self) -> &[String] {
        &self.ap
    }

    pub fn labels(&self, state: usize) -> &[usize] {
        &self.labels[state]
    }

    pub fn actions(&self, state: usize) -> &[Action] {
        &self.actions[state]
    }

    /// Chain obtained by resolving every choice with `strategy`:
    /// `P'(s, t) = sum_a strategy(s)(a) * P(s, a, t)`.
    pub fn induced_dtmc(&self, strategy: &[Vec<(String, f64)>]) -> Result<Dtmc, DtmcError> {
        if strategy.len() != self.num_states() {
            return Err(DtmcError::Strategy {
                state: strategy.len().min(self.num_states()),
                msg: format!(
                    "strategy covers {} states, model has {}",
                    strategy.len(),
                    self.num_states()
                ),
            });
        }
        let mut rows = Vec::with_capacity(self.num_states());
        for (s, choice) in strategy.iter().enumerate() {
            let mass: f64 = choice.iter().map(|(_, w)| w).sum();
            if (mass - 1.0).abs() > ROW_SUM_TOLERANCE || choice.iter().any(|(_, w)| *w < 0.0) {
                return Err(DtmcError::Strategy {
                    state: s,
                    msg: format!("action weights sum to {mass}"),
                });
            }
            let mut row: BTreeMap<usize, f64> = BTreeMap::new();
            for (name, w) in choice {
                let action = self.actions[s]
                    .iter()
                    .find(|a| &a.name == name)
                    .ok_or_else(|| DtmcError::Strategy {
                        state: s,
                        msg: format!("action '{name}' is not available"),
                    })?;
                if *w == 0.0 {
                    continue;
                }
                for &(t, p) in &action.dist {
                    *row.entry(t).or_insert(0.0) += w * p;
                }
            }
            rows.push(row.into_iter().filter(|&(_, p)| p > 0.0).collect());
        }
        Dtmc::new(self.ap.clone(), self.init, self.labels.clone(), rows)
    }
}
