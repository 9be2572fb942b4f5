//! Finite labeled discrete-time Markov chains.

mod json;
mod mdp;
mod prism;
mod sample;
mod scc;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

pub use json::{parse_json_dtmc, DtmcDocument};
pub use mdp::{Action, Mdp, Strategy};
pub use prism::parse_prism_explicit;
pub use sample::{Sample, SampleError};
pub use scc::{bsccs, sccs};

/// Allowed deviation of a row sum from one.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Read access to a sparse row-stochastic transition structure.
pub trait Chain {
    fn num_states(&self) -> usize;
    fn successors(&self, state: usize) -> &[(usize, f64)];
}

/// One violated chain invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Issue {
    NoStates,
    InitOutOfRange {
        init: usize,
        states: usize,
    },
    LabelRows {
        labels: usize,
        states: usize,
    },
    UnknownProposition {
        state: usize,
        prop: usize,
    },
    DanglingTarget {
        source: usize,
        target: usize,
    },
    NonPositive {
        source: usize,
        target: usize,
        prob: f64,
    },
    Duplicate {
        source: usize,
        target: usize,
    },
    RowSum {
        state: usize,
        sum: f64,
    },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::NoStates => write!(f, "chain has no states"),
            Issue::InitOutOfRange { init, states } => {
                write!(f, "initial state {init} out of range (states: {states})")
            }
            Issue::LabelRows { labels, states } => {
                write!(f, "{labels} label rows for {states} states")
            }
            Issue::UnknownProposition { state, prop } => {
                write!(f, "state {state} carries unknown proposition index {prop}")
            }
            Issue::DanglingTarget { source, target } => {
                write!(f, "transition {source} -> {target} targets a missing state")
            }
            Issue::NonPositive {
                source,
                target,
                prob,
            } => write!(f, "transition {source} -> {target} has probability {prob}"),
            Issue::Duplicate { source, target } => {
                write!(f, "transition {source} -> {target} listed more than once")
            }
            Issue::RowSum { state, sum } => {
                write!(
                    f,
                    "outgoing probabilities of state {state} sum to {sum}, not 1"
                )
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum DtmcError {
    #[error("{what} line {line}: {msg}")]
    Malformed {
        what: &'static str,
        line: usize,
        msg: String,
    },
    #[error("expected exactly one initial state, found {found}")]
    InitCount { found: usize },
    #[error("invalid chain: {}", join_issues(.0))]
    Invalid(Vec<Issue>),
    #[error("strategy at state {state}: {msg}")]
    Strategy { state: usize, msg: String },
    #[error("malformed JSON chain: {0}")]
    Json(#[from] serde_json::Error),
}

fn join_issues(issues: &[Issue]) -> String {
    issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// A labeled DTMC with dense state indices `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dtmc {
    ap: Vec<String>,
    init: usize,
    labels: Vec<Vec<usize>>,
    rows: Vec<Vec<(usize, f64)>>,
}

impl Dtmc {
    /// Build and validate a chain. `labels[s]` lists indices into `ap`.
    pub fn new(
        ap: Vec<String>,
        init: usize,
        labels: Vec<Vec<usize>>,
        rows: Vec<Vec<(usize, f64)>>,
    ) -> Result<Self, DtmcError> {
        let m = Self::from_parts_unchecked(ap, init, labels, rows);
        m.validate().map_err(DtmcError::Invalid)?;
        Ok(m)
    }

    /// Assemble a chain without checking any invariant. Pair with
    /// [`Dtmc::validate`].
    pub fn from_parts_unchecked(
        ap: Vec<String>,
        init: usize,
        mut labels: Vec<Vec<usize>>,
        rows: Vec<Vec<(usize, f64)>>,
    ) -> Self {
        for l in &mut labels {
            l.sort_unstable();
            l.dedup();
        }
        Dtmc {
            ap,
            init,
            labels,
            rows,
        }
    }

    /// Build from `(source, target, probability)` triples.
    pub fn from_triples(
        ap: Vec<String>,
        init: usize,
        labels: Vec<Vec<usize>>,
        triples: &[(usize, usize, f64)],
    ) -> Result<Self, DtmcError> {
        let n = labels.len();
        let mut rows = vec![Vec::new(); n];
        for &(s, t, p) in triples {
            if s >= n {
                return Err(DtmcError::Invalid(vec![Issue::DanglingTarget {
                    source: s,
                    target: t,
                }]));
            }
            rows[s].push((t, p));
        }
        Self::new(ap, init, labels, rows)
    }

    /// Check every chain invariant, collecting all violations.
    pub fn validate(&self) -> Result<(), Vec<Issue>> {
        let n = self.rows.len();
        let mut issues = Vec::new();
        if n == 0 {
            issues.push(Issue::NoStates);
        }
        if self.init >= n && n > 0 {
            issues.push(Issue::InitOutOfRange {
                init: self.init,
                states: n,
            });
        }
        if self.labels.len() != n {
            issues.push(Issue::LabelRows {
                labels: self.labels.len(),
                states: n,
            });
        }
        for (s, l) in self.labels.iter().enumerate() {
            for &p in l {
                if p >= self.ap.len() {
                    issues.push(Issue::UnknownProposition { state: s, prop: p });
                }
            }
        }
        for (s, row) in self.rows.iter().enumerate() {
            let mut seen = HashSet::new();
            let mut sum = 0.0;
            for &(t, p) in row {
                if t >= n {
                    issues.push(Issue::DanglingTarget {
                        source: s,
                        target: t,
                    });
                }
                if p.is_nan() || p <= 0.0 {
                    issues.push(Issue::NonPositive {
                        source: s,
                        target: t,
                        prob: p,
                    });
                }
                if !seen.insert(t) {
                    issues.push(Issue::Duplicate {
                        source: s,
                        target: t,
                    });
                }
                sum += p;
            }
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                issues.push(Issue::RowSum { state: s, sum });
            }
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(issues)
        }
    }

    pub fn ap(&self) -> &[String] {
        &self.ap
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn labels(&self, state: usize) -> &[usize] {
        &self.labels[state]
    }

    pub fn label_names(&self, state: usize) -> Vec<&str> {
        self.labels[state]
            .iter()
            .map(|&p| self.ap[p].as_str())
            .collect()
    }

    pub fn prop_index(&self, name: &str) -> Option<usize> {
        self.ap.iter().position(|p| p == name)
    }

    /// Per-state truth of a proposition; all false if the name is unknown.
    pub fn prop_states(&self, name: &str) -> Vec<bool> {
        match self.prop_index(name) {
            Some(idx) => self.labels.iter().map(|l| l.contains(&idx)).collect(),
            None => vec![false; self.num_states()],
        }
    }

    pub fn num_transitions(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Transitions as `(source, target, probability)` in row order.
    pub fn triples(&self) -> Vec<(usize, usize, f64)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(s, row)| row.iter().map(move |&(t, p)| (s, t, p)))
            .collect()
    }

    /// Relabel over a new proposition list. Names absent from this chain are
    /// false everywhere; names absent from `ap` are dropped.
    pub fn project(&self, ap: &[String]) -> Dtmc {
        let remap: Vec<Option<usize>> = self
            .ap
            .iter()
            .map(|name| ap.iter().position(|p| p == name))
            .collect();
        let labels = self
            .labels
            .iter()
            .map(|l| l.iter().filter_map(|&p| remap[p]).collect())
            .collect();
        Dtmc::from_parts_unchecked(ap.to_vec(), self.init, labels, self.rows.clone())
    }
}

impl Chain for Dtmc {
    fn num_states(&self) -> usize {
        self.rows.len()
    }

    fn successors(&self, state: usize) -> &[(usize, f64)] {
        &self.rows[state]
    }
}
