//! Probabilistic LTL model checking on DTMCs.
//!
//! [`check_ltl`] resolves temporal subformulas innermost-first. Each one has
//! propositional operands at the time it is resolved, so its per-state
//! probability is a one-step sum or an until probability; the chain is then
//! refined so that the subformula's truth becomes a state label. Once the
//! whole formula is propositional, its probability at an original state is
//! the total weight of the copies satisfying it.

mod linear;
pub mod oracle;
mod reach;
mod refine;

use std::collections::HashMap;

use thiserror::Error;

use crate::dtmc::{Chain, Dtmc};
use crate::ltl::{Ltl, LtlKind};

pub use linear::{solve_linear, LinearError, PIVOT_EPSILON};
pub use reach::{finally_prob, globally_prob, next_prob, until_prob};
pub use refine::{Prophecy, RefinedChain, MIN_FACTOR};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error("probability {value} at state {state} is outside [0, 1]")]
    OutOfRange { state: usize, value: f64 },
}

/// Per-state satisfaction probabilities of one formula on one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    values: Vec<f64>,
    init: usize,
}

impl ProbVector {
    pub fn new(values: Vec<f64>, init: usize) -> Self {
        ProbVector { values, init }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, state: usize) -> f64 {
        self.values[state]
    }

    /// Probability at the initial state.
    pub fn initial(&self) -> f64 {
        self.values[self.init]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_all_zero(&self, tol: f64) -> bool {
        self.values.iter().all(|v| *v <= tol)
    }

    pub fn is_all_one(&self, tol: f64) -> bool {
        self.values.iter().all(|v| *v >= 1.0 - tol)
    }
}

/// Propositional formula over refined-chain label columns.
#[derive(Debug, Clone)]
enum Column {
    Lit(usize, bool),
    And(Box<Column>, Box<Column>),
    Or(Box<Column>, Box<Column>),
}

impl Column {
    fn eval(&self, chain: &RefinedChain, state: usize) -> bool {
        match self {
            Column::Lit(c, positive) => chain.label(state, *c) == *positive,
            Column::And(l, r) => l.eval(chain, state) && r.eval(chain, state),
            Column::Or(l, r) => l.eval(chain, state) || r.eval(chain, state),
        }
    }

    fn states(&self, chain: &RefinedChain) -> Vec<bool> {
        (0..chain.num_states())
            .map(|s| self.eval(chain, s))
            .collect()
    }
}

struct Resolver<'a, F: FnMut(&RefinedChain)> {
    chain: RefinedChain,
    props: HashMap<&'a str, usize>,
    resolved: HashMap<Ltl, usize>,
    inspect: F,
}

impl<'a, F: FnMut(&RefinedChain)> Resolver<'a, F> {
    fn resolve(&mut self, f: &'a Ltl) -> Result<Column, EngineError> {
        let pair = |l, r| (Box::new(l), Box::new(r));
        match f.kind() {
            LtlKind::Literal { prop, positive } => Ok(Column::Lit(self.props[&**prop], *positive)),
            LtlKind::And(l, r) => {
                let (l, r) = pair(self.resolve(l)?, self.resolve(r)?);
                Ok(Column::And(l, r))
            }
            LtlKind::Or(l, r) => {
                let (l, r) = pair(self.resolve(l)?, self.resolve(r)?);
                Ok(Column::Or(l, r))
            }
            _ => {
                if let Some(&c) = self.resolved.get(f) {
                    return Ok(Column::Lit(c, true));
                }
                let next = match f.kind() {
                    LtlKind::Next(c) => {
                        let a = self.resolve(c)?.states(&self.chain);
                        let p = next_prob(&self.chain, &a);
                        self.chain.refine(Prophecy::Next(&a), &p)?
                    }
                    LtlKind::Finally(c) => {
                        let a = self.resolve(c)?.states(&self.chain);
                        let p = finally_prob(&self.chain, &a)?;
                        self.chain.refine(Prophecy::Finally(&a), &p)?
                    }
                    LtlKind::Globally(c) => {
                        let a = self.resolve(c)?.states(&self.chain);
                        let p = globally_prob(&self.chain, &a)?;
                        self.chain.refine(Prophecy::Globally(&a), &p)?
                    }
                    LtlKind::Until(l, r) => {
                        // resolving `r` may refine the chain again, so both
                        // operands are read off the final chain
                        let (l, r) = (self.resolve(l)?, self.resolve(r)?);
                        let a = l.states(&self.chain);
                        let b = r.states(&self.chain);
                        let p = until_prob(&self.chain, &a, &b)?;
                        self.chain.refine(Prophecy::Until(&a, &b), &p)?
                    }
                    _ => unreachable!("boolean and literal nodes handled above"),
                };
                self.chain = next;
                (self.inspect)(&self.chain);
                let column = self.chain.num_columns() - 1;
                self.resolved.insert(f.clone(), column);
                Ok(Column::Lit(column, true))
            }
        }
    }
}

/// `V(s) = Pr_s(phi)` for every state of `m`.
pub fn check_ltl(m: &Dtmc, phi: &Ltl) -> Result<ProbVector, EngineError> {
    check_ltl_inspect(m, phi, |_| {})
}

/// [`check_ltl`], calling `inspect` on every refined chain it builds.
pub fn check_ltl_inspect(
    m: &Dtmc,
    phi: &Ltl,
    inspect: impl FnMut(&RefinedChain),
) -> Result<ProbVector, EngineError> {
    let names = phi.propositions();
    let columns: Vec<Vec<bool>> = names.iter().map(|n| m.prop_states(n)).collect();
    let props = names.iter().enumerate().map(|(i, n)| (&**n, i)).collect();
    let mut resolver = Resolver {
        chain: RefinedChain::from_dtmc(m, &columns),
        props,
        resolved: HashMap::new(),
        inspect,
    };
    let prop = resolver.resolve(phi)?;
    let truth = prop.states(&resolver.chain);
    Ok(ProbVector::new(resolver.chain.fold_back(&truth), m.init()))
}
