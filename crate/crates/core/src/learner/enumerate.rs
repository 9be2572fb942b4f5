//! Grammar-based enumeration of NNF formulas by size and temporal depth.

use std::collections::HashSet;
use std::sync::Arc;

use crate::ltl::{
    boolean_simplify_applies, canonical_order, canonicalize, is_complement, operands,
    temporal_rule, BinaryOp, BoolOp, Ltl, TemporalRule,
};

use super::LearnError;

/// Why a constructed candidate was not retained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    Temporal(TemporalRule),
    Boolean,
    Duplicate,
}

#[derive(Debug, Clone)]
pub struct Rejection {
    pub formula: Ltl,
    pub reason: RejectReason,
}

/// Candidate counts for one enumerated size.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GrowthCounts {
    pub constructed: usize,
    pub pruned_temporal: usize,
    pub pruned_boolean: usize,
    pub pruned_duplicate: usize,
    pub retained: usize,
}

impl GrowthCounts {
    pub fn pruned(&self) -> usize {
        self.pruned_temporal + self.pruned_boolean + self.pruned_duplicate
    }
}

/// Retained formulas `F_n^d`, built bottom-up.
#[derive(Debug, Clone)]
pub struct Enumerator {
    max_depth: usize,
    /// `levels[n][d]`; index 0 is unused.
    levels: Vec<Vec<Vec<Ltl>>>,
    seen: HashSet<Ltl>,
    record_rejections: bool,
    rejections: Vec<Rejection>,
}

impl Enumerator {
    /// Initialize `F_1^0` with every literal over `ap`.
    pub fn new(ap: &[String], max_depth: usize) -> Result<Self, LearnError> {
        if ap.is_empty() {
            return Err(LearnError::EmptyAp);
        }
        let mut first = vec![Vec::new(); max_depth + 1];
        for name in ap {
            let name: Arc<str> = name.as_str().into();
            first[0].push(Ltl::prop(name.clone()));
            first[0].push(Ltl::not_prop(name));
        }
        let seen = first[0].iter().cloned().collect();
        Ok(Enumerator {
            max_depth,
            levels: vec![Vec::new(), first],
            seen,
            record_rejections: false,
            rejections: Vec::new(),
        })
    }

    /// Keep every rejected candidate for later inspection.
    pub fn record_rejections(&mut self, on: bool) {
        self.record_rejections = on;
    }

    pub fn rejections(&self) -> &[Rejection] {
        &self.rejections
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    /// Largest size enumerated so far.
    pub fn size(&self) -> usize {
        self.levels.len() - 1
    }

    /// `F_n` split by depth.
    pub fn level(&self, n: usize) -> &[Vec<Ltl>] {
        &self.levels[n]
    }

    /// `F_n` over all depths, depth-major.
    pub fn formulas(&self, n: usize) -> Vec<Ltl> {
        self.levels[n].iter().flatten().cloned().collect()
    }

    /// Drop formulas from `F_n`; they no longer serve as building blocks.
    pub fn remove(&mut self, n: usize, discarded: &HashSet<Ltl>) {
        for set in &mut self.levels[n] {
            set.retain(|f| !discarded.contains(f));
        }
    }

    fn union_below(&self, n: usize, below: usize) -> Vec<Ltl> {
        self.levels[n][..below.min(self.max_depth + 1)]
            .iter()
            .flatten()
            .cloned()
            .collect()
    }

    fn offer(
        &mut self,
        candidate: Ltl,
        op: Option<BinaryOp>,
        counts: &mut GrowthCounts,
        out: &mut [Vec<Ltl>],
    ) {
        counts.constructed += 1;
        let canon = canonicalize(&candidate);
        let reason = if let Some(rule) = temporal_rule(&canon) {
            Some(RejectReason::Temporal(rule))
        } else if op.is_some_and(|op| redundant_operands(op, &canon)) {
            Some(RejectReason::Boolean)
        } else if self.seen.contains(&canon) {
            Some(RejectReason::Duplicate)
        } else {
            None
        };
        match reason {
            Some(reason) => {
                match reason {
                    RejectReason::Temporal(_) => counts.pruned_temporal += 1,
                    RejectReason::Boolean => counts.pruned_boolean += 1,
                    RejectReason::Duplicate => counts.pruned_duplicate += 1,
                }
                if self.record_rejections {
                    self.rejections.push(Rejection {
                        formula: canon,
                        reason,
                    });
                }
            }
            None => {
                counts.retained += 1;
                self.seen.insert(canon.clone());
                out[canon.depth()].push(canon);
            }
        }
    }

    /// Build `F_{n+1}` from `F_1 .. F_n`.
    pub fn grow(&mut self) -> GrowthCounts {
        let n = self.size();
        let mut counts = GrowthCounts::default();
        let mut out = vec![Vec::new(); self.max_depth + 1];
        for d in 0..=self.max_depth {
            if d >= 1 {
                for phi in self.levels[n][d - 1].clone() {
                    for make in [Ltl::next, Ltl::finally, Ltl::globally] {
                        self.offer(make(phi.clone()), None, &mut counts, &mut out);
                    }
                }
            }
            for k in 1..n {
                if d >= 1 {
                    // either operand may carry depth d - 1
                    let left_deep = self.levels[k][d - 1].clone();
                    let right_shallow = self.union_below(n - k, d);
                    let left_shallow = self.union_below(k, d - 1);
                    let right_deep = self.levels[n - k][d - 1].clone();
                    let pairs = cross(&left_deep, &right_shallow)
                        .chain(cross(&left_shallow, &right_deep))
                        .collect::<Vec<_>>();
                    for (l, r) in pairs {
                        self.offer(
                            Ltl::until(l, r),
                            Some(BinaryOp::Until),
                            &mut counts,
                            &mut out,
                        );
                    }
                }
                let left = self.levels[k][d].clone();
                let right = self.union_below(n - k, d + 1);
                for (l, r) in cross(&left, &right).collect::<Vec<_>>() {
                    self.offer(
                        Ltl::and(l.clone(), r.clone()),
                        Some(BinaryOp::And),
                        &mut counts,
                        &mut out,
                    );
                    self.offer(Ltl::or(l, r), Some(BinaryOp::Or), &mut counts, &mut out);
                }
            }
        }
        self.levels.push(out);
        counts
    }
}

fn cross<'a>(left: &'a [Ltl], right: &'a [Ltl]) -> impl Iterator<Item = (Ltl, Ltl)> + 'a {
    left.iter()
        .flat_map(move |l| right.iter().map(move |r| (l.clone(), r.clone())))
}

/// Boolean simplification on a canonical candidate. For a flattened
/// conjunction or disjunction every pair of operands is checked.
fn redundant_operands(op: BinaryOp, canon: &Ltl) -> bool {
    let chain_op = match op {
        BinaryOp::And => BoolOp::And,
        BinaryOp::Or => BoolOp::Or,
        BinaryOp::Until => {
            let crate::ltl::LtlKind::Until(l, r) = canon.kind() else {
                return false;
            };
            return boolean_simplify_applies(op, l, r);
        }
    };
    let items = operands(canon, chain_op);
    for (i, a) in items.iter().enumerate() {
        for b in &items[i + 1..] {
            if a == b || is_complement(a, b) {
                return true;
            }
        }
    }
    false
}

/// Formulas sorted by printed form, the iteration order used when checking.
pub fn print_order(formulas: &[Ltl]) -> Vec<Ltl> {
    let mut keyed: Vec<(String, Ltl)> = formulas
        .iter()
        .map(|f| (f.to_string(), f.clone()))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| canonical_order(&a.1, &b.1)));
    keyed.into_iter().map(|(_, f)| f).collect()
}
