//! Canonical forms and the syntactic pruning rules used during enumeration.

use std::cmp::Ordering;

use super::{BinaryOp, BoolOp, Ltl, LtlKind};

/// Deterministic total order on formulas: structural hash, then printed form.
pub fn canonical_order(a: &Ltl, b: &Ltl) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    a.structural_hash()
        .cmp(&b.structural_hash())
        .then_with(|| a.to_string().cmp(&b.to_string()))
}

fn bool_op_of(f: &Ltl) -> Option<BoolOp> {
    match f.kind() {
        LtlKind::And(..) => Some(BoolOp::And),
        LtlKind::Or(..) => Some(BoolOp::Or),
        _ => None,
    }
}

fn collect_chain(f: &Ltl, op: BoolOp, out: &mut Vec<Ltl>) {
    match (f.kind(), op) {
        (LtlKind::And(l, r), BoolOp::And) | (LtlKind::Or(l, r), BoolOp::Or) => {
            collect_chain(l, op, out);
            collect_chain(r, op, out);
        }
        _ => out.push(f.clone()),
    }
}

/// Operands of the maximal same-operator chain rooted at `f`.
///
/// Returns `[f]` when the root is not the given connective.
pub fn operands(f: &Ltl, op: BoolOp) -> Vec<Ltl> {
    let mut out = Vec::new();
    collect_chain(f, op, &mut out);
    out
}

fn rebuild_chain(op: BoolOp, mut items: Vec<Ltl>) -> Ltl {
    items.sort_by(canonical_order);
    let mut it = items.into_iter();
    let first = it.next().expect("chain has at least one operand");
    it.fold(first, |acc, x| match op {
        BoolOp::And => Ltl::and(acc, x),
        BoolOp::Or => Ltl::or(acc, x),
    })
}

/// Flatten nested conjunctions/disjunctions and sort their operands.
///
/// The result is left-nested: `((a & b) & c)`.
pub fn canonicalize(f: &Ltl) -> Ltl {
    match f.kind() {
        LtlKind::Literal { .. } => f.clone(),
        LtlKind::Next(c) => Ltl::next(canonicalize(c)),
        LtlKind::Finally(c) => Ltl::finally(canonicalize(c)),
        LtlKind::Globally(c) => Ltl::globally(canonicalize(c)),
        LtlKind::Until(l, r) => Ltl::until(canonicalize(l), canonicalize(r)),
        LtlKind::And(..) | LtlKind::Or(..) => {
            let op = bool_op_of(f).unwrap();
            let items: Vec<Ltl> = operands(f, op).iter().map(canonicalize).collect();
            // a canonicalized operand never has the chain's own connective at
            // its root, so one flattening pass suffices
            rebuild_chain(op, items)
        }
    }
}

/// NNF negation of `f`, or `None` if it contains an Until.
pub fn dual(f: &Ltl) -> Option<Ltl> {
    Some(match f.kind() {
        LtlKind::Literal { prop, positive } => Ltl::literal(prop.clone(), !positive),
        LtlKind::And(l, r) => Ltl::or(dual(l)?, dual(r)?),
        LtlKind::Or(l, r) => Ltl::and(dual(l)?, dual(r)?),
        LtlKind::Next(c) => Ltl::next(dual(c)?),
        LtlKind::Finally(c) => Ltl::globally(dual(c)?),
        LtlKind::Globally(c) => Ltl::finally(dual(c)?),
        LtlKind::Until(..) => return None,
    })
}

/// True iff `psi` is, up to canonicalization, the NNF dual of `phi`.
pub fn is_complement(phi: &Ltl, psi: &Ltl) -> bool {
    match dual(phi) {
        Some(d) => canonicalize(&d) == canonicalize(psi),
        None => false,
    }
}

/// Boolean simplification: the operands are syntactically equal or
/// complementary, so the combination collapses to a smaller formula or a
/// constant.
pub fn boolean_simplify_applies(_op: BinaryOp, phi: &Ltl, psi: &Ltl) -> bool {
    canonicalize(phi) == canonicalize(psi) || is_complement(phi, psi)
}

/// Root rewrite rules. Each names a formula shape that is equivalent to a
/// retained formula of equal or smaller size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TemporalRule {
    /// `F F x` is `F x`.
    FinallyFinally,
    /// `G G x` is `G x`.
    GloballyGlobally,
    /// `F X x` is kept as `X F x`.
    FinallyNext,
    /// `G X x` is kept as `X G x`.
    GloballyNext,
    /// `F G F x` is `G F x`.
    FinallyGloballyFinally,
    /// `G F G x` is `F G x`.
    GloballyFinallyGlobally,
    /// `F x | F y` is `F(x | y)`.
    DisjunctionOfFinally,
    /// `G x & G y` is `G(x & y)`.
    ConjunctionOfGlobally,
    /// `X x o X y` is `X(x o y)` for `o` in `&`, `|`, `U`.
    NextDistributes,
    /// `x U (x U y)` and `(x U y) U y` are `x U y`.
    UntilAbsorption,
}

fn count_where(items: &[Ltl], pred: impl Fn(&LtlKind) -> bool) -> usize {
    items.iter().filter(|f| pred(f.kind())).count()
}

/// The first root rule matching `f`, if any. Expects canonical input.
pub fn temporal_rule(f: &Ltl) -> Option<TemporalRule> {
    use TemporalRule::*;
    match f.kind() {
        LtlKind::Finally(c) => match c.kind() {
            LtlKind::Finally(_) => Some(FinallyFinally),
            LtlKind::Next(_) => Some(FinallyNext),
            LtlKind::Globally(g) if matches!(g.kind(), LtlKind::Finally(_)) => {
                Some(FinallyGloballyFinally)
            }
            _ => None,
        },
        LtlKind::Globally(c) => match c.kind() {
            LtlKind::Globally(_) => Some(GloballyGlobally),
            LtlKind::Next(_) => Some(GloballyNext),
            LtlKind::Finally(g) if matches!(g.kind(), LtlKind::Globally(_)) => {
                Some(GloballyFinallyGlobally)
            }
            _ => None,
        },
        LtlKind::Or(..) => {
            let items = operands(f, BoolOp::Or);
            if count_where(&items, |k| matches!(k, LtlKind::Finally(_))) >= 2 {
                Some(DisjunctionOfFinally)
            } else if count_where(&items, |k| matches!(k, LtlKind::Next(_))) >= 2 {
                Some(NextDistributes)
            } else {
                None
            }
        }
        LtlKind::And(..) => {
            let items = operands(f, BoolOp::And);
            if count_where(&items, |k| matches!(k, LtlKind::Globally(_))) >= 2 {
                Some(ConjunctionOfGlobally)
            } else if count_where(&items, |k| matches!(k, LtlKind::Next(_))) >= 2 {
                Some(NextDistributes)
            } else {
                None
            }
        }
        LtlKind::Until(l, r) => {
            if matches!(l.kind(), LtlKind::Next(_)) && matches!(r.kind(), LtlKind::Next(_)) {
                return Some(NextDistributes);
            }
            if let LtlKind::Until(rl, _) = r.kind() {
                if rl == l {
                    return Some(UntilAbsorption);
                }
            }
            if let LtlKind::Until(_, lr) = l.kind() {
                if lr == r {
                    return Some(UntilAbsorption);
                }
            }
            None
        }
        LtlKind::Literal { .. } | LtlKind::Next(_) => None,
    }
}

pub fn temporal_simplify_applies(f: &Ltl) -> bool {
    temporal_rule(f).is_some()
}
