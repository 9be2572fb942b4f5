//! LTL formulas in negation normal form.
//!
//! Formulas are immutable, reference-counted trees. Every node caches its
//! size, nesting depth and a deterministic structural hash, so equality
//! checks and hash-set deduplication during enumeration stay cheap.

mod parse;
mod pltl;
mod simplify;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub use parse::{parse_ltl, ParseError};
pub use pltl::{format_threshold, Pltl};
pub use simplify::{
    boolean_simplify_applies, canonical_order, canonicalize, dual, is_complement, operands,
    temporal_rule, temporal_simplify_applies, TemporalRule,
};

/// Binary Boolean connectives, used when a caller needs to name the operator
/// of a chain without holding a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoolOp {
    And,
    Or,
}

/// Operator used to build a candidate from retained children.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    And,
    Or,
    Until,
}

#[derive(Clone, PartialEq, Eq)]
pub enum LtlKind {
    Literal { prop: Arc<str>, positive: bool },
    And(Ltl, Ltl),
    Or(Ltl, Ltl),
    Next(Ltl),
    Finally(Ltl),
    Globally(Ltl),
    Until(Ltl, Ltl),
}

struct Node {
    kind: LtlKind,
    size: usize,
    depth: usize,
    hash: u64,
}

/// A shared, immutable NNF formula.
#[derive(Clone)]
pub struct Ltl(Arc<Node>);

const TAG_LIT: u64 = 1;
const TAG_AND: u64 = 2;
const TAG_OR: u64 = 3;
const TAG_NEXT: u64 = 4;
const TAG_FINALLY: u64 = 5;
const TAG_GLOBALLY: u64 = 6;
const TAG_UNTIL: u64 = 7;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mix(h: u64, x: u64) -> u64 {
    splitmix(h.rotate_left(17) ^ x)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

impl Ltl {
    pub fn new(kind: LtlKind) -> Self {
        let (size, depth, hash) = match &kind {
            LtlKind::Literal { prop, positive } => (
                1,
                0,
                mix(mix(TAG_LIT, fnv1a(prop.as_bytes())), u64::from(*positive)),
            ),
            LtlKind::And(l, r) => (
                l.size() + r.size() + 1,
                l.depth().max(r.depth()),
                mix(mix(TAG_AND, l.structural_hash()), r.structural_hash()),
            ),
            LtlKind::Or(l, r) => (
                l.size() + r.size() + 1,
                l.depth().max(r.depth()),
                mix(mix(TAG_OR, l.structural_hash()), r.structural_hash()),
            ),
            LtlKind::Next(c) => (
                c.size() + 1,
                c.depth() + 1,
                mix(TAG_NEXT, c.structural_hash()),
            ),
            LtlKind::Finally(c) => (
                c.size() + 1,
                c.depth() + 1,
                mix(TAG_FINALLY, c.structural_hash()),
            ),
            LtlKind::Globally(c) => (
                c.size() + 1,
                c.depth() + 1,
                mix(TAG_GLOBALLY, c.structural_hash()),
            ),
            LtlKind::Until(l, r) => (
                l.size() + r.size() + 1,
                1 + l.depth().max(r.depth()),
                mix(mix(TAG_UNTIL, l.structural_hash()), r.structural_hash()),
            ),
        };
        Ltl(Arc::new(Node {
            kind,
            size,
            depth,
            hash,
        }))
    }

    pub fn literal(prop: impl Into<Arc<str>>, positive: bool) -> Self {
        Self::new(LtlKind::Literal {
            prop: prop.into(),
            positive,
        })
    }

    pub fn prop(prop: impl Into<Arc<str>>) -> Self {
        Self::literal(prop, true)
    }

    pub fn not_prop(prop: impl Into<Arc<str>>) -> Self {
        Self::literal(prop, false)
    }

    pub fn and(l: Ltl, r: Ltl) -> Self {
        Self::new(LtlKind::And(l, r))
    }

    pub fn or(l: Ltl, r: Ltl) -> Self {
        Self::new(LtlKind::Or(l, r))
    }

    pub fn next(c: Ltl) -> Self {
        Self::new(LtlKind::Next(c))
    }

    pub fn finally(c: Ltl) -> Self {
        Self::new(LtlKind::Finally(c))
    }

    pub fn globally(c: Ltl) -> Self {
        Self::new(LtlKind::Globally(c))
    }

    pub fn until(l: Ltl, r: Ltl) -> Self {
        Self::new(LtlKind::Until(l, r))
    }

    pub fn binary(op: BinaryOp, l: Ltl, r: Ltl) -> Self {
        match op {
            BinaryOp::And => Self::and(l, r),
            BinaryOp::Or => Self::or(l, r),
            BinaryOp::Until => Self::until(l, r),
        }
    }

    pub fn kind(&self) -> &LtlKind {
        &self.0.kind
    }

    /// Number of operators plus number of literal leaves.
    pub fn size(&self) -> usize {
        self.0.size
    }

    /// Temporal nesting depth.
    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn measure(&self) -> (usize, usize) {
        (self.size(), self.depth())
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    pub fn is_literal(&self) -> bool {
        matches!(self.kind(), LtlKind::Literal { .. })
    }

    /// True when the formula contains no temporal operator.
    pub fn is_propositional(&self) -> bool {
        self.depth() == 0
    }

    /// Proposition names in first-occurrence order.
    pub fn propositions(&self) -> Vec<Arc<str>> {
        let mut out: Vec<Arc<str>> = Vec::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut Vec<Arc<str>>) {
        match self.kind() {
            LtlKind::Literal { prop, .. } => {
                if !out.iter().any(|p| p == prop) {
                    out.push(prop.clone());
                }
            }
            LtlKind::Next(c) | LtlKind::Finally(c) | LtlKind::Globally(c) => c.collect_props(out),
            LtlKind::And(l, r) | LtlKind::Or(l, r) | LtlKind::Until(l, r) => {
                l.collect_props(out);
                r.collect_props(out);
            }
        }
    }
}

impl PartialEq for Ltl {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash
                && self.0.size == other.0.size
                && self.0.kind == other.0.kind)
    }
}

impl Eq for Ltl {}

impl Hash for Ltl {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            LtlKind::Literal { prop, positive } => {
                if *positive {
                    write!(f, "{prop}")
                } else {
                    write!(f, "!{prop}")
                }
            }
            LtlKind::And(l, r) => write!(f, "({l} & {r})"),
            LtlKind::Or(l, r) => write!(f, "({l} | {r})"),
            LtlKind::Until(l, r) => write!(f, "({l} U {r})"),
            LtlKind::Next(c) => write!(f, "X({c})"),
            LtlKind::Finally(c) => write!(f, "F({c})"),
            LtlKind::Globally(c) => write!(f, "G({c})"),
        }
    }
}

impl fmt::Debug for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ltl({self})")
    }
}

impl Ord for Ltl {
    fn cmp(&self, other: &Self) -> Ordering {
        canonical_order(self, other)
    }
}

impl PartialOrd for Ltl {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
