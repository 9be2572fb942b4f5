#![allow(dead_code)]

use std::collections::HashMap;

use pltl_learn::dtmc::Dtmc;
use pltl_learn::ltl::{Ltl, LtlKind};
use rand::seq::index::sample as pick;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// An ultimately periodic word `u v^omega`: positions `0..len`, and the
/// successor of the last position is `loop_start`. `letters[i]` has bit `j`
/// set iff proposition `j` holds at position `i`.
#[derive(Debug, Clone)]
pub struct Lasso {
    pub letters: Vec<u32>,
    pub loop_start: usize,
}

impl Lasso {
    fn len(&self) -> usize {
        self.letters.len()
    }

    fn full(&self) -> u32 {
        if self.len() == 32 {
            u32::MAX
        } else {
            (1 << self.len()) - 1
        }
    }

    fn prop_mask(&self, prop: usize) -> u32 {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, l)| *l >> prop & 1 == 1)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    /// Bit `i` of the result is bit `succ(i)` of `m`.
    fn next(&self, m: u32) -> u32 {
        let last = self.len() - 1;
        (m >> 1) & !(1 << last) | (m >> self.loop_start & 1) << last
    }

    fn until(&self, a: u32, b: u32) -> u32 {
        let mut x = 0;
        loop {
            let y = b | (a & self.next(x));
            if y == x {
                return x;
            }
            x = y;
        }
    }

    fn globally(&self, a: u32) -> u32 {
        let mut x = self.full();
        loop {
            let y = a & self.next(x);
            if y == x {
                return x;
            }
            x = y;
        }
    }
}

/// Every lasso over `num_props` propositions with `1 <= |u| + |v| <= max_len`.
pub fn all_lassos(num_props: usize, max_len: usize) -> Vec<Lasso> {
    let alphabet = 1u32 << num_props;
    let mut out = Vec::new();
    for len in 1..=max_len {
        let words = (alphabet as u64).pow(len as u32);
        for code in 0..words {
            let mut c = code;
            let letters: Vec<u32> = (0..len)
                .map(|_| {
                    let l = (c % alphabet as u64) as u32;
                    c /= alphabet as u64;
                    l
                })
                .collect();
            for loop_start in 0..len {
                out.push(Lasso {
                    letters: letters.clone(),
                    loop_start,
                });
            }
        }
    }
    out
}

/// Positions of `w` satisfying `f`, as a bit mask.
pub fn eval_lasso(f: &Ltl, w: &Lasso, props: &[&str]) -> u32 {
    match f.kind() {
        LtlKind::Literal { prop, positive } => {
            let m = props
                .iter()
                .position(|p| *p == &**prop)
                .map_or(0, |i| w.prop_mask(i));
            if *positive {
                m
            } else {
                !m & w.full()
            }
        }
        LtlKind::And(l, r) => eval_lasso(l, w, props) & eval_lasso(r, w, props),
        LtlKind::Or(l, r) => eval_lasso(l, w, props) | eval_lasso(r, w, props),
        LtlKind::Next(c) => w.next(eval_lasso(c, w, props)),
        LtlKind::Finally(c) => w.until(w.full(), eval_lasso(c, w, props)),
        LtlKind::Globally(c) => w.globally(eval_lasso(c, w, props)),
        LtlKind::Until(l, r) => w.until(eval_lasso(l, w, props), eval_lasso(r, w, props)),
    }
}

/// Truth at position 0 of a fixed set of lassos, memoized per subformula.
pub struct LassoSpace {
    words: Vec<Lasso>,
    props: Vec<String>,
    cache: HashMap<Ltl, Vec<u32>>,
}

impl LassoSpace {
    pub fn new(props: &[&str], max_len: usize) -> Self {
        LassoSpace {
            words: all_lassos(props.len(), max_len),
            props: props.iter().map(|p| p.to_string()).collect(),
            cache: HashMap::new(),
        }
    }

    pub fn num_words(&self) -> usize {
        self.words.len()
    }

    fn masks(&mut self, f: &Ltl) -> Vec<u32> {
        if let Some(m) = self.cache.get(f) {
            return m.clone();
        }
        let ws = &self.words;
        let m: Vec<u32> = match f.kind() {
            LtlKind::Literal { .. } => {
                let props: Vec<&str> = self.props.iter().map(String::as_str).collect();
                ws.iter().map(|w| eval_lasso(f, w, &props)).collect()
            }
            LtlKind::And(l, r) | LtlKind::Or(l, r) | LtlKind::Until(l, r) => {
                let (a, b) = (self.masks(l), self.masks(r));
                let ws = &self.words;
                (0..ws.len())
                    .map(|i| match f.kind() {
                        LtlKind::And(..) => a[i] & b[i],
                        LtlKind::Or(..) => a[i] | b[i],
                        _ => ws[i].until(a[i], b[i]),
                    })
                    .collect()
            }
            LtlKind::Next(c) | LtlKind::Finally(c) | LtlKind::Globally(c) => {
                let a = self.masks(c);
                let ws = &self.words;
                (0..ws.len())
                    .map(|i| match f.kind() {
                        LtlKind::Next(_) => ws[i].next(a[i]),
                        LtlKind::Finally(_) => ws[i].until(ws[i].full(), a[i]),
                        _ => ws[i].globally(a[i]),
                    })
                    .collect()
            }
        };
        self.cache.insert(f.clone(), m.clone());
        m
    }

    /// Truth of `f` at position 0 of every word, packed.
    pub fn fingerprint(&mut self, f: &Ltl) -> Vec<u64> {
        let masks = self.masks(f);
        let mut out = vec![0u64; masks.len().div_ceil(64)];
        for (i, m) in masks.iter().enumerate() {
            out[i / 64] |= ((m & 1) as u64) << (i % 64);
        }
        out
    }

    /// Fingerprints of the two constants.
    pub fn constants(&self) -> (Vec<u64>, Vec<u64>) {
        let n = self.words.len();
        let mut ones = vec![u64::MAX; n.div_ceil(64)];
        if !n.is_multiple_of(64) {
            *ones.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
        }
        (vec![0; n.div_ceil(64)], ones)
    }
}

/// Every NNF formula of exactly `size` over `props`, with no pruning.
pub fn all_formulas(props: &[&str], size: usize, max_depth: usize) -> Vec<Ltl> {
    let mut by_size: Vec<Vec<Ltl>> = vec![Vec::new()];
    for n in 1..=size {
        let mut level = Vec::new();
        if n == 1 {
            for p in props {
                level.push(Ltl::prop(*p));
                level.push(Ltl::not_prop(*p));
            }
        } else {
            for c in &by_size[n - 1] {
                level.push(Ltl::next(c.clone()));
                level.push(Ltl::finally(c.clone()));
                level.push(Ltl::globally(c.clone()));
            }
            for k in 1..n - 1 {
                for l in &by_size[k] {
                    for r in &by_size[n - 1 - k] {
                        level.push(Ltl::and(l.clone(), r.clone()));
                        level.push(Ltl::or(l.clone(), r.clone()));
                        level.push(Ltl::until(l.clone(), r.clone()));
                    }
                }
            }
        }
        level.retain(|f| f.depth() <= max_depth);
        by_size.push(level);
    }
    by_size.pop().unwrap()
}

/// Size recomputed from the tree.
pub fn tree_size(f: &Ltl) -> usize {
    match f.kind() {
        LtlKind::Literal { .. } => 1,
        LtlKind::Next(c) | LtlKind::Finally(c) | LtlKind::Globally(c) => 1 + tree_size(c),
        LtlKind::And(l, r) | LtlKind::Or(l, r) | LtlKind::Until(l, r) => {
            1 + tree_size(l) + tree_size(r)
        }
    }
}

/// Temporal nesting depth recomputed from the tree.
pub fn tree_depth(f: &Ltl) -> usize {
    match f.kind() {
        LtlKind::Literal { .. } => 0,
        LtlKind::Next(c) | LtlKind::Finally(c) | LtlKind::Globally(c) => 1 + tree_depth(c),
        LtlKind::And(l, r) | LtlKind::Or(l, r) => tree_depth(l).max(tree_depth(r)),
        LtlKind::Until(l, r) => 1 + tree_depth(l).max(tree_depth(r)),
    }
}

/// A random formula whose tree height is at most `height`.
pub fn random_formula(rng: &mut ChaCha8Rng, props: &[&str], height: usize) -> Ltl {
    let leaf = height == 0 || rng.gen_bool(0.25);
    if leaf {
        let p = props[rng.gen_range(0..props.len())];
        return Ltl::literal(p, rng.gen_bool(0.5));
    }
    let mut sub = || random_formula(rng, props, height - 1);
    let (l, r) = (sub(), sub());
    match rng.gen_range(0..6) {
        0 => Ltl::and(l, r),
        1 => Ltl::or(l, r),
        2 => Ltl::until(l, r),
        3 => Ltl::next(l),
        4 => Ltl::finally(l),
        _ => Ltl::globally(l),
    }
}

/// A random valid chain: up to `max_states` states, each with one to three
/// successors, random weights and random labels over `ap`.
pub fn random_dtmc(rng: &mut ChaCha8Rng, max_states: usize, ap: &[&str]) -> Dtmc {
    let n = rng.gen_range(1..=max_states);
    let labels = (0..n)
        .map(|_| (0..ap.len()).filter(|_| rng.gen_bool(0.4)).collect())
        .collect();
    let rows = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=3.min(n));
            let targets = pick(rng, n, k).into_vec();
            let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
            let total: f64 = weights.iter().sum();
            targets
                .into_iter()
                .zip(weights)
                .map(|(t, w)| (t, w / total))
                .collect()
        })
        .collect();
    let ap = ap.iter().map(|p| p.to_string()).collect();
    Dtmc::new(ap, 0, labels, rows).expect("generated chain is valid")
}

/// A random chain in which every state has exactly one successor.
pub fn random_deterministic(rng: &mut ChaCha8Rng, max_states: usize, ap: &[&str]) -> Dtmc {
    let n = rng.gen_range(1..=max_states);
    let labels = (0..n)
        .map(|_| (0..ap.len()).filter(|_| rng.gen_bool(0.5)).collect())
        .collect();
    let rows = (0..n).map(|_| vec![(rng.gen_range(0..n), 1.0)]).collect();
    let ap = ap.iter().map(|p| p.to_string()).collect();
    Dtmc::new(ap, 0, labels, rows).expect("generated chain is valid")
}

/// The single path of a deterministic chain from state `s`, as a lasso.
pub fn path_lasso(m: &Dtmc, mut s: usize) -> Lasso {
    use pltl_learn::dtmc::Chain;
    let mut order: Vec<usize> = Vec::new();
    loop {
        if let Some(pos) = order.iter().position(|&t| t == s) {
            let letters = order
                .iter()
                .map(|&t| m.labels(t).iter().fold(0, |acc, &p| acc | 1 << p))
                .collect();
            return Lasso {
                letters,
                loop_start: pos,
            };
        }
        order.push(s);
        s = m.successors(s)[0].0;
    }
}

/// States from which some `target` state is reachable.
fn can_reach(m: &Dtmc, target: &[bool]) -> Vec<bool> {
    use pltl_learn::dtmc::Chain;
    let mut reach = target.to_vec();
    loop {
        let mut changed = false;
        for s in 0..m.num_states() {
            if !reach[s] && m.successors(s).iter().any(|&(t, _)| reach[t]) {
                reach[s] = true;
                changed = true;
            }
        }
        if !changed {
            return reach;
        }
    }
}

fn not(v: &[bool]) -> Vec<bool> {
    v.iter().map(|x| !x).collect()
}

fn one_step(m: &Dtmc, v: &[f64]) -> Vec<f64> {
    use pltl_learn::dtmc::Chain;
    (0..m.num_states())
        .map(|s| m.successors(s).iter().map(|&(t, p)| p * v[t]).sum())
        .collect()
}

/// `Pr_s(F(a & F b))`: the first `a`-state decides, since `F b` failing
/// there fails at every later position too.
fn eventually_a_then_b(m: &Dtmc) -> Vec<f64> {
    use pltl_learn::dtmc::Chain;
    use pltl_learn::engine::{finally_prob, solve_linear};
    let a = m.prop_states("a");
    let fb = finally_prob(m, &m.prop_states("b")).unwrap();
    let live = can_reach(m, &a);
    let free: Vec<usize> = (0..m.num_states()).filter(|&s| live[s] && !a[s]).collect();
    let slot = |s: usize| free.iter().position(|&t| t == s);
    let mut mat = vec![vec![0.0; free.len()]; free.len()];
    let mut rhs = vec![0.0; free.len()];
    for (i, &s) in free.iter().enumerate() {
        mat[i][i] += 1.0;
        for &(t, p) in m.successors(s) {
            match slot(t) {
                Some(j) => mat[i][j] -= p,
                None if a[t] => rhs[i] += p * fb[t],
                None => {}
            }
        }
    }
    let x = solve_linear(&mat, &rhs).unwrap();
    (0..m.num_states())
        .map(|s| match slot(s) {
            Some(i) => x[i],
            None if a[s] => fb[s],
            None => 0.0,
        })
        .collect()
}

/// A formula over `{a, b}` with an oracle computed without refinement.
pub struct OracleCase {
    pub formula: &'static str,
    pub oracle: fn(&Dtmc) -> Vec<f64>,
}

/// The ten-formula cross-check suite.
pub fn oracle_suite() -> Vec<OracleCase> {
    use pltl_learn::engine::oracle::{fg_oracle, gf_oracle};
    use pltl_learn::engine::{finally_prob, next_prob, until_prob};
    vec![
        OracleCase {
            formula: "F a",
            oracle: |m| finally_prob(m, &m.prop_states("a")).unwrap(),
        },
        OracleCase {
            formula: "G a",
            oracle: |m| {
                let f = finally_prob(m, &not(&m.prop_states("a"))).unwrap();
                f.into_iter().map(|v| 1.0 - v).collect()
            },
        },
        OracleCase {
            formula: "X a",
            oracle: |m| next_prob(m, &m.prop_states("a")),
        },
        OracleCase {
            formula: "a U b",
            oracle: |m| until_prob(m, &m.prop_states("a"), &m.prop_states("b")).unwrap(),
        },
        OracleCase {
            formula: "G F a",
            oracle: |m| gf_oracle(m, &m.prop_states("a")).unwrap(),
        },
        OracleCase {
            formula: "F G a",
            oracle: |m| fg_oracle(m, &m.prop_states("a")).unwrap(),
        },
        OracleCase {
            formula: "F(a & F b)",
            oracle: eventually_a_then_b,
        },
        OracleCase {
            formula: "X X a",
            oracle: |m| one_step(m, &next_prob(m, &m.prop_states("a"))),
        },
        OracleCase {
            formula: "!b U a",
            oracle: |m| until_prob(m, &not(&m.prop_states("b")), &m.prop_states("a")).unwrap(),
        },
        OracleCase {
            formula: "G !b",
            oracle: |m| {
                let f = finally_prob(m, &m.prop_states("b")).unwrap();
                f.into_iter().map(|v| 1.0 - v).collect()
            },
        },
    ]
}
