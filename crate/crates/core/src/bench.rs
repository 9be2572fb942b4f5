//! Deterministic generators of samples with a planted separating formula.
//!
//! | name            | propositions | planted formula                          |
//! |-----------------|--------------|------------------------------------------|
//! | `two-state`     | `a`          | `P>r [ F(a) ]`                           |
//! | `planted-safety`| `h`          | `P>r [ G(!h) ]`                          |
//! | `planted-until` | `kA`, `kB`   | `P>r [ (!kA U kB) ]`                     |
//! | `truth-table`   | `a`, `b`     | `(P>r [F(a)] & P>s [F(b)])`              |
//! | `gridworld`     | `goal`,`hole`| `P>r [ F(goal) ]`                        |
//!
//! Every generator checks the planted formula against its own output.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dtmc::{Action, Dtmc, DtmcError, Mdp, Sample, SampleError, Strategy};
use crate::engine::check_ltl;
use crate::learner::{check_consistency, LearnError};
use crate::ltl::{parse_ltl, Ltl, Pltl};
use crate::manifest::{ChainFile, Params, SampleManifest};

pub const GENERATORS: [&str; 5] = [
    "two-state",
    "planted-safety",
    "planted-until",
    "truth-table",
    "gridworld",
];

pub const DEFAULT_LAYOUT: &str = "S.../.H.H/...H/H..G";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("unknown generator '{0}' (known: {known})", known = GENERATORS.join(", "))]
    UnknownGenerator(String),
    #[error("parameter {name}={value}: {msg}")]
    BadParam {
        name: String,
        value: String,
        msg: String,
    },
    #[error("unknown parameter '{0}'")]
    UnknownParam(String),
    #[error("invalid layout: {0}")]
    Layout(String),
    #[error(transparent)]
    Chain(#[from] DtmcError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error("planted formula {0} is not consistent with the generated sample")]
    NotPlanted(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Generator parameters given as `key=value` strings.
#[derive(Debug, Clone, Default)]
pub struct GenParams {
    values: BTreeMap<String, String>,
}

/// A generated sample.
#[derive(Debug, Clone)]
pub struct Generated {
    pub name: String,
    pub ap: Vec<String>,
    pub positives: Vec<Dtmc>,
    pub negatives: Vec<Dtmc>,
    pub planted: Pltl,
    pub max_size: usize,
}

impl Generated {
    pub fn sample(&self) -> Result<Sample, SampleError> {
        Sample::new(
            self.ap.clone(),
            self.positives.clone(),
            self.negatives.clone(),
        )
    }

    /// Write every chain in both formats, plus `manifest.json` (JSON chains)
    /// and `manifest-prism.json` (PRISM chains). Returns the path of
    /// `manifest.json`.
    pub fn write(&self, dir: &Path) -> Result<PathBuf, BenchError> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| BenchError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io(dir))?;
        let mut json_files = (Vec::new(), Vec::new());
        let mut prism_files = (Vec::new(), Vec::new());
        for (tag, chains) in [("pos", &self.positives), ("neg", &self.negatives)] {
            for (i, m) in chains.iter().enumerate() {
                let stem = format!("{tag}_{i}");
                let (tra, lab) = m.to_prism_explicit();
                for (ext, text) in [("json", m.to_json()), ("tra", tra), ("lab", lab)] {
                    let path = dir.join(format!("{stem}.{ext}"));
                    fs::write(&path, text).map_err(io(&path))?;
                }
                let json = ChainFile::Json {
                    path: format!("{stem}.json"),
                };
                let prism = ChainFile::PrismExplicit {
                    tra: format!("{stem}.tra"),
                    lab: format!("{stem}.lab"),
                };
                let (j, p) = if tag == "pos" {
                    (&mut json_files.0, &mut prism_files.0)
                } else {
                    (&mut json_files.1, &mut prism_files.1)
                };
                j.push(json);
                p.push(prism);
            }
        }
        let manifest_path = dir.join("manifest.json");
        for ((positives, negatives), file) in [
            (json_files, "manifest.json"),
            (prism_files, "manifest-prism.json"),
        ] {
            let manifest = SampleManifest {
                ap: Some(self.ap.clone()),
                positives,
                negatives,
                params: Params {
                    max_size: Some(self.max_size),
                    ..Params::default()
                },
                planted: Some(self.planted.to_string()),
            };
            let path = dir.join(file);
            let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
            text.push('\n');
            fs::write(&path, text).map_err(io(&path))?;
        }
        Ok(manifest_path)
    }
}

impl GenParams {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parse `key=value`.
    pub fn parse_pair(text: &str) -> Result<(String, String), String> {
        text.split_once('=')
            .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
            .ok_or_else(|| format!("expected key=value, got '{text}'"))
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.values.insert(key.into(), value.into());
        self
    }

    fn check_known(&self, known: &[&str]) -> Result<(), BenchError> {
        match self.values.keys().find(|k| !known.contains(&k.as_str())) {
            Some(k) => Err(BenchError::UnknownParam(k.clone())),
            None => Ok(()),
        }
    }

    fn get<T: std::str::FromStr>(&self, name: &str, default: T) -> Result<T, BenchError>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(name) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|e: T::Err| BenchError::BadParam {
                name: name.into(),
                value: v.clone(),
                msg: e.to_string(),
            }),
        }
    }

    fn prob(&self, name: &str, default: f64) -> Result<f64, BenchError> {
        let p = self.get(name, default)?;
        if (0.0..=1.0).contains(&p) {
            Ok(p)
        } else {
            Err(BenchError::BadParam {
                name: name.into(),
                value: p.to_string(),
                msg: "must lie in [0, 1]".into(),
            })
        }
    }

    fn count(&self, name: &str, default: usize) -> Result<usize, BenchError> {
        let n = self.get(name, default)?;
        if n == 0 {
            return Err(BenchError::BadParam {
                name: name.into(),
                value: "0".into(),
                msg: "must be at least 1".into(),
            });
        }
        Ok(n)
    }
}

/// Run a generator by name.
pub fn generate(name: &str, seed: u64, params: &GenParams) -> Result<Generated, BenchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let generated = match name {
        "two-state" => gen_two_state(params)?,
        "planted-safety" => gen_safety(params, &mut rng)?,
        "planted-until" => gen_until(params, &mut rng)?,
        "truth-table" => gen_truth_table(params, &mut rng)?,
        "gridworld" => gen_gridworld(params, &mut rng)?,
        other => return Err(BenchError::UnknownGenerator(other.to_string())),
    };
    if !check_consistency(&generated.planted, &generated.sample()?)? {
        return Err(BenchError::NotPlanted(generated.planted.to_string()));
    }
    Ok(generated)
}

fn names(ap: &[&str]) -> Vec<String> {
    ap.iter().map(|s| s.to_string()).collect()
}

/// Build a chain from triples, merging repeated edges and dropping zero
/// probabilities.
fn chain(
    ap: &[&str],
    labels: Vec<Vec<usize>>,
    triples: &[(usize, usize, f64)],
) -> Result<Dtmc, DtmcError> {
    let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for &(s, t, p) in triples {
        *merged.entry((s, t)).or_insert(0.0) += p;
    }
    let triples: Vec<_> = merged
        .into_iter()
        .filter(|(_, p)| *p > 0.0)
        .map(|((s, t), p)| (s, t, p))
        .collect();
    Dtmc::from_triples(names(ap), 0, labels, &triples)
}

/// `value` moved uniformly within `jitter`, clamped to `[0, 1]`.
fn jittered(rng: &mut ChaCha8Rng, value: f64, jitter: f64) -> f64 {
    if jitter <= 0.0 {
        return value;
    }
    (value + rng.gen_range(-jitter..=jitter)).clamp(0.0, 1.0)
}

/// Atom on `body` with the midpoint threshold between the classes.
fn midpoint_atom(body: Ltl, positives: &[Dtmc], negatives: &[Dtmc]) -> Result<Pltl, BenchError> {
    let value = |m: &Dtmc| -> Result<f64, BenchError> {
        check_ltl(m, &body).map(|v| v.initial()).map_err(|source| {
            BenchError::Learn(LearnError::Engine {
                formula: body.to_string(),
                chain: "generated chain".into(),
                source,
            })
        })
    };
    let mut lo = f64::INFINITY;
    for m in positives {
        lo = lo.min(value(m)?);
    }
    let mut hi = f64::NEG_INFINITY;
    for m in negatives {
        hi = hi.max(value(m)?);
    }
    Ok(Pltl::atom((lo + hi) / 2.0, body))
}

fn body(text: &str) -> Ltl {
    parse_ltl(text).expect("generator formulas parse")
}

/// `s0 -p-> s1{a}`, `s0 -(1-p)-> s2`, both absorbing.
pub fn two_state(p: f64) -> Result<Dtmc, DtmcError> {
    chain(
        &["a"],
        vec![vec![], vec![0], vec![]],
        &[(0, 1, p), (0, 2, 1.0 - p), (1, 1, 1.0), (2, 2, 1.0)],
    )
}

fn gen_two_state(params: &GenParams) -> Result<Generated, BenchError> {
    params.check_known(&["p", "pos"])?;
    let p = params.prob("p", 0.3)?;
    let pos = params.prob("pos", 1.0)?;
    let (positives, negatives) = (vec![two_state(pos)?], vec![two_state(p)?]);
    Ok(Generated {
        name: "two-state".into(),
        ap: names(&["a"]),
        planted: midpoint_atom(body("F a"), &positives, &negatives)?,
        positives,
        negatives,
        max_size: 3,
    })
}

/// `s0 -q-> s1 -> s2{h}` absorbing, `s0 -(1-q)-> s3` absorbing.
fn safety_chain(q: f64) -> Result<Dtmc, DtmcError> {
    chain(
        &["h"],
        vec![vec![], vec![], vec![0], vec![]],
        &[
            (0, 1, q),
            (0, 3, 1.0 - q),
            (1, 2, 1.0),
            (2, 2, 1.0),
            (3, 3, 1.0),
        ],
    )
}

fn gen_safety(params: &GenParams, rng: &mut ChaCha8Rng) -> Result<Generated, BenchError> {
    params.check_known(&["pos-h", "neg-h", "count", "jitter"])?;
    let (qp, qn) = (params.prob("pos-h", 0.1)?, params.prob("neg-h", 0.7)?);
    let count = params.count("count", 3)?;
    let jitter = params.prob("jitter", 0.02)?;
    let mut make = |q| -> Result<Vec<Dtmc>, BenchError> {
        (0..count)
            .map(|_| Ok(safety_chain(jittered(rng, q, jitter))?))
            .collect()
    };
    let positives = make(qp)?;
    let negatives = make(qn)?;
    Ok(Generated {
        name: "planted-safety".into(),
        ap: names(&["h"]),
        planted: midpoint_atom(body("G !h"), &positives, &negatives)?,
        positives,
        negatives,
        max_size: 4,
    })
}

/// With probability `q`, B learns A's secret first: wait in a loop, then
/// `kB`, then both. Otherwise `kA` comes first.
fn until_chain(q: f64) -> Result<Dtmc, DtmcError> {
    // 0 start, 1 wait-B, 2 wait-A, 3 {kB}, 4 {kA}, 5 {kA, kB}
    chain(
        &["kA", "kB"],
        vec![vec![], vec![], vec![], vec![1], vec![0], vec![0, 1]],
        &[
            (0, 1, q),
            (0, 2, 1.0 - q),
            (1, 1, 0.5),
            (1, 3, 0.5),
            (2, 2, 0.5),
            (2, 4, 0.5),
            (3, 5, 1.0),
            (4, 5, 1.0),
            (5, 5, 1.0),
        ],
    )
}

fn gen_until(params: &GenParams, rng: &mut ChaCha8Rng) -> Result<Generated, BenchError> {
    params.check_known(&["pos-q", "neg-q", "count", "jitter"])?;
    let (qp, qn) = (params.prob("pos-q", 0.9)?, params.prob("neg-q", 0.4)?);
    let count = params.count("count", 3)?;
    let jitter = params.prob("jitter", 0.02)?;
    let mut make = |q| -> Result<Vec<Dtmc>, BenchError> {
        (0..count)
            .map(|_| Ok(until_chain(jittered(rng, q, jitter))?))
            .collect()
    };
    let positives = make(qp)?;
    let negatives = make(qn)?;
    Ok(Generated {
        name: "planted-until".into(),
        ap: names(&["kA", "kB"]),
        planted: midpoint_atom(body("!kA U kB"), &positives, &negatives)?,
        positives,
        negatives,
        max_size: 4,
    })
}

/// With probability `p` an `a`-walk, otherwise a `b`-walk. Each walk
/// waits in a self-loop, visits its labeled state once and ends in a
/// shared unlabeled sink.
///
/// All chains of the truth-table sample are mixtures of the same two
/// walks. A single LTL body `phi` then has `Pr(phi) = p x + (1 - p) y`
/// with `x`, `y` its truth on the two walks, so a chain whose `p` lies
/// between two others can never be separated from both by one atom.
pub fn walk_mixture(p: f64) -> Result<Dtmc, DtmcError> {
    // 0 start, 1 wait-a, 2 {a}, 3 wait-b, 4 {b}, 5 sink
    chain(
        &["a", "b"],
        vec![vec![], vec![], vec![0], vec![], vec![1], vec![]],
        &[
            (0, 1, p),
            (0, 3, 1.0 - p),
            (1, 1, 0.5),
            (1, 2, 0.5),
            (2, 5, 1.0),
            (3, 3, 0.5),
            (3, 4, 0.5),
            (4, 5, 1.0),
            (5, 5, 1.0),
        ],
    )
}

fn gen_truth_table(params: &GenParams, rng: &mut ChaCha8Rng) -> Result<Generated, BenchError> {
    params.check_known(&["high", "mix", "jitter"])?;
    let high = params.prob("high", 0.9)?;
    let mix = params.prob("mix", 0.5)?;
    let jitter = params.prob("jitter", 0.0)?;
    let mut j = |v| jittered(rng, v, jitter);
    let positives = vec![walk_mixture(j(mix))?, walk_mixture(j(mix))?];
    let negatives = vec![walk_mixture(j(high))?, walk_mixture(j(1.0 - high))?];
    // F a must reject the b-heavy negative, F b the a-heavy one
    let fa = midpoint_atom(body("F a"), &positives, &negatives[1..])?;
    let fb = midpoint_atom(body("F b"), &positives, &negatives[..1])?;
    Ok(Generated {
        name: "truth-table".into(),
        ap: names(&["a", "b"]),
        planted: Pltl::and(fa, fb),
        positives,
        negatives,
        max_size: 5,
    })
}

/// A grid of cells: `S` start, `G` goal, `H` hole, `#` wall, `.` free;
/// rows separated by `/`.
#[derive(Debug, Clone)]
pub struct Grid {
    rows: Vec<Vec<u8>>,
    /// Cell index for every non-wall position.
    index: BTreeMap<(usize, usize), usize>,
    start: usize,
}

const MOVES: [(&str, isize, isize); 4] = [("N", -1, 0), ("E", 0, 1), ("S", 1, 0), ("W", 0, -1)];

impl Grid {
    pub fn parse(layout: &str) -> Result<Self, BenchError> {
        let rows: Vec<Vec<u8>> = layout
            .split('/')
            .map(|r| r.trim().bytes().collect())
            .collect();
        let width = rows[0].len();
        if width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(BenchError::Layout(
                "rows must be nonempty and equally long".into(),
            ));
        }
        let mut index = BTreeMap::new();
        let mut start = None;
        for (i, row) in rows.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                match c {
                    b'#' => continue,
                    b'S' if start.is_some() => {
                        return Err(BenchError::Layout("more than one start cell".into()))
                    }
                    b'S' => start = Some(index.len()),
                    b'.' | b'G' | b'H' => {}
                    other => {
                        return Err(BenchError::Layout(format!(
                            "unknown cell '{}'",
                            other as char
                        )))
                    }
                }
                index.insert((i, j), index.len());
            }
        }
        let start = start.ok_or_else(|| BenchError::Layout("no start cell".into()))?;
        if !rows.iter().flatten().any(|c| *c == b'G') {
            return Err(BenchError::Layout("no goal cell".into()));
        }
        Ok(Grid { rows, index, start })
    }

    fn cell(&self, pos: (usize, usize)) -> u8 {
        self.rows[pos.0][pos.1]
    }

    fn step(&self, pos: (usize, usize), (di, dj): (isize, isize)) -> usize {
        let (i, j) = (pos.0 as isize + di, pos.1 as isize + dj);
        let target = (i >= 0 && j >= 0)
            .then_some((i as usize, j as usize))
            .and_then(|p| self.index.get(&p));
        *target.unwrap_or(&self.index[&pos])
    }

    /// Moves go in the intended direction with probability `1 - 2 slip`
    /// and to each perpendicular side with probability `slip`. Goal and
    /// hole cells are absorbing.
    pub fn mdp(&self, slip: f64) -> Result<Mdp, BenchError> {
        if !(0.0..=0.5).contains(&slip) {
            return Err(BenchError::Layout(format!("slip {slip} outside [0, 0.5]")));
        }
        let mut labels = Vec::new();
        let mut actions = Vec::new();
        for (&pos, &s) in &self.index {
            debug_assert_eq!(s, actions.len());
            let c = self.cell(pos);
            labels.push(match c {
                b'G' => vec![0],
                b'H' => vec![1],
                _ => vec![],
            });
            if matches!(c, b'G' | b'H') {
                actions.push(vec![Action {
                    name: "stay".into(),
                    dist: vec![(s, 1.0)],
                }]);
                continue;
            }
            let mut acts = Vec::new();
            for (k, (name, di, dj)) in MOVES.iter().enumerate() {
                let left = MOVES[(k + 3) % 4];
                let right = MOVES[(k + 1) % 4];
                let mut dist: BTreeMap<usize, f64> = BTreeMap::new();
                for (d, p) in [
                    ((*di, *dj), 1.0 - 2.0 * slip),
                    ((left.1, left.2), slip),
                    ((right.1, right.2), slip),
                ] {
                    if p > 0.0 {
                        *dist.entry(self.step(pos, d)).or_insert(0.0) += p;
                    }
                }
                acts.push(Action {
                    name: name.to_string(),
                    dist: dist.into_iter().collect(),
                });
            }
            actions.push(acts);
        }
        Ok(Mdp::new(
            names(&["goal", "hole"]),
            self.start,
            labels,
            actions,
        )?)
    }
}

/// Strategy maximizing the probability of reaching `goal`, by value
/// iteration. Ties go to the first action in N, E, S, W order.
pub fn safe_strategy(mdp: &Mdp) -> Strategy {
    let n = mdp.num_states();
    let goal: Vec<bool> = (0..n).map(|s| mdp.labels(s).contains(&0)).collect();
    let q = |v: &[f64], a: &Action| a.dist.iter().map(|(t, p)| p * v[*t]).sum::<f64>();
    let mut v: Vec<f64> = goal.iter().map(|g| if *g { 1.0 } else { 0.0 }).collect();
    for _ in 0..100_000 {
        let next: Vec<f64> = (0..n)
            .map(|s| {
                if goal[s] {
                    1.0
                } else {
                    mdp.actions(s).iter().map(|a| q(&v, a)).fold(0.0, f64::max)
                }
            })
            .collect();
        let change = next
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        v = next;
        if change < 1e-13 {
            break;
        }
    }
    // Greedy choice alone can circle forever inside a region of equal
    // value, so optimal actions are fixed backwards from the goal: each
    // state takes the first optimal action that can reach an already
    // settled state.
    let optimal = |s: usize, a: &Action| q(&v, a) >= v[s] - 1e-9;
    let mut choice: Vec<Option<usize>> = vec![None; n];
    let mut settled = goal.clone();
    let mut changed = true;
    while changed {
        changed = false;
        for s in 0..n {
            if settled[s] || v[s] <= 0.0 {
                continue;
            }
            let pick = mdp
                .actions(s)
                .iter()
                .position(|a| optimal(s, a) && a.dist.iter().any(|(t, p)| *p > 0.0 && settled[*t]));
            if let Some(k) = pick {
                choice[s] = Some(k);
                settled[s] = true;
                changed = true;
            }
        }
    }
    (0..n)
        .map(|s| {
            let a = &mdp.actions(s)[choice[s].unwrap_or(0)];
            vec![(a.name.clone(), 1.0)]
        })
        .collect()
}

/// Every available action with equal weight.
pub fn uniform_strategy(mdp: &Mdp) -> Strategy {
    (0..mdp.num_states())
        .map(|s| {
            let acts = mdp.actions(s);
            let w = 1.0 / acts.len() as f64;
            acts.iter().map(|a| (a.name.clone(), w)).collect()
        })
        .collect()
}

/// A deterministic strategy picking one action per state at random.
pub fn random_strategy(mdp: &Mdp, rng: &mut ChaCha8Rng) -> Strategy {
    (0..mdp.num_states())
        .map(|s| {
            let acts = mdp.actions(s);
            vec![(acts[rng.gen_range(0..acts.len())].name.clone(), 1.0)]
        })
        .collect()
}

fn gen_gridworld(params: &GenParams, rng: &mut ChaCha8Rng) -> Result<Generated, BenchError> {
    params.check_known(&["layout", "slip", "negatives"])?;
    let layout: String = params.get("layout", DEFAULT_LAYOUT.to_string())?;
    let slip = params.prob("slip", 1.0 / 3.0)?;
    let extra = params.get("negatives", 2usize)?;
    let mdp = Grid::parse(&layout)?.mdp(slip)?;
    let positives = vec![mdp.induced_dtmc(&safe_strategy(&mdp))?];
    let mut negatives = vec![mdp.induced_dtmc(&uniform_strategy(&mdp))?];
    for _ in 1..extra.max(1) {
        negatives.push(mdp.induced_dtmc(&random_strategy(&mdp, rng))?);
    }
    let planted = midpoint_atom(body("F goal"), &positives, &negatives)?;
    Ok(Generated {
        name: "gridworld".into(),
        ap: names(&["goal", "hole"]),
        planted,
        positives,
        negatives,
        max_size: 10,
    })
}
