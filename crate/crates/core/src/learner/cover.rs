//! Boolean set cover: pairwise conjunctions and disjunctions of scored
//! threshold atoms.

use std::cmp::Ordering;

use crate::ltl::{Ltl, Pltl};

use super::threshold::PoolEntry;

/// Number of chains a threshold classifies correctly: positives strictly
/// above `r`, negatives strictly below.
pub fn cover_count(positives: &[f64], negatives: &[f64], r: f64) -> usize {
    positives.iter().filter(|v| **v > r).count() + negatives.iter().filter(|v| **v < r).count()
}

/// `sigma = c / (1 + sqrt(size))`.
pub fn score(cover: usize, size: usize) -> f64 {
    cover as f64 / (1.0 + (size as f64).sqrt())
}

/// Threshold maximizing [`cover_count`], and that count.
///
/// Candidates are midpoints between consecutive distinct values of
/// `{0, 1}` and the sample. Ties go to the widest gap, then the smallest
/// threshold.
pub fn best_threshold(positives: &[f64], negatives: &[f64]) -> (f64, usize) {
    let mut points: Vec<f64> = positives
        .iter()
        .chain(negatives)
        .copied()
        .chain([0.0, 1.0])
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut best: Option<(usize, f64, f64)> = None;
    for w in points.windows(2) {
        let (r, gap) = ((w[0] + w[1]) / 2.0, w[1] - w[0]);
        let c = cover_count(positives, negatives, r);
        let better = match best {
            None => true,
            Some((bc, bgap, _)) => c > bc || (c == bc && gap > bgap),
        };
        if better {
            best = Some((c, gap, r));
        }
    }
    let (c, _, r) = best.expect("at least the 0..1 gap");
    (r, c)
}

/// A threshold atom with its cover count, score and per-chain truth.
#[derive(Debug, Clone)]
pub struct ScoredCandidate {
    pub body: Ltl,
    pub threshold: f64,
    pub cover: usize,
    pub score: f64,
    pub positives: Vec<bool>,
    pub negatives: Vec<bool>,
}

impl ScoredCandidate {
    pub fn new(entry: &PoolEntry) -> Self {
        let (threshold, cover) = best_threshold(&entry.positives, &entry.negatives);
        ScoredCandidate {
            body: entry.formula.clone(),
            threshold,
            cover,
            score: score(cover, entry.formula.size()),
            positives: entry.positives.iter().map(|v| *v > threshold).collect(),
            negatives: entry.negatives.iter().map(|v| *v > threshold).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.body.size()
    }

    pub fn atom(&self) -> Pltl {
        Pltl::atom(self.threshold, self.body.clone())
    }

    /// True iff the atom alone is consistent.
    pub fn covers_all(&self) -> bool {
        self.cover == self.positives.len() + self.negatives.len()
    }
}

/// Useless for combination: zero on every positive, or one on every
/// negative, at the initial state.
pub fn unsuitable(entry: &PoolEntry) -> bool {
    entry.positives.iter().all(|v| *v == 0.0) || entry.negatives.iter().all(|v| *v == 1.0)
}

/// A consistent pairwise combination.
#[derive(Debug, Clone)]
pub struct Combination {
    pub formula: Pltl,
    pub size: usize,
}

/// The heap of scored atoms, kept across sizes.
#[derive(Debug, Clone)]
pub struct CoverSearch {
    heap: Vec<(ScoredCandidate, String)>,
    limit: usize,
}

impl CoverSearch {
    pub fn new(limit: usize) -> Self {
        CoverSearch {
            heap: Vec::new(),
            limit,
        }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Atoms by decreasing score, then size, then printed body.
    pub fn candidates(&self) -> impl Iterator<Item = &ScoredCandidate> {
        self.heap.iter().map(|(c, _)| c)
    }

    pub fn extend(&mut self, items: impl IntoIterator<Item = ScoredCandidate>) {
        self.heap
            .extend(items.into_iter().map(|c| (c.clone(), c.body.to_string())));
        self.heap.sort_by(|(a, pa), (b, pb)| {
            b.score
                .total_cmp(&a.score)
                .then_with(|| a.size().cmp(&b.size()))
                .then_with(|| pa.cmp(pb))
        });
    }

    /// Try every `Psi op Phi` with `Phi` among the top `limit` atoms.
    ///
    /// A consistent combination of size at most `bound` is stored and the
    /// bound drops to its size minus one, or to its size when
    /// `keep_equal` is set. Returns the stored combinations in order.
    pub fn search(&self, mut bound: usize, keep_equal: bool) -> Vec<Combination> {
        let top = self.limit.min(self.heap.len());
        let mut stored = Vec::new();
        for i in 0..self.heap.len() {
            for j in 0..top {
                // pairs inside the top set are visited once
                if i == j || (i < top && i > j) {
                    continue;
                }
                let size = self.heap[i].0.size() + self.heap[j].0.size() + 1;
                if size > bound {
                    continue;
                }
                for conj in [true, false] {
                    if size > bound || !self.consistent(i, j, conj) {
                        continue;
                    }
                    stored.push(Combination {
                        formula: self.combine(i, j, conj),
                        size,
                    });
                    bound = if keep_equal { size } else { size - 1 };
                }
            }
        }
        stored
    }

    fn consistent(&self, i: usize, j: usize, conj: bool) -> bool {
        let (a, b) = (&self.heap[i].0, &self.heap[j].0);
        let op = |x: bool, y: bool| if conj { x && y } else { x || y };
        a.positives
            .iter()
            .zip(&b.positives)
            .all(|(x, y)| op(*x, *y))
            && a.negatives
                .iter()
                .zip(&b.negatives)
                .all(|(x, y)| !op(*x, *y))
    }

    fn combine(&self, i: usize, j: usize, conj: bool) -> Pltl {
        let (mut a, mut b) = (&self.heap[i], &self.heap[j]);
        if a.1.cmp(&b.1) == Ordering::Greater {
            std::mem::swap(&mut a, &mut b);
        }
        let (a, b) = (a.0.atom(), b.0.atom());
        if conj {
            Pltl::and(a, b)
        } else {
            Pltl::or(a, b)
        }
    }
}
