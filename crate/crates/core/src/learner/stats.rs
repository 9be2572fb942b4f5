//! Run statistics.

use std::fmt;
use std::time::Duration;

/// Counts for one enumerated size.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SizeStats {
    pub size: usize,
    pub constructed: usize,
    pub pruned_temporal: usize,
    pub pruned_boolean: usize,
    pub pruned_duplicate: usize,
    /// Retained and model checked.
    pub checked: usize,
    pub discarded: usize,
    pub pooled: usize,
    /// Pooled formulas that entered the combination heap.
    pub scored: usize,
}

impl SizeStats {
    pub fn pruned(&self) -> usize {
        self.pruned_temporal + self.pruned_boolean + self.pruned_duplicate
    }

    pub fn is_balanced(&self) -> bool {
        self.constructed == self.pruned() + self.checked
    }
}

/// Wall-clock time per phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseTimings {
    pub enumerate: Duration,
    pub threshold: Duration,
    pub cover: Duration,
    pub verify: Duration,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStats {
    pub sizes: Vec<SizeStats>,
    pub engine_calls: usize,
    pub timings: PhaseTimings,
}

impl RunStats {
    pub fn checked(&self) -> usize {
        self.sizes.iter().map(|s| s.checked).sum()
    }

    pub fn constructed(&self) -> usize {
        self.sizes.iter().map(|s| s.constructed).sum()
    }

    /// Timings, kept apart from the deterministic counts.
    pub fn timing_report(&self) -> String {
        let t = &self.timings;
        format!(
            "time enumerate={:.3}s threshold={:.3}s cover={:.3}s verify={:.3}s",
            t.enumerate.as_secs_f64(),
            t.threshold.as_secs_f64(),
            t.cover.as_secs_f64(),
            t.verify.as_secs_f64()
        )
    }
}

/// The deterministic part: per-size counts and engine calls.
impl fmt::Display for RunStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>4} {:>11} {:>8} {:>8} {:>9} {:>8} {:>9} {:>7} {:>7}",
            "size",
            "constructed",
            "temporal",
            "boolean",
            "duplicate",
            "checked",
            "discarded",
            "pooled",
            "scored"
        )?;
        for s in &self.sizes {
            writeln!(
                f,
                "{:>4} {:>11} {:>8} {:>8} {:>9} {:>8} {:>9} {:>7} {:>7}",
                s.size,
                s.constructed,
                s.pruned_temporal,
                s.pruned_boolean,
                s.pruned_duplicate,
                s.checked,
                s.discarded,
                s.pooled,
                s.scored
            )?;
        }
        write!(
            f,
            "searched {}/{} formulas, {} engine calls",
            self.checked(),
            self.constructed(),
            self.engine_calls
        )
    }
}
