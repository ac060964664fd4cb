//! Uniform sampling of open pairs.
//!
//! Two backends: an explicit list of open pair indices with swap-remove and
//! an index map, and rejection sampling against the status table. The
//! rejection backend switches itself to an explicit list once the open
//! fraction (its exact acceptance probability) drops below
//! [`REJECTION_FALLBACK_RATE`].

use std::collections::HashMap;

use rand::Rng;

use crate::pairs::{pair_count, pair_from_index, pair_index, PairStatus, StatusTable};

/// Default explicit-list cutoff on the vertex count.
pub const EXPLICIT_MAX_N: usize = 10_000;

pub const REJECTION_FALLBACK_RATE: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SamplerKind {
    /// Explicit list for `n <= EXPLICIT_MAX_N`, rejection above.
    #[default]
    Auto,
    Explicit,
    Rejection,
}

impl SamplerKind {
    pub fn resolve(self, n: usize) -> SamplerKind {
        match self {
            SamplerKind::Auto if n <= EXPLICIT_MAX_N => SamplerKind::Explicit,
            SamplerKind::Auto => SamplerKind::Rejection,
            k => k,
        }
    }
}

#[derive(Clone, Debug)]
enum PositionMap {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

const ABSENT: u32 = u32::MAX;

/// Open pair indices in arbitrary order, with O(1) sample and delete.
#[derive(Clone, Debug)]
pub struct OpenList {
    pairs: Vec<u64>,
    pos: PositionMap,
}

impl OpenList {
    /// Every pair of an `n`-vertex graph.
    pub fn full(n: usize) -> Self {
        let total = pair_count(n);
        assert!(total < ABSENT as u64, "explicit open list supports fewer than 2^32 pairs");
        OpenList {
            pairs: (0..total).collect(),
            pos: PositionMap::Dense((0..total as u32).collect()),
        }
    }

    /// Open pairs read off a status table, indexed by a hash map.
    pub fn from_table(table: &StatusTable) -> Self {
        Self::from_indices(
            (0..table.len())
                .filter(|&k| table.get_index(k) == PairStatus::Open)
                .collect(),
        )
    }

    /// The given pair indices, indexed by a hash map.
    pub fn from_indices(pairs: Vec<u64>) -> Self {
        let pos = pairs.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
        OpenList {
            pairs,
            pos: PositionMap::Sparse(pos),
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Option<u64> {
        if self.pairs.is_empty() {
            None
        } else {
            Some(self.pairs[rng.gen_range(0..self.pairs.len())])
        }
    }

    fn position(&self, k: u64) -> Option<usize> {
        let p = match &self.pos {
            PositionMap::Dense(v) => v[k as usize],
            PositionMap::Sparse(m) => *m.get(&k)?,
        };
        (p != ABSENT).then_some(p as usize)
    }

    fn set_position(&mut self, k: u64, p: u32) {
        match &mut self.pos {
            PositionMap::Dense(v) => v[k as usize] = p,
            PositionMap::Sparse(m) => {
                if p == ABSENT {
                    m.remove(&k);
                } else {
                    m.insert(k, p);
                }
            }
        }
    }

    /// Removes pair `k`; returns false if it was not listed.
    pub fn remove(&mut self, k: u64) -> bool {
        let Some(p) = self.position(k) else {
            return false;
        };
        let last = self.pairs.len() - 1;
        self.pairs.swap_remove(p);
        if p != last {
            let moved = self.pairs[p];
            self.set_position(moved, p as u32);
        }
        self.set_position(k, ABSENT);
        true
    }

    pub fn contains(&self, k: u64) -> bool {
        self.position(k).is_some()
    }
}

/// Sampling backend held by a process state.
#[derive(Clone, Debug)]
pub enum OpenSampler {
    Explicit(OpenList),
    Rejection { n: usize },
}

impl OpenSampler {
    pub fn new(kind: SamplerKind, n: usize) -> Self {
        match kind.resolve(n) {
            SamplerKind::Explicit => OpenSampler::Explicit(OpenList::full(n)),
            _ => OpenSampler::Rejection { n },
        }
    }

    pub fn kind(&self) -> SamplerKind {
        match self {
            OpenSampler::Explicit(_) => SamplerKind::Explicit,
            OpenSampler::Rejection { .. } => SamplerKind::Rejection,
        }
    }

    /// Draws a uniformly random open pair, or `None` if none remain.
    pub fn sample<R: Rng>(
        &self,
        is_open: impl Fn(usize, usize) -> bool,
        open_count: u64,
        rng: &mut R,
    ) -> Option<(usize, usize)> {
        if open_count == 0 {
            return None;
        }
        match self {
            OpenSampler::Explicit(list) => list.sample(rng).map(pair_from_index),
            OpenSampler::Rejection { n } => loop {
                let x = rng.gen_range(0..*n);
                let y = rng.gen_range(0..*n);
                if x != y && is_open(x, y) {
                    return Some((x.min(y), x.max(y)));
                }
            },
        }
    }

    /// Notifies the sampler that pair `{x, y}` is no longer open.
    pub fn remove(&mut self, x: usize, y: usize) {
        if let OpenSampler::Explicit(list) = self {
            list.remove(pair_index(x, y));
        }
    }

    /// Switches a rejection sampler to an explicit list when acceptance gets rare.
    pub fn maybe_fall_back(&mut self, open_indices: impl FnOnce() -> Vec<u64>, open_count: u64) {
        if let OpenSampler::Rejection { n } = self {
            let rate = open_count as f64 / pair_count(*n) as f64;
            if rate < REJECTION_FALLBACK_RATE {
                *self = OpenSampler::Explicit(OpenList::from_indices(open_indices()));
            }
        }
    }
}
