use serde::{Deserialize, Serialize};

use crate::construction::state::IterationState;
use crate::error::{Error, Result};
use crate::tree::RootedTree;

/// Inclusive range of positions in the common leaf ordering (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Interval { start, end }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn contains(&self, p: usize) -> bool {
        self.start <= p && p <= self.end
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        (start <= end).then_some(Interval { start, end })
    }

    pub fn overlap(&self, other: &Interval) -> usize {
        self.intersect(other).map_or(0, |i| i.len())
    }
}

/// Subtrees hanging off the left-most-leaf path of `T_i` (`q`) and off the
/// root-to-right-most-leaf path of `S_i` (`r`), as position intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathDecomposition {
    pub q: Vec<Interval>,
    pub r: Vec<Interval>,
    /// Position -> index into `q`.
    pub q_of: Vec<usize>,
    /// Position -> index into `r`.
    pub r_of: Vec<usize>,
}

impl PathDecomposition {
    /// Builds a decomposition from two interval lists, each of which must
    /// partition `0..n` from left to right.
    pub fn from_intervals(q: Vec<Interval>, r: Vec<Interval>) -> Result<Self> {
        let q_of = index_of(&q)?;
        let r_of = index_of(&r)?;
        if q_of.len() != r_of.len() {
            return Err(Error::Precondition("interval lists cover different ranges".into()));
        }
        Ok(PathDecomposition { q, r, q_of, r_of })
    }

    pub fn leaf_count(&self) -> usize {
        self.q_of.len()
    }

    pub fn q_at(&self, p: usize) -> Interval {
        self.q[self.q_of[p]]
    }

    pub fn r_at(&self, p: usize) -> Interval {
        self.r[self.r_of[p]]
    }

    pub fn largest(&self) -> usize {
        self.q.iter().chain(&self.r).map(Interval::len).max().unwrap_or(0)
    }

    /// Greedy left-to-right sweep over positions `lo..=hi`: take `h`, then
    /// jump past the ends of both subtrees holding `h`.
    pub fn sweep(&self, lo: usize, hi: usize) -> Vec<usize> {
        let mut picked = Vec::new();
        let mut h = lo;
        while h <= hi && h < self.leaf_count() {
            picked.push(h);
            h = self.q_at(h).end.max(self.r_at(h).end) + 1;
        }
        picked
    }
}

fn index_of(list: &[Interval]) -> Result<Vec<usize>> {
    let mut of = Vec::new();
    for (i, iv) in list.iter().enumerate() {
        if iv.start != of.len() || iv.end < iv.start {
            return Err(Error::Precondition("intervals must partition the positions in order".into()));
        }
        of.resize(iv.end + 1, i);
    }
    Ok(of)
}

fn span_interval(tree: &RootedTree, v: crate::tree::NodeId) -> Interval {
    let (lo, hi) = tree.span(v);
    Interval::new(lo, hi)
}

/// Normalizes `state` and reads off both path decompositions.
pub fn path_decomposition(state: &mut IterationState) -> PathDecomposition {
    state.normalize();
    let t = state.t();
    let s = state.s();
    let mut q = vec![Interval::new(0, 0)];
    let mut v = t.leaf_at(0);
    while let Some(p) = t.parent(v) {
        let (_, right) = t.children(p).expect("parent is internal");
        q.push(span_interval(t, right));
        v = p;
    }
    let mut r = Vec::new();
    let mut w = s.root();
    while let Some((left, right)) = s.children(w) {
        r.push(span_interval(s, left));
        w = right;
    }
    r.push(span_interval(s, w));
    PathDecomposition::from_intervals(q, r).expect("path subtrees partition the ordering")
}
