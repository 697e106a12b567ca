use crate::construction::monotone::{common_monotone_subsequence, Direction};
use crate::error::{Error, Result};
use crate::taxon::{LeafOrdering, Taxon, TaxonSet};
use crate::tree::{Edge, Orientation, RootedTree, UnrootedTree};

/// The rooted, aligned starting point shared by both constructions.
#[derive(Clone, Debug)]
pub struct Setup {
    pub t: UnrootedTree,
    pub s: UnrootedTree,
    /// `T` rooted at its chosen edge.
    pub t_rooted: RootedTree,
    /// `S` rooted at its chosen edge, mirrored when the alignment is decreasing.
    pub s_rooted: RootedTree,
    pub alignment: LeafOrdering,
    pub direction: Direction,
}

/// Roots both trees, aligns their leaf orderings and restricts them to the
/// common monotone subsequence.
pub fn setup(
    t: &UnrootedTree,
    s: &UnrootedTree,
    edges: Option<(Edge, Edge)>,
    orientation: Orientation,
) -> Result<(Setup, IterationState)> {
    if t.taxa() != s.taxa() {
        return Err(Error::TaxaMismatch);
    }
    let n = t.leaf_count();
    if n < 4 {
        return Err(Error::Precondition(format!("construction needs at least 4 leaves, got {n}")));
    }
    let (e_t, e_s) = match edges {
        Some(pair) => pair,
        None => (t.canonical_edge()?, s.canonical_edge()?),
    };
    let s_orientation = match orientation {
        Orientation::Seeded(seed) => Orientation::Seeded(seed.wrapping_add(1)),
        other => other,
    };
    let t_rooted = t.root_at_edge(e_t, orientation)?;
    let mut s_rooted = s.root_at_edge(e_s, s_orientation)?;
    let (alignment, direction) = common_monotone_subsequence(&t_rooted.seq(), &s_rooted.seq())?;
    if direction == Direction::Decreasing {
        s_rooted = s_rooted.mirror();
    }
    let keep = alignment.to_set();
    let state = IterationState::new(t_rooted.restrict(&keep)?, s_rooted.restrict(&keep)?, n)?;
    let setup = Setup { t: t.clone(), s: s.clone(), t_rooted, s_rooted, alignment, direction };
    Ok((setup, state))
}

/// Two rooted trees with equal leaf orderings plus the agreement taxa
/// collected so far.
#[derive(Clone, Debug)]
pub struct IterationState {
    t: RootedTree,
    s: RootedTree,
    agreed: TaxonSet,
    n_param: usize,
    iteration: usize,
}

impl IterationState {
    pub fn new(t: RootedTree, s: RootedTree, n_param: usize) -> Result<Self> {
        if n_param == 0 {
            return Err(Error::Precondition("n_param must be positive".into()));
        }
        let state = IterationState { t, s, agreed: TaxonSet::new(), n_param, iteration: 0 };
        state.check_invariants()?;
        Ok(state)
    }

    pub fn t(&self) -> &RootedTree {
        &self.t
    }

    pub fn s(&self) -> &RootedTree {
        &self.s
    }

    pub fn agreed(&self) -> &TaxonSet {
        &self.agreed
    }

    pub fn n_param(&self) -> usize {
        self.n_param
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn size(&self) -> usize {
        self.t.leaf_count()
    }

    pub fn taxa(&self) -> TaxonSet {
        self.t.taxa()
    }

    /// `log2(n_param)`, floored at 1 so thresholds stay finite for tiny runs.
    pub fn log_n(&self) -> f64 {
        (self.n_param as f64).log2().max(1.0)
    }

    pub fn taxon_at(&self, pos: usize) -> &Taxon {
        self.t.taxon_at(pos)
    }

    /// Taxa at positions `lo..=hi` of the common ordering.
    pub fn span_taxa(&self, lo: usize, hi: usize) -> TaxonSet {
        (lo..=hi).map(|p| self.t.taxon_at(p).clone()).collect()
    }

    /// Mirrors both trees when the left root subtree of `T_i` is the smaller one.
    pub fn normalize(&mut self) {
        if let Some((l, r)) = self.t.children(self.t.root()) {
            if self.t.size(l) < self.t.size(r) {
                self.t = self.t.mirror();
                self.s = self.s.mirror();
            }
        }
    }

    pub fn check_invariants(&self) -> Result<()> {
        if self.t.seq() != self.s.seq() {
            return Err(Error::Invariant("leaf orderings of the two trees differ".into()));
        }
        if let Some(t) = self.agreed.iter().find(|t| self.t.contains(t)) {
            return Err(Error::Invariant(format!("agreed taxon {t} still in the working set")));
        }
        Ok(())
    }

    /// Adds `pair.x` to the agreement set and restricts both trees to `pair.y`.
    pub fn apply_pair(&mut self, pair: &GoodPair, c: usize) -> Result<()> {
        pair.check(self, c)?;
        self.agreed.insert(pair.x.clone());
        self.restrict_to(&pair.y)
    }

    /// Adds a whole block to the agreement set and continues on `next`.
    pub fn apply_block(&mut self, block: &TaxonSet, next: &TaxonSet) -> Result<()> {
        if block.is_empty() || next.is_empty() || !block.is_disjoint(next) {
            return Err(Error::Invariant("block and continuation must be non-empty and disjoint".into()));
        }
        if block.iter().chain(next).any(|t| !self.t.contains(t)) {
            return Err(Error::Invariant("block outside the working set".into()));
        }
        self.agreed.extend(block.iter().cloned());
        self.restrict_to(next)
    }

    fn restrict_to(&mut self, keep: &TaxonSet) -> Result<()> {
        self.t = self.t.restrict(keep)?;
        self.s = self.s.restrict(keep)?;
        self.iteration += 1;
        self.check_invariants()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    /// `|Y| * C >= |X_i|`.
    Large,
    /// `|Y| * 2 log2(n) >= |X_i|`.
    Regular,
}

/// A taxon `x` and a set `Y` whose lowest common ancestor sits strictly
/// below that of `Y + x` in both trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodPair {
    pub x: Taxon,
    pub y: TaxonSet,
    pub tier: Tier,
}

impl GoodPair {
    /// Checks the definition against `state` by direct lca computation.
    pub fn check(&self, state: &IterationState, c: usize) -> Result<()> {
        if self.y.is_empty() || self.y.contains(&self.x) {
            return Err(Error::Invariant("good pair needs non-empty Y without x".into()));
        }
        for tree in [state.t(), state.s()] {
            let low = tree.lca(self.y.iter())?;
            let xp = tree.position(&self.x).ok_or_else(|| Error::Invariant(format!("x = {} not present", self.x)))?;
            let (lo, hi) = tree.span(low);
            if lo <= xp && xp <= hi {
                return Err(Error::Invariant(format!("x = {} lies below lca(Y)", self.x)));
            }
        }
        let n = state.size() as f64;
        let y = self.y.len() as f64;
        let ok = match self.tier {
            Tier::Large => y * c as f64 >= n,
            Tier::Regular => y * 2.0 * state.log_n() >= n,
        };
        if !ok {
            return Err(Error::Invariant(format!("|Y| = {} too small for a {:?} pair", self.y.len(), self.tier)));
        }
        Ok(())
    }
}
