//! Agreement-set constructions with provable size.
//!
//! Both constructions root the inputs, align their leaf orderings with a
//! longest monotone common subsequence and then shrink the working set one
//! good pair (or one block) at a time. Every outcome is verified by explicit
//! isomorphism of restrictions before it is returned.

pub mod decomposition;
pub mod monotone;
pub mod pairs;
pub mod split;
pub mod state;
pub mod strong;
pub mod weak;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::taxon::TaxonSet;
use crate::tree::{agree_on, Edge, Orientation, Phylogeny};

pub use decomposition::{path_decomposition, Interval, PathDecomposition};
pub use monotone::{common_monotone_subsequence, Direction};
pub use pairs::{
    classify_iteration, find_good_pair_big_subtree, find_good_pair_structural, greedy_caterpillar, Classification,
};
pub use split::{strong_split, FallbackSource, SplitOutcome};
pub use state::{setup, GoodPair, IterationState, Setup, Tier};
pub use strong::main_construct;
pub use weak::{run_weak, weak_construct, weak_rooted_bound};

/// Constant used by the rooted-chain construction.
pub const WEAK_C: usize = 4;
/// Constant used by the main construction.
pub const MAIN_C: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionConfig {
    pub weak_c: usize,
    pub main_c: usize,
    pub orientation: Orientation,
    /// Rooting edges for `T` and `S`; the pendant edge of the smallest
    /// taxon when absent.
    pub rooting: Option<(Edge, Edge)>,
}

impl Default for ConstructionConfig {
    fn default() -> Self {
        ConstructionConfig { weak_c: WEAK_C, main_c: MAIN_C, orientation: Orientation::MinTaxonLeft, rooting: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    RootedCaterpillar,
    UnrootedCaterpillar,
    BlockTree,
}

impl OutcomeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OutcomeKind::RootedCaterpillar => "rooted_caterpillar",
            OutcomeKind::UnrootedCaterpillar => "unrooted_caterpillar",
            OutcomeKind::BlockTree => "block_tree",
        }
    }

    pub fn is_rooted(self) -> bool {
        self != OutcomeKind::UnrootedCaterpillar
    }
}

impl std::fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An agreement set together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionOutcome {
    pub agreement_set: TaxonSet,
    pub kind: OutcomeKind,
    /// Which branch of the construction produced the set, e.g.
    /// `weak:rooted-chain` or `main:desk-fallback:no-middle-run`.
    pub branch: String,
    pub claimed_bound: f64,
    /// Single-taxon transitions taken.
    pub pair_steps: usize,
    /// Block transitions taken (main construction only).
    pub block_steps: usize,
}

impl ConstructionOutcome {
    pub fn size(&self) -> usize {
        self.agreement_set.len()
    }

    pub fn meets_claim(&self) -> bool {
        self.size() as f64 >= self.claimed_bound
    }
}

/// A verified outcome plus the rooted set-up it refers to.
#[derive(Clone, Debug)]
pub struct Construction {
    pub setup: Setup,
    pub outcome: ConstructionOutcome,
}

/// Checks that the set is an agreement set of the right kind: rooted kinds
/// on the rooted set-up trees, the unrooted kind on the original trees.
pub fn verify_agreement(setup: &Setup, set: &TaxonSet, kind: OutcomeKind) -> Result<bool> {
    if kind.is_rooted() {
        let agree = agree_on(&setup.t_rooted, &setup.s_rooted, set)?;
        if agree && kind == OutcomeKind::RootedCaterpillar {
            return Ok(setup.t_rooted.restrict(set)?.is_caterpillar());
        }
        Ok(agree)
    } else {
        let agree = agree_on(&setup.t, &setup.s, set)?;
        Ok(agree && setup.t.restrict(set)?.is_caterpillar())
    }
}

pub(crate) fn ensure_verified(setup: &Setup, outcome: &ConstructionOutcome) -> Result<()> {
    if verify_agreement(setup, &outcome.agreement_set, outcome.kind)? {
        Ok(())
    } else {
        Err(Error::Invariant(format!("{} outcome from {} does not verify", outcome.kind, outcome.branch)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taxon::taxa;
    use crate::tree::parse_unrooted;

    #[test]
    fn verify_small_sets() {
        let t = parse_unrooted("((1,2),(3,4),5);").unwrap();
        let s = parse_unrooted("((1,3),(2,4),5);").unwrap();
        let (setup, _) = setup(&t, &s, None, Orientation::MinTaxonLeft).unwrap();
        for kind in [OutcomeKind::RootedCaterpillar, OutcomeKind::UnrootedCaterpillar, OutcomeKind::BlockTree] {
            assert!(verify_agreement(&setup, &taxa(["1"]), kind).unwrap());
            assert!(verify_agreement(&setup, &taxa(["2", "5"]), kind).unwrap());
        }
        assert!(!verify_agreement(&setup, &taxa(1usize..=4), OutcomeKind::UnrootedCaterpillar).unwrap());
        assert!(verify_agreement(&setup, &taxa(["9"]), OutcomeKind::BlockTree).is_err());
    }
}
