//! Binary phylogenetic trees: rooted and unrooted representations, Newick
//! I/O, restriction, rooting and isomorphism.

mod newick;
mod rooted;
mod unrooted;

pub(crate) use rooted::RootedBuilder;

use std::fmt;

pub use newick::{parse_auto, parse_newick, parse_rooted, parse_unrooted, ParsedTree};
pub use rooted::RootedTree;
pub use unrooted::{Edge, UnrootedTree};

use crate::error::TreeError;
use crate::taxon::TaxonSet;

/// Index of a node inside one tree value. Ids are not meaningful across
/// trees; every operation that builds a tree hands out fresh ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(i: usize) -> Self {
        NodeId(u32::try_from(i).expect("node index overflows u32"))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// How the two children of each internal node are ordered when a tree is
/// rooted from an unrooted one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Orientation {
    /// The child whose subtree holds the smallest taxon goes left.
    #[default]
    MinTaxonLeft,
    /// Children are ordered by coin flips from a ChaCha8 stream with this seed.
    Seeded(u64),
}

/// Operations shared by rooted and unrooted trees.
pub trait Phylogeny: Clone + Sized + fmt::Debug {
    fn leaf_count(&self) -> usize;
    fn taxa(&self) -> TaxonSet;
    fn restrict(&self, keep: &TaxonSet) -> Result<Self, TreeError>;
    /// Label-preserving isomorphism. Child order of rooted trees is ignored.
    fn isomorphic(&self, other: &Self) -> bool;
    fn is_caterpillar(&self) -> bool;
    fn to_newick(&self) -> String;
}

/// True when `t` and `s` agree on `set`: both restrictions exist and are
/// isomorphic.
pub fn agree_on<P: Phylogeny>(t: &P, s: &P, set: &TaxonSet) -> Result<bool, TreeError> {
    if set.is_empty() {
        return Err(TreeError::EmptySet);
    }
    let a = t.restrict(set)?;
    let b = s.restrict(set)?;
    Ok(a.isomorphic(&b))
}
