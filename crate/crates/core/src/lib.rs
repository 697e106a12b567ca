pub mod construction;
pub mod error;
pub mod exact;
pub mod generators;
pub mod harness;
pub mod taxon;
pub mod tree;

pub use error::{Error, Result, TreeError};
pub use taxon::{taxa, LeafOrdering, Taxon, TaxonSet};
pub use tree::{agree_on, Edge, NodeId, Orientation, Phylogeny, RootedTree, UnrootedTree};
