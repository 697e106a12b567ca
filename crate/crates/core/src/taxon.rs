//! Leaf labels.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// A leaf label.
///
/// Labels compare numerically when both parse as unsigned integers, so the
/// generated taxa `1..n` sort as numbers rather than strings. Purely numeric
/// labels sort before everything else; the remaining labels sort
/// lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", from = "String")]
pub struct Taxon(Arc<str>);

/// Taxon sets are kept ordered so that iteration is reproducible.
pub type TaxonSet = BTreeSet<Taxon>;

impl Taxon {
    pub fn new(label: impl AsRef<str>) -> Self {
        Taxon(Arc::from(label.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn numeric(&self) -> Option<u128> {
        if self.0.is_empty() || !self.0.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        self.0.parse().ok()
    }
}

impl Ord for Taxon {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.numeric(), other.numeric()) {
            (Some(a), Some(b)) => a.cmp(&b).then_with(|| self.0.cmp(&other.0)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for Taxon {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Taxon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Taxon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl From<&str> for Taxon {
    fn from(s: &str) -> Self {
        Taxon::new(s)
    }
}

impl From<String> for Taxon {
    fn from(s: String) -> Self {
        Taxon(Arc::from(s))
    }
}

impl From<usize> for Taxon {
    fn from(n: usize) -> Self {
        Taxon::new(n.to_string())
    }
}

impl From<Taxon> for String {
    fn from(t: Taxon) -> Self {
        t.0.to_string()
    }
}

/// Builds a taxon set from anything convertible to taxa.
pub fn taxa<I, T>(items: I) -> TaxonSet
where
    I: IntoIterator<Item = T>,
    T: Into<Taxon>,
{
    items.into_iter().map(Into::into).collect()
}

/// A left-to-right sequence of taxa, typically the pre-order leaf sequence of
/// a rooted tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LeafOrdering(pub Vec<Taxon>);

impl LeafOrdering {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Taxon> {
        self.0.iter()
    }

    pub fn reversed(&self) -> LeafOrdering {
        LeafOrdering(self.0.iter().rev().cloned().collect())
    }

    pub fn to_set(&self) -> TaxonSet {
        self.0.iter().cloned().collect()
    }

    /// Keeps only the taxa in `keep`, preserving order.
    pub fn filtered(&self, keep: &TaxonSet) -> LeafOrdering {
        LeafOrdering(self.0.iter().filter(|t| keep.contains(t)).cloned().collect())
    }

    /// Parses a comma- or whitespace-separated label list.
    pub fn parse_list(text: &str) -> LeafOrdering {
        LeafOrdering(
            text.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(Taxon::new)
                .collect(),
        )
    }
}

impl<T: Into<Taxon>> FromIterator<T> for LeafOrdering {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        LeafOrdering(iter.into_iter().map(Into::into).collect())
    }
}

impl fmt::Display for LeafOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}
