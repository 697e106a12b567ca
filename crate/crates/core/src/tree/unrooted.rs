use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rooted::{RootedBuilder, RootedTree};
use super::{NodeId, Orientation, Phylogeny};
use crate::error::TreeError;
use crate::taxon::{Taxon, TaxonSet};

/// An undirected edge, stored with the smaller id first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(pub NodeId, pub NodeId);

impl Edge {
    pub fn new(a: NodeId, b: NodeId) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }
}

/// An unrooted binary tree: leaves have degree one, internal nodes degree
/// three. Trees with one or two leaves are allowed (one node, or two nodes
/// joined by an edge).
#[derive(Clone, Debug)]
pub struct UnrootedTree {
    adj: Vec<Vec<NodeId>>,
    labels: Vec<Option<Taxon>>,
    index: HashMap<Taxon, NodeId>,
}

impl PartialEq for UnrootedTree {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj && self.labels == other.labels
    }
}

impl Eq for UnrootedTree {}

impl UnrootedTree {
    /// Builds a tree from per-node labels (leaves labelled, internal nodes
    /// not) and an edge list over node indices.
    pub fn from_edges(labels: Vec<Option<Taxon>>, edges: &[(usize, usize)]) -> Result<Self, TreeError> {
        let n = labels.len();
        if n == 0 {
            return Err(TreeError::EmptySet);
        }
        if edges.len() + 1 != n {
            return Err(TreeError::Malformed(format!("{n} nodes need {} edges, got {}", n - 1, edges.len())));
        }
        let mut adj = vec![Vec::with_capacity(3); n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(TreeError::Malformed(format!("bad edge ({a},{b})")));
            }
            adj[a].push(NodeId::from_index(b));
            adj[b].push(NodeId::from_index(a));
        }
        let mut index = HashMap::new();
        for (i, label) in labels.iter().enumerate() {
            let deg = adj[i].len();
            match label {
                Some(t) => {
                    if deg > 1 {
                        return Err(TreeError::Degree(format!("leaf {t} has degree {deg}")));
                    }
                    if index.insert(t.clone(), NodeId::from_index(i)).is_some() {
                        return Err(TreeError::DuplicateLabel(t.clone()));
                    }
                }
                None if deg != 3 => {
                    return Err(TreeError::Degree(format!("internal node #{i} has degree {deg}")));
                }
                None => {}
            }
        }
        // n - 1 edges plus connectivity means acyclic.
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u.index()] {
                    seen[u.index()] = true;
                    count += 1;
                    stack.push(u.index());
                }
            }
        }
        if count != n {
            return Err(TreeError::Malformed("tree is disconnected".into()));
        }
        Ok(UnrootedTree { adj, labels, index })
    }

    pub fn single(taxon: impl Into<Taxon>) -> Self {
        UnrootedTree::from_edges(vec![Some(taxon.into())], &[]).expect("single leaf is valid")
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.index.len()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v.index()]
    }

    pub fn taxon(&self, v: NodeId) -> Option<&Taxon> {
        self.labels[v.index()].as_ref()
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.labels[v.index()].is_some()
    }

    pub fn node_of(&self, t: &Taxon) -> Option<NodeId> {
        self.index.get(t).copied()
    }

    pub fn contains(&self, t: &Taxon) -> bool {
        self.index.contains_key(t)
    }

    pub fn taxa(&self) -> TaxonSet {
        self.index.keys().cloned().collect()
    }

    pub fn min_taxon(&self) -> &Taxon {
        self.index.keys().min().expect("trees have at least one leaf")
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| {
                let a = NodeId::from_index(i);
                ns.iter().filter(move |&&b| a < b).map(move |&b| Edge(a, b))
            })
            .collect();
        out.sort();
        out
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        e.0.index() < self.adj.len() && self.adj[e.0.index()].contains(&e.1)
    }

    /// The edge joining leaf `t` to the rest of the tree.
    pub fn pendant_edge(&self, t: &Taxon) -> Result<Edge, TreeError> {
        let v = self.node_of(t).ok_or_else(|| TreeError::UnknownTaxon(t.clone()))?;
        let u = *self.adj[v.index()]
            .first()
            .ok_or(TreeError::TooFewLeaves { needed: 2, found: 1 })?;
        Ok(Edge::new(v, u))
    }

    /// The default rooting edge: the pendant edge of the smallest taxon.
    pub fn canonical_edge(&self) -> Result<Edge, TreeError> {
        self.pendant_edge(self.min_taxon())
    }

    /// Subdivides `e` with a new root and orients every internal node.
    pub fn root_at_edge(&self, e: Edge, orient: Orientation) -> Result<RootedTree, TreeError> {
        let n = self.leaf_count();
        if n < 2 {
            return Err(TreeError::TooFewLeaves { needed: 2, found: n });
        }
        if !self.has_edge(e) {
            return Err(TreeError::EdgeNotInTree(e.0.index(), e.1.index()));
        }
        let mut rng = match orient {
            Orientation::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            Orientation::MinTaxonLeft => None,
        };
        let mut b = RootedBuilder::with_capacity(self.node_count() + 1);
        let (x, mx) = self.build_side(e.0, e.1, &mut b, rng.as_mut());
        let (y, my) = self.build_side(e.1, e.0, &mut b, rng.as_mut());
        let root = join_oriented(&mut b, (x, mx), (y, my), rng.as_mut());
        b.finish(root)
    }

    /// Rooted copy of the component containing `start` once the edge to
    /// `away` is cut. Returns the new subtree root and its smallest taxon.
    fn build_side<'a>(
        &'a self,
        start: NodeId,
        away: NodeId,
        b: &mut RootedBuilder,
        mut rng: Option<&mut ChaCha8Rng>,
    ) -> (NodeId, &'a Taxon) {
        let mut order = Vec::new();
        let mut stack = vec![(start, away)];
        while let Some((v, p)) = stack.pop() {
            order.push((v, p));
            for &u in self.neighbors(v).iter().rev() {
                if u != p {
                    stack.push((u, v));
                }
            }
        }
        let mut image: HashMap<NodeId, (NodeId, &Taxon)> = HashMap::with_capacity(order.len());
        for &(v, p) in order.iter().rev() {
            let made = match self.taxon(v) {
                Some(t) => (b.leaf(t.clone()), t),
                None => {
                    let mut kids = self.neighbors(v).iter().filter(|&&u| u != p).map(|u| image[u]);
                    let l = kids.next().expect("internal node has two children");
                    let r = kids.next().expect("internal node has two children");
                    let id = join_oriented(b, l, r, rng.as_deref_mut());
                    (id, l.1.min(r.1))
                }
            };
            image.insert(v, made);
        }
        image[&start]
    }

    /// Rooted at the canonical edge with min-taxon orientation.
    pub fn rooted_canonical(&self) -> Result<RootedTree, TreeError> {
        self.root_at_edge(self.canonical_edge()?, Orientation::MinTaxonLeft)
    }

    pub fn restrict(&self, keep: &TaxonSet) -> Result<UnrootedTree, TreeError> {
        let first = keep.iter().next().ok_or(TreeError::EmptySet)?;
        for t in keep {
            if !self.contains(t) {
                return Err(TreeError::UnknownTaxon(t.clone()));
            }
        }
        if keep.len() == 1 {
            return Ok(UnrootedTree::single(first.clone()));
        }
        let rooted = self.root_at_edge(self.pendant_edge(first)?, Orientation::MinTaxonLeft)?;
        rooted.restrict(keep)?.deroot()
    }

    pub fn isomorphic(&self, other: &UnrootedTree) -> bool {
        if self.leaf_count() != other.leaf_count() || !self.index.keys().all(|t| other.contains(t)) {
            return false;
        }
        if self.leaf_count() <= 3 {
            return true;
        }
        match (self.rooted_canonical(), other.rooted_canonical()) {
            (Ok(a), Ok(b)) => a.isomorphic(&b),
            _ => false,
        }
    }

    pub fn is_caterpillar(&self) -> bool {
        (0..self.node_count()).all(|i| {
            self.labels[i].is_some() || self.adj[i].iter().any(|&u| self.is_leaf(u))
        })
    }

    /// Canonical Newick: a trifurcating top node next to the smallest taxon,
    /// subtrees ordered by their smallest taxon.
    pub fn to_newick(&self) -> String {
        match self.leaf_count() {
            1 => format!("{};", self.min_taxon()),
            2 => {
                let mut ts: Vec<&Taxon> = self.index.keys().collect();
                ts.sort();
                format!("({},{});", ts[0], ts[1])
            }
            _ => {
                let rooted = self.rooted_canonical().expect("3+ leaves can be rooted");
                let (leaf, rest) = rooted.children(rooted.root()).unwrap();
                let (a, b) = rooted.children(rest).expect("neighbour of a leaf is internal");
                let mut out = String::from("(");
                out.push_str(rooted.taxon(leaf).unwrap().as_str());
                out.push(',');
                rooted.write_subtree(a, &mut out, true);
                out.push(',');
                rooted.write_subtree(b, &mut out, true);
                out.push_str(");");
                out
            }
        }
    }
}

fn join_oriented<'a>(
    b: &mut RootedBuilder,
    l: (NodeId, &'a Taxon),
    r: (NodeId, &'a Taxon),
    rng: Option<&mut ChaCha8Rng>,
) -> NodeId {
    let swap = match rng {
        Some(rng) => rng.gen_bool(0.5),
        None => r.1 < l.1,
    };
    if swap {
        b.join(r.0, l.0)
    } else {
        b.join(l.0, r.0)
    }
}

impl Phylogeny for UnrootedTree {
    fn leaf_count(&self) -> usize {
        UnrootedTree::leaf_count(self)
    }

    fn taxa(&self) -> TaxonSet {
        UnrootedTree::taxa(self)
    }

    fn restrict(&self, keep: &TaxonSet) -> Result<Self, TreeError> {
        UnrootedTree::restrict(self, keep)
    }

    fn isomorphic(&self, other: &Self) -> bool {
        UnrootedTree::isomorphic(self, other)
    }

    fn is_caterpillar(&self) -> bool {
        UnrootedTree::is_caterpillar(self)
    }

    fn to_newick(&self) -> String {
        UnrootedTree::to_newick(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taxon::taxa;
    use crate::tree::{parse_rooted, parse_unrooted};

    fn u(s: &str) -> UnrootedTree {
        parse_unrooted(s).unwrap()
    }

    #[test]
    fn quartet_round_trip() {
        assert_eq!(u("(1,2,(3,4));").to_newick(), "(1,2,(3,4));");
        assert_eq!(u("((3,4),2,1);").to_newick(), "(1,2,(3,4));");
        assert_eq!(UnrootedTree::single("1").to_newick(), "1;");
    }

    #[test]
    fn restrict_examples() {
        let r = u("(1,2,(3,4));").restrict(&taxa([1usize, 2, 4])).unwrap();
        assert_eq!(r.leaf_count(), 3);
        assert_eq!(r.node_count(), 4);
        let q = u("((1,2),3,(4,5));").restrict(&taxa([1usize, 2, 4, 5])).unwrap();
        assert!(q.isomorphic(&u("(1,2,(4,5));")));
        assert!(!q.isomorphic(&u("(1,4,(2,5));")));
    }

    #[test]
    fn root_at_internal_edge() {
        let t = u("(1,2,(3,4));");
        let internal = t
            .edges()
            .into_iter()
            .find(|e| !t.is_leaf(e.0) && !t.is_leaf(e.1))
            .unwrap();
        let r = t.root_at_edge(internal, Orientation::MinTaxonLeft).unwrap();
        assert!(r.isomorphic(&parse_rooted("((1,2),(3,4));").unwrap()));
        assert_eq!(r.to_newick(), "((1,2),(3,4));");
        assert!(r.deroot().unwrap().isomorphic(&t));
    }

    #[test]
    fn root_two_leaf_tree() {
        let t = u("(1,2);");
        let e = t.edges()[0];
        assert_eq!(t.root_at_edge(e, Orientation::MinTaxonLeft).unwrap().to_newick(), "(1,2);");
    }

    #[test]
    fn root_rejects_non_edges() {
        let t = u("(1,2,(3,4));");
        let a = t.node_of(&"1".into()).unwrap();
        let b = t.node_of(&"4".into()).unwrap();
        assert!(matches!(
            t.root_at_edge(Edge::new(a, b), Orientation::MinTaxonLeft),
            Err(TreeError::EdgeNotInTree(..))
        ));
        assert!(UnrootedTree::single("1").root_at_edge(Edge::new(a, a), Orientation::MinTaxonLeft).is_err());
    }

    #[test]
    fn seeded_orientation_is_reproducible() {
        let t = u("((1,2),(3,(4,5)),(6,7));");
        let e = t.canonical_edge().unwrap();
        let a = t.root_at_edge(e, Orientation::Seeded(9)).unwrap();
        let b = t.root_at_edge(e, Orientation::Seeded(9)).unwrap();
        assert_eq!(a, b);
        assert!(a.deroot().unwrap().isomorphic(&t));
    }

    #[test]
    fn small_trees_are_caterpillars() {
        assert!(u("(1,2,(3,4));").is_caterpillar());
        assert!(u("(1,2,3);").is_caterpillar());
        assert!(!u("((1,2),(3,4),(5,6));").is_caterpillar());
    }

    #[test]
    fn from_edges_validates() {
        let l = |s: &str| Some(Taxon::from(s));
        assert!(matches!(
            UnrootedTree::from_edges(vec![l("1"), l("1")], &[(0, 1)]),
            Err(TreeError::DuplicateLabel(_))
        ));
        assert!(matches!(
            UnrootedTree::from_edges(vec![l("1"), l("2"), None], &[(0, 2), (1, 2)]),
            Err(TreeError::Degree(_))
        ));
    }
}
