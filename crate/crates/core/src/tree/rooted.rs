use std::collections::HashMap;

use super::unrooted::UnrootedTree;
use super::{NodeId, Phylogeny};
use crate::error::TreeError;
use crate::taxon::{LeafOrdering, Taxon, TaxonSet};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Node {
    parent: Option<NodeId>,
    children: Option<[NodeId; 2]>,
    taxon: Option<Taxon>,
}

/// A rooted binary tree with ordered children.
///
/// Leaf positions refer to the pre-order leaf sequence. Every node covers a
/// contiguous range of positions, which makes descendant tests and lca
/// queries cheap.
#[derive(Clone, Debug)]
pub struct RootedTree {
    nodes: Vec<Node>,
    root: NodeId,
    leaves: Vec<NodeId>,
    span: Vec<(u32, u32)>,
    index: HashMap<Taxon, NodeId>,
}

impl PartialEq for RootedTree {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root && self.nodes == other.nodes
    }
}

impl Eq for RootedTree {}

/// Incremental construction of a rooted tree, children before parents.
#[derive(Default)]
pub(crate) struct RootedBuilder {
    nodes: Vec<Node>,
}

impl RootedBuilder {
    pub(crate) fn with_capacity(n: usize) -> Self {
        RootedBuilder { nodes: Vec::with_capacity(n) }
    }

    pub(crate) fn leaf(&mut self, taxon: Taxon) -> NodeId {
        let id = NodeId::from_index(self.nodes.len());
        self.nodes.push(Node { parent: None, children: None, taxon: Some(taxon) });
        id
    }

    pub(crate) fn join(&mut self, left: NodeId, right: NodeId) -> NodeId {
        let id = NodeId::from_index(self.nodes.len());
        self.nodes.push(Node { parent: None, children: Some([left, right]), taxon: None });
        self.nodes[left.index()].parent = Some(id);
        self.nodes[right.index()].parent = Some(id);
        id
    }

    pub(crate) fn finish(self, root: NodeId) -> Result<RootedTree, TreeError> {
        RootedTree::assemble(self.nodes, root)
    }
}

impl RootedTree {
    fn assemble(nodes: Vec<Node>, root: NodeId) -> Result<Self, TreeError> {
        if root.index() >= nodes.len() {
            return Err(TreeError::Malformed("root out of range".into()));
        }
        if nodes[root.index()].parent.is_some() {
            return Err(TreeError::Malformed("root has a parent".into()));
        }
        let mut leaves = Vec::new();
        let mut span = vec![(u32::MAX, 0u32); nodes.len()];
        let mut order = Vec::with_capacity(nodes.len());
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            order.push(v);
            let node = &nodes[v.index()];
            match (node.children, &node.taxon) {
                (Some([l, r]), None) => {
                    stack.push(r);
                    stack.push(l);
                }
                (None, Some(_)) => {
                    let pos = leaves.len() as u32;
                    span[v.index()] = (pos, pos);
                    leaves.push(v);
                }
                _ => return Err(TreeError::Malformed(format!("node {v} is neither a leaf nor binary"))),
            }
        }
        if order.len() != nodes.len() {
            return Err(TreeError::Malformed("unreachable nodes".into()));
        }
        for &v in order.iter().rev() {
            if let Some([l, r]) = nodes[v.index()].children {
                span[v.index()] = (span[l.index()].0, span[r.index()].1);
            }
        }
        let mut index = HashMap::with_capacity(leaves.len());
        for &leaf in &leaves {
            let t = nodes[leaf.index()].taxon.clone().expect("leaf has a taxon");
            if index.insert(t.clone(), leaf).is_some() {
                return Err(TreeError::DuplicateLabel(t));
            }
        }
        Ok(RootedTree { nodes, root, leaves, span, index })
    }

    /// A one-leaf tree.
    pub fn single(taxon: impl Into<Taxon>) -> Self {
        let mut b = RootedBuilder::default();
        let v = b.leaf(taxon.into());
        b.finish(v).expect("single leaf is valid")
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.nodes[v.index()].children.is_none()
    }

    pub fn children(&self, v: NodeId) -> Option<(NodeId, NodeId)> {
        self.nodes[v.index()].children.map(|[l, r]| (l, r))
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.nodes[v.index()].parent
    }

    pub fn taxon(&self, v: NodeId) -> Option<&Taxon> {
        self.nodes[v.index()].taxon.as_ref()
    }

    pub fn node_of(&self, t: &Taxon) -> Option<NodeId> {
        self.index.get(t).copied()
    }

    pub fn contains(&self, t: &Taxon) -> bool {
        self.index.contains_key(t)
    }

    /// Position of a taxon in the leaf sequence.
    pub fn position(&self, t: &Taxon) -> Option<usize> {
        self.node_of(t).map(|v| self.span[v.index()].0 as usize)
    }

    pub fn leaf_at(&self, pos: usize) -> NodeId {
        self.leaves[pos]
    }

    pub fn taxon_at(&self, pos: usize) -> &Taxon {
        self.taxon(self.leaves[pos]).expect("leaves carry taxa")
    }

    /// Inclusive range of leaf positions below `v`.
    pub fn span(&self, v: NodeId) -> (usize, usize) {
        let (a, b) = self.span[v.index()];
        (a as usize, b as usize)
    }

    /// Number of leaves below `v`.
    pub fn size(&self, v: NodeId) -> usize {
        let (a, b) = self.span(v);
        b - a + 1
    }

    pub fn subtree_taxa(&self, v: NodeId) -> impl Iterator<Item = &Taxon> + '_ {
        let (a, b) = self.span(v);
        (a..=b).map(move |p| self.taxon_at(p))
    }

    /// The left-to-right pre-order leaf sequence.
    pub fn seq(&self) -> LeafOrdering {
        LeafOrdering((0..self.leaf_count()).map(|p| self.taxon_at(p).clone()).collect())
    }

    pub fn taxa(&self) -> TaxonSet {
        self.index.keys().cloned().collect()
    }

    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            if let Some((l, r)) = self.children(v) {
                stack.push(r);
                stack.push(l);
            }
        }
        out
    }

    /// Children are listed before their parent.
    pub fn postorder(&self) -> Vec<NodeId> {
        let mut out = self.preorder();
        out.reverse();
        out
    }

    /// `a ⪯ b`: `a` is `b` or lies below it.
    pub fn is_descendant(&self, a: NodeId, b: NodeId) -> bool {
        let (a0, a1) = self.span[a.index()];
        let (b0, b1) = self.span[b.index()];
        b0 <= a0 && a1 <= b1
    }

    pub fn is_comparable(&self, a: NodeId, b: NodeId) -> bool {
        self.is_descendant(a, b) || self.is_descendant(b, a)
    }

    /// Lowest node covering every leaf position in `lo..=hi`.
    pub fn lca_of_span(&self, lo: usize, hi: usize) -> NodeId {
        let mut v = self.leaves[lo];
        while (self.span[v.index()].1 as usize) < hi {
            v = self.parent(v).expect("root covers every position");
        }
        v
    }

    pub fn lca_nodes(&self, a: NodeId, b: NodeId) -> NodeId {
        let (a0, a1) = self.span(a);
        let (b0, b1) = self.span(b);
        let lo = a0.min(b0);
        let hi = a1.max(b1);
        let mut v = if a0 <= b0 { a } else { b };
        while self.span(v).0 > lo || self.span(v).1 < hi {
            v = self.parent(v).expect("root covers every position");
        }
        v
    }

    /// Lowest common ancestor of a non-empty set of taxa.
    pub fn lca<'a, I>(&self, set: I) -> Result<NodeId, TreeError>
    where
        I: IntoIterator<Item = &'a Taxon>,
    {
        let mut range: Option<(usize, usize)> = None;
        for t in set {
            let p = self.position(t).ok_or_else(|| TreeError::UnknownTaxon(t.clone()))?;
            range = Some(match range {
                None => (p, p),
                Some((lo, hi)) => (lo.min(p), hi.max(p)),
            });
        }
        let (lo, hi) = range.ok_or(TreeError::EmptySet)?;
        Ok(self.lca_of_span(lo, hi))
    }

    /// Restriction to the leaves whose positions satisfy `keep`, suppressing
    /// nodes left with a single child. Child order is inherited.
    fn restrict_positions(&self, keep: impl Fn(usize) -> bool) -> Result<RootedTree, TreeError> {
        let mut b = RootedBuilder::with_capacity(self.nodes.len());
        let mut image: Vec<Option<NodeId>> = vec![None; self.nodes.len()];
        for v in self.postorder() {
            image[v.index()] = match self.children(v) {
                None => {
                    let pos = self.span[v.index()].0 as usize;
                    keep(pos).then(|| b.leaf(self.taxon_at(pos).clone()))
                }
                Some((l, r)) => match (image[l.index()], image[r.index()]) {
                    (Some(x), Some(y)) => Some(b.join(x, y)),
                    (x, y) => x.or(y),
                },
            };
        }
        let root = image[self.root.index()].ok_or(TreeError::EmptySet)?;
        b.finish(root)
    }

    /// `T|Y`.
    pub fn restrict(&self, keep: &TaxonSet) -> Result<RootedTree, TreeError> {
        if keep.is_empty() {
            return Err(TreeError::EmptySet);
        }
        let mut mask = vec![false; self.leaf_count()];
        for t in keep {
            let p = self.position(t).ok_or_else(|| TreeError::UnknownTaxon(t.clone()))?;
            mask[p] = true;
        }
        self.restrict_positions(|p| mask[p])
    }

    /// Restriction to the contiguous leaf positions `lo..=hi`.
    pub fn restrict_span(&self, lo: usize, hi: usize) -> Result<RootedTree, TreeError> {
        if lo > hi || hi >= self.leaf_count() {
            return Err(TreeError::EmptySet);
        }
        self.restrict_positions(|p| lo <= p && p <= hi)
    }

    /// The subtree below `v` as a fresh tree.
    pub fn subtree(&self, v: NodeId) -> RootedTree {
        let (lo, hi) = self.span(v);
        self.restrict_span(lo, hi).expect("subtree span is non-empty")
    }

    /// Swaps the children of every internal node.
    pub fn mirror(&self) -> RootedTree {
        let mut nodes = self.nodes.clone();
        for n in &mut nodes {
            if let Some([l, r]) = n.children {
                n.children = Some([r, l]);
            }
        }
        RootedTree::assemble(nodes, self.root).expect("mirroring preserves validity")
    }

    /// Suppresses the root, joining its two children by an edge.
    pub fn deroot(&self) -> Result<UnrootedTree, TreeError> {
        let n = self.leaf_count();
        if n < 2 {
            return Err(TreeError::TooFewLeaves { needed: 2, found: n });
        }
        let (rl, rr) = self.children(self.root).expect("root of a tree with 2+ leaves is internal");
        // Node ids shift down past the root.
        let map = |v: NodeId| -> usize {
            if v.index() > self.root.index() {
                v.index() - 1
            } else {
                v.index()
            }
        };
        let mut edges = Vec::with_capacity(self.nodes.len());
        let mut labels = Vec::with_capacity(self.nodes.len() - 1);
        for (i, node) in self.nodes.iter().enumerate() {
            if i == self.root.index() {
                continue;
            }
            labels.push(node.taxon.clone());
            if let Some(p) = node.parent {
                if p != self.root {
                    edges.push((map(NodeId::from_index(i)), map(p)));
                }
            }
        }
        edges.push((map(rl), map(rr)));
        UnrootedTree::from_edges(labels, &edges)
    }

    /// The leaf ordering witnessing that this tree is a caterpillar: each
    /// leaf is incomparable with the lca of the leaves after it. The bottom
    /// cherry is listed in taxon order so that isomorphic caterpillars give
    /// identical orderings. `None` when the tree is not a caterpillar.
    pub fn caterpillar_ordering(&self) -> Option<LeafOrdering> {
        let mut out = Vec::with_capacity(self.leaf_count());
        let mut v = self.root;
        loop {
            match self.children(v) {
                None => {
                    out.push(self.taxon(v).unwrap().clone());
                    break;
                }
                Some((l, r)) => match (self.is_leaf(l), self.is_leaf(r)) {
                    (true, true) => {
                        let a = self.taxon(l).unwrap().clone();
                        let b = self.taxon(r).unwrap().clone();
                        if a <= b {
                            out.extend([a, b]);
                        } else {
                            out.extend([b, a]);
                        }
                        break;
                    }
                    (true, false) => {
                        out.push(self.taxon(l).unwrap().clone());
                        v = r;
                    }
                    (false, true) => {
                        out.push(self.taxon(r).unwrap().clone());
                        v = l;
                    }
                    (false, false) => return None,
                },
            }
        }
        Some(LeafOrdering(out))
    }

    /// Smallest taxon below each node.
    fn min_taxa(&self) -> Vec<&Taxon> {
        let mut min: Vec<Option<&Taxon>> = vec![None; self.nodes.len()];
        for v in self.postorder() {
            min[v.index()] = Some(match self.children(v) {
                None => self.taxon(v).unwrap(),
                Some((l, r)) => min[l.index()].unwrap().min(min[r.index()].unwrap()),
            });
        }
        min.into_iter().map(Option::unwrap).collect()
    }

    /// Canonical bracket form with children sorted by their smallest taxon.
    fn canonical(&self) -> Vec<Token<'_>> {
        let min = self.min_taxa();
        let mut out = Vec::with_capacity(3 * self.nodes.len());
        let mut stack = vec![Frame::Enter(self.root)];
        while let Some(f) = stack.pop() {
            match f {
                Frame::Close => out.push(Token::Close),
                Frame::Enter(v) => match self.children(v) {
                    None => out.push(Token::Leaf(self.taxon(v).unwrap())),
                    Some((l, r)) => {
                        let (a, b) = if min[l.index()] <= min[r.index()] { (l, r) } else { (r, l) };
                        out.push(Token::Open);
                        stack.push(Frame::Close);
                        stack.push(Frame::Enter(b));
                        stack.push(Frame::Enter(a));
                    }
                },
                Frame::Comma => {}
            }
        }
        out
    }

    pub fn isomorphic(&self, other: &RootedTree) -> bool {
        self.leaf_count() == other.leaf_count()
            && self.index.keys().all(|t| other.contains(t))
            && self.canonical() == other.canonical()
    }

    /// Newick text preserving child order.
    pub fn to_newick(&self) -> String {
        let mut out = String::new();
        self.write_subtree(self.root, &mut out, false);
        out.push(';');
        out
    }

    /// Writes the subtree at `v`; with `sorted`, children are emitted in
    /// order of their smallest taxon instead of their stored order.
    pub(crate) fn write_subtree(&self, v: NodeId, out: &mut String, sorted: bool) {
        let min = if sorted { Some(self.min_taxa()) } else { None };
        let mut stack = vec![Frame::Enter(v)];
        while let Some(f) = stack.pop() {
            match f {
                Frame::Close => out.push(')'),
                Frame::Enter(u) => match self.children(u) {
                    None => out.push_str(self.taxon(u).unwrap().as_str()),
                    Some((l, r)) => {
                        let (a, b) = match &min {
                            Some(m) if m[r.index()] < m[l.index()] => (r, l),
                            _ => (l, r),
                        };
                        out.push('(');
                        stack.push(Frame::Close);
                        stack.push(Frame::Enter(b));
                        stack.push(Frame::Comma);
                        stack.push(Frame::Enter(a));
                    }
                },
                Frame::Comma => out.push(','),
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Frame {
    Enter(NodeId),
    Comma,
    Close,
}

#[derive(PartialEq, Eq)]
enum Token<'a> {
    Open,
    Close,
    Leaf(&'a Taxon),
}

impl Phylogeny for RootedTree {
    fn leaf_count(&self) -> usize {
        RootedTree::leaf_count(self)
    }

    fn taxa(&self) -> TaxonSet {
        RootedTree::taxa(self)
    }

    fn restrict(&self, keep: &TaxonSet) -> Result<Self, TreeError> {
        RootedTree::restrict(self, keep)
    }

    fn isomorphic(&self, other: &Self) -> bool {
        RootedTree::isomorphic(self, other)
    }

    fn is_caterpillar(&self) -> bool {
        self.caterpillar_ordering().is_some()
    }

    fn to_newick(&self) -> String {
        RootedTree::to_newick(self)
    }
}
