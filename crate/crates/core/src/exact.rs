//! Exact maximum agreement subtree solvers.
//!
//! The rooted solver is the classic node-pair dynamic program, filled
//! bottom-up over post-orders of both trees so that path-like inputs need no
//! recursion. The unrooted solver reduces to one rooted instance per leaf:
//! an agreement set containing `x` is exactly `x` plus a rooted agreement
//! set of the two trees with `x` removed and re-rooted where `x` hung.
//! The brute-force solver enumerates subsets and is used as a test oracle.

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::taxon::{Taxon, TaxonSet};
use crate::tree::{agree_on, NodeId, Orientation, Phylogeny, RootedTree, UnrootedTree};

/// Default largest input accepted by [`brute_force_mast`].
pub const BRUTE_FORCE_CAP: usize = 10;
/// Default largest unrooted input the command line hands to the solver.
pub const UNROOTED_CAP: usize = 512;
/// Default largest rooted input the command line hands to the solver.
pub const ROOTED_CAP: usize = 2048;

/// A maximum agreement set together with the common restricted tree.
#[derive(Clone, Debug)]
pub struct MastResult<P> {
    pub size: usize,
    pub agreement_set: TaxonSet,
    pub witness: P,
}

impl<P: Phylogeny> MastResult<P> {
    fn build(t: &P, s: &P, agreement_set: TaxonSet) -> Result<Self> {
        let witness = t.restrict(&agreement_set)?;
        let result = MastResult { size: agreement_set.len(), agreement_set, witness };
        result.check(t, s)?;
        Ok(result)
    }

    /// Re-checks the result against the inputs: the size matches the set,
    /// both restrictions agree and the witness is that common tree.
    pub fn check(&self, t: &P, s: &P) -> Result<()> {
        if self.size != self.agreement_set.len() {
            return Err(Error::Invariant("size differs from agreement set".into()));
        }
        let a = t.restrict(&self.agreement_set)?;
        let b = s.restrict(&self.agreement_set)?;
        if !a.isomorphic(&b) {
            return Err(Error::Invariant("restrictions disagree".into()));
        }
        if !self.witness.isomorphic(&a) {
            return Err(Error::Invariant("witness is not the common restriction".into()));
        }
        Ok(())
    }
}

fn same_taxa<P: Phylogeny>(t: &P, s: &P) -> Result<()> {
    if t.leaf_count() != s.leaf_count() || t.taxa() != s.taxa() {
        return Err(Error::TaxaMismatch);
    }
    Ok(())
}

/// Node-pair table for the rooted recurrence.
struct PairTable<'a> {
    t: &'a RootedTree,
    s: &'a RootedTree,
    width: usize,
    val: Vec<u32>,
}

impl<'a> PairTable<'a> {
    fn fill(t: &'a RootedTree, s: &'a RootedTree) -> Self {
        let width = s.node_count();
        let mut val = vec![0u32; t.node_count() * width];
        // leaf of one tree -> position of the same taxon in the other
        let t_in_s: Vec<usize> = (0..t.leaf_count())
            .map(|p| s.position(t.taxon_at(p)).expect("taxa were checked"))
            .collect();
        let s_in_t: Vec<usize> = (0..s.leaf_count())
            .map(|p| t.position(s.taxon_at(p)).expect("taxa were checked"))
            .collect();
        let s_post = s.postorder();
        for u in t.postorder() {
            let row = u.index() * width;
            match t.children(u) {
                None => {
                    let q = t_in_s[t.span(u).0];
                    for &v in &s_post {
                        let (lo, hi) = s.span(v);
                        val[row + v.index()] = u32::from(lo <= q && q <= hi);
                    }
                }
                Some((ul, ur)) => {
                    let (tl, th) = t.span(u);
                    let rl = ul.index() * width;
                    let rr = ur.index() * width;
                    for &v in &s_post {
                        let best = match s.children(v) {
                            None => {
                                let q = s_in_t[s.span(v).0];
                                u32::from(tl <= q && q <= th)
                            }
                            Some((vl, vr)) => {
                                let (vl, vr) = (vl.index(), vr.index());
                                let straight = val[rl + vl] + val[rr + vr];
                                let crossed = val[rl + vr] + val[rr + vl];
                                straight
                                    .max(crossed)
                                    .max(val[row + vl])
                                    .max(val[row + vr])
                                    .max(val[rl + v.index()])
                                    .max(val[rr + v.index()])
                            }
                        };
                        val[row + v.index()] = best;
                    }
                }
            }
        }
        PairTable { t, s, width, val }
    }

    fn get(&self, u: NodeId, v: NodeId) -> u32 {
        self.val[u.index() * self.width + v.index()]
    }

    fn best(&self) -> usize {
        self.get(self.t.root(), self.s.root()) as usize
    }

    /// Recovers one optimal set. Ties are broken in a fixed order: matched
    /// children, crossed children, then the one-sided descents.
    fn backtrack(&self) -> TaxonSet {
        let mut out = TaxonSet::new();
        let mut stack = vec![(self.t.root(), self.s.root())];
        while let Some((u, v)) = stack.pop() {
            let here = self.get(u, v);
            if here == 0 {
                continue;
            }
            match (self.t.children(u), self.s.children(v)) {
                (None, _) => {
                    out.insert(self.t.taxon(u).unwrap().clone());
                }
                (_, None) => {
                    out.insert(self.s.taxon(v).unwrap().clone());
                }
                (Some((ul, ur)), Some((vl, vr))) => {
                    if self.get(ul, vl) + self.get(ur, vr) == here {
                        stack.extend([(ul, vl), (ur, vr)]);
                    } else if self.get(ul, vr) + self.get(ur, vl) == here {
                        stack.extend([(ul, vr), (ur, vl)]);
                    } else if self.get(u, vl) == here {
                        stack.push((u, vl));
                    } else if self.get(u, vr) == here {
                        stack.push((u, vr));
                    } else if self.get(ul, v) == here {
                        stack.push((ul, v));
                    } else {
                        stack.push((ur, v));
                    }
                }
            }
        }
        out
    }
}

/// Size of a maximum rooted agreement set, without recovering the set.
pub fn rooted_mast_size(t: &RootedTree, s: &RootedTree) -> Result<usize> {
    same_taxa(t, s)?;
    Ok(PairTable::fill(t, s).best())
}

/// Maximum agreement subtree of two rooted trees (child order ignored).
pub fn rooted_mast(t: &RootedTree, s: &RootedTree) -> Result<MastResult<RootedTree>> {
    same_taxa(t, s)?;
    let table = PairTable::fill(t, s);
    let set = table.backtrack();
    debug_assert_eq!(set.len(), table.best());
    MastResult::build(t, s, set)
}

/// `tree` without leaf `x`, rooted at the node `x` was attached to.
fn hang_from(tree: &UnrootedTree, x: &Taxon) -> Result<RootedTree> {
    let rooted = tree.root_at_edge(tree.pendant_edge(x)?, Orientation::MinTaxonLeft)?;
    let (a, b) = rooted.children(rooted.root()).expect("rooted at an edge");
    let rest = if rooted.taxon(a) == Some(x) { b } else { a };
    Ok(rooted.subtree(rest))
}

/// Maximum agreement subtree of two unrooted trees.
pub fn unrooted_mast(t: &UnrootedTree, s: &UnrootedTree) -> Result<MastResult<UnrootedTree>> {
    same_taxa(t, s)?;
    let taxa: Vec<Taxon> = t.taxa().into_iter().collect();
    if taxa.len() <= 3 {
        return MastResult::build(t, s, taxa.into_iter().collect());
    }
    let sizes: Vec<Result<usize>> = taxa
        .par_iter()
        .map(|x| {
            let tx = hang_from(t, x)?;
            let sx = hang_from(s, x)?;
            Ok(PairTable::fill(&tx, &sx).best())
        })
        .collect();
    let mut best: Option<(usize, &Taxon)> = None;
    for (x, size) in taxa.iter().zip(sizes) {
        let size = size?;
        if best.is_none_or(|(b, _)| size > b) {
            best = Some((size, x));
        }
    }
    let (_, x) = best.expect("at least one taxon");
    let tx = hang_from(t, x)?;
    let sx = hang_from(s, x)?;
    let mut set = PairTable::fill(&tx, &sx).backtrack();
    set.insert(x.clone());
    MastResult::build(t, s, set)
}

/// Exhaustive search: subsets by decreasing size, each size in
/// lexicographic order of the sorted taxa. Refuses inputs above `cap`.
pub fn brute_force_mast<P: Phylogeny>(t: &P, s: &P, cap: usize) -> Result<MastResult<P>> {
    same_taxa(t, s)?;
    let n = t.leaf_count();
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let taxa: Vec<Taxon> = t.taxa().into_iter().collect();
    for k in (1..=n).rev() {
        for combo in taxa.iter().cloned().combinations(k) {
            let set: TaxonSet = combo.into_iter().collect();
            if agree_on(t, s, &set)? {
                return MastResult::build(t, s, set);
            }
        }
    }
    unreachable!("a single leaf always agrees")
}
