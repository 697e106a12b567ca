#![allow(dead_code)]

use mastkit::generators::{rng, uniform};
use mastkit::{Orientation, RootedTree, TaxonSet, UnrootedTree};
use rand::seq::IteratorRandom;
use rand::Rng;

/// A uniform unrooted tree rooted at a seeded random edge with seeded
/// child orders.
pub fn random_rooted(n: usize, seed: u64) -> RootedTree {
    let t = uniform(n, seed).unwrap();
    if n == 1 {
        return t.rooted_canonical().unwrap_or_else(|_| RootedTree::single("1"));
    }
    let mut r = rng(seed ^ 0x5151);
    let e = t.edges().into_iter().choose(&mut r).unwrap();
    t.root_at_edge(e, Orientation::Seeded(seed)).unwrap()
}

pub fn random_pair(n: usize, seed: u64) -> (UnrootedTree, UnrootedTree) {
    (uniform(n, seed).unwrap(), uniform(n, seed.wrapping_mul(31).wrapping_add(7)).unwrap())
}

/// Non-empty random subset of `set`.
pub fn random_subset(set: &TaxonSet, seed: u64) -> TaxonSet {
    let mut r = rng(seed);
    let mut out: TaxonSet = set.iter().filter(|_| r.gen_bool(0.5)).cloned().collect();
    if out.is_empty() {
        out.insert(set.iter().choose(&mut r).unwrap().clone());
    }
    out
}

pub fn log2(n: usize) -> f64 {
    (n as f64).log2()
}
