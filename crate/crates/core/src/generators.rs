//! Reproducible tree generators. All randomness comes from ChaCha8 seeded
//! with the caller's 64-bit seed, so outputs are identical across platforms.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::taxon::Taxon;
use crate::tree::{NodeId, RootedBuilder, UnrootedTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Uniform,
    Caterpillar,
    Balanced,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Uniform, Model::Caterpillar, Model::Balanced];

    pub fn as_str(self) -> &'static str {
        match self {
            Model::Uniform => "uniform",
            Model::Caterpillar => "caterpillar",
            Model::Balanced => "balanced",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Generator(format!("unknown model {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub model: Model,
    pub n: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(model: Model, n: usize, seed: u64) -> Self {
        GenSpec { model, n, seed }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generates one unrooted tree on taxa `1..=n`.
pub fn generate(spec: &GenSpec) -> Result<UnrootedTree> {
    match spec.model {
        Model::Uniform => uniform(spec.n, spec.seed),
        Model::Caterpillar => caterpillar(spec.n),
        Model::Balanced => balanced(spec.n),
    }
}

fn labels(n: usize) -> Vec<Taxon> {
    (1..=n).map(Taxon::from).collect()
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Generator("n must be at least 1".into()));
    }
    Ok(())
}

/// Uniform labeled topology: leaves inserted in a seeded random order, each
/// subdividing a uniformly chosen existing edge.
pub fn uniform(n: usize, seed: u64) -> Result<UnrootedTree> {
    check_n(n)?;
    let mut rng = rng(seed);
    let mut order = labels(n);
    order.shuffle(&mut rng);
    uniform_on(order, &mut rng)
}

/// Uniform topology on the given taxa, inserted in the given order.
pub fn uniform_on<R: Rng>(order: Vec<Taxon>, rng: &mut R) -> Result<UnrootedTree> {
    let n = order.len();
    check_n(n)?;
    if n == 1 {
        return Ok(UnrootedTree::single(order[0].clone()));
    }
    let mut nodes: Vec<Option<Taxon>> = Vec::with_capacity(2 * n - 2);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(2 * n - 3);
    let mut it = order.into_iter();
    nodes.push(it.next());
    nodes.push(it.next());
    edges.push((0, 1));
    for leaf in it {
        let e = rng.gen_range(0..edges.len());
        let (a, b) = edges[e];
        let w = nodes.len();
        nodes.push(None);
        let l = nodes.len();
        nodes.push(Some(leaf));
        edges[e] = (a, w);
        edges.push((w, b));
        edges.push((w, l));
    }
    Ok(UnrootedTree::from_edges(nodes, &edges)?)
}

/// Unrooted caterpillar with spine order `1..=n`.
pub fn caterpillar(n: usize) -> Result<UnrootedTree> {
    check_n(n)?;
    caterpillar_on(&labels(n))
}

/// Unrooted caterpillar whose leaves read `order` along the spine.
pub fn caterpillar_on(order: &[Taxon]) -> Result<UnrootedTree> {
    let n = order.len();
    check_n(n)?;
    if n == 1 {
        return Ok(UnrootedTree::single(order[0].clone()));
    }
    if n == 2 {
        return Ok(UnrootedTree::from_edges(vec![Some(order[0].clone()), Some(order[1].clone())], &[(0, 1)])?);
    }
    // Leaves take ids 0..n, spine nodes n..2n-2.
    let spine = |i: usize| n + i;
    let mut nodes: Vec<Option<Taxon>> = order.iter().cloned().map(Some).collect();
    nodes.extend(std::iter::repeat_n(None, n - 2));
    let mut edges = Vec::with_capacity(2 * n - 3);
    for i in 0..n - 3 {
        edges.push((spine(i), spine(i + 1)));
    }
    edges.push((0, spine(0)));
    for (leaf, _) in order.iter().enumerate().skip(1).take(n - 2) {
        edges.push((leaf, spine(leaf - 1)));
    }
    edges.push((n - 1, spine(n - 3)));
    Ok(UnrootedTree::from_edges(nodes, &edges)?)
}

/// Complete binary tree on `n = 2^k` leaves with in-order labels, de-rooted.
pub fn balanced(n: usize) -> Result<UnrootedTree> {
    check_n(n)?;
    if !n.is_power_of_two() {
        return Err(Error::Generator(format!("balanced trees need a power of two, got {n}")));
    }
    if n == 1 {
        return Ok(UnrootedTree::single(Taxon::from(1usize)));
    }
    let mut b = RootedBuilder::with_capacity(2 * n - 1);
    let mut level: Vec<NodeId> = labels(n).into_iter().map(|t| b.leaf(t)).collect();
    while level.len() > 1 {
        level = level.chunks(2).map(|p| b.join(p[0], p[1])).collect();
    }
    Ok(b.finish(level[0])?.deroot()?)
}

/// A balanced tree and a caterpillar on `1..=n` whose spine order is a
/// seeded permutation.
pub fn adversarial_pair(n: usize, seed: u64) -> Result<(UnrootedTree, UnrootedTree)> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::Generator(format!("adversarial pairs need n = 2^k >= 4, got {n}")));
    }
    let mut order = labels(n);
    order.shuffle(&mut rng(seed));
    Ok((balanced(n)?, caterpillar_on(&order)?))
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::taxon::taxa;

    #[test]
    fn caterpillar_five_has_two_cherries() {
        let t = caterpillar(5).unwrap();
        assert!(t.is_caterpillar());
        assert_eq!(t.node_count(), 8);
        assert_eq!(t.to_newick(), "(1,2,(3,(4,5)));");
    }

    #[test]
    fn balanced_shapes() {
        assert!(!balanced(8).unwrap().is_caterpillar());
        assert!(balanced(4).unwrap().is_caterpillar());
        assert!(balanced(6).is_err());
        assert_eq!(balanced(2).unwrap().leaf_count(), 2);
    }

    #[test]
    fn uniform_small_cases() {
        for seed in 0..5 {
            let t = uniform(2, seed).unwrap();
            assert_eq!(t.node_count(), 2);
            assert_eq!(uniform(1, seed).unwrap().leaf_count(), 1);
        }
        assert!(uniform(0, 1).is_err());
    }

    #[test]
    fn deterministic() {
        for model in Model::ALL {
            let spec = GenSpec::new(model, 16, 42);
            assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        }
        assert_ne!(uniform(30, 1).unwrap().to_newick(), uniform(30, 2).unwrap().to_newick());
    }

    #[test]
    fn uniform_is_uniform_on_five_leaves() {
        let samples = 10_000;
        let mut counts: HashMap<String, usize> = HashMap::new();
        for seed in 0..samples {
            *counts.entry(uniform(5, seed).unwrap().to_newick()).or_default() += 1;
        }
        assert_eq!(counts.len(), 15);
        for (shape, c) in counts {
            let f = c as f64 / samples as f64;
            assert!((f - 1.0 / 15.0).abs() <= 0.02, "{shape}: {f}");
        }
    }

    #[test]
    fn adversarial_taxa() {
        let (a, b) = adversarial_pair(16, 3).unwrap();
        assert_eq!(a.taxa(), taxa(1usize..=16));
        assert_eq!(b.taxa(), a.taxa());
        assert!(b.is_caterpillar());
        assert!(adversarial_pair(12, 0).is_err());
        assert!(adversarial_pair(2, 0).is_err());
    }

    #[test]
    fn model_names() {
        assert_eq!("balanced".parse::<Model>().unwrap(), Model::Balanced);
        assert!("yule".parse::<Model>().is_err());
    }
}
