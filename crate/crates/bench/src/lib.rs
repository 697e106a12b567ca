//! Shared fixtures for the criterion benches.

use mastkit::generators::adversarial_pair;
use mastkit::harness::PairModel;
use mastkit::{RootedTree, UnrootedTree};

/// Two independent uniform trees on `n` leaves.
pub fn uniform_pair(n: usize, seed: u64) -> (UnrootedTree, UnrootedTree) {
    PairModel::Uniform.generate(n, seed).expect("uniform pair")
}

/// A balanced tree against a randomly labeled caterpillar; `n` must be a power of two.
pub fn adversarial(n: usize, seed: u64) -> (UnrootedTree, UnrootedTree) {
    adversarial_pair(n, seed).expect("adversarial pair")
}

/// Canonically rooted versions of a uniform pair.
pub fn rooted_pair(n: usize, seed: u64) -> (RootedTree, RootedTree) {
    let (t, s) = uniform_pair(n, seed);
    (t.rooted_canonical().expect("rooted"), s.rooted_canonical().expect("rooted"))
}
