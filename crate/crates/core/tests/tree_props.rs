mod common;

use common::{random_rooted, random_subset};
use mastkit::generators::uniform;
use mastkit::tree::{parse_rooted, parse_unrooted};
use mastkit::{Orientation, Phylogeny, RootedTree, TaxonSet};
use proptest::prelude::*;

/// Builds an ordering by repeatedly removing the smallest leaf that is
/// incomparable with the lca of the others. Succeeds iff the tree is a
/// rooted caterpillar.
fn caterpillar_by_lca(t: &RootedTree) -> bool {
    let mut rest: TaxonSet = t.taxa();
    while rest.len() > 1 {
        let pick = rest.iter().find(|x| {
            let others: Vec<_> = rest.iter().filter(|y| y != x).collect();
            let l = t.lca(others).unwrap();
            !t.is_comparable(t.node_of(x).unwrap(), l)
        });
        match pick.cloned() {
            Some(x) => {
                rest.remove(&x);
            }
            None => return false,
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn rooted_newick_round_trip_is_exact(n in 1usize..64, seed in any::<u64>()) {
        let t = random_rooted(n, seed);
        let back = parse_rooted(&t.to_newick()).unwrap();
        prop_assert_eq!(back.seq(), t.seq());
        prop_assert_eq!(back.to_newick(), t.to_newick());
    }

    #[test]
    fn unrooted_newick_round_trip(n in 1usize..64, seed in any::<u64>()) {
        let t = uniform(n, seed).unwrap();
        let back = parse_unrooted(&t.to_newick()).unwrap();
        prop_assert!(back.isomorphic(&t));
    }

    #[test]
    fn rooting_then_derooting_is_identity(n in 2usize..64, seed in any::<u64>()) {
        let t = uniform(n, seed).unwrap();
        for e in t.edges() {
            let r = t.root_at_edge(e, Orientation::Seeded(seed)).unwrap();
            prop_assert!(r.deroot().unwrap().isomorphic(&t));
        }
    }

    #[test]
    fn nested_restriction(n in 2usize..40, seed in any::<u64>()) {
        let t = random_rooted(n, seed);
        let y = random_subset(&t.taxa(), seed);
        let z = random_subset(&y, seed ^ 1);
        prop_assert_eq!(t.restrict(&y).unwrap().restrict(&z).unwrap(), t.restrict(&z).unwrap());
        let u = uniform(n, seed).unwrap();
        prop_assert!(u.restrict(&y).unwrap().restrict(&z).unwrap().isomorphic(&u.restrict(&z).unwrap()));
    }

    #[test]
    fn restriction_preserves_leaf_order(n in 1usize..50, seed in any::<u64>()) {
        let t = random_rooted(n, seed);
        let y = random_subset(&t.taxa(), seed);
        prop_assert_eq!(t.restrict(&y).unwrap().seq(), t.seq().filtered(&y));
    }

    #[test]
    fn caterpillar_test_matches_lca_criterion(n in 1usize..12, seed in any::<u64>()) {
        let t = random_rooted(n, seed);
        prop_assert_eq!(t.is_caterpillar(), caterpillar_by_lca(&t));
        if let Some(order) = t.caterpillar_ordering() {
            for i in 0..order.len().saturating_sub(1) {
                let rest: Vec<_> = order.0[i + 1..].iter().collect();
                let l = t.lca(rest.into_iter()).unwrap();
                prop_assert!(!t.is_comparable(t.node_of(&order.0[i]).unwrap(), l));
            }
        }
    }

    #[test]
    fn isomorphism_is_an_equivalence_and_mirror_invariant(n in 1usize..30, seed in any::<u64>()) {
        let a = random_rooted(n, seed);
        let b = a.mirror();
        let c = parse_rooted(&b.to_newick()).unwrap();
        prop_assert!(a.isomorphic(&a));
        prop_assert_eq!(a.isomorphic(&b), b.isomorphic(&a));
        prop_assert!(a.isomorphic(&b) && b.isomorphic(&c) && a.isomorphic(&c));
        let other = random_rooted(n, seed ^ 99);
        prop_assert_eq!(a.isomorphic(&other), a.mirror().isomorphic(&other.mirror()));
        prop_assert_eq!(&b.mirror(), &a);
        prop_assert_eq!(b.seq(), a.seq().reversed());
    }
}
