mod common;

use common::{log2, random_pair, random_rooted, random_subset};
use mastkit::exact::{brute_force_mast, rooted_mast, unrooted_mast};
use mastkit::generators::{adversarial_pair, caterpillar};
use mastkit::Phylogeny;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dp_matches_brute_force(n in 4usize..=8, seed in any::<u64>()) {
        let (t, s) = random_pair(n, seed);
        let dp = unrooted_mast(&t, &s).unwrap();
        prop_assert_eq!(dp.size, brute_force_mast(&t, &s, 10).unwrap().size);
        dp.check(&t, &s).unwrap();
        let (a, b) = (random_rooted(n, seed), random_rooted(n, seed ^ 7));
        let dp = rooted_mast(&a, &b).unwrap();
        prop_assert_eq!(dp.size, brute_force_mast(&a, &b, 10).unwrap().size);
        dp.check(&a, &b).unwrap();
    }

    #[test]
    fn restriction_never_increases_mast(n in 4usize..24, seed in any::<u64>()) {
        let (t, s) = random_pair(n, seed);
        let q = random_subset(&t.taxa(), seed);
        let full = unrooted_mast(&t, &s).unwrap().size;
        let part = unrooted_mast(&t.restrict(&q).unwrap(), &s.restrict(&q).unwrap()).unwrap().size;
        prop_assert!(part <= full);
    }

    #[test]
    fn mast_is_symmetric(n in 2usize..30, seed in any::<u64>()) {
        let (t, s) = random_pair(n, seed);
        prop_assert_eq!(unrooted_mast(&t, &s).unwrap().size, unrooted_mast(&s, &t).unwrap().size);
        let (a, b) = (random_rooted(n, seed), random_rooted(n, seed ^ 3));
        prop_assert_eq!(rooted_mast(&a, &b).unwrap().size, rooted_mast(&b, &a).unwrap().size);
    }

    #[test]
    fn caterpillar_partner_bound(m in 8usize..=256, seed in any::<u64>()) {
        let t = random_rooted(m, seed);
        let s = caterpillar(m).unwrap().rooted_canonical().unwrap();
        prop_assert!(s.is_caterpillar());
        let size = rooted_mast(&t, &s).unwrap().size;
        prop_assert!(size as f64 >= (log2(m) / 3.0).ceil(), "m = {m}: {size}");
    }
}

#[test]
fn balanced_against_caterpillar_cross_check() {
    for seed in 0..5 {
        let (t, s) = adversarial_pair(8, seed).unwrap();
        assert_eq!(unrooted_mast(&t, &s).unwrap().size, brute_force_mast(&t, &s, 10).unwrap().size);
    }
}
