//! Good-pair searches and the per-iteration trichotomy.

use crate::construction::decomposition::{path_decomposition, Interval, PathDecomposition};
use crate::construction::state::{GoodPair, IterationState, Tier};
use crate::error::{Error, Result};
use crate::taxon::TaxonSet;
use crate::tree::RootedTree;

/// What one iteration found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    LargePair(GoodPair),
    RegularPair(GoodPair),
    Caterpillar(TaxonSet),
}

/// Spans of the two root children of a tree with at least two leaves.
fn root_halves(tree: &RootedTree) -> (Interval, Interval) {
    let (l, r) = tree.children(tree.root()).expect("tree has two or more leaves");
    let (a, b) = (tree.span(l), tree.span(r));
    (Interval::new(a.0, a.1), Interval::new(b.0, b.1))
}

fn lca_span(tree: &RootedTree, y: Interval) -> Interval {
    let (lo, hi) = tree.span(tree.lca_of_span(y.start, y.end));
    Interval::new(lo, hi)
}

/// True when position `x` is outside the lca span of `y` in both trees.
fn separates(state: &IterationState, y: Interval, x: usize) -> bool {
    !y.contains(x) && !lca_span(state.t(), y).contains(x) && !lca_span(state.s(), y).contains(x)
}

fn first_separating(state: &IterationState, y: Interval) -> Option<usize> {
    let a = lca_span(state.t(), y);
    let b = lca_span(state.s(), y);
    (0..state.size()).find(|&p| !a.contains(p) && !b.contains(p))
}

fn make_pair(state: &IterationState, y: Interval, x: usize, tier: Tier, c: usize) -> Result<GoodPair> {
    let pair = GoodPair { x: state.taxon_at(x).clone(), y: state.span_taxa(y.start, y.end), tier };
    pair.check(state, c)?;
    Ok(pair)
}

/// Structural search for a pair with `|Y| >= |X_i| / C`. Returns `None`
/// exactly when every path subtree has at most `max(2|X_i|/C, 1)` leaves.
pub fn find_good_pair_structural(state: &IterationState, d: &PathDecomposition, c: usize) -> Result<Option<GoodPair>> {
    let n = state.size();
    if n <= 1 {
        return Ok(None);
    }
    if n < c {
        return degenerate_pair(state, c).map(Some);
    }
    let (tl, tr) = root_halves(state.t());
    let (sl, sr) = root_halves(state.s());
    let last = n - 1;
    let big = |iv: &Interval| iv.len() * c > 2 * n;
    let enough = |iv: Option<Interval>| iv.filter(|i| i.len() * c >= n);
    let k = d.q.len() - 1;
    for (j, qj) in d.q.iter().enumerate().skip(1) {
        if !big(qj) {
            continue;
        }
        let (y, x) = if j < k {
            match enough(qj.intersect(&sl)) {
                Some(y) => (y, last),
                None => (qj.intersect(&sr).expect("big subtree meets a root half"), 0),
            }
        } else {
            match enough(qj.intersect(&sr)) {
                Some(y) => (y, 0),
                None => (tl.intersect(&sl).expect("left halves share a prefix"), last),
            }
        };
        return make_pair(state, y, x, Tier::Large, c).map(Some);
    }
    let m = d.r.len() - 1;
    for (l, rl) in d.r.iter().enumerate().take(m) {
        if !big(rl) {
            continue;
        }
        let (y, x) = if l > 0 {
            match enough(rl.intersect(&tr)) {
                Some(y) => (y, 0),
                None => (rl.intersect(&tl).expect("big subtree meets a root half"), last),
            }
        } else {
            match enough(rl.intersect(&tl)) {
                Some(y) => (y, last),
                None => (tr.intersect(&sr).expect("right halves share a suffix"), 0),
            }
        };
        return make_pair(state, y, x, Tier::Large, c).map(Some);
    }
    Ok(None)
}

/// For `|X_i| < C` any shared leaf is large enough; take the best overlap
/// of two non-root subtrees that leaves some taxon outside both.
fn degenerate_pair(state: &IterationState, c: usize) -> Result<GoodPair> {
    let spans = |tree: &RootedTree| -> Vec<Interval> {
        tree.preorder()
            .into_iter()
            .filter(|&v| v != tree.root())
            .map(|v| {
                let (a, b) = tree.span(v);
                Interval::new(a, b)
            })
            .collect()
    };
    let (ts, ss) = (spans(state.t()), spans(state.s()));
    let mut best: Option<(Interval, usize)> = None;
    for u in &ts {
        for v in &ss {
            let Some(y) = u.intersect(v) else { continue };
            if best.is_some_and(|(b, _)| b.len() >= y.len()) {
                continue;
            }
            if let Some(x) = (0..state.size()).find(|&p| !u.contains(p) && !v.contains(p)) {
                best = Some((y, x));
            }
        }
    }
    let (y, x) = best.ok_or_else(|| Error::Invariant("no separating pair in a small state".into()))?;
    make_pair(state, y, x, Tier::Large, c)
}

fn check_small_subtrees(state: &IterationState, d: &PathDecomposition, c: usize) -> Result<()> {
    let n = state.size();
    let cap = (2 * n).max(c);
    if let Some(iv) = d.q.iter().chain(&d.r).find(|iv| iv.len() * c > cap) {
        return Err(Error::Precondition(format!(
            "path subtree of {} leaves exceeds 2|X|/C with |X| = {n}, C = {c}",
            iv.len()
        )));
    }
    Ok(())
}

/// True when `len >= |X_i| / log2(n)`.
pub fn is_big(state: &IterationState, len: usize) -> bool {
    len as f64 * state.log_n() >= state.size() as f64
}

/// Search for a pair with `|Y| >= |X_i| / (2 log2 n)` driven by a path
/// subtree of at least `|X_i| / log2 n` leaves. Requires every path
/// subtree to have at most `max(2|X_i|/C, 1)` leaves.
pub fn find_good_pair_big_subtree(state: &IterationState, d: &PathDecomposition, c: usize) -> Result<Option<GoodPair>> {
    check_small_subtrees(state, d, c)?;
    let n = state.size();
    if n <= 1 {
        return Ok(None);
    }
    let (tl, tr) = root_halves(state.t());
    let (sl, sr) = root_halves(state.s());
    let last = n - 1;
    let k = d.q.len() - 1;
    let candidate = if let Some(j) = d.q.iter().position(|iv| is_big(state, iv.len())) {
        let qj = d.q[j];
        if j < k {
            if 2 * qj.overlap(&sl) >= qj.len() {
                (qj.intersect(&sl).expect("half overlap is non-empty"), last)
            } else {
                (qj.intersect(&sr).expect("half overlap is non-empty"), 0)
            }
        } else {
            (qj, 0)
        }
    } else if let Some(l) = d.r.iter().position(|iv| is_big(state, iv.len())) {
        let rl = d.r[l];
        if l > 0 {
            if 2 * rl.overlap(&tr) >= rl.len() {
                (rl.intersect(&tr).expect("half overlap is non-empty"), 0)
            } else {
                (rl.intersect(&tl).expect("half overlap is non-empty"), last)
            }
        } else {
            (rl, last)
        }
    } else {
        return Ok(None);
    };
    let (y, mut x) = candidate;
    if !separates(state, y, x) {
        x = first_separating(state, y).ok_or_else(|| Error::Invariant("big subtree has no separating taxon".into()))?;
    }
    make_pair(state, y, x, Tier::Regular, c).map(Some)
}

/// Greedy sweep over the whole ordering; at most one leaf per path subtree.
pub fn greedy_caterpillar(state: &IterationState, d: &PathDecomposition) -> TaxonSet {
    d.sweep(0, state.size().saturating_sub(1)).into_iter().map(|p| state.taxon_at(p).clone()).collect()
}

/// Normalizes, decomposes and returns the first applicable outcome: a large
/// pair, a regular pair, or a greedy caterpillar.
pub fn classify_iteration(state: &mut IterationState, c: usize) -> Result<Classification> {
    if state.size() < 2 {
        return Err(Error::Precondition("classification needs at least two leaves".into()));
    }
    let d = path_decomposition(state);
    if let Some(pair) = find_good_pair_structural(state, &d, c)? {
        return Ok(Classification::LargePair(pair));
    }
    if let Some(pair) = find_good_pair_big_subtree(state, &d, c)? {
        return Ok(Classification::RegularPair(pair));
    }
    Ok(Classification::Caterpillar(greedy_caterpillar(state, &d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taxon::taxa;
    use crate::tree::parse_rooted;

    fn state(newick: &str, n_param: usize) -> IterationState {
        let t = parse_rooted(newick).unwrap();
        IterationState::new(t.clone(), t, n_param).unwrap()
    }

    #[test]
    fn identical_caterpillars_give_a_pair() {
        let mut st = state("(((1,2),3),4);", 4);
        let d = path_decomposition(&mut st);
        let pair = find_good_pair_structural(&st, &d, 4).unwrap().unwrap();
        pair.check(&st, 4).unwrap();
        assert_eq!(pair.tier, Tier::Large);
    }

    #[test]
    fn single_leaf_has_no_pair() {
        let mut st = state("1;", 4);
        let d = path_decomposition(&mut st);
        assert_eq!(find_good_pair_structural(&st, &d, 4).unwrap(), None);
    }

    #[test]
    fn two_leaves_pair_with_singleton() {
        let mut st = state("(1,2);", 4);
        match classify_iteration(&mut st, 4).unwrap() {
            Classification::LargePair(p) | Classification::RegularPair(p) => assert_eq!(p.y.len(), 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn singleton_subtrees_have_no_structural_pair() {
        // Left comb on the T side, right comb on the S side: every path
        // subtree is one leaf.
        let t = parse_rooted("((((((((1,2),3),4),5),6),7),8),9);").unwrap();
        let s = parse_rooted("(1,(2,(3,(4,(5,(6,(7,(8,9))))))));").unwrap();
        let mut st = IterationState::new(t, s, 9).unwrap();
        let d = path_decomposition(&mut st);
        assert_eq!(d.largest(), 1);
        assert_eq!(find_good_pair_structural(&st, &d, 4).unwrap(), None);
        assert_eq!(find_good_pair_big_subtree(&st, &d, 4).unwrap(), None);
        let a = greedy_caterpillar(&st, &d);
        assert_eq!(a.len(), 9);
    }

    #[test]
    fn big_subtree_precondition() {
        let mut st = state("(1,((2,3),((4,5),(6,7))));", 4);
        let d = path_decomposition(&mut st);
        assert!(matches!(find_good_pair_big_subtree(&st, &d, 4), Err(Error::Precondition(_))));
    }

    #[test]
    fn big_subtree_pair_is_regular_and_valid() {
        // T: left comb of cherries; S: right comb of cherries shifted by one.
        let t = parse_rooted("((((((1,2),(3,4)),(5,6)),(7,8)),(9,10)),(11,12));").unwrap();
        let s = parse_rooted("(1,((2,3),((4,5),((6,7),((8,9),((10,11),12))))));").unwrap();
        let mut st = IterationState::new(t, s, 64).unwrap();
        let d = path_decomposition(&mut st);
        assert_eq!(find_good_pair_structural(&st, &d, 4).unwrap(), None);
        let pair = find_good_pair_big_subtree(&st, &d, 4).unwrap().unwrap();
        assert_eq!(pair.tier, Tier::Regular);
        pair.check(&st, 4).unwrap();
        assert!(!pair.y.contains(&pair.x));
    }

    #[test]
    fn classify_reports_caterpillar() {
        let t = parse_rooted("((((((((1,2),3),4),5),6),7),8),9);").unwrap();
        let s = parse_rooted("(1,(2,(3,(4,(5,(6,(7,(8,9))))))));").unwrap();
        let mut st = IterationState::new(t, s, 9).unwrap();
        let got = classify_iteration(&mut st, 4).unwrap();
        assert_eq!(got, Classification::Caterpillar(taxa(1usize..=9)));
    }
}
