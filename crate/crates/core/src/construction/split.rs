//! Interval analysis for the main construction: either two disjoint sets
//! whose lcas are incomparable in both trees, or a small caterpillar.
//!
//! Positions are read as `1..=n'`; all fraction tests are done in exact
//! integer arithmetic (`20 * p` against `k * n'`).

use crate::construction::decomposition::{Interval, PathDecomposition};
use crate::construction::pairs::is_big;
use crate::construction::state::IterationState;
use crate::error::{Error, Result};
use crate::exact::rooted_mast;
use crate::taxon::TaxonSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FallbackSource {
    /// Greedy sweep over the middle run found no big subtree.
    MiddleSweep,
    /// Greedy sweep over an end region found no big subtree.
    EndSweep,
    /// Exact rooted MAST on one leaf per intersecting subtree.
    Transversal,
    /// No position of the middle fifth has both subtrees inside it.
    NoMiddleRun,
}

impl FallbackSource {
    pub fn tag(self) -> &'static str {
        match self {
            FallbackSource::MiddleSweep => "middle-sweep",
            FallbackSource::EndSweep => "end-sweep",
            FallbackSource::Transversal => "transversal",
            FallbackSource::NoMiddleRun => "no-middle-run",
        }
    }

    /// Whether the set is a rooted agreement set (true) or an unrooted
    /// caterpillar agreement (false).
    pub fn is_rooted(self) -> bool {
        self == FallbackSource::Transversal
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SplitOutcome {
    Incomparable { x: TaxonSet, y: TaxonSet },
    Fallback { set: TaxonSet, bound: f64, source: FallbackSource },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Q,
    R,
}

fn lists(d: &PathDecomposition, side: Side) -> (&[Interval], &[usize]) {
    match side {
        Side::Q => (&d.q, &d.q_of),
        Side::R => (&d.r, &d.r_of),
    }
}

fn other(side: Side) -> Side {
    match side {
        Side::Q => Side::R,
        Side::R => Side::Q,
    }
}

/// `len >= frac * n' / log2(n)` with `frac = num / 20`.
fn big_fraction(state: &IterationState, len: usize, num: usize) -> bool {
    20.0 * len as f64 * state.log_n() >= (num * state.size()) as f64
}

fn to_taxa(state: &IterationState, positions: impl IntoIterator<Item = usize>) -> TaxonSet {
    positions.into_iter().map(|p| state.taxon_at(p).clone()).collect()
}

/// Splits a state whose path subtrees all have at most `2|X_i| / C` leaves.
pub fn strong_split(state: &IterationState, d: &PathDecomposition, c: usize) -> Result<SplitOutcome> {
    let n = state.size();
    let n_param = state.n_param() as f64;
    if (n as f64) < n_param.powf(0.25) {
        return Err(Error::Precondition(format!("|X| = {n} is below n^(1/4)")));
    }
    if let Some(iv) = d.q.iter().chain(&d.r).find(|iv| iv.len() * c > 2 * n) {
        return Err(Error::Precondition(format!("path subtree of {} leaves exceeds 2|X|/C", iv.len())));
    }
    let log_bound = (n_param.log2()).ceil().max(1.0);

    // Middle run: positions of [8n'/20, 12n'/20] whose subtrees on both
    // sides lie inside that window.
    let inside = |iv: Interval| 20 * (iv.start + 1) >= 8 * n && 20 * (iv.end + 1) <= 12 * n;
    let run: Vec<usize> = (0..n).filter(|&p| inside(d.q_at(p)) && inside(d.r_at(p))).collect();
    let (Some(&lo), Some(&hi)) = (run.first(), run.last()) else {
        return Ok(SplitOutcome::Fallback { set: TaxonSet::new(), bound: log_bound, source: FallbackSource::NoMiddleRun });
    };
    let middle = [Side::Q, Side::R].into_iter().find_map(|side| {
        let (list, of) = lists(d, side);
        (of[lo]..=of[hi]).find(|&i| big_fraction(state, list[i].len(), 2)).map(|i| (side, list[i]))
    });
    let Some((y_side, y_iv)) = middle else {
        return Ok(SplitOutcome::Fallback {
            set: to_taxa(state, d.sweep(lo, hi)),
            bound: log_bound,
            source: FallbackSource::MiddleSweep,
        });
    };

    // End region: the left end when the middle subtree came from T, the
    // mirrored right end otherwise.
    let from_left = y_side == Side::Q;
    let mirrored = |p: usize| if from_left { p + 1 } else { n - p };
    let in_end = |iv: Interval| {
        let far = if from_left { iv.end } else { iv.start };
        20 * mirrored(far) < 5 * n
    };
    let end = [Side::Q, Side::R].into_iter().find_map(|side| {
        let (list, _) = lists(d, side);
        list.iter().copied().find(|&iv| in_end(iv) && big_fraction(state, iv.len(), 4)).map(|iv| (side, iv))
    });
    let Some((b_side, b_iv)) = end else {
        let region: Vec<usize> = (0..n).filter(|&p| 20 * mirrored(p) <= 4 * n).collect();
        let set = match (region.first(), region.last()) {
            (Some(&a), Some(&b)) => to_taxa(state, d.sweep(a, b)),
            _ => TaxonSet::new(),
        };
        return Ok(SplitOutcome::Fallback { set, bound: log_bound, source: FallbackSource::EndSweep });
    };

    // Pieces of the big end subtree cut by the other side's subtrees.
    let (olist, oof) = lists(d, other(b_side));
    let pieces: Vec<Interval> =
        (oof[b_iv.start]..=oof[b_iv.end]).filter_map(|i| olist[i].intersect(&b_iv)).collect();
    let tau = n_param.powf(1.0 / 16.0);
    let best = pieces.iter().copied().fold(None::<Interval>, |acc, iv| match acc {
        Some(a) if a.len() >= iv.len() => Some(a),
        _ => Some(iv),
    });
    let best = best.expect("a subtree meets at least one subtree of the other side");
    if (best.len() as f64) < tau {
        let transversal = to_taxa(state, pieces.iter().map(|iv| iv.start));
        let t = state.t().restrict(&transversal)?;
        let s = state.s().restrict(&transversal)?;
        let set = rooted_mast(&t, &s)?.agreement_set;
        return Ok(SplitOutcome::Fallback {
            set,
            bound: (n_param.log2() / 48.0).ceil(),
            source: FallbackSource::Transversal,
        });
    }
    let x = to_taxa(state, best.start..=best.end);
    let y = to_taxa(state, y_iv.start..=y_iv.end);
    check_split(state, &x, &y, tau)?;
    Ok(SplitOutcome::Incomparable { x, y })
}

fn check_split(state: &IterationState, x: &TaxonSet, y: &TaxonSet, tau: f64) -> Result<()> {
    if !x.is_disjoint(y) {
        return Err(Error::Invariant("split sets overlap".into()));
    }
    for tree in [state.t(), state.s()] {
        let a = tree.lca(x.iter())?;
        let b = tree.lca(y.iter())?;
        if tree.is_comparable(a, b) {
            return Err(Error::Invariant("split lcas are comparable".into()));
        }
    }
    if (x.len() as f64) < tau {
        return Err(Error::Invariant("split X below n^(1/16)".into()));
    }
    if 10.0 * y.len() as f64 * state.log_n() < state.size() as f64 {
        return Err(Error::Invariant("split Y below |X_i| / (10 log n)".into()));
    }
    Ok(())
}

/// True when every path subtree is smaller than `|X_i| / log2 n`, the
/// precondition of the greedy caterpillar guarantee.
pub fn greedy_precondition(state: &IterationState, d: &PathDecomposition) -> bool {
    d.q.iter().chain(&d.r).all(|iv| !is_big(state, iv.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::decomposition::path_decomposition;
    use crate::tree::parse_rooted;

    fn left_comb(parts: &[String]) -> String {
        let mut s = "(".repeat(parts.len() - 1) + &parts[0];
        for p in &parts[1..] {
            s.push_str(&format!(",{p})"));
        }
        s + ";"
    }

    fn right_comb(parts: &[String]) -> String {
        let mut s = String::new();
        for p in &parts[..parts.len() - 1] {
            s.push_str(&format!("({p},"));
        }
        s.push_str(&parts[parts.len() - 1]);
        s.push_str(&")".repeat(parts.len() - 1));
        s + ";"
    }

    fn leaves(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    fn cherries(n: usize) -> Vec<String> {
        (1..=n / 2).map(|i| format!("({},{})", 2 * i - 1, 2 * i)).collect()
    }

    fn combs(t: &[String], s: &[String], n_param: usize) -> (IterationState, PathDecomposition) {
        let t = parse_rooted(&left_comb(t)).unwrap();
        let s = parse_rooted(&right_comb(s)).unwrap();
        let mut st = IterationState::new(t, s, n_param).unwrap();
        let d = path_decomposition(&mut st);
        (st, d)
    }

    #[test]
    fn singleton_subtrees_fall_back_to_a_sweep() {
        let (st, d) = combs(&leaves(60), &leaves(60), 32);
        assert_eq!(d.largest(), 1);
        match strong_split(&st, &d, 40).unwrap() {
            SplitOutcome::Fallback { set, bound, source } => {
                assert_eq!(source, FallbackSource::MiddleSweep);
                assert!(set.len() as f64 >= bound, "{} < {bound}", set.len());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn thin_end_subtree_takes_the_transversal() {
        let (st, d) = combs(&leaves(60), &leaves(60), 1 << 20);
        match strong_split(&st, &d, 40).unwrap() {
            SplitOutcome::Fallback { set, bound, source } => {
                assert_eq!(source, FallbackSource::Transversal);
                assert!(set.len() as f64 >= bound);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cherry_combs_split() {
        let (st, d) = combs(&cherries(60), &cherries(60), 256);
        match strong_split(&st, &d, 40).unwrap() {
            SplitOutcome::Incomparable { x, y } => {
                assert_eq!(x.len(), 2);
                assert_eq!(y.len(), 2);
                assert!(x.is_disjoint(&y));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precondition_enforced() {
        let t = parse_rooted("(((1,2),(3,4)),((5,6),(7,8)));").unwrap();
        let mut st = IterationState::new(t.clone(), t, 8).unwrap();
        let d = path_decomposition(&mut st);
        assert!(matches!(strong_split(&st, &d, 40), Err(Error::Precondition(_))));
    }
}
