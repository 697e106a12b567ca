use crate::construction::pairs::{classify_iteration, Classification};
use crate::construction::state::{setup, IterationState};
use crate::construction::{ensure_verified, Construction, ConstructionConfig, ConstructionOutcome, OutcomeKind};
use crate::error::{Error, Result};
use crate::tree::{agree_on, Phylogeny, RootedTree, UnrootedTree};

/// `ceil((log2 n / 2) / log2(2 log2 n)) + 1`, the guaranteed size of the
/// rooted chain when no caterpillar exit fires.
pub fn weak_rooted_bound(n: usize) -> f64 {
    let log_n = (n as f64).log2().max(1.0);
    ((0.5 * log_n) / (2.0 * log_n).log2()).ceil() + 1.0
}

/// `ceil(log2 n)`, the guaranteed size of the caterpillar exit.
pub fn caterpillar_bound(n: usize) -> f64 {
    (n as f64).log2().max(0.0).ceil()
}

/// Builds a rooted agreement chain on two rooted trees with equal leaf
/// orderings, or exits with an unrooted caterpillar when no good pair exists.
///
/// The rooted result agrees on `t1`/`s1`; the unrooted one agrees on their
/// de-rooted forms.
pub fn weak_construct(t1: &RootedTree, s1: &RootedTree, n_param: usize, c: usize) -> Result<ConstructionOutcome> {
    if t1.seq() != s1.seq() {
        return Err(Error::Precondition("input trees must share their leaf ordering".into()));
    }
    let mut state = IterationState::new(t1.clone(), s1.clone(), n_param)?;
    let mut pair_steps = 0;
    while state.size() > 1 {
        match classify_iteration(&mut state, c)? {
            Classification::LargePair(pair) | Classification::RegularPair(pair) => {
                state.apply_pair(&pair, c)?;
                pair_steps += 1;
            }
            Classification::Caterpillar(set) => {
                if !(agree_on(&t1.deroot()?, &s1.deroot()?, &set)?) {
                    return Err(Error::Invariant("greedy caterpillar does not agree".into()));
                }
                return Ok(ConstructionOutcome {
                    agreement_set: set,
                    kind: OutcomeKind::UnrootedCaterpillar,
                    branch: "weak:caterpillar".into(),
                    claimed_bound: caterpillar_bound(n_param),
                    pair_steps,
                    block_steps: 0,
                });
            }
        }
    }
    let mut set = state.agreed().clone();
    set.extend(state.taxa());
    let chain = t1.restrict(&set)?;
    if !chain.isomorphic(&s1.restrict(&set)?) || !chain.is_caterpillar() {
        return Err(Error::Invariant("rooted chain does not agree".into()));
    }
    Ok(ConstructionOutcome {
        agreement_set: set,
        kind: OutcomeKind::RootedCaterpillar,
        branch: "weak:rooted-chain".into(),
        claimed_bound: weak_rooted_bound(n_param),
        pair_steps,
        block_steps: 0,
    })
}

/// Set-up plus [`weak_construct`] on two unrooted trees with `n >= 4` leaves.
pub fn run_weak(t: &UnrootedTree, s: &UnrootedTree, cfg: &ConstructionConfig) -> Result<Construction> {
    let (setup, state) = setup(t, s, cfg.rooting, cfg.orientation)?;
    let outcome = weak_construct(state.t(), state.s(), t.leaf_count(), cfg.weak_c)?;
    ensure_verified(&setup, &outcome)?;
    Ok(Construction { setup, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::parse_rooted;

    #[test]
    fn identical_caterpillars_chain() {
        let t = parse_rooted("((((((1,2),3),4),5),6),7);").unwrap();
        let out = weak_construct(&t, &t, 7, 4).unwrap();
        assert_eq!(out.kind, OutcomeKind::RootedCaterpillar);
        assert!(out.size() >= 2);
    }

    #[test]
    fn two_leaf_input() {
        let t = parse_rooted("(1,2);").unwrap();
        let out = weak_construct(&t, &t, 4, 4).unwrap();
        assert_eq!(out.size(), 2);
        assert_eq!(out.kind, OutcomeKind::RootedCaterpillar);
        assert_eq!(out.pair_steps, 1);
    }

    #[test]
    fn unequal_orders_rejected() {
        let t = parse_rooted("((1,2),3);").unwrap();
        let s = parse_rooted("((2,1),3);").unwrap();
        assert!(matches!(weak_construct(&t, &s, 4, 4), Err(Error::Precondition(_))));
    }

    #[test]
    fn bounds() {
        assert_eq!(weak_rooted_bound(16), 2.0);
        assert_eq!(weak_rooted_bound(4096), 3.0);
        assert_eq!(caterpillar_bound(64), 6.0);
    }
}
