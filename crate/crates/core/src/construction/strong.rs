use crate::construction::decomposition::path_decomposition;
use crate::construction::pairs::find_good_pair_structural;
use crate::construction::split::{strong_split, SplitOutcome};
use crate::construction::state::{setup, IterationState};
use crate::construction::weak::{caterpillar_bound, weak_construct};
use crate::construction::{ensure_verified, Construction, ConstructionConfig, ConstructionOutcome, OutcomeKind};
use crate::error::{Error, Result};
use crate::exact::rooted_mast;
use crate::taxon::TaxonSet;
use crate::tree::UnrootedTree;

struct Tally {
    pair_steps: usize,
    block_steps: usize,
}

impl Tally {
    fn outcome(&self, agreement_set: TaxonSet, kind: OutcomeKind, branch: String, claimed_bound: f64) -> ConstructionOutcome {
        ConstructionOutcome {
            agreement_set,
            kind,
            branch,
            claimed_bound,
            pair_steps: self.pair_steps,
            block_steps: self.block_steps,
        }
    }
}

/// `M` plus an exact rooted MAST of the current trees: the last block of
/// the ordered partition.
fn close_blocks(state: &IterationState) -> Result<TaxonSet> {
    let mut set = state.agreed().clone();
    set.extend(rooted_mast(state.t(), state.s())?.agreement_set);
    Ok(set)
}

/// The main construction on two unrooted trees with `n >= 4` leaves.
///
/// Alternates single-taxon transitions on large good pairs with block
/// transitions from the interval split while `|X_i| >= n^(1/4)`, then
/// closes the chain with an exact MAST of what remains.
pub fn main_construct(t: &UnrootedTree, s: &UnrootedTree, cfg: &ConstructionConfig) -> Result<Construction> {
    let (setup, mut state) = setup(t, s, cfg.rooting, cfg.orientation)?;
    let n = t.leaf_count();
    let c = cfg.main_c;
    if c < 4 {
        return Err(Error::Precondition(format!("C must be at least 4, got {c}")));
    }
    let stop = (n as f64).powf(0.25);
    let block_claim = (n as f64).log2() / (4.0 * (c as f64).log2());
    let mut tally = Tally { pair_steps: 0, block_steps: 0 };

    let outcome = loop {
        if (state.size() as f64) < stop || state.size() < 2 {
            let set = close_blocks(&state)?;
            break tally.outcome(set, OutcomeKind::BlockTree, "main:block-chain".into(), block_claim);
        }
        let d = path_decomposition(&mut state);
        if let Some(pair) = find_good_pair_structural(&state, &d, c)? {
            state.apply_pair(&pair, c)?;
            tally.pair_steps += 1;
            continue;
        }
        let desk = |reason: &str, state: &IterationState, tally: &Tally| -> Result<ConstructionOutcome> {
            let set = close_blocks(state)?;
            Ok(tally.outcome(set, OutcomeKind::BlockTree, format!("main:desk-fallback:{reason}"), block_claim))
        };
        let split = match strong_split(&state, &d, c) {
            Ok(split) => split,
            Err(Error::Precondition(_)) => break desk("precondition", &state, &tally)?,
            Err(e) => return Err(e),
        };
        match split {
            SplitOutcome::Incomparable { x, y } => {
                let tx = state.t().restrict(&x)?;
                let sx = state.s().restrict(&x)?;
                let inner = weak_construct(&tx, &sx, x.len() * x.len(), cfg.weak_c)?;
                match inner.kind {
                    OutcomeKind::UnrootedCaterpillar => {
                        let bound = caterpillar_bound(x.len() * x.len());
                        break tally.outcome(
                            inner.agreement_set,
                            OutcomeKind::UnrootedCaterpillar,
                            "main:nested-caterpillar".into(),
                            bound,
                        );
                    }
                    _ => {
                        state.apply_block(&inner.agreement_set, &y)?;
                        tally.block_steps += 1;
                    }
                }
            }
            SplitOutcome::Fallback { set, bound, source } => {
                if set.is_empty() || (set.len() as f64) < bound {
                    break desk(source.tag(), &state, &tally)?;
                }
                let kind = if source.is_rooted() { OutcomeKind::RootedCaterpillar } else { OutcomeKind::UnrootedCaterpillar };
                break tally.outcome(set, kind, format!("main:{}", source.tag()), bound);
            }
        }
    };
    ensure_verified(&setup, &outcome)?;
    Ok(Construction { setup, outcome })
}
