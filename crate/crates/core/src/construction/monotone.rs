//! Longest common monotone subsequence of two leaf orderings.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::taxon::{LeafOrdering, Taxon};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// The subsequence is common to `a` and `b`.
    Increasing,
    /// The subsequence is common to `a` and `b` reversed.
    Decreasing,
}

/// Indices of a longest strictly increasing subsequence (patience sorting).
pub fn longest_increasing(values: &[usize]) -> Vec<usize> {
    let mut tails: Vec<usize> = Vec::new();
    let mut prev = vec![usize::MAX; values.len()];
    for (i, &v) in values.iter().enumerate() {
        let k = tails.partition_point(|&t| values[t] < v);
        if k > 0 {
            prev[i] = tails[k - 1];
        }
        if k == tails.len() {
            tails.push(i);
        } else {
            tails[k] = i;
        }
    }
    let mut out = Vec::with_capacity(tails.len());
    let mut cur = tails.last().copied();
    while let Some(i) = cur {
        out.push(i);
        cur = (prev[i] != usize::MAX).then(|| prev[i]);
    }
    out.reverse();
    out
}

/// Longest subsequence of `a` that is also a subsequence of `b` or of `b`
/// reversed. Ties go to the increasing direction.
pub fn common_monotone_subsequence(a: &LeafOrdering, b: &LeafOrdering) -> Result<(LeafOrdering, Direction)> {
    if a.len() != b.len() {
        return Err(Error::TaxaMismatch);
    }
    let pos: HashMap<&Taxon, usize> = b.iter().enumerate().map(|(i, t)| (t, i)).collect();
    if pos.len() != b.len() {
        return Err(Error::TaxaMismatch);
    }
    let pi = a.iter().map(|t| pos.get(t).copied().ok_or(Error::TaxaMismatch)).collect::<Result<Vec<_>>>()?;
    let inc = longest_increasing(&pi);
    let flipped: Vec<usize> = pi.iter().map(|&p| pi.len() - 1 - p).collect();
    let dec = longest_increasing(&flipped);
    let (idx, dir) = if dec.len() > inc.len() { (dec, Direction::Decreasing) } else { (inc, Direction::Increasing) };
    Ok((LeafOrdering(idx.into_iter().map(|i| a.0[i].clone()).collect()), dir))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> LeafOrdering {
        LeafOrdering::parse_list(s)
    }

    #[test]
    fn worked_example() {
        let (seq, dir) = common_monotone_subsequence(&ord("1,2,3,4,5"), &ord("4,3,1,2,5")).unwrap();
        assert_eq!(seq, ord("1,2,5"));
        assert_eq!(dir, Direction::Increasing);
    }

    #[test]
    fn identity_and_reversal() {
        let a = ord("3,1,4,2,5");
        assert_eq!(common_monotone_subsequence(&a, &a).unwrap(), (a.clone(), Direction::Increasing));
        assert_eq!(common_monotone_subsequence(&a, &a.reversed()).unwrap(), (a.clone(), Direction::Decreasing));
    }

    #[test]
    fn mismatch() {
        assert_eq!(common_monotone_subsequence(&ord("1,2"), &ord("1,3")).unwrap_err(), Error::TaxaMismatch);
        assert_eq!(common_monotone_subsequence(&ord("1,2"), &ord("1")).unwrap_err(), Error::TaxaMismatch);
    }

    #[test]
    fn lis_indices() {
        assert_eq!(longest_increasing(&[3, 2, 0, 1, 4]), vec![2, 3, 4]);
        assert!(longest_increasing(&[]).is_empty());
    }
}
