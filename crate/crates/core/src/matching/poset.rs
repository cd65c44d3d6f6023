//! The partial order a Ranking run reveals about the offline permutation.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::instances::{ArrivalOrder, BipartiteInstance, Matching};

pub const EXTENSION_LIMIT: usize = 20;

/// Offline vertices `0..n` with pairs `(greater, lesser)`: `greater` must rank ahead.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MatchingPoset {
    n: usize,
    relations: BTreeSet<(usize, usize)>,
}

impl MatchingPoset {
    pub fn new(n: usize) -> Self {
        MatchingPoset {
            n,
            relations: BTreeSet::new(),
        }
    }

    pub fn with_relations(n: usize, relations: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut p = MatchingPoset::new(n);
        for (g, l) in relations {
            p.add(g, l)?;
        }
        Ok(p)
    }

    pub fn add(&mut self, greater: usize, lesser: usize) -> Result<()> {
        if greater >= self.n || lesser >= self.n || greater == lesser {
            return Err(Error::Malformed(format!(
                "relation ({greater},{lesser}) invalid on {} elements",
                self.n
            )));
        }
        self.relations.insert((greater, lesser));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn relations(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.relations.iter().copied()
    }

    /// Bitmask of the elements that must precede each element.
    fn predecessor_masks(&self) -> Vec<u32> {
        let mut pred = vec![0u32; self.n];
        for &(g, l) in &self.relations {
            pred[l] |= 1 << g;
        }
        pred
    }

    /// True when some total order respects every relation.
    pub fn is_acyclic(&self) -> bool {
        let pred = self.predecessor_masks();
        let mut placed = 0u32;
        for _ in 0..self.n {
            match (0..self.n).find(|&x| placed >> x & 1 == 0 && pred[x] & !placed == 0) {
                Some(x) => placed |= 1 << x,
                None => return false,
            }
        }
        true
    }
}

/// Number of total orders of the elements compatible with the poset.
///
/// Dynamic programming over down-sets: `ways[S]` counts orderings of `S`
/// as a prefix. `20! < 2^128`, so the accumulator cannot overflow.
pub fn count_linear_extensions(poset: &MatchingPoset) -> Result<BigUint> {
    let n = poset.len();
    if n > EXTENSION_LIMIT {
        return Err(Error::Refused(format!(
            "{n} elements exceed the linear-extension limit {EXTENSION_LIMIT}"
        )));
    }
    let pred = poset.predecessor_masks();
    let full = (1usize << n) - 1;
    let mut ways = vec![0u128; full + 1];
    ways[0] = 1;
    for s in 0..full {
        let w = ways[s];
        if w == 0 {
            continue;
        }
        for x in 0..n {
            if s >> x & 1 == 0 && pred[x] as usize & !s == 0 {
                ways[s | 1 << x] += w;
            }
        }
    }
    Ok(BigUint::from(ways[full]))
}

/// The relations forced by the first `steps` arrivals of a Ranking run that produced `matching`.
///
/// A matched arrival's partner ranks ahead of every other neighbor that was
/// still free. Fails if the matching could not have come from Ranking.
pub fn poset_of_matching(
    instance: &BipartiteInstance,
    order: &ArrivalOrder,
    matching: &Matching,
    steps: usize,
) -> Result<MatchingPoset> {
    let mut poset = MatchingPoset::new(instance.n_offline());
    let mut used = vec![false; instance.n_offline()];
    for &v in order.as_slice().iter().take(steps) {
        let free: Vec<usize> = instance.neighbors(v).iter().copied().filter(|&u| !used[u]).collect();
        match matching.get(v) {
            Some(u) => {
                if !free.contains(&u) {
                    return Err(Error::Malformed(format!(
                        "online {v} matched to unavailable offline {u}"
                    )));
                }
                for &w in free.iter().filter(|&&w| w != u) {
                    poset.add(u, w)?;
                }
                used[u] = true;
            }
            None if !free.is_empty() => {
                return Err(Error::Malformed(format!(
                    "online {v} left unmatched with a free neighbor"
                )));
            }
            None => {}
        }
    }
    Ok(poset)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_chain() {
        assert_eq!(
            count_linear_extensions(&MatchingPoset::new(5)).unwrap(),
            BigUint::from(120u32)
        );
        let chain = MatchingPoset::with_relations(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(count_linear_extensions(&chain).unwrap(), BigUint::from(1u32));
        assert!(chain.is_acyclic());
    }

    #[test]
    fn cycle_has_no_extension() {
        let cyc = MatchingPoset::with_relations(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!cyc.is_acyclic());
        assert_eq!(count_linear_extensions(&cyc).unwrap(), BigUint::from(0u32));
    }

    #[test]
    fn refuses_large() {
        assert!(count_linear_extensions(&MatchingPoset::new(21)).is_err());
    }

    #[test]
    fn twenty_elements_fit() {
        let n: u128 = (1..=20).product();
        assert_eq!(
            count_linear_extensions(&MatchingPoset::new(20)).unwrap(),
            BigUint::from(n)
        );
    }
}
