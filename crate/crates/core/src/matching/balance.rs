//! Load-balancing max-of-k matcher.

use crate::error::{Error, Result};
use crate::instances::{ArrivalOrder, BipartiteInstance, Matching};

/// How many of the parallel matchings use each offline vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadVector {
    load: Vec<usize>,
}

impl LoadVector {
    pub fn new(n_offline: usize) -> Self {
        LoadVector {
            load: vec![0; n_offline],
        }
    }

    pub fn get(&self, u: usize) -> usize {
        self.load[u]
    }

    pub fn increment(&mut self, u: usize) {
        self.load[u] += 1;
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.load
    }
}

/// Picks, for one matching, the available neighbor of least load (lowest index on ties).
pub fn balance_choice(neighbors: &[usize], available: impl Fn(usize) -> bool, load: &LoadVector) -> Option<usize> {
    neighbors
        .iter()
        .copied()
        .filter(|&u| available(u))
        .min_by_key(|&u| (load.get(u), u))
}

/// Runs `k` greedy matchings side by side, steering each arrival to lightly used vertices.
pub fn balance_max_of_k(instance: &BipartiteInstance, order: &ArrivalOrder, k: usize) -> Result<Vec<Matching>> {
    if k == 0 {
        return Err(Error::Malformed("balance needs k >= 1".into()));
    }
    let n = instance.n_offline();
    let mut used = vec![vec![false; n]; k];
    let mut load = LoadVector::new(n);
    let mut matchings = vec![Matching::new(); k];
    for &v in order.as_slice() {
        for j in 0..k {
            let pick = balance_choice(instance.neighbors(v), |u| !used[j][u], &load);
            if let Some(u) = pick {
                used[j][u] = true;
                load.increment(u);
                matchings[j].insert(v, u);
            }
        }
    }
    Ok(matchings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::greedy::{greedy_fixed_ranking, RankingPermutation};

    #[test]
    fn width_one_is_lowest_index_greedy() {
        let g = BipartiteInstance::new(3, vec![vec![1, 2], vec![0, 1], vec![1]]).unwrap();
        let o = ArrivalOrder::identity(3);
        let b = balance_max_of_k(&g, &o, 1).unwrap();
        assert_eq!(b[0], greedy_fixed_ranking(&g, &o, &RankingPermutation::identity(3)));
    }

    #[test]
    fn second_matching_avoids_loaded_vertex() {
        let g = BipartiteInstance::new(2, vec![vec![0, 1]]).unwrap();
        let b = balance_max_of_k(&g, &ArrivalOrder::identity(1), 2).unwrap();
        assert_eq!((b[0].get(0), b[1].get(0)), (Some(0), Some(1)));
    }
}
