use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A one-sided bipartite graph: online vertices carry their offline neighbor sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BipartiteInstance {
    n_online: usize,
    n_offline: usize,
    /// Sorted neighbor lists, one per online vertex.
    adjacency: Vec<Vec<usize>>,
}

impl BipartiteInstance {
    pub fn new(n_offline: usize, adjacency: Vec<Vec<usize>>) -> Result<Self> {
        let mut adjacency = adjacency;
        for (v, adj) in adjacency.iter_mut().enumerate() {
            adj.sort_unstable();
            if adj.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Malformed(format!("online vertex {v} lists a neighbor twice")));
            }
            if let Some(&u) = adj.iter().find(|&&u| u >= n_offline) {
                return Err(Error::Malformed(format!(
                    "online vertex {v} neighbors offline {u} but only {n_offline} exist"
                )));
            }
        }
        Ok(BipartiteInstance {
            n_online: adjacency.len(),
            n_offline,
            adjacency,
        })
    }

    /// Builds an instance from offline-neighbor bitmasks.
    pub fn from_masks(n_offline: usize, masks: &[u64]) -> Result<Self> {
        let adjacency = masks
            .iter()
            .map(|&m| (0..64).filter(|&u| m >> u & 1 == 1).collect())
            .collect();
        Self::new(n_offline, adjacency)
    }

    pub fn n_online(&self) -> usize {
        self.n_online
    }

    pub fn n_offline(&self) -> usize {
        self.n_offline
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn n_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, v: usize, u: usize) -> bool {
        self.adjacency.get(v).is_some_and(|adj| adj.binary_search(&u).is_ok())
    }

    /// Neighbor bitmask of online vertex `v`; requires `n_offline <= 64`.
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        self.adjacency[v].iter().fold(0u64, |m, &u| m | 1 << u)
    }

    pub fn masks(&self) -> Vec<u64> {
        (0..self.n_online).map(|v| self.neighbor_mask(v)).collect()
    }

    /// The graph with the roles of the two sides exchanged.
    pub fn transpose(&self) -> BipartiteInstance {
        let mut adjacency = vec![Vec::new(); self.n_offline];
        for (v, adj) in self.adjacency.iter().enumerate() {
            for &u in adj {
                adjacency[u].push(v);
            }
        }
        BipartiteInstance {
            n_online: self.n_offline,
            n_offline: self.n_online,
            adjacency,
        }
    }

    /// The graph with online vertices listed in `order` (new vertex `i` is old `order[i]`).
    pub fn reordered(&self, order: &ArrivalOrder) -> BipartiteInstance {
        BipartiteInstance {
            n_online: self.n_online,
            n_offline: self.n_offline,
            adjacency: order.as_slice().iter().map(|&v| self.adjacency[v].clone()).collect(),
        }
    }

    /// The graph with offline vertex `u` renamed to `perm[u]`.
    pub fn relabel_offline(&self, perm: &[usize]) -> BipartiteInstance {
        let adjacency = self
            .adjacency
            .iter()
            .map(|adj| {
                let mut a: Vec<usize> = adj.iter().map(|&u| perm[u]).collect();
                a.sort_unstable();
                a
            })
            .collect();
        BipartiteInstance {
            n_online: self.n_online,
            n_offline: self.n_offline,
            adjacency,
        }
    }
}

/// Presentation order of the online vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArrivalOrder {
    order: Vec<usize>,
}

impl ArrivalOrder {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || seen[v] {
                return Err(Error::Malformed(format!(
                    "arrival order is not a permutation of 0..{n}"
                )));
            }
            seen[v] = true;
        }
        Ok(ArrivalOrder { order })
    }

    pub fn identity(n: usize) -> Self {
        ArrivalOrder {
            order: (0..n).collect(),
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// A partial map from online to offline vertices.
///
/// Serialized as a list of `(online, offline)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<(usize, usize)>", from = "Vec<(usize, usize)>")]
pub struct Matching {
    pairs: BTreeMap<usize, usize>,
}

impl From<Matching> for Vec<(usize, usize)> {
    fn from(m: Matching) -> Self {
        m.pairs.into_iter().collect()
    }
}

impl From<Vec<(usize, usize)>> for Matching {
    fn from(pairs: Vec<(usize, usize)>) -> Self {
        Matching {
            pairs: pairs.into_iter().collect(),
        }
    }
}

impl Matching {
    pub fn new() -> Self {
        Matching::default()
    }

    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    pub fn insert(&mut self, online: usize, offline: usize) {
        self.pairs.insert(online, offline);
    }

    pub fn get(&self, online: usize) -> Option<usize> {
        self.pairs.get(&online).copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().map(|(&v, &u)| (v, u))
    }

    pub fn uses_offline(&self, u: usize) -> bool {
        self.pairs.values().any(|&x| x == u)
    }

    pub fn offline_mask(&self) -> u64 {
        self.pairs.values().fold(0u64, |m, &u| m | 1 << u)
    }

    /// Checks edges and injectivity against `instance`.
    pub fn validate(&self, instance: &BipartiteInstance) -> Result<()> {
        let mut used = vec![false; instance.n_offline()];
        for (&v, &u) in &self.pairs {
            if v >= instance.n_online() || !instance.has_edge(v, u) {
                return Err(Error::Invariant(format!("pair ({v},{u}) is not an edge")));
            }
            if used[u] {
                return Err(Error::Invariant(format!("offline {u} matched twice")));
            }
            used[u] = true;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_adjacency() {
        assert!(BipartiteInstance::new(2, vec![vec![0, 0]]).is_err());
        assert!(BipartiteInstance::new(2, vec![vec![2]]).is_err());
        assert!(ArrivalOrder::new(vec![1, 1]).is_err());
    }

    #[test]
    fn transpose_is_involutive() {
        let g = BipartiteInstance::new(3, vec![vec![0, 2], vec![1], vec![]]).unwrap();
        assert_eq!(g.transpose().transpose(), g);
        assert_eq!(g.transpose().neighbors(2), &[0]);
    }

    #[test]
    fn matching_validation() {
        let g = BipartiteInstance::new(2, vec![vec![0, 1], vec![0]]).unwrap();
        let mut m = Matching::new();
        m.insert(0, 0);
        m.insert(1, 0);
        assert!(m.validate(&g).is_err());
        let mut m = Matching::new();
        m.insert(0, 1);
        m.insert(1, 0);
        assert!(m.validate(&g).is_ok());
    }
}
