//! Exhaustive enumeration of small bipartite graphs.
//!
//! Every implemented arrival-order algorithm looks only at arrival index,
//! degrees and offline labels, so averaging over all `n!` orders of a graph
//! depends only on the multiset of online neighbor sets. One sorted
//! representative per multiset is enough; averaging over its distinct
//! arrangements equals averaging over all `n!` orders.

use super::bipartite::BipartiteInstance;
use crate::error::{Error, Result};

/// Default largest `n` enumerated without the long-run flag.
pub const DEFAULT_LIMIT_N: usize = 5;
/// Largest `n` enumerated at all.
pub const LONG_RUN_LIMIT_N: usize = 6;

pub fn check_limit(n: usize, limit_n: usize, long_run: bool) -> Result<()> {
    let cap = if long_run {
        LONG_RUN_LIMIT_N.max(limit_n)
    } else {
        limit_n
    };
    if n > cap || n > LONG_RUN_LIMIT_N {
        return Err(Error::Refused(format!(
            "n={n} exceeds the enumeration limit {cap}{}",
            if long_run {
                ""
            } else {
                " (use the long-run flag for n=6)"
            }
        )));
    }
    Ok(())
}

/// Nondecreasing mask sequences of length `n` over `0..2^n`, in lexicographic order.
#[derive(Clone, Debug)]
pub struct CanonicalMasks {
    n: usize,
    top: u64,
    current: Option<Vec<u64>>,
    /// Entries before this index are fixed (used for sharding).
    fixed: usize,
}

impl CanonicalMasks {
    pub fn new(n: usize) -> Self {
        CanonicalMasks {
            n,
            top: (1u64 << n) - 1,
            current: Some(vec![0; n]),
            fixed: 0,
        }
    }

    /// Only the sequences that start with `prefix`.
    pub fn with_prefix(n: usize, prefix: &[u64]) -> Self {
        let mut start = prefix.to_vec();
        let last = prefix.last().copied().unwrap_or(0);
        start.resize(n, last);
        let valid = prefix.windows(2).all(|w| w[0] <= w[1]) && prefix.len() <= n;
        CanonicalMasks {
            n,
            top: (1u64 << n) - 1,
            current: valid.then_some(start),
            fixed: prefix.len(),
        }
    }
}

impl Iterator for CanonicalMasks {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().expect("checked above");
        let mut i = self.n;
        loop {
            if i == self.fixed {
                self.current = None;
                break;
            }
            i -= 1;
            if cur[i] < self.top {
                let v = cur[i] + 1;
                for x in &mut cur[i..] {
                    *x = v;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Number of multisets of size `n` drawn from `2^n` neighbor sets.
pub fn canonical_count(n: usize) -> u128 {
    binomial((1u128 << n) + n as u128 - 1, n as u128)
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Advances `seq` to the next distinct permutation; false after the last one.
pub fn next_permutation<T: Ord>(seq: &mut [T]) -> bool {
    if seq.len() < 2 {
        return false;
    }
    let mut i = seq.len() - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        seq.reverse();
        return false;
    }
    let mut j = seq.len() - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}

/// Number of distinct arrangements of a sorted sequence.
pub fn arrangement_count(sorted: &[u64]) -> u64 {
    let n = sorted.len() as u64;
    let mut count: u64 = (1..=n).product();
    let mut run = 1u64;
    for i in 1..=sorted.len() {
        if i < sorted.len() && sorted[i] == sorted[i - 1] {
            run += 1;
        } else {
            count /= (1..=run).product::<u64>();
            run = 1;
        }
    }
    count
}

/// One representative per multiset of online neighbor sets (`n` per side).
pub fn enumerate_bipartite(
    n: usize,
    limit_n: usize,
    long_run: bool,
) -> Result<impl Iterator<Item = BipartiteInstance>> {
    check_limit(n, limit_n, long_run)?;
    Ok(CanonicalMasks::new(n).map(move |m| BipartiteInstance::from_masks(n, &m).expect("masks fit")))
}

/// All `2^(n^2)` labeled graphs, for cross-checking the canonical form.
pub fn enumerate_bipartite_raw(n: usize) -> Result<impl Iterator<Item = Vec<u64>>> {
    if n > 4 {
        return Err(Error::Refused(format!(
            "raw enumeration of n={n} has 2^{} graphs",
            n * n
        )));
    }
    let bits = n * n;
    let per = (1u64 << n) - 1;
    Ok((0..1u64 << bits).map(move |code| (0..n).map(|v| code >> (v * n) & per).collect::<Vec<u64>>()))
}
