//! Exact and sampled evaluation of Ranking.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instances::enumerate::next_permutation;
use crate::instances::{ArrivalOrder, BipartiteInstance, Matching};
use crate::rational::Rational;

/// Largest offline side enumerated exactly.
pub const RANKING_LIMIT: usize = 10;
/// Largest number of (arrival order, ranking) pairs enumerated in ROM.
pub const RANKING_ROM_LIMIT: u128 = 600_000_000;

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Matching size of Ranking for one preference list (`pref[0]` preferred).
fn ranking_size(masks_in_order: &[u64], pref: &[u32]) -> u32 {
    let mut used = 0u64;
    let mut size = 0;
    for &nb in masks_in_order {
        let avail = nb & !used;
        if avail == 0 {
            continue;
        }
        for &u in pref {
            if avail >> u & 1 == 1 {
                used |= 1 << u;
                size += 1;
                break;
            }
        }
    }
    size
}

/// Sum of Ranking's matching size over all preference lists, split by the first entry.
fn ranking_total(masks_in_order: &[u64], n_off: usize) -> u128 {
    (0..n_off as u32)
        .into_par_iter()
        .map(|first| {
            let mut rest: Vec<u32> = (0..n_off as u32).filter(|&u| u != first).collect();
            let mut pref = Vec::with_capacity(n_off);
            let mut total = 0u128;
            loop {
                pref.clear();
                pref.push(first);
                pref.extend_from_slice(&rest);
                total += ranking_size(masks_in_order, &pref) as u128;
                if !next_permutation(&mut rest) {
                    break;
                }
            }
            total
        })
        .sum()
}

/// Expected size of Ranking's matching over all offline permutations.
pub fn ranking_expectation(instance: &BipartiteInstance, order: &ArrivalOrder) -> Result<Rational> {
    let n_off = instance.n_offline();
    if n_off > RANKING_LIMIT {
        return Err(Error::Refused(format!(
            "{n_off} offline vertices exceed the exact Ranking limit {RANKING_LIMIT}"
        )));
    }
    if n_off == 0 {
        return Ok(Rational::from_integer(0.into()));
    }
    let masks: Vec<u64> = order.as_slice().iter().map(|&v| instance.neighbor_mask(v)).collect();
    let total = ranking_total(&masks, n_off);
    Ok(Rational::new(BigInt::from(total), BigInt::from(factorial(n_off))))
}

/// Expected size of Ranking averaged over both rankings and arrival orders.
pub fn ranking_rom_expectation(instance: &BipartiteInstance) -> Result<Rational> {
    let n_off = instance.n_offline();
    let n_on = instance.n_online();
    if n_off > RANKING_LIMIT || factorial(n_off).saturating_mul(factorial(n_on)) > RANKING_ROM_LIMIT {
        return Err(Error::Refused(format!(
            "{n_on}! arrival orders times {n_off}! rankings exceed the enumeration limit"
        )));
    }
    if n_off == 0 || n_on == 0 {
        return Ok(Rational::from_integer(0.into()));
    }
    let base = instance.masks();
    let mut order: Vec<usize> = (0..n_on).collect();
    let mut total = 0u128;
    loop {
        let seq: Vec<u64> = order.iter().map(|&v| base[v]).collect();
        total += ranking_total(&seq, n_off);
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(Rational::new(
        BigInt::from(total),
        BigInt::from(factorial(n_off) * factorial(n_on)),
    ))
}

/// One run of Ranking with a uniformly random offline permutation.
pub fn ranking_sample<R: Rng>(instance: &BipartiteInstance, order: &ArrivalOrder, rng: &mut R) -> Matching {
    let mut pref: Vec<usize> = (0..instance.n_offline()).collect();
    pref.shuffle(rng);
    ranking_with_preference(instance, order, &pref)
}

/// Ranking with a fixed preference list (`pref[0]` preferred).
pub fn ranking_with_preference(instance: &BipartiteInstance, order: &ArrivalOrder, pref: &[usize]) -> Matching {
    let mut pos = vec![0; pref.len()];
    for (i, &u) in pref.iter().enumerate() {
        pos[u] = i;
    }
    let mut used = vec![false; instance.n_offline()];
    let mut m = Matching::new();
    for &v in order.as_slice() {
        if let Some(u) = instance
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| !used[u])
            .min_by_key(|&u| pos[u])
        {
            used[u] = true;
            m.insert(v, u);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::gen_upper_triangular;
    use crate::rational::{q, qi};

    #[test]
    fn single_edge() {
        let g = BipartiteInstance::new(1, vec![vec![0]]).unwrap();
        assert_eq!(ranking_expectation(&g, &ArrivalOrder::identity(1)).unwrap(), qi(1));
        assert_eq!(ranking_rom_expectation(&g).unwrap(), qi(1));
    }

    #[test]
    fn triangle_of_two() {
        // The first arrival strands the second exactly when it takes offline 1.
        let g = gen_upper_triangular(2);
        assert_eq!(ranking_expectation(&g, &ArrivalOrder::identity(2)).unwrap(), q(3, 2));
        let g = BipartiteInstance::new(2, vec![vec![0, 1], vec![0]]).unwrap();
        assert_eq!(ranking_expectation(&g, &ArrivalOrder::identity(2)).unwrap(), q(3, 2));
    }

    #[test]
    fn refuses_large() {
        let g = gen_upper_triangular(11);
        assert!(ranking_expectation(&g, &ArrivalOrder::identity(11)).is_err());
    }
}
