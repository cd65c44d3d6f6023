//! Brute-force optimality oracles.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::bipartite::{BipartiteInstance, Matching};
use super::cnf::{Assignment, CnfInstance};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const DEFAULT_MAXSAT_LIMIT: usize = 24;

/// Maximum satisfied weight over all assignments, with a witness.
pub fn optimal_maxsat(instance: &CnfInstance) -> Result<(Rational, Assignment)> {
    optimal_maxsat_with_limit(instance, DEFAULT_MAXSAT_LIMIT)
}

pub fn optimal_maxsat_with_limit(instance: &CnfInstance, limit: usize) -> Result<(Rational, Assignment)> {
    let n = instance.n_vars();
    if n > limit || n > 40 {
        return Err(Error::Refused(format!(
            "{n} variables exceed the enumeration limit {limit}"
        )));
    }
    let denom = instance
        .clauses()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.weight.denom()));
    let scaled: Option<Vec<u64>> = instance
        .clauses()
        .iter()
        .map(|c| (c.weight.numer() * (&denom / c.weight.denom())).to_u64())
        .collect();
    let masks: Vec<(u64, u64)> = instance
        .clauses()
        .iter()
        .map(|c| {
            c.literals.iter().fold((0u64, 0u64), |(p, q), l| {
                if l.positive {
                    (p | 1 << l.variable, q)
                } else {
                    (p, q | 1 << l.variable)
                }
            })
        })
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let (best_bits, best_value) = match scaled {
        Some(weights) => {
            let mut best = (0u64, 0u128);
            for bits in 0..=full {
                let mut total = 0u128;
                for (&(p, q), &w) in masks.iter().zip(&weights) {
                    if bits & p != 0 || !bits & q != 0 {
                        total += w as u128;
                    }
                }
                if total > best.1 {
                    best = (bits, total);
                }
            }
            (best.0, Rational::new(BigInt::from(best.1), denom))
        }
        None => {
            let mut best = (0u64, Rational::zero());
            for bits in 0..=full {
                let mut total = Rational::zero();
                for (&(p, q), c) in masks.iter().zip(instance.clauses()) {
                    if bits & p != 0 || !bits & q != 0 {
                        total += &c.weight;
                    }
                }
                if total > best.1 {
                    best = (bits, total);
                }
            }
            best
        }
    };
    Ok((best_value, Assignment::from_bits(n, best_bits)))
}

/// Maximum-cardinality matching by repeated augmenting-path search.
pub fn optimal_matching(instance: &BipartiteInstance) -> (usize, Matching) {
    let mut match_of_offline: Vec<Option<usize>> = vec![None; instance.n_offline()];
    let mut size = 0;
    for v in 0..instance.n_online() {
        let mut visited = vec![false; instance.n_offline()];
        if augment(instance, v, &mut visited, &mut match_of_offline) {
            size += 1;
        }
    }
    let mut m = Matching::new();
    for (u, v) in match_of_offline.iter().enumerate() {
        if let Some(v) = v {
            m.insert(*v, u);
        }
    }
    (size, m)
}

fn augment(g: &BipartiteInstance, v: usize, visited: &mut [bool], match_of_offline: &mut [Option<usize>]) -> bool {
    for &u in g.neighbors(v) {
        if visited[u] {
            continue;
        }
        visited[u] = true;
        let free = match match_of_offline[u] {
            None => true,
            Some(w) => augment(g, w, visited, match_of_offline),
        };
        if free {
            match_of_offline[u] = Some(v);
            return true;
        }
    }
    false
}

/// Maximum matching size of a graph given as offline-neighbor masks.
pub fn matching_size_masks(masks: &[u64]) -> u32 {
    let mut owner = [usize::MAX; 64];
    let mut size = 0;
    for v in 0..masks.len() {
        let mut seen = 0u64;
        if augment_masks(masks, v, &mut seen, &mut owner) {
            size += 1;
        }
    }
    size
}

fn augment_masks(masks: &[u64], v: usize, seen: &mut u64, owner: &mut [usize; 64]) -> bool {
    let mut free = masks[v] & !*seen;
    while free != 0 {
        let u = free.trailing_zeros() as usize;
        free &= free - 1;
        if *seen >> u & 1 == 1 {
            continue;
        }
        *seen |= 1 << u;
        if owner[u] == usize::MAX || augment_masks(masks, owner[u], seen, owner) {
            owner[u] = v;
            return true;
        }
    }
    false
}
