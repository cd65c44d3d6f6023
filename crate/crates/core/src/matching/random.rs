//! The Random matcher: uniform choice among available neighbors.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::instances::enumerate::next_permutation;
use crate::instances::{ArrivalOrder, BipartiteInstance, Matching};
use crate::rational::Rational;

pub fn random_matcher<R: Rng>(instance: &BipartiteInstance, order: &ArrivalOrder, rng: &mut R) -> Matching {
    let mut used = vec![false; instance.n_offline()];
    let mut m = Matching::new();
    for &v in order.as_slice() {
        let avail: Vec<usize> = instance.neighbors(v).iter().copied().filter(|&u| !used[u]).collect();
        if avail.is_empty() {
            continue;
        }
        let u = avail[rng.gen_range(0..avail.len())];
        used[u] = true;
        m.insert(v, u);
    }
    m
}

fn check_size(instance: &BipartiteInstance) -> Result<()> {
    if instance.n_offline() > 64 {
        return Err(Error::Refused(
            "exact Random evaluation needs at most 64 offline vertices".into(),
        ));
    }
    Ok(())
}

/// Expected matching size of Random, by forward dynamic programming over used-sets.
pub fn random_expectation(instance: &BipartiteInstance, order: &ArrivalOrder) -> Result<Rational> {
    check_size(instance)?;
    let mut states: HashMap<u64, Rational> = HashMap::new();
    states.insert(0, Rational::one());
    for &v in order.as_slice() {
        let nb = instance.neighbor_mask(v);
        let mut next: HashMap<u64, Rational> = HashMap::with_capacity(states.len() * 2);
        for (used, p) in states {
            let avail = nb & !used;
            let k = avail.count_ones();
            if k == 0 {
                *next.entry(used).or_insert_with(Rational::zero) += p;
                continue;
            }
            let share = p / Rational::from_integer(BigInt::from(k));
            let mut rest = avail;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest &= rest - 1;
                *next.entry(used | bit).or_insert_with(Rational::zero) += &share;
            }
        }
        states = next;
    }
    Ok(states
        .into_iter()
        .map(|(used, p)| p * Rational::from_integer(BigInt::from(used.count_ones())))
        .fold(Rational::zero(), |a, b| a + b))
}

/// Same quantity by recursion over every choice path (an independent check).
pub fn random_expectation_by_paths(instance: &BipartiteInstance, order: &ArrivalOrder) -> Result<Rational> {
    check_size(instance)?;
    let masks: Vec<u64> = order.as_slice().iter().map(|&v| instance.neighbor_mask(v)).collect();
    fn go(masks: &[u64], used: u64) -> Rational {
        let Some((&nb, rest)) = masks.split_first() else {
            return Rational::zero();
        };
        let avail: Vec<u64> = (0..64)
            .filter(|&u| nb >> u & 1 == 1 && used >> u & 1 == 0)
            .map(|u| 1u64 << u)
            .collect();
        if avail.is_empty() {
            return go(rest, used);
        }
        let k = Rational::from_integer(BigInt::from(avail.len()));
        let sum: Rational = avail.iter().map(|&b| go(rest, used | b)).sum();
        Rational::one() + sum / k
    }
    Ok(go(&masks, 0))
}

/// Expected size of Random averaged over all arrival orders.
pub fn random_rom_expectation(instance: &BipartiteInstance) -> Result<Rational> {
    let n = instance.n_online();
    if n > 10 {
        return Err(Error::Refused(format!(
            "{n}! arrival orders exceed the enumeration limit"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut total = Rational::zero();
    let mut count = 0u64;
    loop {
        total += random_expectation(instance, &ArrivalOrder::new(order.clone())?)?;
        count += 1;
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(total / Rational::from_integer(BigInt::from(count)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn forced_matches() {
        let g = BipartiteInstance::new(2, vec![vec![0], vec![1]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(random_matcher(&g, &ArrivalOrder::identity(2), &mut rng).size(), 2);
    }

    #[test]
    fn two_methods_agree_on_small_graph() {
        let g = BipartiteInstance::new(2, vec![vec![0, 1], vec![0]]).unwrap();
        let o = ArrivalOrder::identity(2);
        assert_eq!(random_expectation(&g, &o).unwrap(), q(3, 2));
        assert_eq!(random_expectation_by_paths(&g, &o).unwrap(), q(3, 2));
    }
}
