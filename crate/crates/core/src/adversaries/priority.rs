//! The adversary against deterministic adaptive priority matching.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::protocol::{DataItem, Priority, PriorityAlgorithm, PriorityHistory};
use super::transcript::{Certificate, Decisions, FinalInstance, GameSummary, GameTranscript, Item, TurnRecord};
use crate::error::{Error, Result};
use crate::instances::{BipartiteInstance, Matching};
use crate::rational::Rational;

pub const PRIORITY_LIMIT_N: usize = 25;

/// Matched, blocked-by-matches and blocked-by-rejections offline vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AdversarySets {
    pub m: BTreeSet<usize>,
    pub u: BTreeSet<usize>,
    pub r: BTreeSet<usize>,
}

impl AdversarySets {
    fn blocked(&self, x: usize) -> bool {
        self.u.contains(&x) || self.r.contains(&x)
    }
}

/// Calls `f` on every `choose`-subset of `pool` in lexicographic order.
fn for_each_subset(pool: &[usize], choose: usize, f: &mut dyn FnMut(&[usize])) {
    let n = pool.len();
    if choose > n {
        return;
    }
    let mut idx: Vec<usize> = (0..choose).collect();
    let mut buf = vec![0; choose];
    loop {
        for (b, &i) in buf.iter_mut().zip(&idx) {
            *b = pool[i];
        }
        f(&buf);
        let Some(i) = (0..choose).rev().find(|&i| idx[i] < i + n - choose) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..choose {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Plays the adversary for odd `n`.
pub fn run_priority_adversary(n: usize, algorithm: &mut dyn PriorityAlgorithm) -> Result<GameTranscript> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Malformed(format!("n = {n} must be odd and at least 3")));
    }
    if n > PRIORITY_LIMIT_N {
        return Err(Error::Refused(format!(
            "n = {n} exceeds the candidate-enumeration limit {PRIORITY_LIMIT_N}"
        )));
    }
    let degree = n.div_ceil(2);
    let mut sets = AdversarySets::default();
    let mut history = PriorityHistory::default();
    let mut adjacency: Vec<Vec<usize>> = Vec::new();
    let mut alg_matching = Matching::new();
    let mut certificate = Matching::new();
    let mut turns = Vec::new();
    let name = algorithm.name();

    while sets.u.len() + sets.r.len() < (n - 1) / 2 {
        let turn = adjacency.len();
        if sets.m.len() != sets.u.len() {
            return Err(Error::Invariant(format!("|M| != |U| at turn {turn}")));
        }
        let pool: Vec<usize> = (0..n).filter(|&x| !sets.blocked(x) && !sets.m.contains(&x)).collect();
        let mut best: Option<(Priority, Vec<usize>)> = None;
        let mut candidates = 0u64;
        for_each_subset(&pool, degree - sets.m.len(), &mut |rest| {
            let mut neighbors: Vec<usize> = sets.m.iter().copied().chain(rest.iter().copied()).collect();
            neighbors.sort_unstable();
            let item = DataItem { label: turn, neighbors };
            let score = algorithm.score(&item, &history);
            candidates += 1;
            if best.as_ref().map_or(true, |(b, _)| &score < b) {
                best = Some((score, item.neighbors));
            }
        });
        let (_, neighbors) = best.ok_or_else(|| Error::protocol(turn, "empty candidate set"))?;
        let item = DataItem {
            label: turn,
            neighbors: neighbors.clone(),
        };
        let decision = algorithm.decide(&item, &history);
        let open = |s: &AdversarySets, x: usize| !s.blocked(x) && !s.m.contains(&x);
        let note = match decision {
            Some(m) => {
                if !neighbors.contains(&m) || sets.m.contains(&m) {
                    return Err(Error::protocol(turn, format!("{m} is not an available neighbor")));
                }
                sets.m.insert(m);
                let u = neighbors
                    .iter()
                    .copied()
                    .find(|&x| open(&sets, x))
                    .ok_or_else(|| Error::Invariant("no neighbor left for U".into()))?;
                sets.u.insert(u);
                alg_matching.insert(turn, m);
                certificate.insert(turn, u);
                format!("matched {m}; U += {u}; {candidates} candidates")
            }
            None => {
                let r = neighbors
                    .iter()
                    .copied()
                    .find(|&x| open(&sets, x))
                    .ok_or_else(|| Error::Invariant("no neighbor left for R".into()))?;
                sets.r.insert(r);
                certificate.insert(turn, r);
                format!("rejected; R += {r}; {candidates} candidates")
            }
        };
        history.record(item.clone(), decision);
        adjacency.push(neighbors);
        turns.push(TurnRecord {
            turn,
            item: Item::Priority { item },
            decisions: Decisions::Single { choice: decision },
            note,
        });
    }

    let rest: Vec<usize> = (0..n).filter(|&x| !sets.blocked(x)).collect();
    let mut free_for_cert = rest.clone();
    while adjacency.len() < n {
        let turn = adjacency.len();
        let item = DataItem {
            label: turn,
            neighbors: rest.clone(),
        };
        let decision = algorithm.decide(&item, &history);
        if let Some(m) = decision {
            if !rest.contains(&m) || history.matched_offline.contains(&m) {
                return Err(Error::protocol(turn, format!("{m} is not an available neighbor")));
            }
            alg_matching.insert(turn, m);
        }
        certificate.insert(turn, free_for_cert.remove(0));
        history.record(item.clone(), decision);
        adjacency.push(rest.clone());
        turns.push(TurnRecord {
            turn,
            item: Item::Priority { item },
            decisions: Decisions::Single { choice: decision },
            note: "final stage".into(),
        });
    }

    let instance = BipartiteInstance::new(n, adjacency)?;
    alg_matching.validate(&instance)?;
    certificate.validate(&instance)?;
    if certificate.size() != n {
        return Err(Error::Invariant("certificate is not perfect".into()));
    }
    let mut params = BTreeMap::new();
    params.insert("n".into(), n.to_string());
    Ok(GameTranscript {
        game: "priority".into(),
        algorithm: name,
        params,
        turns,
        certificate: Certificate::Matching { matching: certificate },
        final_instance: FinalInstance::Bipartite { instance },
        summary: GameSummary {
            algorithm_value: Rational::from_integer(alg_matching.size().into()),
            certificate_value: Rational::from_integer(n.into()),
            ratio: Rational::new(alg_matching.size().into(), n.into()),
            bound: Some(Rational::new(degree.into(), n.into())),
            notes: vec![format!("M = {:?}, U = {:?}, R = {:?}", sets.m, sets.u, sets.r)],
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversaries::protocol::{AlwaysReject, PriorityGreedyLow};

    #[test]
    fn subsets_in_order() {
        let mut seen = Vec::new();
        for_each_subset(&[1, 3, 5, 7], 2, &mut |s| seen.push(s.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![1, 3]);
        assert_eq!(seen[5], vec![5, 7]);
        let mut count = 0;
        for_each_subset(&[0, 1, 2], 3, &mut |_| count += 1);
        assert_eq!(count, 1);
        for_each_subset(&[0, 1, 2], 0, &mut |_| count += 1);
        assert_eq!(count, 2);
    }

    #[test]
    fn seven_gives_four() {
        let t = run_priority_adversary(7, &mut PriorityGreedyLow).unwrap();
        assert!(t.summary.algorithm_value <= Rational::from_integer(4.into()));
        t.replay().unwrap();
        let t = run_priority_adversary(7, &mut AlwaysReject).unwrap();
        assert_eq!(t.summary.algorithm_value, Rational::from_integer(0.into()));
    }
}
