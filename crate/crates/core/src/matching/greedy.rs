//! Deterministic greedy matchers for the adversarial and random order models.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::{ArrivalOrder, BipartiteInstance, Matching};

/// Offline preference order: `rank[u]` smaller means preferred.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RankingPermutation {
    rank: Vec<usize>,
}

impl RankingPermutation {
    pub fn new(rank: Vec<usize>) -> Result<Self> {
        let n = rank.len();
        let mut seen = vec![false; n];
        for &r in &rank {
            if r >= n || seen[r] {
                return Err(Error::Malformed(format!("ranking is not a permutation of 0..{n}")));
            }
            seen[r] = true;
        }
        Ok(RankingPermutation { rank })
    }

    pub fn identity(n: usize) -> Self {
        RankingPermutation { rank: (0..n).collect() }
    }

    /// The ranking in which `order[0]` is most preferred.
    pub fn from_preference_order(order: &[usize]) -> Result<Self> {
        let mut rank = vec![usize::MAX; order.len()];
        for (r, &u) in order.iter().enumerate() {
            if u >= order.len() {
                return Err(Error::Malformed(format!("offline {u} out of range")));
            }
            rank[u] = r;
        }
        Self::new(rank)
    }

    pub fn rank(&self, u: usize) -> usize {
        self.rank[u]
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }
}

/// Which degree the index-based rankings read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DegreeReading {
    /// Degree of the arriving vertex in the instance.
    #[default]
    Full,
    /// Number of the arriving vertex's neighbors that are already matched.
    MatchedOnly,
}

/// Modulus of the cyclic ranking's starting offset.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CyclicModulus {
    /// `(i + d) mod (n - 1)`.
    #[default]
    NMinusOne,
    /// `(i + d) mod n`.
    N,
}

/// Tie rule among equally-seen offline vertices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TieRule {
    #[default]
    Low,
    High,
}

/// The deterministic random-order-model algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RomRule {
    FixedRanking,
    Cyclic {
        modulus: CyclicModulus,
        degree: DegreeReading,
    },
    LeftRight {
        degree: DegreeReading,
    },
    LeastSeen {
        tie: TieRule,
    },
}

impl RomRule {
    pub const FIXED: RomRule = RomRule::FixedRanking;
    pub const CYCLIC: RomRule = RomRule::Cyclic {
        modulus: CyclicModulus::NMinusOne,
        degree: DegreeReading::Full,
    };
    pub const LEFT_RIGHT: RomRule = RomRule::LeftRight {
        degree: DegreeReading::Full,
    };
    pub const LEAST_SEEN: RomRule = RomRule::LeastSeen { tie: TieRule::Low };

    /// The four table algorithms with their primary readings.
    pub fn table_rules() -> [RomRule; 4] {
        [Self::FIXED, Self::CYCLIC, Self::LEFT_RIGHT, Self::LEAST_SEEN]
    }

    pub fn name(&self) -> String {
        match self {
            RomRule::FixedRanking => "fixed-ranking".into(),
            RomRule::Cyclic { modulus, degree } => {
                let mut s = String::from("cyclic");
                if *modulus == CyclicModulus::N {
                    s.push_str("-mod-n");
                }
                if *degree == DegreeReading::MatchedOnly {
                    s.push_str("-matched-degree");
                }
                s
            }
            RomRule::LeftRight { degree } => match degree {
                DegreeReading::Full => "left-right".into(),
                DegreeReading::MatchedOnly => "left-right-matched-degree".into(),
            },
            RomRule::LeastSeen { tie } => match tie {
                TieRule::Low => "least-seen".into(),
                TieRule::High => "least-seen-high".into(),
            },
        }
    }

    pub fn from_name(name: &str) -> Option<RomRule> {
        let rules = [
            RomRule::FIXED,
            RomRule::CYCLIC,
            RomRule::Cyclic {
                modulus: CyclicModulus::N,
                degree: DegreeReading::Full,
            },
            RomRule::Cyclic {
                modulus: CyclicModulus::NMinusOne,
                degree: DegreeReading::MatchedOnly,
            },
            RomRule::Cyclic {
                modulus: CyclicModulus::N,
                degree: DegreeReading::MatchedOnly,
            },
            RomRule::LEFT_RIGHT,
            RomRule::LeftRight {
                degree: DegreeReading::MatchedOnly,
            },
            RomRule::LEAST_SEEN,
            RomRule::LeastSeen { tie: TieRule::High },
        ];
        rules.into_iter().find(|r| r.name() == name)
    }

    /// Refuses instances the rule is undefined on.
    pub fn check(&self, n_offline: usize) -> Result<()> {
        if let RomRule::Cyclic {
            modulus: CyclicModulus::NMinusOne,
            ..
        } = self
        {
            if n_offline < 2 {
                return Err(Error::Refused(
                    "cyclic ranking needs n >= 2 (offset taken mod n-1)".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Mutable state shared by the general and bitmask simulations.
struct RuleState {
    seen: Vec<u32>,
}

impl RuleState {
    fn new(n: usize) -> Self {
        RuleState { seen: vec![0; n] }
    }
}

/// Chooses among the available neighbors of the `i`-th arrival.
///
/// `neighbors` is sorted; `available` filters it.
fn choose(
    rule: &RomRule,
    state: &mut RuleState,
    i: usize,
    n: usize,
    neighbors: &[usize],
    is_used: &dyn Fn(usize) -> bool,
) -> Option<usize> {
    let degree = |reading: &DegreeReading| match reading {
        DegreeReading::Full => neighbors.len(),
        DegreeReading::MatchedOnly => neighbors.iter().filter(|&&u| is_used(u)).count(),
    };
    match rule {
        RomRule::FixedRanking => neighbors.iter().copied().find(|&u| !is_used(u)),
        RomRule::Cyclic {
            modulus,
            degree: reading,
        } => {
            let m = match modulus {
                CyclicModulus::NMinusOne => n - 1,
                CyclicModulus::N => n,
            };
            let f = (i + degree(reading)) % m;
            (0..n)
                .map(|j| (f + j) % n)
                .find(|&u| !is_used(u) && neighbors.binary_search(&u).is_ok())
        }
        RomRule::LeftRight { degree: reading } => {
            if (i + degree(reading)) % 2 == 0 {
                neighbors.iter().copied().find(|&u| !is_used(u))
            } else {
                neighbors.iter().rev().copied().find(|&u| !is_used(u))
            }
        }
        RomRule::LeastSeen { tie } => {
            for &u in neighbors {
                state.seen[u] += 1;
            }
            let mut best: Option<usize> = None;
            for &u in neighbors {
                if is_used(u) {
                    continue;
                }
                best = match best {
                    None => Some(u),
                    Some(b) => {
                        let better =
                            state.seen[u] < state.seen[b] || (state.seen[u] == state.seen[b] && *tie == TieRule::High);
                        Some(if better { u } else { b })
                    }
                };
            }
            best
        }
    }
}

/// Runs a rule on `instance` with online vertices arriving in `order`.
pub fn run_rom_rule(rule: &RomRule, instance: &BipartiteInstance, order: &ArrivalOrder) -> Result<Matching> {
    rule.check(instance.n_offline())?;
    let n = instance.n_offline();
    let mut used = vec![false; n];
    let mut state = RuleState::new(n);
    let mut m = Matching::new();
    for (i, &v) in order.as_slice().iter().enumerate() {
        let pick = {
            let used_ref = &used;
            choose(rule, &mut state, i, n, instance.neighbors(v), &|u| used_ref[u])
        };
        if let Some(u) = pick {
            used[u] = true;
            m.insert(v, u);
        }
    }
    Ok(m)
}

/// Matches each arrival to its lowest-rank available neighbor.
pub fn greedy_fixed_ranking(instance: &BipartiteInstance, order: &ArrivalOrder, rank: &RankingPermutation) -> Matching {
    let mut used = vec![false; instance.n_offline()];
    let mut m = Matching::new();
    for &v in order.as_slice() {
        let pick = instance
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| !used[u])
            .min_by_key(|&u| rank.rank(u));
        if let Some(u) = pick {
            used[u] = true;
            m.insert(v, u);
        }
    }
    m
}

pub fn cyclic_ranking(instance: &BipartiteInstance, order: &ArrivalOrder) -> Result<Matching> {
    run_rom_rule(&RomRule::CYCLIC, instance, order)
}

pub fn left_right_ranking(instance: &BipartiteInstance, order: &ArrivalOrder) -> Matching {
    run_rom_rule(&RomRule::LEFT_RIGHT, instance, order).expect("defined for every n")
}

pub fn least_seen(instance: &BipartiteInstance, order: &ArrivalOrder, tie: TieRule) -> Matching {
    run_rom_rule(&RomRule::LeastSeen { tie }, instance, order).expect("defined for every n")
}

/// Matching size of `rule` on neighbor masks given in arrival order (`n <= 64`).
///
/// Same decisions as [`run_rom_rule`] without allocation; the exhaustive
/// table evaluator calls this in its inner loop.
pub fn run_rule_masks(rule: &RomRule, seq: &[u64], n: usize) -> u32 {
    let mut used = 0u64;
    let mut size = 0;
    let mut seen = [0u32; 64];
    for (i, &nb) in seq.iter().enumerate() {
        let avail = nb & !used;
        if avail == 0 {
            if let RomRule::LeastSeen { .. } = rule {
                bump(&mut seen, nb);
            }
            continue;
        }
        let deg = |reading: &DegreeReading| match reading {
            DegreeReading::Full => nb.count_ones() as usize,
            DegreeReading::MatchedOnly => (nb & used).count_ones() as usize,
        };
        let u = match rule {
            RomRule::FixedRanking => avail.trailing_zeros(),
            RomRule::Cyclic { modulus, degree } => {
                let m = match modulus {
                    CyclicModulus::NMinusOne => n - 1,
                    CyclicModulus::N => n,
                };
                let f = ((i + deg(degree)) % m) as u32;
                let high = avail >> f << f;
                if high != 0 {
                    high.trailing_zeros()
                } else {
                    avail.trailing_zeros()
                }
            }
            RomRule::LeftRight { degree } => {
                if (i + deg(degree)) % 2 == 0 {
                    avail.trailing_zeros()
                } else {
                    63 - avail.leading_zeros()
                }
            }
            RomRule::LeastSeen { tie } => {
                bump(&mut seen, nb);
                let mut best = u32::MAX;
                let mut best_count = u32::MAX;
                let mut rest = avail;
                while rest != 0 {
                    let u = rest.trailing_zeros();
                    rest &= rest - 1;
                    let c = seen[u as usize];
                    if c < best_count || (c == best_count && *tie == TieRule::High) {
                        best = u;
                        best_count = c;
                    }
                }
                best
            }
        };
        used |= 1 << u;
        size += 1;
    }
    size
}

fn bump(seen: &mut [u32; 64], mut nb: u64) {
    while nb != 0 {
        seen[nb.trailing_zeros() as usize] += 1;
        nb &= nb - 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::gen_upper_triangular;

    #[test]
    fn cyclic_offset_example() {
        let g = BipartiteInstance::new(2, vec![vec![0, 1]]).unwrap();
        let m = cyclic_ranking(&g, &ArrivalOrder::identity(1)).unwrap();
        assert_eq!(m.get(0), Some(0));
        let one = BipartiteInstance::new(1, vec![vec![0]]).unwrap();
        assert!(matches!(
            cyclic_ranking(&one, &ArrivalOrder::identity(1)),
            Err(Error::Refused(_))
        ));
    }

    #[test]
    fn left_right_parity() {
        let g = BipartiteInstance::new(3, vec![vec![0, 2]]).unwrap();
        let m = left_right_ranking(&g, &ArrivalOrder::identity(1));
        assert_eq!(m.get(0), Some(0));
        let g = BipartiteInstance::new(3, vec![vec![2]]).unwrap();
        assert_eq!(left_right_ranking(&g, &ArrivalOrder::identity(1)).get(0), Some(2));
    }

    #[test]
    fn least_seen_first_vertex_takes_lowest() {
        let g = BipartiteInstance::new(3, vec![vec![1, 2]]).unwrap();
        assert_eq!(least_seen(&g, &ArrivalOrder::identity(1), TieRule::Low).get(0), Some(1));
        assert_eq!(
            least_seen(&g, &ArrivalOrder::identity(1), TieRule::High).get(0),
            Some(2)
        );
    }

    #[test]
    fn fixed_ranking_on_triangle() {
        let g = gen_upper_triangular(2);
        let m = greedy_fixed_ranking(&g, &ArrivalOrder::identity(2), &RankingPermutation::identity(2));
        assert_eq!(m.size(), 2);
    }

    #[test]
    fn rule_names_round_trip() {
        for r in RomRule::table_rules() {
            assert_eq!(RomRule::from_name(&r.name()), Some(r));
        }
        assert_eq!(
            RomRule::from_name("least-seen-high"),
            Some(RomRule::LeastSeen { tie: TieRule::High })
        );
    }
}
