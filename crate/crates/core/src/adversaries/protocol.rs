//! The algorithm side of the adversary games, plus built-in players.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::instances::DataItemView;
use crate::maxsat::{OnlineAssigner, Width2Johnson};

/// A change to the set of live matchings, applied before an arrival.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Directive {
    /// Copy the live matching at this position; the copy is appended.
    Branch(usize),
    /// Stop extending the live matching at this position.
    Cut(usize),
}

/// A player in the bipartite width game.
///
/// Positions in `available` and in the returned decisions follow the order of
/// the live matchings, which only changes through directives.
pub trait MatchingGameAlgorithm {
    fn name(&self) -> String;

    /// Most live matchings the algorithm may hold at once.
    fn width(&self) -> usize;

    /// Live matchings before the first arrival.
    fn initial_matchings(&self) -> usize {
        self.width()
    }

    fn directives(&mut self, _turn: usize, _neighbors: &[usize], _live: usize) -> Vec<Directive> {
        Vec::new()
    }

    /// One decision per live matching: an available neighbor or `None`.
    fn on_arrival(&mut self, turn: usize, neighbors: &[usize], available: &[Vec<usize>]) -> Vec<Option<usize>>;
}

/// Every matching takes its lowest available neighbor.
#[derive(Clone, Debug)]
pub struct GreedyLow {
    pub k: usize,
}

impl MatchingGameAlgorithm for GreedyLow {
    fn name(&self) -> String {
        format!("greedy-low-{}", self.k)
    }

    fn width(&self) -> usize {
        self.k
    }

    fn on_arrival(&mut self, _: usize, _: &[usize], available: &[Vec<usize>]) -> Vec<Option<usize>> {
        available.iter().map(|a| a.iter().min().copied()).collect()
    }
}

/// Every matching takes its highest available neighbor.
#[derive(Clone, Debug)]
pub struct GreedyHigh {
    pub k: usize,
}

impl MatchingGameAlgorithm for GreedyHigh {
    fn name(&self) -> String {
        format!("greedy-high-{}", self.k)
    }

    fn width(&self) -> usize {
        self.k
    }

    fn on_arrival(&mut self, _: usize, _: &[usize], available: &[Vec<usize>]) -> Vec<Option<usize>> {
        available.iter().map(|a| a.iter().max().copied()).collect()
    }
}

/// Every matching takes a uniformly random available neighbor.
#[derive(Clone, Debug)]
pub struct GreedyRandom {
    pub k: usize,
    rng: ChaCha8Rng,
    seed: u64,
}

impl GreedyRandom {
    pub fn new(k: usize, seed: u64) -> Self {
        GreedyRandom {
            k,
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }
}

impl MatchingGameAlgorithm for GreedyRandom {
    fn name(&self) -> String {
        format!("greedy-random-{}-seed{}", self.k, self.seed)
    }

    fn width(&self) -> usize {
        self.k
    }

    fn on_arrival(&mut self, _: usize, _: &[usize], available: &[Vec<usize>]) -> Vec<Option<usize>> {
        available
            .iter()
            .map(|a| {
                if a.is_empty() {
                    None
                } else {
                    Some(a[self.rng.gen_range(0..a.len())])
                }
            })
            .collect()
    }
}

/// Matchings in index order take the least-loaded available neighbor.
#[derive(Clone, Debug)]
pub struct Balance {
    pub k: usize,
}

impl MatchingGameAlgorithm for Balance {
    fn name(&self) -> String {
        format!("balance-{}", self.k)
    }

    fn width(&self) -> usize {
        self.k
    }

    fn on_arrival(&mut self, _: usize, neighbors: &[usize], available: &[Vec<usize>]) -> Vec<Option<usize>> {
        let live = available.len();
        let mut load: Vec<usize> = neighbors
            .iter()
            .map(|u| live - available.iter().filter(|a| a.contains(u)).count())
            .collect();
        available
            .iter()
            .map(|a| {
                let pick = neighbors
                    .iter()
                    .enumerate()
                    .filter(|(_, u)| a.contains(u))
                    .min_by_key(|&(i, &u)| (load[i], u))
                    .map(|(i, &u)| (i, u));
                pick.map(|(i, u)| {
                    load[i] += 1;
                    u
                })
            })
            .collect()
    }
}

/// Matching `j` takes the `j`-th lowest available neighbor, wrapping around.
#[derive(Clone, Debug)]
pub struct Staggered {
    pub k: usize,
}

impl MatchingGameAlgorithm for Staggered {
    fn name(&self) -> String {
        format!("staggered-{}", self.k)
    }

    fn width(&self) -> usize {
        self.k
    }

    fn on_arrival(&mut self, _: usize, _: &[usize], available: &[Vec<usize>]) -> Vec<Option<usize>> {
        available
            .iter()
            .enumerate()
            .map(|(j, a)| {
                let mut a = a.clone();
                a.sort_unstable();
                if a.is_empty() {
                    None
                } else {
                    Some(a[j % a.len()])
                }
            })
            .collect()
    }
}

/// Starts with one greedy matching and branches on a fixed schedule until it
/// holds `k`; copies prefer high neighbors.
#[derive(Clone, Debug)]
pub struct BranchingGreedy {
    pub k: usize,
    /// Branch once every this many arrivals.
    pub every: usize,
}

impl MatchingGameAlgorithm for BranchingGreedy {
    fn name(&self) -> String {
        format!("branching-greedy-{}", self.k)
    }

    fn width(&self) -> usize {
        self.k
    }

    fn initial_matchings(&self) -> usize {
        1
    }

    fn directives(&mut self, turn: usize, _: &[usize], live: usize) -> Vec<Directive> {
        if live < self.k && turn > 0 && turn % self.every.max(1) == 0 {
            vec![Directive::Branch(live - 1)]
        } else {
            Vec::new()
        }
    }

    fn on_arrival(&mut self, _: usize, _: &[usize], available: &[Vec<usize>]) -> Vec<Option<usize>> {
        available
            .iter()
            .enumerate()
            .map(|(j, a)| if j % 2 == 0 { a.iter().min() } else { a.iter().max() }.copied())
            .collect()
    }
}

/// An online data item in the priority model.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DataItem {
    pub label: usize,
    pub neighbors: Vec<usize>,
}

/// What a priority algorithm has seen so far.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PriorityHistory {
    pub received: Vec<(DataItem, Option<usize>)>,
    pub matched_offline: BTreeSet<usize>,
}

impl PriorityHistory {
    pub fn available(&self, item: &DataItem) -> Vec<usize> {
        item.neighbors
            .iter()
            .copied()
            .filter(|u| !self.matched_offline.contains(u))
            .collect()
    }

    pub fn record(&mut self, item: DataItem, decision: Option<usize>) {
        if let Some(u) = decision {
            self.matched_offline.insert(u);
        }
        self.received.push((item, decision));
    }
}

/// Lexicographic priority; smaller values are received first.
pub type Priority = Vec<i64>;

/// An adaptive priority algorithm.
pub trait PriorityAlgorithm {
    fn name(&self) -> String;

    /// Must depend only on the item and the history.
    fn score(&self, item: &DataItem, history: &PriorityHistory) -> Priority;

    fn decide(&mut self, item: &DataItem, history: &PriorityHistory) -> Option<usize>;
}

fn lex(item: &DataItem) -> Priority {
    item.neighbors.iter().map(|&u| u as i64).collect()
}

/// Lexicographically first items, matched to the lowest available neighbor.
#[derive(Clone, Debug, Default)]
pub struct PriorityGreedyLow;

impl PriorityAlgorithm for PriorityGreedyLow {
    fn name(&self) -> String {
        "priority-greedy-low".into()
    }

    fn score(&self, item: &DataItem, _: &PriorityHistory) -> Priority {
        let mut p = lex(item);
        p.push(item.label as i64);
        p
    }

    fn decide(&mut self, item: &DataItem, h: &PriorityHistory) -> Option<usize> {
        h.available(item).into_iter().min()
    }
}

/// Items with high neighbors first, matched to the highest available neighbor.
#[derive(Clone, Debug, Default)]
pub struct PriorityGreedyHigh;

impl PriorityAlgorithm for PriorityGreedyHigh {
    fn name(&self) -> String {
        "priority-greedy-high".into()
    }

    fn score(&self, item: &DataItem, _: &PriorityHistory) -> Priority {
        let mut p: Priority = item.neighbors.iter().rev().map(|&u| -(u as i64)).collect();
        p.push(item.label as i64);
        p
    }

    fn decide(&mut self, item: &DataItem, h: &PriorityHistory) -> Option<usize> {
        h.available(item).into_iter().max()
    }
}

/// Fewest available neighbors first, then label; lowest available neighbor.
#[derive(Clone, Debug, Default)]
pub struct FewestAvailable;

impl PriorityAlgorithm for FewestAvailable {
    fn name(&self) -> String {
        "fewest-available".into()
    }

    fn score(&self, item: &DataItem, h: &PriorityHistory) -> Priority {
        let mut p = vec![h.available(item).len() as i64, item.label as i64];
        p.extend(lex(item));
        p
    }

    fn decide(&mut self, item: &DataItem, h: &PriorityHistory) -> Option<usize> {
        h.available(item).into_iter().min()
    }
}

/// Rejects every item it receives.
#[derive(Clone, Debug, Default)]
pub struct AlwaysReject;

impl PriorityAlgorithm for AlwaysReject {
    fn name(&self) -> String {
        "always-reject".into()
    }

    fn score(&self, item: &DataItem, _: &PriorityHistory) -> Priority {
        lex(item)
    }

    fn decide(&mut self, _: &DataItem, _: &PriorityHistory) -> Option<usize> {
        None
    }
}

/// Alternates between matching (to the highest neighbor) and rejecting.
#[derive(Clone, Debug, Default)]
pub struct AlternatingPriority;

impl PriorityAlgorithm for AlternatingPriority {
    fn name(&self) -> String {
        "alternating".into()
    }

    fn score(&self, item: &DataItem, _: &PriorityHistory) -> Priority {
        let mut p = lex(item);
        p.reverse();
        p
    }

    fn decide(&mut self, item: &DataItem, h: &PriorityHistory) -> Option<usize> {
        if h.received.len() % 2 == 1 {
            None
        } else {
            h.available(item).into_iter().max()
        }
    }
}

/// First item: anything touching offline label 0, lowest online label, matched to 0.
/// Afterwards: fewest available neighbors first, lowest available neighbor.
#[derive(Clone, Debug, Default)]
pub struct PrioOneRand;

impl PriorityAlgorithm for PrioOneRand {
    fn name(&self) -> String {
        "prio-one-rand".into()
    }

    fn score(&self, item: &DataItem, h: &PriorityHistory) -> Priority {
        if h.received.is_empty() {
            let has0 = item.neighbors.contains(&0);
            let mut p = vec![i64::from(!has0), item.label as i64];
            p.extend(lex(item));
            p
        } else {
            FewestAvailable.score(item, h)
        }
    }

    fn decide(&mut self, item: &DataItem, h: &PriorityHistory) -> Option<usize> {
        if h.received.is_empty() && item.neighbors.contains(&0) {
            Some(0)
        } else {
            h.available(item).into_iter().min()
        }
    }
}

/// Fewest available neighbors first, ties by online label; lowest-labelled neighbor.
#[derive(Clone, Debug, Default)]
pub struct DegreeBased;

impl PriorityAlgorithm for DegreeBased {
    fn name(&self) -> String {
        "degree-based".into()
    }

    fn score(&self, item: &DataItem, h: &PriorityHistory) -> Priority {
        vec![h.available(item).len() as i64, item.label as i64]
    }

    fn decide(&mut self, item: &DataItem, h: &PriorityHistory) -> Option<usize> {
        h.available(item).into_iter().min()
    }
}

/// A priority algorithm whose top item is `label : {a, b}`, matched to `choice`;
/// otherwise it behaves like [`FewestAvailable`].
#[derive(Clone, Debug)]
pub struct FirstItemStrategy {
    pub label: usize,
    pub pair: (usize, usize),
    pub choice: usize,
}

impl FirstItemStrategy {
    fn is_top(&self, item: &DataItem) -> bool {
        item.label == self.label && item.neighbors == [self.pair.0, self.pair.1]
    }
}

impl PriorityAlgorithm for FirstItemStrategy {
    fn name(&self) -> String {
        format!(
            "first-item-{}:({},{})->{}",
            self.label, self.pair.0, self.pair.1, self.choice
        )
    }

    fn score(&self, item: &DataItem, h: &PriorityHistory) -> Priority {
        if h.received.is_empty() && self.is_top(item) {
            vec![i64::MIN]
        } else {
            FewestAvailable.score(item, h)
        }
    }

    fn decide(&mut self, item: &DataItem, h: &PriorityHistory) -> Option<usize> {
        if h.received.is_empty() && self.is_top(item) {
            Some(self.choice)
        } else {
            h.available(item).into_iter().min()
        }
    }
}

/// A player in the max-sat games: `width()` parallel assignments, each
/// receiving one value per presented variable.
pub trait MaxSatGameAlgorithm {
    fn name(&self) -> String;

    fn width(&self) -> usize;

    fn on_variable(&mut self, view: &DataItemView) -> Vec<bool>;
}

/// Independent single-assignment rules run side by side.
pub struct MaxOfK {
    pub members: Vec<Box<dyn OnlineAssigner>>,
}

impl MaxOfK {
    pub fn single(member: Box<dyn OnlineAssigner>) -> Self {
        MaxOfK { members: vec![member] }
    }
}

impl MaxSatGameAlgorithm for MaxOfK {
    fn name(&self) -> String {
        let names: Vec<String> = self.members.iter().map(|m| m.name()).collect();
        format!("max-of[{}]", names.join(","))
    }

    fn width(&self) -> usize {
        self.members.len()
    }

    fn on_variable(&mut self, view: &DataItemView) -> Vec<bool> {
        self.members.iter_mut().map(|m| m.decide(view)).collect()
    }
}

impl MaxSatGameAlgorithm for Width2Johnson {
    fn name(&self) -> String {
        format!("width2-johnson-p{}", self.p())
    }

    fn width(&self) -> usize {
        2
    }

    fn on_variable(&mut self, view: &DataItemView) -> Vec<bool> {
        let (a, b) = self.decide(view);
        vec![a, b]
    }
}

/// `k` assignments: the first `k/2` round up on ties, the rest round down,
/// each otherwise following open weight.
#[derive(Clone, Debug)]
pub struct Complementary {
    pub k: usize,
    trackers: Vec<crate::maxsat::ClauseTracker>,
}

impl Complementary {
    pub fn new(k: usize) -> Self {
        Complementary {
            k,
            trackers: vec![crate::maxsat::ClauseTracker::new(); k],
        }
    }
}

impl MaxSatGameAlgorithm for Complementary {
    fn name(&self) -> String {
        format!("complementary-{}", self.k)
    }

    fn width(&self) -> usize {
        self.k
    }

    fn on_variable(&mut self, view: &DataItemView) -> Vec<bool> {
        let half = self.k.div_ceil(2);
        self.trackers
            .iter_mut()
            .enumerate()
            .map(|(j, t)| {
                let wt = t.weight_gain(view, true);
                let wf = t.weight_gain(view, false);
                let value = if wt == wf { j < half } else { wt > wf };
                t.commit(view, value);
                value
            })
            .collect()
    }
}

/// `k` assignments of independent fair coins.
#[derive(Clone, Debug)]
pub struct RandomAssignments {
    pub k: usize,
    rng: ChaCha8Rng,
}

impl RandomAssignments {
    pub fn new(k: usize, seed: u64) -> Self {
        RandomAssignments {
            k,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl MaxSatGameAlgorithm for RandomAssignments {
    fn name(&self) -> String {
        format!("random-{}", self.k)
    }

    fn width(&self) -> usize {
        self.k
    }

    fn on_variable(&mut self, _: &DataItemView) -> Vec<bool> {
        (0..self.k).map(|_| self.rng.gen_bool(0.5)).collect()
    }
}
