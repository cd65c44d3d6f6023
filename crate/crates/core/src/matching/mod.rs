//! Online, random-order and parallel bipartite matching algorithms.

pub mod balance;
pub mod greedy;
pub mod lp_ranking;
pub mod poset;
pub mod random;
pub mod ranking;

pub use balance::{balance_max_of_k, LoadVector};
pub use greedy::{
    cyclic_ranking, greedy_fixed_ranking, least_seen, left_right_ranking, run_rom_rule, run_rule_masks, CyclicModulus,
    DegreeReading, RankingPermutation, RomRule, TieRule,
};
pub use lp_ranking::{lp_ranking_derandomization, ranking_step_probability, LpRankingOutcome, MatchingDistribution};
pub use poset::{count_linear_extensions, poset_of_matching, MatchingPoset};
pub use random::{random_expectation, random_matcher, random_rom_expectation};
pub use ranking::{ranking_expectation, ranking_rom_expectation, ranking_sample};
