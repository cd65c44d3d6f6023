//! Max-sat engines: online single-assignment rules, the two-assignment
//! Johnson variant, and the derandomized linear-width algorithm.

pub mod derand;
pub mod measure;
pub mod online;
pub mod submodular;
pub mod width2;

pub use derand::{
    derandomized_maxsat, explicit_feasible, marginals, randomized_buchbinder_maxsat, sparsify_to_extreme_point,
    DerandOutcome, LoosePair, MarginalPair, Objective, StateDistribution,
};
pub use measure::{clause_measure, ClauseTracker};
pub use online::{
    greedy_weight_assign, johnson_assign, randomized_proportional_assign, run_online, GreedyWeight, Johnson,
    OnlineAssigner, Proportional,
};
pub use submodular::{BudgetedCoverage, ModularWeight, SubmodularOracle, WeightedCoverage};
pub use width2::{width2_johnson, width2_value, Width2Johnson};
