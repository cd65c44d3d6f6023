//! Adversary games against width-bounded and priority algorithms.

pub mod maxsat_games;
pub mod priority;
pub mod protocol;
pub mod relabel;
pub mod transcript;
pub mod width_matching;

pub use maxsat_games::{
    model0_target, run_maxsat_equivalence_adversary, run_maxsat_model0_adversary, run_maxsat_model3_adversary,
    run_maxsat_two_variable_game, split_fraction, MODEL0_MAX_K,
};
pub use priority::{run_priority_adversary, AdversarySets, PRIORITY_LIMIT_N};
pub use protocol::*;
pub use relabel::{
    check_randomized_priority_bound, evaluate_priority_under_relabeling, relabelled_runs, run_priority_instance,
    FirstStepRow, LabelledRun, PriorityBoundReport, PriorityFactory, RELABEL_LIMIT,
};
pub use transcript::{Certificate, Decisions, FinalInstance, GameSummary, GameTranscript, Item, TurnRecord};
pub use width_matching::{run_width_matching_adversary, width_bound_constant, WidthMode};
