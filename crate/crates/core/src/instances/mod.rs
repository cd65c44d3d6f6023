//! Problem instances, input-model views, generators, file formats and oracles.

pub mod bipartite;
pub mod cnf;
pub mod enumerate;
pub mod format;
pub mod generators;
pub mod oracle;
pub mod views;

pub use bipartite::{ArrivalOrder, BipartiteInstance, Matching};
pub use cnf::{Assignment, Clause, ClauseId, CnfInstance, Literal, VarId};
pub use enumerate::{enumerate_bipartite, enumerate_bipartite_raw, CanonicalMasks};
pub use format::{parse_bipartite, parse_wcnf, serialize_bipartite, serialize_wcnf, BipartiteFormat};
pub use generators::{
    gen_complete, gen_prio_one_rand, gen_rand_hard, gen_upper_triangular, gen_width2_counterexample, random_bipartite,
    random_cnf,
};
pub use oracle::{optimal_matching, optimal_maxsat, optimal_maxsat_with_limit};
pub use views::{view_data_item, ClauseView, DataItemView, InputModel};
