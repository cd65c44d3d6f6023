//! Evaluation drivers: exhaustive tables, exact and sampled expectations,
//! adversary games and report emission.

pub mod config;
pub mod games;
pub mod montecarlo;
pub mod report;
pub mod rom;

pub use config::{OutputFormat, RunConfig};
pub use games::{
    matching_player, maxsat_player, priority_player, run_game, GameOutcome, GameParams, ScriptedMatching, GAMES,
    MATCHING_PLAYERS, MAXSAT_PLAYERS, PRIORITY_PLAYERS,
};
pub use montecarlo::{mc_buchbinder, mc_matching, monte_carlo, trial_rng, McEstimate};
pub use report::{emit_report, parse_report_csv, RatioReport, ReportRow};
pub use rom::{evaluate_rom, expected_size_in_order, rom_table, rom_table_raw, MatchingAlgorithm, ROM_EXACT_LIMIT};
