//! Width-bounded online algorithms for max-sat and bipartite matching,
//! the adversary games that bound them, and exact evaluators.

pub mod adversaries;
pub mod error;
pub mod harness;
pub mod instances;
pub mod lp;
pub mod matching;
pub mod maxsat;
pub mod rational;

pub use error::{Error, Result};
pub use instances::*;
pub use rational::Rational;
