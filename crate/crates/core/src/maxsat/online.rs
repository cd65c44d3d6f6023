//! Single-assignment online max-sat algorithms driven by data items.

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::measure::ClauseTracker;
use crate::error::Result;
use crate::instances::{view_data_item, Assignment, CnfInstance, DataItemView, InputModel};

/// A one-assignment online algorithm: sees a data item, commits a value.
pub trait OnlineAssigner {
    fn name(&self) -> String;

    /// Lowest input model whose views carry everything the rule reads.
    fn model(&self) -> InputModel;

    fn decide(&mut self, view: &DataItemView) -> bool;
}

/// Johnson's rule: satisfy the side with more measure, true on ties.
#[derive(Clone, Debug, Default)]
pub struct Johnson {
    tracker: ClauseTracker,
}

impl Johnson {
    pub fn new() -> Self {
        Johnson::default()
    }
}

impl OnlineAssigner for Johnson {
    fn name(&self) -> String {
        "johnson".into()
    }

    fn model(&self) -> InputModel {
        InputModel::Lengths
    }

    fn decide(&mut self, view: &DataItemView) -> bool {
        let value = self.tracker.gain(view, true) >= self.tracker.gain(view, false);
        self.tracker.commit(view, value);
        value
    }
}

/// Satisfy the side with more open weight, true on ties.
#[derive(Clone, Debug, Default)]
pub struct GreedyWeight {
    tracker: ClauseTracker,
}

impl GreedyWeight {
    pub fn new() -> Self {
        GreedyWeight::default()
    }
}

impl OnlineAssigner for GreedyWeight {
    fn name(&self) -> String {
        "greedy-weight".into()
    }

    fn model(&self) -> InputModel {
        InputModel::Names
    }

    fn decide(&mut self, view: &DataItemView) -> bool {
        let value = self.tracker.weight_gain(view, true) >= self.tracker.weight_gain(view, false);
        self.tracker.commit(view, value);
        value
    }
}

/// True with probability `w_T / (w_T + w_F)` over open clauses; a fair coin when both are zero.
#[derive(Clone, Debug)]
pub struct Proportional {
    tracker: ClauseTracker,
    rng: ChaCha8Rng,
}

impl Proportional {
    pub fn new(seed: u64) -> Self {
        Proportional {
            tracker: ClauseTracker::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl OnlineAssigner for Proportional {
    fn name(&self) -> String {
        "proportional".into()
    }

    fn model(&self) -> InputModel {
        InputModel::Names
    }

    fn decide(&mut self, view: &DataItemView) -> bool {
        let wt = self.tracker.weight_gain(view, true);
        let wf = self.tracker.weight_gain(view, false);
        let total = &wt + &wf;
        let p = if total.is_zero() {
            0.5
        } else {
            (wt / total).to_f64().unwrap_or(0.5)
        };
        let value = self.rng.gen_bool(p.clamp(0.0, 1.0));
        self.tracker.commit(view, value);
        value
    }
}

/// Feeds the instance's variables in arrival order through `algo`.
pub fn run_online(instance: &CnfInstance, algo: &mut dyn OnlineAssigner) -> Result<Assignment> {
    let model = algo.model();
    let mut a = Assignment::empty(instance.n_vars());
    for &v in instance.variables() {
        let view = view_data_item(instance, v, model)?;
        a.set(v, algo.decide(&view));
    }
    Ok(a)
}

pub fn johnson_assign(instance: &CnfInstance) -> Assignment {
    run_online(instance, &mut Johnson::new()).expect("views of own variables")
}

pub fn greedy_weight_assign(instance: &CnfInstance) -> Assignment {
    run_online(instance, &mut GreedyWeight::new()).expect("views of own variables")
}

pub fn randomized_proportional_assign(instance: &CnfInstance, seed: u64) -> Assignment {
    run_online(instance, &mut Proportional::new(seed)).expect("views of own variables")
}
