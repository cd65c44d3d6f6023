//! Clause measures and the per-clause bookkeeping an online algorithm can
//! maintain from data items alone.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::instances::{Clause, ClauseId, DataItemView};
use crate::rational::Rational;

/// `weight * 2^-unassigned`.
pub fn clause_measure(clause: &Clause, unassigned_count: usize) -> Rational {
    weighted_measure(&clause.weight, unassigned_count)
}

pub fn weighted_measure(weight: &Rational, unassigned_count: usize) -> Rational {
    weight / Rational::from_integer(BigInt::one() << unassigned_count)
}

#[derive(Clone, Debug)]
struct ClauseState {
    weight: Rational,
    length: Option<usize>,
    seen: usize,
    satisfied: bool,
}

/// What one assignment knows about each clause it has heard of.
///
/// Lengths are only known from model 1 upward; without them every clause is
/// treated as if the current variable were its last.
#[derive(Clone, Debug, Default)]
pub struct ClauseTracker {
    clauses: HashMap<ClauseId, ClauseState>,
    satisfied_weight: Rational,
}

/// One occurrence of the current variable in a not yet satisfied clause.
#[derive(Clone, Debug)]
pub struct OpenOccurrence {
    pub clause: ClauseId,
    pub positive: bool,
    pub weight: Rational,
    /// Unassigned variables of the clause, the current one included.
    pub unassigned: usize,
}

impl OpenOccurrence {
    pub fn measure(&self) -> Rational {
        weighted_measure(&self.weight, self.unassigned)
    }
}

impl ClauseTracker {
    pub fn new() -> Self {
        ClauseTracker::default()
    }

    pub fn satisfied_weight(&self) -> &Rational {
        &self.satisfied_weight
    }

    pub fn is_satisfied(&self, clause: ClauseId) -> bool {
        self.clauses.get(&clause).is_some_and(|s| s.satisfied)
    }

    /// Occurrences of the view's variable in clauses this tracker has not yet satisfied.
    pub fn open_occurrences(&self, view: &DataItemView) -> Vec<OpenOccurrence> {
        view.occurrences()
            .filter(|(c, _)| !self.is_satisfied(c.clause))
            .map(|(c, positive)| {
                let seen = self.clauses.get(&c.clause).map_or(0, |s| s.seen);
                let unassigned = c.length.map_or(1, |l| l.saturating_sub(seen).max(1));
                OpenOccurrence {
                    clause: c.clause,
                    positive,
                    weight: c.weight.clone(),
                    unassigned,
                }
            })
            .collect()
    }

    /// Sum of measures of open clauses that `value` would satisfy.
    pub fn gain(&self, view: &DataItemView, value: bool) -> Rational {
        self.open_occurrences(view)
            .iter()
            .filter(|o| o.positive == value)
            .map(OpenOccurrence::measure)
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Sum of weights of open clauses that `value` would satisfy.
    pub fn weight_gain(&self, view: &DataItemView, value: bool) -> Rational {
        self.open_occurrences(view)
            .iter()
            .filter(|o| o.positive == value)
            .map(|o| o.weight.clone())
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Records that the view's variable was set to `value`.
    pub fn commit(&mut self, view: &DataItemView, value: bool) {
        for (c, positive) in view.occurrences() {
            let state = self.clauses.entry(c.clause).or_insert_with(|| ClauseState {
                weight: c.weight.clone(),
                length: c.length,
                seen: 0,
                satisfied: false,
            });
            state.seen += 1;
            if state.length.is_none() {
                state.length = c.length;
            }
            if positive == value && !state.satisfied {
                state.satisfied = true;
                self.satisfied_weight += &state.weight;
            }
        }
    }

    /// Clauses whose every variable has been seen without being satisfied.
    pub fn falsified(&self) -> Vec<ClauseId> {
        let mut out: Vec<ClauseId> = self
            .clauses
            .iter()
            .filter(|(_, s)| !s.satisfied && s.length.is_some_and(|l| s.seen >= l))
            .map(|(&id, _)| id)
            .collect();
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{view_data_item, CnfInstance, InputModel, Literal};
    use crate::rational::{q, qi};

    #[test]
    fn measure_formula() {
        let c = Clause::new(0, qi(1), vec![Literal::pos(0)]).unwrap();
        assert_eq!(clause_measure(&c, 0), qi(1));
        assert_eq!(clause_measure(&c, 2), q(1, 4));
        let c = Clause::new(0, q(3, 2), vec![Literal::pos(0)]).unwrap();
        assert_eq!(clause_measure(&c, 1), q(3, 4));
    }

    #[test]
    fn tracker_counts_unassigned() {
        let inst = CnfInstance::new(
            2,
            vec![Clause::new(0, qi(1), vec![Literal::pos(0), Literal::neg(1)]).unwrap()],
        )
        .unwrap();
        let mut t = ClauseTracker::new();
        let v0 = view_data_item(&inst, 0, InputModel::Lengths).unwrap();
        assert_eq!(t.gain(&v0, true), q(1, 4));
        t.commit(&v0, false);
        let v1 = view_data_item(&inst, 1, InputModel::Lengths).unwrap();
        assert_eq!(t.gain(&v1, false), q(1, 2));
        t.commit(&v1, true);
        assert_eq!(t.falsified(), vec![0]);
        assert_eq!(t.satisfied_weight(), &qi(0));
    }
}
