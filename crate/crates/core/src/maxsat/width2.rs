//! Two parallel Johnson-style assignments that reward clauses both satisfy.

use num_traits::Zero;

use super::measure::{ClauseTracker, OpenOccurrence};
use crate::error::{Error, Result};
use crate::instances::{view_data_item, Assignment, CnfInstance, DataItemView, InputModel};
use crate::rational::{qi, Rational};

/// Fixed scan order; the first maximum wins.
pub const PAIR_SCAN: [(bool, bool); 4] = [(true, true), (true, false), (false, true), (false, false)];

#[derive(Clone, Debug)]
pub struct Width2Johnson {
    p: Rational,
    trackers: [ClauseTracker; 2],
}

impl Width2Johnson {
    pub fn new(p: Rational) -> Result<Self> {
        if p < qi(1) || p > qi(2) {
            return Err(Error::Refused(format!("p = {p} is outside [1, 2]")));
        }
        Ok(Width2Johnson {
            p,
            trackers: [ClauseTracker::new(), ClauseTracker::new()],
        })
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    /// Score of a pair of values: single-assignment gains count once,
    /// clauses newly satisfied in both count `p` times.
    pub fn score(&self, view: &DataItemView, pair: (bool, bool)) -> Rational {
        let pick = |t: &ClauseTracker, value: bool| -> Vec<OpenOccurrence> {
            t.open_occurrences(view)
                .into_iter()
                .filter(|o| o.positive == value)
                .collect()
        };
        let c1 = pick(&self.trackers[0], pair.0);
        let c2 = pick(&self.trackers[1], pair.1);
        let mut s = Rational::zero();
        for o in &c1 {
            if c2.iter().any(|x| x.clause == o.clause) {
                s += &self.p * o.measure();
            } else {
                s += o.measure();
            }
        }
        for o in c2.iter().filter(|o| !c1.iter().any(|x| x.clause == o.clause)) {
            s += o.measure();
        }
        s
    }

    pub fn decide(&mut self, view: &DataItemView) -> (bool, bool) {
        let mut best = PAIR_SCAN[0];
        let mut best_score = self.score(view, best);
        for &pair in &PAIR_SCAN[1..] {
            let s = self.score(view, pair);
            if s > best_score {
                best = pair;
                best_score = s;
            }
        }
        self.trackers[0].commit(view, best.0);
        self.trackers[1].commit(view, best.1);
        best
    }
}

/// Runs the two-assignment rule over the instance; the answer is the heavier one.
pub fn width2_johnson(instance: &CnfInstance, p: &Rational) -> Result<(Assignment, Assignment)> {
    let mut algo = Width2Johnson::new(p.clone())?;
    let mut a1 = Assignment::empty(instance.n_vars());
    let mut a2 = Assignment::empty(instance.n_vars());
    for &v in instance.variables() {
        let view = view_data_item(instance, v, InputModel::Lengths)?;
        let (b1, b2) = algo.decide(&view);
        a1.set(v, b1);
        a2.set(v, b2);
    }
    Ok((a1, a2))
}

/// Weight of the heavier of the two assignments.
pub fn width2_value(instance: &CnfInstance, pair: &(Assignment, Assignment)) -> Rational {
    instance
        .satisfied_weight(&pair.0)
        .max(instance.satisfied_weight(&pair.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_width2_counterexample, optimal_maxsat};
    use crate::rational::q;

    #[test]
    fn counterexample_ratios() {
        for (p, w, r) in [(qi(2), q(3, 4), q(7, 10)), (qi(1), q(1, 4), q(5, 8))] {
            let inst = gen_width2_counterexample(&p, &w).unwrap();
            let pair = width2_johnson(&inst, &p).unwrap();
            let opt = optimal_maxsat(&inst).unwrap().0;
            assert_eq!(width2_value(&inst, &pair) / opt, r);
        }
    }

    #[test]
    fn p_out_of_range() {
        assert!(Width2Johnson::new(q(5, 2)).is_err());
        assert!(Width2Johnson::new(q(1, 2)).is_err());
    }
}
