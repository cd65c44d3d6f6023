//! Deterministic linear-width max-sat: a distribution over loose-assignment
//! pairs kept small by extreme-point LP solutions.

use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::submodular::SubmodularOracle;
use crate::error::{Error, Result};
use crate::instances::{optimal_maxsat, Assignment, CnfInstance, VarId};
use crate::lp::{sparsify, LinearSystem, Row};
use crate::rational::{q, qi, Rational};

/// Largest variable count for which the expectation bound is checked against brute force.
pub const BOUND_CHECK_LIMIT: usize = 16;

/// Committed assignments `X` and still-possible assignments `Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoosePair {
    pub x: BTreeSet<(VarId, bool)>,
    pub y: BTreeSet<(VarId, bool)>,
    pub processed_count: usize,
}

impl LoosePair {
    pub fn initial(instance: &CnfInstance) -> Self {
        LoosePair {
            x: BTreeSet::new(),
            y: instance
                .variables()
                .iter()
                .flat_map(|&v| [(v, false), (v, true)])
                .collect(),
            processed_count: 0,
        }
    }

    pub fn is_unprocessed(&self, v: VarId) -> bool {
        !self.x.contains(&(v, false))
            && !self.x.contains(&(v, true))
            && self.y.contains(&(v, false))
            && self.y.contains(&(v, true))
    }

    /// Sets `v` to `value` in both sets.
    pub fn assign(&self, v: VarId, value: bool) -> LoosePair {
        let mut next = self.clone();
        next.x.insert((v, value));
        next.y.remove(&(v, !value));
        next.processed_count += 1;
        next
    }

    /// Checks the structural invariant against the processed prefix.
    pub fn check(&self, instance: &CnfInstance) -> Result<()> {
        if !self.x.is_subset(&self.y) {
            return Err(Error::Invariant("X is not contained in Y".into()));
        }
        for (i, &v) in instance.variables().iter().enumerate() {
            let in_x = [self.x.contains(&(v, false)), self.x.contains(&(v, true))];
            let in_y = [self.y.contains(&(v, false)), self.y.contains(&(v, true))];
            let ok = if i < self.processed_count {
                in_x[0] != in_x[1] && in_x == in_y
            } else {
                in_x == [false, false] && in_y == [true, true]
            };
            if !ok {
                return Err(Error::Invariant(format!("variable {v} breaks the loose-pair shape")));
            }
        }
        Ok(())
    }

    pub fn to_assignment(&self, n_vars: usize) -> Assignment {
        let mut a = Assignment::empty(n_vars);
        for &(v, b) in &self.x {
            a.set(v, b);
        }
        a
    }
}

/// The set function being maximized: clause weights, or an explicit oracle.
#[derive(Clone, Copy)]
pub enum Objective<'a> {
    Direct,
    Oracle(&'a dyn SubmodularOracle),
}

fn satisfied_mask(instance: &CnfInstance, set: &BTreeSet<(VarId, bool)>) -> Vec<bool> {
    instance
        .clauses()
        .iter()
        .map(|c| c.literals.iter().any(|l| set.contains(&(l.variable, l.positive))))
        .collect()
}

/// `g(A)`: the objective on the clauses the loose assignment satisfies.
pub fn g_value(instance: &CnfInstance, objective: Objective<'_>, set: &BTreeSet<(VarId, bool)>) -> Rational {
    let mask = satisfied_mask(instance, set);
    match objective {
        Objective::Direct => instance
            .clauses()
            .iter()
            .zip(&mask)
            .filter(|(_, &b)| b)
            .fold(Rational::zero(), |s, (c, _)| s + &c.weight),
        Objective::Oracle(o) => o.value(&mask),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarginalPair {
    pub f: Rational,
    pub t: Rational,
}

/// How favourable setting `v` to 0 (`f`) and to 1 (`t`) is for `pair`.
pub fn marginals(instance: &CnfInstance, objective: Objective<'_>, pair: &LoosePair, v: VarId) -> Result<MarginalPair> {
    if !pair.is_unprocessed(v) {
        return Err(Error::Malformed(format!("variable {v} is already processed")));
    }
    match objective {
        Objective::Direct => Ok(direct_marginals(instance, pair, v)),
        Objective::Oracle(_) => {
            let g = |s: &BTreeSet<(VarId, bool)>| g_value(instance, objective, s);
            let gx = g(&pair.x);
            let gy = g(&pair.y);
            let with = |b: bool| {
                let mut s = pair.x.clone();
                s.insert((v, b));
                s
            };
            let without = |b: bool| {
                let mut s = pair.y.clone();
                s.remove(&(v, b));
                s
            };
            Ok(MarginalPair {
                f: g(&with(false)) - &gx + g(&without(true)) - &gy,
                t: g(&with(true)) - &gx + g(&without(false)) - &gy,
            })
        }
    }
}

/// Weight newly satisfied by `X + (v,b)` minus weight lost from `Y - (v,!b)`.
fn direct_marginals(instance: &CnfInstance, pair: &LoosePair, v: VarId) -> MarginalPair {
    let mut f = Rational::zero();
    let mut t = Rational::zero();
    for c in instance.clauses() {
        let Some(lit) = c.literal_of(v) else { continue };
        let sat_x = c.literals.iter().any(|l| pair.x.contains(&(l.variable, l.positive)));
        let others_in_y = c
            .literals
            .iter()
            .any(|l| l.variable != v && pair.y.contains(&(l.variable, l.positive)));
        let (gain, loss) = if lit.positive {
            (&mut t, &mut f)
        } else {
            (&mut f, &mut t)
        };
        if !sat_x {
            *gain += &c.weight;
        }
        if !others_in_y {
            *loss -= &c.weight;
        }
    }
    MarginalPair { f, t }
}

/// The closed-form feasible point: `z = f+/(f+ + t+)`, with `z = 1` when both vanish.
pub fn explicit_feasible(marginals: &[MarginalPair]) -> Result<Vec<(Rational, Rational)>> {
    marginals
        .iter()
        .map(|m| {
            if (&m.f + &m.t).is_negative() {
                return Err(Error::Invariant(format!("f + t < 0 (f = {}, t = {})", m.f, m.t)));
            }
            let fp = m.f.clone().max(Rational::zero());
            let tp = m.t.clone().max(Rational::zero());
            let d = &fp + &tp;
            if d.is_zero() {
                Ok((Rational::one(), Rational::zero()))
            } else {
                let z = fp / d;
                let w = Rational::one() - &z;
                Ok((z, w))
            }
        })
        .collect()
}

/// The step LP over `(z_s, w_s)` at columns `2s`, `2s+1`.
pub fn step_system(probabilities: &[Rational], marginals: &[MarginalPair]) -> LinearSystem {
    let m = probabilities.len();
    let mut sys = LinearSystem::new(2 * m);
    for s in 0..m {
        let mut c = vec![Rational::zero(); 2 * m];
        c[2 * s] = Rational::one();
        c[2 * s + 1] = Rational::one();
        sys.equalities.push(Row::new(c, Rational::one()));
    }
    let mut first = vec![Rational::zero(); 2 * m];
    let mut second = vec![Rational::zero(); 2 * m];
    for (s, (p, mp)) in probabilities.iter().zip(marginals).enumerate() {
        let two = qi(2);
        // E[zf + wt] >= 2E[zt]
        first[2 * s] = p * (&two * &mp.t - &mp.f);
        first[2 * s + 1] = -(p * &mp.t);
        // E[zf + wt] >= 2E[wf]
        second[2 * s] = -(p * &mp.f);
        second[2 * s + 1] = p * (&two * &mp.f - &mp.t);
    }
    sys.inequalities.push(Row::new(first, Rational::zero()));
    sys.inequalities.push(Row::new(second, Rational::zero()));
    sys
}

/// Moves a feasible `(z, w)` to an extreme point with at most `m + 2` nonzeros.
pub fn sparsify_to_extreme_point(
    feasible: &[(Rational, Rational)],
    marginals: &[MarginalPair],
    probabilities: &[Rational],
) -> Result<Vec<(Rational, Rational)>> {
    let sys = step_system(probabilities, marginals);
    let x: Vec<Rational> = feasible.iter().flat_map(|(z, w)| [z.clone(), w.clone()]).collect();
    let out = sparsify(&sys, &x)?;
    let nonzeros = out.iter().filter(|v| !v.is_zero()).count();
    if nonzeros > feasible.len() + 2 {
        return Err(Error::Invariant(format!(
            "{nonzeros} nonzeros exceed {} + 2",
            feasible.len()
        )));
    }
    Ok(out.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateDistribution {
    pub support: Vec<(Rational, LoosePair)>,
}

impl StateDistribution {
    pub fn total_probability(&self) -> Rational {
        self.support.iter().fold(Rational::zero(), |s, (p, _)| s + p)
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DerandStep {
    pub variable: VarId,
    pub marginals: Vec<MarginalPair>,
    /// Chosen `(z, w)` per support entry of the previous distribution.
    pub choice: Vec<(Rational, Rational)>,
    pub distribution: StateDistribution,
}

/// `E[g(X)] >= g(OPT)/2 + (g(empty) + g(all))/4` on the final distribution.
#[derive(Clone, Debug, Serialize)]
pub struct ExpectationBound {
    pub expected: Rational,
    pub bound: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DerandOutcome {
    pub assignment: Assignment,
    pub value: Rational,
    pub trace: Vec<DerandStep>,
    pub expectation: Option<ExpectationBound>,
}

impl DerandOutcome {
    pub fn max_width(&self) -> usize {
        self.trace.iter().map(|s| s.distribution.len()).max().unwrap_or(1)
    }
}

/// Runs the derandomized algorithm, verifying every step exactly.
pub fn derandomized_maxsat(instance: &CnfInstance, objective: Objective<'_>) -> Result<DerandOutcome> {
    if let Objective::Oracle(o) = objective {
        if o.ground_size() != instance.clauses().len() {
            return Err(Error::Malformed("oracle ground set does not match the clauses".into()));
        }
    }
    let mut dist = StateDistribution {
        support: vec![(Rational::one(), LoosePair::initial(instance))],
    };
    let mut trace = Vec::with_capacity(instance.n_vars());
    for (i, &v) in instance.variables().iter().enumerate() {
        let probs: Vec<Rational> = dist.support.iter().map(|(p, _)| p.clone()).collect();
        let margs = dist
            .support
            .iter()
            .map(|(_, pair)| marginals(instance, objective, pair, v))
            .collect::<Result<Vec<_>>>()?;
        let start = explicit_feasible(&margs)?;
        let choice = sparsify_to_extreme_point(&start, &margs, &probs)?;
        let x: Vec<Rational> = choice.iter().flat_map(|(z, w)| [z.clone(), w.clone()]).collect();
        let violations = step_system(&probs, &margs).violations(&x);
        if !violations.is_empty() {
            return Err(Error::Invariant(violations.join("; ")));
        }
        let mut support = Vec::new();
        for ((p, pair), (z, w)) in dist.support.iter().zip(&choice) {
            if !z.is_zero() {
                support.push((p * z, pair.assign(v, false)));
            }
            if !w.is_zero() {
                support.push((p * w, pair.assign(v, true)));
            }
        }
        let next = StateDistribution { support };
        if next.total_probability() != Rational::one() {
            return Err(Error::Invariant(format!(
                "probabilities do not sum to 1 after step {}",
                i + 1
            )));
        }
        if next.len() > 2 * (i + 1) + 1 {
            return Err(Error::Invariant(format!(
                "support {} exceeds 2i+1 at step {}",
                next.len(),
                i + 1
            )));
        }
        for (_, pair) in &next.support {
            pair.check(instance)?;
        }
        dist = next.clone();
        trace.push(DerandStep {
            variable: v,
            marginals: margs,
            choice,
            distribution: next,
        });
    }
    let mut best: Option<(Rational, &LoosePair)> = None;
    let mut expected = Rational::zero();
    for (p, pair) in &dist.support {
        let g = g_value(instance, objective, &pair.x);
        expected += p * &g;
        if best.as_ref().map_or(true, |(b, _)| &g > b) {
            best = Some((g, pair));
        }
    }
    let (value, pair) = best.expect("distribution is never empty");
    let expectation = if instance.n_vars() <= BOUND_CHECK_LIMIT {
        let g_opt = optimum_g(instance, objective)?;
        let g_empty = g_value(instance, objective, &BTreeSet::new());
        let g_all = g_value(instance, objective, &LoosePair::initial(instance).y);
        let bound = g_opt * q(1, 2) + (g_empty + g_all) * q(1, 4);
        Some(ExpectationBound {
            holds: expected >= bound,
            expected,
            bound,
        })
    } else {
        None
    };
    Ok(DerandOutcome {
        assignment: pair.to_assignment(instance.n_vars()),
        value,
        trace,
        expectation,
    })
}

fn optimum_g(instance: &CnfInstance, objective: Objective<'_>) -> Result<Rational> {
    match objective {
        Objective::Direct => Ok(optimal_maxsat(instance)?.0),
        Objective::Oracle(_) => {
            let n = instance.n_vars();
            let mut best = Rational::zero();
            for bits in 0u64..(1u64 << n) {
                let set: BTreeSet<(VarId, bool)> = (0..n).map(|v| (v, bits >> v & 1 == 1)).collect();
                best = best.max(g_value(instance, objective, &set));
            }
            Ok(best)
        }
    }
}

/// One sampled run of the randomized process: 0 with probability `f+/(f+ + t+)`,
/// a fair coin when both clamp to zero.
pub fn randomized_buchbinder_maxsat(instance: &CnfInstance, seed: u64) -> Assignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pair = LoosePair::initial(instance);
    for &v in instance.variables() {
        let m = direct_marginals(instance, &pair, v);
        let fp = m.f.max(Rational::zero());
        let tp = m.t.max(Rational::zero());
        let d = &fp + &tp;
        let p0 = if d.is_zero() {
            0.5
        } else {
            (fp / d).to_f64().unwrap_or(0.5)
        };
        let zero = rng.gen_bool(p0.clamp(0.0, 1.0));
        pair = pair.assign(v, !zero);
    }
    pair.to_assignment(instance.n_vars())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{Clause, Literal};

    fn unit() -> CnfInstance {
        CnfInstance::new(1, vec![Clause::new(0, qi(1), vec![Literal::pos(0)]).unwrap()]).unwrap()
    }

    #[test]
    fn unit_marginals() {
        let inst = unit();
        let m = marginals(&inst, Objective::Direct, &LoosePair::initial(&inst), 0).unwrap();
        assert_eq!(m, MarginalPair { f: qi(-1), t: qi(1) });
    }

    #[test]
    fn explicit_point_cases() {
        let mp = |f, t| MarginalPair { f: qi(f), t: qi(t) };
        let out = explicit_feasible(&[mp(1, 0), mp(0, 0), mp(1, 3)]).unwrap();
        assert_eq!(out[0].0, qi(1));
        assert_eq!(out[1], (qi(1), qi(0)));
        assert_eq!(out[2].0, q(1, 4));
        assert!(explicit_feasible(&[mp(-2, 1)]).is_err());
    }

    #[test]
    fn unit_instance_value() {
        let out = derandomized_maxsat(&unit(), Objective::Direct).unwrap();
        assert_eq!(out.value, qi(1));
        assert!(out.expectation.unwrap().holds);
    }

    #[test]
    fn buchbinder_unit_is_forced() {
        for s in 0..20 {
            assert_eq!(randomized_buchbinder_maxsat(&unit(), s).get(0), Some(true));
        }
    }
}
