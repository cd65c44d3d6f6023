//! Derandomized Ranking: a polynomial-width distribution over matchings
//! whose per-vertex match probabilities never exceed Ranking's.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use super::poset::{count_linear_extensions, poset_of_matching, MatchingPoset};
use crate::error::{Error, Result};
use crate::instances::{optimal_matching, ArrivalOrder, BipartiteInstance, Matching};
use crate::lp::{sparsify, LinearSystem, Row};
use crate::rational::Rational;

pub const LP_RANKING_LIMIT: usize = 12;

/// A finitely supported distribution over matchings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingDistribution {
    pub support: Vec<(Rational, Matching)>,
}

impl MatchingDistribution {
    pub fn point(m: Matching) -> Self {
        MatchingDistribution {
            support: vec![(Rational::one(), m)],
        }
    }

    pub fn total_probability(&self) -> Rational {
        self.support.iter().map(|(p, _)| p.clone()).sum()
    }

    pub fn expected_size(&self) -> Rational {
        self.support
            .iter()
            .map(|(p, m)| p * Rational::from_integer(BigInt::from(m.size())))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

fn ratio(a: &BigUint, b: &BigUint) -> Rational {
    Rational::new(BigInt::from(a.clone()), BigInt::from(b.clone()))
}

fn free_neighbors(instance: &BipartiteInstance, v: usize, m: &Matching) -> Vec<usize> {
    let used = m.offline_mask();
    instance
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&u| used >> u & 1 == 0)
        .collect()
}

fn extended(poset: &MatchingPoset, u: usize, free: &[usize]) -> Result<MatchingPoset> {
    let mut p = poset.clone();
    for &w in free.iter().filter(|&&w| w != u) {
        p.add(u, w)?;
    }
    Ok(p)
}

/// Probability that Ranking matches `online` to `offline`, given that its
/// earlier arrivals produced `matching`.
pub fn ranking_step_probability(
    instance: &BipartiteInstance,
    order: &ArrivalOrder,
    matching: &Matching,
    online: usize,
    offline: usize,
) -> Result<Rational> {
    if instance.n_offline() > 20 {
        return Err(Error::Refused(
            "linear-extension counting is limited to 20 offline vertices".into(),
        ));
    }
    let step = order
        .as_slice()
        .iter()
        .position(|&v| v == online)
        .ok_or_else(|| Error::Malformed(format!("online {online} not in the order")))?;
    let free = free_neighbors(instance, online, matching);
    if !free.contains(&offline) {
        return Err(Error::Malformed(format!(
            "offline {offline} is not an available neighbor of online {online}"
        )));
    }
    let base = poset_of_matching(instance, order, matching, step)?;
    let total = count_linear_extensions(&base)?;
    let part = count_linear_extensions(&extended(&base, offline, &free)?)?;
    Ok(ratio(&part, &total))
}

/// One arrival of the derandomization.
#[derive(Clone, Debug, Serialize)]
pub struct LpRankingStep {
    pub online: usize,
    pub distribution: MatchingDistribution,
    /// Number of LP variables before sparsification.
    pub lp_variables: usize,
    /// Nonzero LP variables after sparsification.
    pub nonzeros: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LpRankingOutcome {
    pub best: Matching,
    pub steps: Vec<LpRankingStep>,
    pub expected_size: Rational,
    pub optimum: usize,
}

impl LpRankingOutcome {
    /// Expected size of the final distribution over the optimum.
    pub fn expected_ratio(&self) -> Rational {
        if self.optimum == 0 {
            return Rational::one();
        }
        &self.expected_size / Rational::from_integer(BigInt::from(self.optimum))
    }

    pub fn final_distribution(&self) -> Option<&MatchingDistribution> {
        self.steps.last().map(|s| &s.distribution)
    }
}

/// Runs the LP derandomization of Ranking along `order`.
pub fn lp_ranking_derandomization(instance: &BipartiteInstance, order: &ArrivalOrder) -> Result<LpRankingOutcome> {
    if instance.n_offline() > LP_RANKING_LIMIT {
        return Err(Error::Refused(format!(
            "{} offline vertices exceed the limit {LP_RANKING_LIMIT}",
            instance.n_offline()
        )));
    }
    if order.len() != instance.n_online() {
        return Err(Error::Malformed("arrival order does not match the instance".into()));
    }
    let mut dist = MatchingDistribution::point(Matching::new());
    let mut steps = Vec::with_capacity(order.len());
    let mut degree_sum = 0usize;
    for (i, &v) in order.as_slice().iter().enumerate() {
        degree_sum += instance.degree(v);
        let (next, lp_variables, nonzeros) = lp_step(instance, order, &dist, i, v)?;
        if next.total_probability() != Rational::one() {
            return Err(Error::Invariant(format!(
                "probabilities do not sum to 1 after step {i}"
            )));
        }
        if next.len() > 1 + degree_sum {
            return Err(Error::Invariant(format!(
                "support {} exceeds 1 + {degree_sum} after step {i}",
                next.len()
            )));
        }
        dist = next.clone();
        steps.push(LpRankingStep {
            online: v,
            distribution: next,
            lp_variables,
            nonzeros,
        });
    }
    let best = dist
        .support
        .iter()
        .max_by_key(|(_, m)| m.size())
        .map(|(_, m)| m.clone())
        .unwrap_or_default();
    for (_, m) in &dist.support {
        m.validate(instance)?;
    }
    Ok(LpRankingOutcome {
        best,
        expected_size: dist.expected_size(),
        steps,
        optimum: optimal_matching(instance).0,
    })
}

/// The constraint system of one arrival, with Ranking's probabilities as its starting point.
pub struct StepSystem {
    pub system: LinearSystem,
    pub start: Vec<Rational>,
    /// `(support index, offline vertex)` for each LP variable.
    pub variables: Vec<(usize, usize)>,
}

pub fn step_system(
    instance: &BipartiteInstance,
    order: &ArrivalOrder,
    dist: &MatchingDistribution,
    step: usize,
) -> Result<StepSystem> {
    let v = order.as_slice()[step];
    let mut variables = Vec::new();
    let mut start = Vec::new();
    let mut rows_eq = Vec::new();
    for (s, (_, m)) in dist.support.iter().enumerate() {
        let free = free_neighbors(instance, v, m);
        if free.is_empty() {
            continue;
        }
        let base = poset_of_matching(instance, order, m, step)?;
        let total = count_linear_extensions(&base)?;
        let mut sum = Rational::zero();
        let mut cols = Vec::new();
        for &u in &free {
            let part = count_linear_extensions(&extended(&base, u, &free)?)?;
            let p = ratio(&part, &total);
            sum += &p;
            cols.push(variables.len());
            variables.push((s, u));
            start.push(p);
        }
        if sum != Rational::one() {
            return Err(Error::Invariant(format!(
                "Ranking step probabilities sum to {sum} for support entry {s}"
            )));
        }
        rows_eq.push(cols);
    }
    let n = variables.len();
    let mut system = LinearSystem::new(n);
    for cols in rows_eq {
        let mut coef = vec![Rational::zero(); n];
        for c in cols {
            coef[c] = Rational::one();
        }
        system.equalities.push(Row::new(coef, Rational::one()));
    }
    let mut by_offline: HashMap<usize, Vec<usize>> = HashMap::new();
    for (j, &(_, u)) in variables.iter().enumerate() {
        by_offline.entry(u).or_default().push(j);
    }
    for &u in instance.neighbors(v) {
        let Some(cols) = by_offline.get(&u) else { continue };
        let mut coef = vec![Rational::zero(); n];
        let mut rhs = Rational::zero();
        for &j in cols {
            let p = &dist.support[variables[j].0].0;
            coef[j] = p.clone();
            rhs += p * &start[j];
        }
        system.inequalities.push(Row::new(coef, rhs));
    }
    Ok(StepSystem {
        system,
        start,
        variables,
    })
}

fn lp_step(
    instance: &BipartiteInstance,
    order: &ArrivalOrder,
    dist: &MatchingDistribution,
    step: usize,
    v: usize,
) -> Result<(MatchingDistribution, usize, usize)> {
    let StepSystem {
        system,
        start,
        variables,
    } = step_system(instance, order, dist, step)?;
    let x = sparsify(&system, &start)?;
    let mut extended_entries: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); dist.len()];
    let mut nonzeros = 0;
    for (j, val) in x.iter().enumerate() {
        if !val.is_zero() {
            nonzeros += 1;
            let (s, u) = variables[j];
            extended_entries[s].push((u, val.clone()));
        }
    }
    let in_lp: Vec<bool> = {
        let mut f = vec![false; dist.len()];
        for &(s, _) in &variables {
            f[s] = true;
        }
        f
    };
    let mut support = Vec::new();
    for (s, (p, m)) in dist.support.iter().enumerate() {
        if !in_lp[s] {
            support.push((p.clone(), m.clone()));
            continue;
        }
        for (u, val) in &extended_entries[s] {
            let mut m2 = m.clone();
            m2.insert(v, *u);
            support.push((p * val, m2));
        }
    }
    Ok((MatchingDistribution { support }, variables.len(), nonzeros))
}
