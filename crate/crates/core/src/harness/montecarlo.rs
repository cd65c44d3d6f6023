//! Seeded Monte-Carlo estimates with exact per-trial values.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::rom::MatchingAlgorithm;
use crate::error::{Error, Result};
use crate::instances::{optimal_matching, optimal_maxsat, ArrivalOrder, BipartiteInstance, CnfInstance};
use crate::matching::{random_matcher, ranking_sample, run_rom_rule};
use crate::maxsat::randomized_buchbinder_maxsat;
use crate::rational::{serde_rational, to_f64, Rational};

/// 95% two-sided normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub trials: u64,
    /// Exact mean of the per-trial values.
    #[serde(with = "serde_rational")]
    pub mean: Rational,
    pub mean_f64: f64,
    pub std_dev: f64,
    pub std_err: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// The generator of trial `i`: one ChaCha stream per trial, so results do not
/// depend on scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn monte_carlo<F>(trials: u64, seed: u64, sample: F) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Rational> + Sync,
{
    if trials == 0 {
        return Err(Error::Malformed("at least one trial is required".into()));
    }
    let values: Vec<Rational> = (0..trials)
        .into_par_iter()
        .map(|t| sample(&mut trial_rng(seed, t)))
        .collect::<Result<_>>()?;
    let total = values.iter().fold(Rational::zero(), |acc, v| acc + v);
    let mean = total / Rational::from_integer(trials.into());
    let mean_f64 = to_f64(&mean);
    let var = if trials > 1 {
        values.iter().map(|v| (to_f64(v) - mean_f64).powi(2)).sum::<f64>() / (trials - 1) as f64
    } else {
        0.0
    };
    let std_dev = var.sqrt();
    let std_err = std_dev / (trials as f64).sqrt();
    Ok(McEstimate {
        trials,
        mean,
        mean_f64,
        std_dev,
        std_err,
        ci_low: mean_f64 - Z95 * std_err,
        ci_high: mean_f64 + Z95 * std_err,
    })
}

/// Matching ratio per trial. With `order` fixed only the algorithm's coins
/// vary; without it the arrival order is uniform as well.
pub fn mc_matching(
    algorithm: &MatchingAlgorithm,
    instance: &BipartiteInstance,
    order: Option<&ArrivalOrder>,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    let opt = optimal_matching(instance).0;
    if opt == 0 {
        return Err(Error::Malformed("graph has no edges".into()));
    }
    let opt_r = Rational::from_integer(opt.into());
    monte_carlo(trials, seed, |rng| {
        let order = match order {
            Some(o) => o.clone(),
            None => {
                let mut o: Vec<usize> = (0..instance.n_online()).collect();
                o.shuffle(rng);
                ArrivalOrder::new(o)?
            }
        };
        let m = match algorithm {
            MatchingAlgorithm::Rule(r) => run_rom_rule(r, instance, &order)?,
            MatchingAlgorithm::Ranking => ranking_sample(instance, &order, rng),
            MatchingAlgorithm::Random => random_matcher(instance, &order, rng),
        };
        Ok(Rational::from_integer(m.size().into()) / &opt_r)
    })
}

/// Satisfied weight of the randomized double-greedy max-sat rule over the optimum.
pub fn mc_buchbinder(instance: &CnfInstance, trials: u64, seed: u64) -> Result<McEstimate> {
    let opt = optimal_maxsat(instance)?.0;
    if opt.is_zero() {
        return Err(Error::Malformed("instance has zero optimum".into()));
    }
    monte_carlo(trials, seed, |rng| {
        let a = randomized_buchbinder_maxsat(instance, rng.gen());
        Ok(instance.satisfied_weight(&a) / &opt)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::gen_rand_hard;
    use crate::matching::RomRule;

    #[test]
    fn deterministic_has_zero_width() {
        let g = gen_rand_hard(3).unwrap();
        let order = ArrivalOrder::identity(g.n_online());
        let e = mc_matching(&MatchingAlgorithm::Rule(RomRule::FIXED), &g, Some(&order), 50, 1).unwrap();
        assert_eq!(e.ci_low, e.ci_high);
    }

    #[test]
    fn seeds_reproduce() {
        let g = gen_rand_hard(3).unwrap();
        let a = mc_matching(&MatchingAlgorithm::Random, &g, None, 300, 9).unwrap();
        let b = mc_matching(&MatchingAlgorithm::Random, &g, None, 300, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mean_f64.to_bits(), b.mean_f64.to_bits());
    }
}
