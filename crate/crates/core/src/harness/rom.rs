//! Exact random-order evaluation and the exhaustive ratio table.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::report::RatioReport;
use crate::error::{Error, Result};
use crate::instances::enumerate::{check_limit, enumerate_bipartite_raw, next_permutation, CanonicalMasks};
use crate::instances::oracle::matching_size_masks;
use crate::instances::{optimal_matching, ArrivalOrder, BipartiteInstance};
use crate::matching::{
    random_expectation, random_rom_expectation, ranking_expectation, ranking_rom_expectation, run_rom_rule,
    run_rule_masks, RomRule,
};
use crate::rational::Rational;

/// Largest online side whose `n!` orders are enumerated exactly.
pub const ROM_EXACT_LIMIT: usize = 10;

/// A matching algorithm addressable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchingAlgorithm {
    Rule(RomRule),
    Ranking,
    Random,
}

impl MatchingAlgorithm {
    pub fn name(&self) -> String {
        match self {
            MatchingAlgorithm::Rule(r) => r.name(),
            MatchingAlgorithm::Ranking => "ranking".into(),
            MatchingAlgorithm::Random => "random".into(),
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "ranking" => Some(MatchingAlgorithm::Ranking),
            "random" => Some(MatchingAlgorithm::Random),
            _ => RomRule::from_name(name).map(MatchingAlgorithm::Rule),
        }
    }
}

fn ratio_of(expected_size: Rational, opt: usize) -> Rational {
    if opt == 0 {
        Rational::one()
    } else {
        expected_size / Rational::from_integer(opt.into())
    }
}

/// Expected matching size for a fixed arrival order, over the algorithm's coins.
pub fn expected_size_in_order(
    algorithm: &MatchingAlgorithm,
    instance: &BipartiteInstance,
    order: &ArrivalOrder,
) -> Result<Rational> {
    match algorithm {
        MatchingAlgorithm::Rule(r) => Ok(Rational::from_integer(run_rom_rule(r, instance, order)?.size().into())),
        MatchingAlgorithm::Ranking => ranking_expectation(instance, order),
        MatchingAlgorithm::Random => random_expectation(instance, order),
    }
}

/// Expected matching size over a uniformly random arrival order, divided by
/// the maximum matching size (1 for graphs without edges).
pub fn evaluate_rom(algorithm: &MatchingAlgorithm, instance: &BipartiteInstance) -> Result<Rational> {
    let n = instance.n_online();
    let opt = optimal_matching(instance).0;
    let expected = match algorithm {
        MatchingAlgorithm::Ranking => ranking_rom_expectation(instance)?,
        MatchingAlgorithm::Random => random_rom_expectation(instance)?,
        MatchingAlgorithm::Rule(rule) => {
            if n > ROM_EXACT_LIMIT {
                return Err(Error::Refused(format!(
                    "{n}! arrival orders exceed the exact limit; use the Monte-Carlo driver"
                )));
            }
            rule.check(instance.n_offline())?;
            let mut order: Vec<usize> = (0..n).collect();
            let mut total = 0u64;
            let mut count = 0u64;
            loop {
                total += run_rom_rule(rule, instance, &ArrivalOrder::new(order.clone())?)?.size() as u64;
                count += 1;
                if !next_permutation(&mut order) {
                    break;
                }
            }
            Rational::new(total.into(), count.into())
        }
    };
    Ok(ratio_of(expected, opt))
}

/// Running minimum of `num/den` for one rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct RuleMin {
    num: u64,
    den: u64,
    masks: Vec<u64>,
}

impl RuleMin {
    fn better_than(&self, other: &RuleMin) -> bool {
        let a = self.num as u128 * other.den as u128;
        let b = other.num as u128 * self.den as u128;
        a < b || (a == b && self.masks < other.masks)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
struct ShardResult {
    n: usize,
    prefix: Vec<u64>,
    rules: Vec<String>,
    include_zero_opt: bool,
    minima: Vec<Option<RuleMin>>,
    instances: u64,
    permutations: u64,
}

impl ShardResult {
    fn merge(&mut self, other: &ShardResult) {
        for (mine, theirs) in self.minima.iter_mut().zip(&other.minima) {
            if let Some(t) = theirs {
                if mine.as_ref().map_or(true, |m| t.better_than(m)) {
                    *mine = Some(t.clone());
                }
            }
        }
        self.instances += other.instances;
        self.permutations += other.permutations;
    }
}

fn shard_prefixes(n: usize) -> Vec<Vec<u64>> {
    if n < 2 {
        return vec![Vec::new()];
    }
    let top = (1u64 << n) - 1;
    let mut out = Vec::new();
    for a in 0..=top {
        for b in a..=top {
            out.push(vec![a, b]);
        }
    }
    out
}

fn run_shard(n: usize, prefix: &[u64], rules: &[RomRule], include_zero_opt: bool) -> ShardResult {
    let mut result = ShardResult {
        n,
        prefix: prefix.to_vec(),
        rules: rules.iter().map(RomRule::name).collect(),
        include_zero_opt,
        minima: vec![None; rules.len()],
        instances: 0,
        permutations: 0,
    };
    let mut sums = vec![0u64; rules.len()];
    for masks in CanonicalMasks::with_prefix(n, prefix) {
        let opt = matching_size_masks(&masks) as u64;
        if opt == 0 && !include_zero_opt {
            continue;
        }
        sums.iter_mut().for_each(|s| *s = 0);
        let mut count = 0u64;
        let mut seq = masks.clone();
        loop {
            for (s, rule) in sums.iter_mut().zip(rules) {
                *s += run_rule_masks(rule, &seq, n) as u64;
            }
            count += 1;
            if !next_permutation(&mut seq) {
                break;
            }
        }
        result.instances += 1;
        result.permutations += count;
        for (slot, &s) in result.minima.iter_mut().zip(&sums) {
            let cand = if opt == 0 {
                RuleMin {
                    num: 1,
                    den: 1,
                    masks: masks.clone(),
                }
            } else {
                RuleMin {
                    num: s,
                    den: count * opt,
                    masks: masks.clone(),
                }
            };
            if slot.as_ref().map_or(true, |m| cand.better_than(m)) {
                *slot = Some(cand);
            }
        }
    }
    result
}

fn load_checkpoint(config: &RunConfig, n: usize, rules: &[String]) -> Result<BTreeMap<Vec<u64>, ShardResult>> {
    let mut done = BTreeMap::new();
    let Some(path) = &config.checkpoint else {
        return Ok(done);
    };
    let Ok(file) = std::fs::File::open(path) else {
        return Ok(done);
    };
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let Ok(shard) = serde_json::from_str::<ShardResult>(&line) else {
            continue;
        };
        if shard.n == n && shard.rules == rules && shard.include_zero_opt == config.include_zero_opt {
            done.insert(shard.prefix.clone(), shard);
        }
    }
    Ok(done)
}

/// `r(A, n)`: the minimum over graphs with `n` vertices per side of the
/// average matching ratio over all arrival orders, for each rule.
pub fn rom_table(rules: &[RomRule], ns: &[usize], config: &RunConfig) -> Result<Vec<RatioReport>> {
    config.validate()?;
    for &n in ns {
        check_limit(n, config.limit_n, config.long_run)?;
        for r in rules {
            r.check(n)?;
        }
    }
    let mut reports = Vec::new();
    for &n in ns {
        reports.extend(rom_table_for(rules, n, config)?);
    }
    Ok(reports)
}

fn rom_table_for(rules: &[RomRule], n: usize, config: &RunConfig) -> Result<Vec<RatioReport>> {
    let start = Instant::now();
    let names: Vec<String> = rules.iter().map(RomRule::name).collect();
    let done = load_checkpoint(config, n, &names)?;
    let prefixes: Vec<Vec<u64>> = shard_prefixes(n)
        .into_iter()
        .filter(|p| !done.contains_key(p))
        .collect();
    let writer = match &config.checkpoint {
        Some(path) => Some(Mutex::new(OpenOptions::new().create(true).append(true).open(path)?)),
        None => None,
    };
    let stopped = AtomicBool::new(false);
    let fresh: Vec<Result<ShardResult>> = config.install(|| {
        prefixes
            .par_iter()
            .filter_map(|p| {
                if config.time_budget.is_some_and(|b| start.elapsed() > b) {
                    stopped.store(true, Ordering::Relaxed);
                    return None;
                }
                let shard = run_shard(n, p, rules, config.include_zero_opt);
                if let Some(w) = &writer {
                    let line = match serde_json::to_string(&shard) {
                        Ok(l) => l,
                        Err(e) => return Some(Err(e.into())),
                    };
                    let mut f = w.lock().expect("checkpoint writer");
                    if let Err(e) = writeln!(f, "{line}") {
                        return Some(Err(e.into()));
                    }
                }
                Some(Ok(shard))
            })
            .collect()
    })?;
    let total_shards = done.len() + prefixes.len();
    let mut merged = ShardResult {
        minima: vec![None; rules.len()],
        ..Default::default()
    };
    let mut finished = done.len();
    for shard in done.values() {
        merged.merge(shard);
    }
    for shard in fresh {
        merged.merge(&shard?);
        finished += 1;
    }
    if stopped.load(Ordering::Relaxed) || finished < total_shards {
        return Err(Error::Refused(format!(
            "time budget exhausted after {finished}/{total_shards} shards for n={n}{}",
            if config.checkpoint.is_some() {
                "; rerun to resume from the checkpoint"
            } else {
                ""
            }
        )));
    }
    let elapsed = start.elapsed();
    rules
        .iter()
        .zip(merged.minima)
        .map(|(rule, min)| {
            let min = min.ok_or_else(|| Error::Refused(format!("no graph with a matching at n={n}")))?;
            let mut report = RatioReport::new(
                rule.name(),
                n,
                Rational::new(BigInt::from(min.num), BigInt::from(min.den)),
            );
            report.worst_instance = Some(BipartiteInstance::from_masks(n, &min.masks)?);
            report.instances = merged.instances;
            report.permutations = merged.permutations;
            Ok(report.with_time(elapsed))
        })
        .collect()
}

/// The same minimum over all `2^(n^2)` labelled graphs and all `n!` orders.
pub fn rom_table_raw(rules: &[RomRule], n: usize, include_zero_opt: bool) -> Result<Vec<Rational>> {
    let mut best: Vec<Option<Rational>> = vec![None; rules.len()];
    for masks in enumerate_bipartite_raw(n)? {
        let opt = matching_size_masks(&masks);
        if opt == 0 && !include_zero_opt {
            continue;
        }
        let mut order: Vec<usize> = (0..n).collect();
        let mut sums = vec![0u64; rules.len()];
        let mut count = 0u64;
        loop {
            let seq: Vec<u64> = order.iter().map(|&v| masks[v]).collect();
            for (s, rule) in sums.iter_mut().zip(rules) {
                *s += run_rule_masks(rule, &seq, n) as u64;
            }
            count += 1;
            if !next_permutation(&mut order) {
                break;
            }
        }
        for (slot, &s) in best.iter_mut().zip(&sums) {
            let r = if opt == 0 {
                Rational::one()
            } else {
                Rational::new(s.into(), (count * opt as u64).into())
            };
            if slot.as_ref().map_or(true, |b| &r < b) {
                *slot = Some(r);
            }
        }
    }
    Ok(best.into_iter().map(|b| b.unwrap_or_else(Rational::zero)).collect())
}
