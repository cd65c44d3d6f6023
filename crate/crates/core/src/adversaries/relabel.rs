//! Exact evaluation of priority algorithms over uniformly relabelled inputs.

use serde::Serialize;

use super::protocol::{DataItem, FirstItemStrategy, PriorityAlgorithm, PriorityGreedyLow, PriorityHistory};
use crate::error::{Error, Result};
use crate::instances::enumerate::next_permutation;
use crate::instances::optimal_matching;
use crate::instances::{BipartiteInstance, Matching};
use crate::rational::Rational;

pub const RELABEL_LIMIT: usize = 6;

/// Builds a fresh algorithm for each labelling.
pub type PriorityFactory<'a> = &'a dyn Fn() -> Box<dyn PriorityAlgorithm>;

/// One labelling and the matching the algorithm produced, in original ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledRun {
    pub online_labels: Vec<usize>,
    pub offline_labels: Vec<usize>,
    pub matching: Matching,
}

/// Runs the adaptive priority protocol on `graph`, whose ids are the labels.
pub fn run_priority_instance(graph: &BipartiteInstance, algorithm: &mut dyn PriorityAlgorithm) -> Result<Matching> {
    let mut pending: Vec<DataItem> = (0..graph.n_online())
        .map(|v| DataItem {
            label: v,
            neighbors: graph.neighbors(v).to_vec(),
        })
        .collect();
    let mut history = PriorityHistory::default();
    let mut matching = Matching::new();
    let mut turn = 0;
    while !pending.is_empty() {
        let pos = (0..pending.len())
            .min_by_key(|&i| (algorithm.score(&pending[i], &history), pending[i].label))
            .expect("non-empty");
        let item = pending.swap_remove(pos);
        let decision = algorithm.decide(&item, &history);
        if let Some(u) = decision {
            if !history.available(&item).contains(&u) {
                return Err(Error::protocol(
                    turn,
                    format!("{u} is not an available neighbor of {}", item.label),
                ));
            }
            matching.insert(item.label, u);
        }
        history.record(item, decision);
        turn += 1;
    }
    Ok(matching)
}

fn relabelled(graph: &BipartiteInstance, on: &[usize], off: &[usize]) -> Result<BipartiteInstance> {
    let mut adjacency = vec![Vec::new(); graph.n_online()];
    for v in 0..graph.n_online() {
        let mut ns: Vec<usize> = graph.neighbors(v).iter().map(|&u| off[u]).collect();
        ns.sort_unstable();
        adjacency[on[v]] = ns;
    }
    BipartiteInstance::new(graph.n_offline(), adjacency)
}

/// Every relabelling of both sides, with the algorithm's matching mapped back.
pub fn relabelled_runs(graph: &BipartiteInstance, factory: PriorityFactory) -> Result<Vec<LabelledRun>> {
    if graph.n_online() > RELABEL_LIMIT || graph.n_offline() > RELABEL_LIMIT {
        return Err(Error::Refused(format!(
            "relabelling enumeration is limited to {RELABEL_LIMIT} per side"
        )));
    }
    let mut runs = Vec::new();
    let mut on: Vec<usize> = (0..graph.n_online()).collect();
    loop {
        let mut off: Vec<usize> = (0..graph.n_offline()).collect();
        loop {
            let g = relabelled(graph, &on, &off)?;
            let mut algorithm = factory();
            let labelled = run_priority_instance(&g, algorithm.as_mut())?;
            let mut matching = Matching::new();
            for (lv, lu) in labelled.pairs() {
                let v = on.iter().position(|&x| x == lv).expect("permutation");
                let u = off.iter().position(|&x| x == lu).expect("permutation");
                matching.insert(v, u);
            }
            matching.validate(graph)?;
            runs.push(LabelledRun {
                online_labels: on.clone(),
                offline_labels: off.clone(),
                matching,
            });
            if !next_permutation(&mut off) {
                break;
            }
        }
        if !next_permutation(&mut on) {
            break;
        }
    }
    Ok(runs)
}

/// Expected matching size over all relabellings divided by the maximum matching size.
pub fn evaluate_priority_under_relabeling(graph: &BipartiteInstance, factory: PriorityFactory) -> Result<Rational> {
    let opt = optimal_matching(graph).0;
    if opt == 0 {
        return Err(Error::Malformed("graph has no edges".into()));
    }
    let runs = relabelled_runs(graph, factory)?;
    let total: usize = runs.iter().map(|r| r.matching.size()).sum();
    Ok(Rational::new(total.into(), (runs.len() * opt).into()))
}

/// One enumerated first-step strategy of the bound checker.
#[derive(Clone, Debug, Serialize)]
pub struct FirstStepRow {
    pub strategy: String,
    #[serde(with = "crate::rational::serde_rational")]
    pub event_probability: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub mistake_probability: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub ratio: Rational,
    pub holds: bool,
}

/// Result of [`check_randomized_priority_bound`].
#[derive(Clone, Debug, Serialize)]
pub struct PriorityBoundReport {
    #[serde(with = "crate::rational::serde_rational")]
    pub bound: Rational,
    pub rows: Vec<FirstStepRow>,
    pub all_hold: bool,
}

/// Finds `v`, its degree-one neighbor `u` and its other neighbor `u'`.
fn locate_trap(graph: &BipartiteInstance) -> Result<(usize, usize, usize)> {
    let mut offline_degree = vec![0; graph.n_offline()];
    for v in 0..graph.n_online() {
        for &u in graph.neighbors(v) {
            offline_degree[u] += 1;
        }
    }
    for v in 0..graph.n_online() {
        let ns = graph.neighbors(v);
        if ns.len() != 2 {
            continue;
        }
        for (a, b) in [(ns[0], ns[1]), (ns[1], ns[0])] {
            if offline_degree[a] == 1 && offline_degree[b] == graph.n_online() {
                return Ok((v, a, b));
            }
        }
    }
    Err(Error::Malformed(
        "graph lacks a vertex with a private and a universal neighbor".into(),
    ))
}

fn check_strategy(
    graph: &BipartiteInstance,
    trap: (usize, usize, usize),
    factory: PriorityFactory,
    event: &dyn Fn(&LabelledRun) -> bool,
    name: String,
    bound: &Rational,
) -> Result<FirstStepRow> {
    let (v, _, u_prime) = trap;
    let runs = relabelled_runs(graph, factory)?;
    let count = runs.len();
    let events = runs.iter().filter(|r| event(r)).count();
    let mistakes = runs.iter().filter(|r| r.matching.get(v) == Some(u_prime)).count();
    let opt = optimal_matching(graph).0;
    let total: usize = runs.iter().map(|r| r.matching.size()).sum();
    let ratio = Rational::new(total.into(), (count * opt).into());
    let event_probability = Rational::new(events.into(), count.into());
    let mistake_probability = Rational::new(mistakes.into(), count.into());
    let floor = Rational::new(1.into(), 18.into());
    let holds = mistake_probability >= floor && &ratio <= bound;
    Ok(FirstStepRow {
        strategy: name,
        event_probability,
        mistake_probability,
        ratio,
        holds,
    })
}

/// Enumerates every first-item type and first match on a three-by-three
/// trap graph and confirms each forces a mistake with probability at least
/// `1/18`, so no mixture beats `53/54`.
pub fn check_randomized_priority_bound(graph: &BipartiteInstance) -> Result<PriorityBoundReport> {
    if graph.n_online() != 3 || graph.n_offline() != 3 {
        return Err(Error::Malformed(
            "the first-step checker expects three vertices per side".into(),
        ));
    }
    let trap = locate_trap(graph)?;
    let (v, u, u_prime) = trap;
    let bound = Rational::new(53.into(), 54.into());
    let mut rows = Vec::new();
    for label in 0..3 {
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            for (choice, other) in [(a, b), (b, a)] {
                let factory = move || -> Box<dyn PriorityAlgorithm> {
                    Box::new(FirstItemStrategy {
                        label,
                        pair: (a, b),
                        choice,
                    })
                };
                let event = move |r: &LabelledRun| {
                    r.online_labels[v] == label && r.offline_labels[u_prime] == choice && r.offline_labels[u] == other
                };
                let name = format!("first {label}:({a},{b}) -> {choice}");
                rows.push(check_strategy(graph, trap, &factory, &event, name, &bound)?);
            }
        }
    }
    let factory = || -> Box<dyn PriorityAlgorithm> { Box::new(PriorityGreedyLow) };
    let event =
        move |r: &LabelledRun| r.online_labels[v] == 0 && r.offline_labels[u_prime] == 0 && r.offline_labels[u] == 1;
    rows.push(check_strategy(
        graph,
        trap,
        &factory,
        &event,
        "lexicographic-first".into(),
        &bound,
    )?);
    let sixth = Rational::new(1.into(), 18.into());
    for row in rows.iter_mut().take(18) {
        row.holds &= row.event_probability == sixth;
    }
    let all_hold = rows.iter().all(|r| r.holds);
    Ok(PriorityBoundReport { bound, rows, all_hold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversaries::protocol::{DegreeBased, PrioOneRand};
    use crate::instances::gen_prio_one_rand;

    #[test]
    fn prio_one_rand_strategy_is_26_27() {
        let g = gen_prio_one_rand();
        let r = evaluate_priority_under_relabeling(&g, &|| Box::new(PrioOneRand)).unwrap();
        assert_eq!(r, Rational::new(26.into(), 27.into()));
    }

    #[test]
    fn degree_based_is_17_18() {
        let g = gen_prio_one_rand();
        let r = evaluate_priority_under_relabeling(&g, &|| Box::new(DegreeBased)).unwrap();
        assert_eq!(r, Rational::new(17.into(), 18.into()));
    }

    #[test]
    fn first_step_checker_passes() {
        let report = check_randomized_priority_bound(&gen_prio_one_rand()).unwrap();
        assert_eq!(report.rows.len(), 19);
        assert!(report.all_hold, "{:?}", report.rows);
    }

    #[test]
    fn refuses_large_graphs() {
        let g = crate::instances::gen_complete(7, 7);
        assert!(matches!(
            evaluate_priority_under_relabeling(&g, &|| Box::new(DegreeBased)),
            Err(Error::Refused(_))
        ));
    }
}
