use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use parwidth::matching::{lp_ranking_derandomization, run_rom_rule, RomRule};
use parwidth::maxsat::{derandomized_maxsat, johnson_assign, width2_johnson, width2_value, ModularWeight, Objective};
use parwidth::rational::{format_rational, parse_rational, q, render_4dp};
use parwidth::{
    optimal_matching, optimal_maxsat, parse_bipartite, parse_wcnf, random_bipartite, random_cnf, serialize_bipartite,
    serialize_wcnf, ArrivalOrder, BipartiteFormat, BipartiteInstance, CnfInstance,
};

fn graph() -> impl Strategy<Value = BipartiteInstance> {
    (1usize..=7, 1usize..=7, any::<u64>(), 0.1f64..0.9)
        .prop_map(|(a, b, seed, p)| random_bipartite(&mut ChaCha8Rng::seed_from_u64(seed), a, b, p))
}

fn graph_with_order() -> impl Strategy<Value = (BipartiteInstance, ArrivalOrder)> {
    graph().prop_flat_map(|g| {
        let n = g.n_online();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle()).prop_map(|(g, o)| (g, ArrivalOrder::new(o).unwrap()))
    })
}

fn cnf(max_vars: usize, max_clauses: usize) -> impl Strategy<Value = CnfInstance> {
    (1..=max_vars, 1..=max_clauses, 1usize..=3, any::<u64>())
        .prop_map(|(v, c, len, seed)| random_cnf(&mut ChaCha8Rng::seed_from_u64(seed), v, c, len))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn bipartite_text_round_trips(g in graph(), records in any::<bool>()) {
        let layout = if records { BipartiteFormat::Record } else { BipartiteFormat::Matrix };
        let back = parse_bipartite(&serialize_bipartite(&g, layout)).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn wcnf_text_round_trips(inst in cnf(8, 12)) {
        let back = parse_wcnf(&serialize_wcnf(&inst).unwrap()).unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn rational_text_round_trips(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = q(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&r)), Some(r.clone()));
        let shown: f64 = render_4dp(&r).parse().unwrap();
        prop_assert!((shown - n as f64 / d as f64).abs() <= 0.00005 + 1e-12);
    }

    #[test]
    fn rules_return_maximal_valid_matchings((g, order) in graph_with_order()) {
        let opt = optimal_matching(&g).0;
        for rule in RomRule::table_rules() {
            let Ok(m) = run_rom_rule(&rule, &g, &order) else { continue };
            m.validate(&g).unwrap();
            prop_assert!(m.size() <= opt);
            prop_assert!(2 * m.size() >= opt);
            for v in 0..g.n_online() {
                if m.get(v).is_none() {
                    prop_assert!(g.neighbors(v).iter().all(|&u| m.uses_offline(u)));
                }
            }
        }
    }

    #[test]
    fn lp_ranking_distributions_are_exact((g, order) in graph_with_order()) {
        prop_assume!(g.n_offline() <= 6 && g.n_online() <= 6);
        let out = lp_ranking_derandomization(&g, &order).unwrap();
        for s in &out.steps {
            prop_assert!(s.distribution.total_probability().is_one());
            prop_assert!(s.distribution.len() <= g.n_edges() + 1);
            for (p, m) in &s.distribution.support {
                prop_assert!(p > &num_rational::BigRational::zero());
                m.validate(&g).unwrap();
            }
        }
        prop_assert!(out.expected_size <= num_rational::BigRational::from_integer(out.optimum.into()));
        prop_assert!(out.best.size() * 2 >= out.optimum);
    }

    #[test]
    fn derandomization_keeps_three_quarters(inst in cnf(7, 14)) {
        let out = derandomized_maxsat(&inst, Objective::Oracle(&ModularWeight::of_instance(&inst))).unwrap();
        let (opt, _) = optimal_maxsat(&inst).unwrap();
        prop_assert!(out.value.clone() * num_rational::BigRational::from_integer(4.into()) >= opt * num_rational::BigRational::from_integer(3.into()));
        for (i, s) in out.trace.iter().enumerate() {
            prop_assert!(s.distribution.len() <= 2 * (i + 1) + 1);
            prop_assert!(s.distribution.total_probability().is_one());
        }
        if let Some(e) = &out.expectation {
            prop_assert!(e.holds);
        }
    }

    #[test]
    fn online_assignments_never_beat_the_optimum(inst in cnf(8, 12), eighths in 0i64..=8) {
        let (opt, _) = optimal_maxsat(&inst).unwrap();
        let j = johnson_assign(&inst);
        prop_assert!(j.is_complete());
        prop_assert!(inst.satisfied_weight(&j) <= opt);
        let pair = width2_johnson(&inst, &q(8 + eighths, 8)).unwrap();
        prop_assert!(width2_value(&inst, &pair) <= opt);
        prop_assert!(width2_value(&inst, &pair) >= inst.satisfied_weight(&pair.0));
    }
}
