//! Library evaluators against slow, direct reference computations.

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use parwidth::matching::{count_linear_extensions, ranking_step_probability, MatchingPoset};
use parwidth::rational::to_f64;
use parwidth::{
    enumerate_bipartite, gen_rand_hard, optimal_matching, random_bipartite, ArrivalOrder, BipartiteInstance, Matching,
};

/// Largest matching by trying every choice for every online vertex.
fn brute_matching(g: &BipartiteInstance) -> usize {
    fn go(g: &BipartiteInstance, v: usize, used: u64) -> usize {
        if v == g.n_online() {
            return 0;
        }
        let mut best = go(g, v + 1, used);
        for &u in g.neighbors(v) {
            if used >> u & 1 == 0 {
                best = best.max(1 + go(g, v + 1, used | 1 << u));
            }
        }
        best
    }
    go(g, 0, 0)
}

fn brute_extensions(n: usize, rel: &[(usize, usize)]) -> u64 {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0;
    permute(&mut perm, 0, &mut |p| {
        let mut pos = vec![0; n];
        for (i, &x) in p.iter().enumerate() {
            pos[x] = i;
        }
        if rel.iter().all(|&(a, b)| pos[a] < pos[b]) {
            count += 1;
        }
    });
    count
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

#[test]
fn optimal_matching_on_every_small_canonical_graph() {
    let mut checked = 0;
    for n in 1..=4 {
        for g in enumerate_bipartite(n, 5, false).unwrap() {
            let (size, m) = optimal_matching(&g);
            m.validate(&g).unwrap();
            assert_eq!(m.size(), size);
            assert_eq!(size, brute_matching(&g), "{:?}", g.masks());
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn optimal_matching_on_random_eight_by_eight() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..500 {
        let p = rng.gen_range(0.1..0.6);
        let g = random_bipartite(&mut rng, 8, 8, p);
        let (size, m) = optimal_matching(&g);
        m.validate(&g).unwrap();
        assert_eq!(size, brute_matching(&g));
    }
}

#[test]
fn linear_extensions_on_random_posets() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        // Orient edges along a hidden order so the relation is acyclic.
        let mut hidden: Vec<usize> = (0..8).collect();
        hidden.shuffle(&mut rng);
        let density = rng.gen_range(0.05..0.4);
        let mut rel = Vec::new();
        for i in 0..8 {
            for j in i + 1..8 {
                if rng.gen_bool(density) {
                    rel.push((hidden[i], hidden[j]));
                }
            }
        }
        let poset = MatchingPoset::with_relations(8, rel.iter().copied()).unwrap();
        assert_eq!(
            count_linear_extensions(&poset).unwrap(),
            BigUint::from(brute_extensions(8, &rel))
        );
    }
}

#[test]
fn step_probability_matches_sampling() {
    let g = gen_rand_hard(3).unwrap();
    let order = ArrivalOrder::identity(g.n_online());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // Condition on the state after two arrivals and sample the third.
    let step = 2;
    let mut hits = std::collections::BTreeMap::<(Vec<(usize, usize)>, Option<usize>), u32>::new();
    let trials = 100_000;
    for _ in 0..trials {
        let mut pref: Vec<usize> = (0..g.n_offline()).collect();
        pref.shuffle(&mut rng);
        let mut used = vec![false; g.n_offline()];
        let mut prefix = Vec::new();
        let mut third = None;
        for (i, &v) in order.as_slice().iter().enumerate().take(step + 1) {
            let pick = pref.iter().copied().find(|&u| !used[u] && g.has_edge(v, u));
            if let Some(u) = pick {
                used[u] = true;
            }
            if i < step {
                if let Some(u) = pick {
                    prefix.push((v, u));
                }
            } else {
                third = pick;
            }
        }
        *hits.entry((prefix, third)).or_default() += 1;
    }
    let mut states = std::collections::BTreeMap::<Vec<(usize, usize)>, u32>::new();
    for ((p, _), c) in &hits {
        *states.entry(p.clone()).or_default() += c;
    }
    let v = order.as_slice()[step];
    for ((prefix, third), &c) in &hits {
        let Some(u) = third else { continue };
        let mut m = Matching::new();
        for &(a, b) in prefix {
            m.insert(a, b);
        }
        let exact = to_f64(&ranking_step_probability(&g, &order, &m, v, *u).unwrap());
        let n = f64::from(states[prefix]);
        let observed = f64::from(c) / n;
        let sigma = (exact * (1.0 - exact) / n).sqrt().max(1e-9);
        assert!(
            (observed - exact).abs() <= 3.0 * sigma + 1e-12,
            "{prefix:?} -> {u}: {observed} vs {exact}"
        );
    }
}
