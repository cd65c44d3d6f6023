use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use parwidth::harness::{evaluate_rom, rom_table, run_game, GameParams, MatchingAlgorithm, RunConfig};
use parwidth::matching::{lp_ranking_derandomization, ranking_expectation, RomRule};
use parwidth::maxsat::{derandomized_maxsat, Objective};
use parwidth::{gen_rand_hard, gen_upper_triangular, optimal_matching, random_bipartite, random_cnf, ArrivalOrder};

fn rom_tables(c: &mut Criterion) {
    let config = RunConfig {
        jobs: 1,
        ..RunConfig::default()
    };
    let mut group = c.benchmark_group("rom_table");
    for n in [3, 4] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| rom_table(&RomRule::table_rules(), &[n], &config).unwrap())
        });
    }
    group.finish();
}

fn ranking(c: &mut Criterion) {
    let g = gen_rand_hard(4).unwrap();
    let order = ArrivalOrder::identity(g.n_online());
    c.bench_function("ranking_expectation/rand_hard_8", |b| {
        b.iter(|| ranking_expectation(black_box(&g), &order).unwrap())
    });
    let ut = gen_upper_triangular(5);
    c.bench_function("ranking_rom/upper_triangular_5", |b| {
        b.iter(|| evaluate_rom(&MatchingAlgorithm::Ranking, black_box(&ut)).unwrap())
    });
    let g = gen_rand_hard(3).unwrap();
    c.bench_function("lp_ranking/rand_hard_6", |b| {
        b.iter(|| lp_ranking_derandomization(black_box(&g), &ArrivalOrder::identity(6)).unwrap())
    });
}

fn oracles(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let graphs: Vec<_> = (0..64).map(|_| random_bipartite(&mut rng, 12, 12, 0.3)).collect();
    c.bench_function("optimal_matching/64x12", |b| {
        b.iter(|| graphs.iter().map(|g| optimal_matching(g).0).sum::<usize>())
    });
}

fn maxsat(c: &mut Criterion) {
    let inst = random_cnf(&mut ChaCha8Rng::seed_from_u64(7), 10, 30, 3);
    c.bench_function("derandomized_maxsat/10x30", |b| {
        b.iter(|| derandomized_maxsat(black_box(&inst), Objective::Direct).unwrap())
    });
}

fn games(c: &mut Criterion) {
    let params = GameParams {
        k: 2,
        n: 100,
        ..GameParams::default()
    };
    c.bench_function("game/width_k2_n100", |b| {
        b.iter(|| run_game("width", "balance", &params, None).unwrap())
    });
    let params = GameParams {
        n: 15,
        ..GameParams::default()
    };
    c.bench_function("game/priority_n15", |b| {
        b.iter(|| run_game("priority", "degree-based", &params, None).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = rom_tables, ranking, oracles, maxsat, games
}
criterion_main!(benches);
