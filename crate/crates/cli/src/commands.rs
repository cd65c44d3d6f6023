use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use parwidth::adversaries::{check_randomized_priority_bound, evaluate_priority_under_relabeling};
use parwidth::harness::{
    emit_report, evaluate_rom, mc_buchbinder, mc_matching, priority_player, rom_table, rom_table_raw, run_game,
    GameParams, MatchingAlgorithm, McEstimate, OutputFormat, RatioReport, RunConfig, ScriptedMatching,
    PRIORITY_PLAYERS,
};
use parwidth::matching::{lp_ranking_derandomization, run_rom_rule, RomRule, TieRule};
use parwidth::maxsat::{
    derandomized_maxsat, greedy_weight_assign, johnson_assign, randomized_buchbinder_maxsat,
    randomized_proportional_assign, width2_johnson, width2_value, ModularWeight, Objective, WeightedCoverage,
};
use parwidth::rational::{format_rational, parse_rational, render_4dp, Rational};
use parwidth::{
    gen_complete, gen_prio_one_rand, gen_rand_hard, gen_upper_triangular, gen_width2_counterexample, optimal_matching,
    optimal_maxsat, parse_bipartite, parse_wcnf, random_bipartite, random_cnf, serialize_bipartite, serialize_wcnf,
    ArrivalOrder, BipartiteFormat, BipartiteInstance, CnfInstance,
};

use crate::{Cli, Command, DerandArgs, GameArgs, GenArgs, Global, McArgs, RomTableArgs, RunArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] parwidth::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("check failed: {0}")]
    Check(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(parwidth::Error::Refused(_)) => 2,
            CliError::Core(parwidth::Error::Protocol { .. }) => 3,
            CliError::Check(_) => 4,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn dispatch(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    let config = run_config(g);
    config.validate()?;
    match &cli.command {
        Command::Gen(a) => gen(g, a),
        Command::Run(a) => run(g, a),
        Command::RomTable(a) => rom_table_cmd(g, config, a),
        Command::RomEval(a) => {
            let alg = algorithm(&a.algorithm, g.tie_rule.into())?;
            let inst = read_bipartite(&a.instance)?;
            let start = Instant::now();
            let ratio = config.install(|| evaluate_rom(&alg, &inst))??;
            let report = RatioReport::new(alg.name(), inst.n_online(), ratio).with_time(start.elapsed());
            emit(&[report], g.format.into())
        }
        Command::Mc(a) => mc(g, &config, a),
        Command::Game(a) => game(g, a),
        Command::LpRanking(a) => {
            let inst = read_bipartite(&a.instance)?;
            let order = order_arg(a.order.as_deref(), inst.n_online())?;
            let out = lp_ranking_derandomization(&inst, &order)?;
            let summary = LpSummary {
                best: out.best.pairs().collect(),
                best_size: out.best.size(),
                optimum: out.optimum,
                expected_size: format_rational(&out.expected_size),
                ratio: format_rational(&out.expected_ratio()),
                ratio_4dp: render_4dp(&out.expected_ratio()),
                widths: out.steps.iter().map(|s| s.distribution.len()).collect(),
            };
            print_value(g, &summary)
        }
        Command::MaxsatDerand(a) => derand(g, a),
        Command::PriorityDemo => priority_demo(g),
    }
}

fn run_config(g: &Global) -> RunConfig {
    let mut c = RunConfig {
        seed: g.seed,
        limit_n: g.limit_n,
        tie_rule: g.tie_rule.into(),
        format: g.format.into(),
        long_run: g.long_run,
        ..RunConfig::default()
    };
    if let Some(j) = g.jobs {
        c.jobs = j;
    }
    c
}

fn rational(s: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| CliError::Usage(format!("not a rational number: {s:?}")))
}

fn algorithm(name: &str, tie: TieRule) -> Result<MatchingAlgorithm> {
    let alg =
        MatchingAlgorithm::from_name(name).ok_or_else(|| CliError::Usage(format!("unknown algorithm {name:?}")))?;
    Ok(match alg {
        MatchingAlgorithm::Rule(RomRule::LeastSeen { .. }) if name == "least-seen" => {
            MatchingAlgorithm::Rule(RomRule::LeastSeen { tie })
        }
        other => other,
    })
}

fn read_bipartite(path: &Path) -> Result<BipartiteInstance> {
    Ok(parse_bipartite(&fs::read_to_string(path)?)?)
}

fn is_wcnf(path: &Path, text: &str) -> bool {
    path.extension().is_some_and(|e| e == "wcnf" || e == "cnf")
        || text
            .lines()
            .any(|l| l.trim_start().starts_with("p wcnf") || l.trim_start().starts_with("p cnf"))
}

fn order_arg(order: Option<&str>, n: usize) -> Result<ArrivalOrder> {
    match order {
        None => Ok(ArrivalOrder::identity(n)),
        Some(s) => {
            let v = s
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| CliError::Usage(format!("bad order entry {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if v.len() != n {
                return Err(CliError::Usage(format!(
                    "order has {} entries, instance has {n} online vertices",
                    v.len()
                )));
            }
            Ok(ArrivalOrder::new(v)?)
        }
    }
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit(reports: &[RatioReport], format: OutputFormat) -> Result<()> {
    std::io::stdout().write_all(&emit_report(reports, format)?)?;
    Ok(())
}

/// JSON for `--format json`, `key: value` lines otherwise.
fn print_value<T: Serialize>(g: &Global, value: &T) -> Result<()> {
    let v = serde_json::to_value(value)?;
    if g.format == crate::Format::Json {
        println!("{}", serde_json::to_string_pretty(&v)?);
        return Ok(());
    }
    if let serde_json::Value::Object(map) = v {
        for (k, v) in map {
            match v {
                serde_json::Value::String(s) => println!("{k}: {s}"),
                other => println!("{k}: {other}"),
            }
        }
    } else {
        println!("{v}");
    }
    Ok(())
}

fn gen(g: &Global, a: &GenArgs) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let layout = if a.records {
        BipartiteFormat::Record
    } else {
        BipartiteFormat::Matrix
    };
    let graph = |inst: BipartiteInstance| serialize_bipartite(&inst, layout);
    let text = match a.kind.as_str() {
        "rand-hard" => graph(gen_rand_hard(a.n)?),
        "upper-triangular" => graph(gen_upper_triangular(a.n)),
        "complete" => graph(gen_complete(a.n, a.m.unwrap_or(a.n))),
        "prio-one-rand" => graph(gen_prio_one_rand()),
        "random-bipartite" => {
            let p: f64 = a
                .prob
                .parse()
                .or_else(|_| rational(&a.prob).map(|r| parwidth::rational::to_f64(&r)))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::Usage("edge probability must lie in [0, 1]".into()));
            }
            graph(random_bipartite(&mut rng, a.n, a.m.unwrap_or(a.n), p))
        }
        "width2" => serialize_wcnf(&gen_width2_counterexample(&rational(&a.p)?, &rational(&a.w)?)?)?,
        "random-cnf" => serialize_wcnf(&random_cnf(&mut rng, a.n, a.clauses, a.max_len))?,
        other => return Err(CliError::Usage(format!("unknown instance kind {other:?}"))),
    };
    write_out(a.out.as_deref(), &text)
}

#[derive(Serialize)]
struct MatchingRun {
    algorithm: String,
    matching: Vec<(usize, usize)>,
    size: usize,
    optimum: usize,
}

#[derive(Serialize)]
struct MaxSatRun {
    algorithm: String,
    assignment: String,
    value: String,
    optimum: Option<String>,
}

fn bits(a: &parwidth::Assignment) -> String {
    a.values()
        .iter()
        .map(|v| match v {
            Some(true) => '1',
            Some(false) => '0',
            None => '-',
        })
        .collect()
}

fn run(g: &Global, a: &RunArgs) -> Result<()> {
    let path = &a.target.instance;
    let text = fs::read_to_string(path)?;
    if is_wcnf(path, &text) {
        let inst = parse_wcnf(&text)?;
        return run_maxsat(g, &inst, &a.target.algorithm, &a.p);
    }
    let inst = parse_bipartite(&text)?;
    let order = order_arg(a.order.as_deref(), inst.n_online())?;
    let alg = algorithm(&a.target.algorithm, g.tie_rule.into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let m = match alg {
        MatchingAlgorithm::Rule(r) => run_rom_rule(&r, &inst, &order)?,
        MatchingAlgorithm::Ranking => parwidth::matching::ranking_sample(&inst, &order, &mut rng),
        MatchingAlgorithm::Random => parwidth::matching::random_matcher(&inst, &order, &mut rng),
    };
    m.validate(&inst)?;
    print_value(
        g,
        &MatchingRun {
            algorithm: alg.name(),
            matching: m.pairs().collect(),
            size: m.size(),
            optimum: optimal_matching(&inst).0,
        },
    )
}

fn run_maxsat(g: &Global, inst: &CnfInstance, name: &str, p: &str) -> Result<()> {
    let (assignment, value) = match name {
        "johnson" => {
            let a = johnson_assign(inst);
            let v = inst.satisfied_weight(&a);
            (bits(&a), v)
        }
        "greedy-weight" => {
            let a = greedy_weight_assign(inst);
            let v = inst.satisfied_weight(&a);
            (bits(&a), v)
        }
        "proportional" => {
            let a = randomized_proportional_assign(inst, g.seed);
            let v = inst.satisfied_weight(&a);
            (bits(&a), v)
        }
        "buchbinder" => {
            let a = randomized_buchbinder_maxsat(inst, g.seed);
            let v = inst.satisfied_weight(&a);
            (bits(&a), v)
        }
        "width2-johnson" => {
            let pair = width2_johnson(inst, &rational(p)?)?;
            let v = width2_value(inst, &pair);
            (format!("{} {}", bits(&pair.0), bits(&pair.1)), v)
        }
        other => return Err(CliError::Usage(format!("unknown max-sat algorithm {other:?}"))),
    };
    let optimum = optimal_maxsat(inst).ok().map(|(o, _)| format_rational(&o));
    print_value(
        g,
        &MaxSatRun {
            algorithm: name.into(),
            assignment,
            value: format_rational(&value),
            optimum,
        },
    )
}

fn rom_table_cmd(g: &Global, mut config: RunConfig, a: &RomTableArgs) -> Result<()> {
    let tie: TieRule = g.tie_rule.into();
    let rules = if a.algorithms.is_empty() {
        RomRule::table_rules()
            .into_iter()
            .map(|r| match r {
                RomRule::LeastSeen { .. } => RomRule::LeastSeen { tie },
                r => r,
            })
            .collect::<Vec<_>>()
    } else {
        a.algorithms
            .iter()
            .map(|n| match algorithm(n, tie)? {
                MatchingAlgorithm::Rule(r) => Ok(r),
                _ => Err(CliError::Usage(format!("{n:?} is not a deterministic rule"))),
            })
            .collect::<Result<Vec<_>>>()?
    };
    config.checkpoint = a.checkpoint.clone();
    config.time_budget = a.time_budget.map(Duration::from_secs);
    config.include_zero_opt = a.include_zero_opt;
    config.validate()?;
    let reports = rom_table(&rules, &a.n, &config)?;
    if a.cross_check {
        for &n in a.n.iter().filter(|&&n| n <= 4) {
            let raw = rom_table_raw(&rules, n, a.include_zero_opt)?;
            for (r, rep) in raw.iter().zip(reports.iter().filter(|r| r.n == n)) {
                if r != &rep.ratio {
                    return Err(CliError::Check(format!(
                        "{} at n={n}: canonical {} but raw {}",
                        rep.algorithm,
                        format_rational(&rep.ratio),
                        format_rational(r)
                    )));
                }
            }
            eprintln!("n={n}: raw enumeration agrees");
        }
    }
    emit(&reports, g.format.into())
}

fn mc(g: &Global, config: &RunConfig, a: &McArgs) -> Result<()> {
    let path = &a.target.instance;
    let text = fs::read_to_string(path)?;
    let est: McEstimate = if is_wcnf(path, &text) {
        if a.target.algorithm != "buchbinder" {
            return Err(CliError::Usage(
                "max-sat instances support only the buchbinder estimator".into(),
            ));
        }
        let inst = parse_wcnf(&text)?;
        config.install(|| mc_buchbinder(&inst, a.trials, g.seed))??
    } else {
        let inst = parse_bipartite(&text)?;
        let alg = algorithm(&a.target.algorithm, g.tie_rule.into())?;
        let order = a
            .order
            .as_deref()
            .map(|o| order_arg(Some(o), inst.n_online()))
            .transpose()?;
        config.install(|| mc_matching(&alg, &inst, order.as_ref(), a.trials, g.seed))??
    };
    print_value(g, &est)
}

#[derive(Serialize)]
struct GameLine {
    game: String,
    algorithm: String,
    algorithm_value: String,
    certificate_value: String,
    ratio: String,
    ratio_4dp: String,
    bound: Option<String>,
    turns: usize,
    notes: Vec<String>,
}

fn game(g: &Global, a: &GameArgs) -> Result<()> {
    let params = GameParams {
        k: a.k,
        n: a.n,
        epsilon: rational(&a.epsilon)?,
        scale: a.scale,
        seed: g.seed,
        p: rational(&a.p)?,
    };
    let script = match &a.script {
        Some(p) => Some(ScriptedMatching::parse(a.k, &fs::read_to_string(p)?)?),
        None => None,
    };
    let out = run_game(&a.adversary, &a.algorithm, &params, script)?;
    if let Some(p) = &a.transcript {
        fs::write(p, out.transcript.to_jsonl()?)?;
    }
    let s = &out.transcript.summary;
    print_value(
        g,
        &GameLine {
            game: out.transcript.game.clone(),
            algorithm: out.transcript.algorithm.clone(),
            algorithm_value: format_rational(&s.algorithm_value),
            certificate_value: format_rational(&s.certificate_value),
            ratio: format_rational(&s.ratio),
            ratio_4dp: render_4dp(&s.ratio),
            bound: s.bound.as_ref().map(format_rational),
            turns: out.transcript.turns.len(),
            notes: s.notes.clone(),
        },
    )?;
    if let Some(b) = &s.bound {
        if &s.ratio > b {
            return Err(CliError::Check(format!(
                "ratio {} exceeds the bound {}",
                format_rational(&s.ratio),
                format_rational(b)
            )));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct LpSummary {
    best: Vec<(usize, usize)>,
    best_size: usize,
    optimum: usize,
    expected_size: String,
    ratio: String,
    ratio_4dp: String,
    widths: Vec<usize>,
}

#[derive(Serialize)]
struct DerandSummary {
    assignment: String,
    value: String,
    max_width: usize,
    expected: Option<String>,
    bound: Option<String>,
    bound_holds: Option<bool>,
}

fn derand(g: &Global, a: &DerandArgs) -> Result<()> {
    let inst = parse_wcnf(&fs::read_to_string(&a.instance)?)?;
    let out = match a.objective.as_str() {
        "modular" => derandomized_maxsat(&inst, Objective::Oracle(&ModularWeight::of_instance(&inst)))?,
        "direct" => derandomized_maxsat(&inst, Objective::Direct)?,
        "coverage" => {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let cov = WeightedCoverage::random(&mut rng, inst.clauses().len(), 8);
            derandomized_maxsat(&inst, Objective::Oracle(&cov))?
        }
        other => return Err(CliError::Usage(format!("unknown objective {other:?}"))),
    };
    let e = out.expectation.as_ref();
    print_value(
        g,
        &DerandSummary {
            assignment: bits(&out.assignment),
            value: format_rational(&out.value),
            max_width: out.max_width(),
            expected: e.map(|e| format_rational(&e.expected)),
            bound: e.map(|e| format_rational(&e.bound)),
            bound_holds: e.map(|e| e.holds),
        },
    )?;
    match e {
        Some(e) if !e.holds => Err(CliError::Check("expectation bound violated".into())),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct DemoRow {
    strategy: String,
    ratio: String,
    ratio_4dp: String,
}

#[derive(Serialize)]
struct Demo {
    evaluations: Vec<DemoRow>,
    checker_bound: String,
    checker_all_hold: bool,
    checker_worst: String,
}

fn priority_demo(g: &Global) -> Result<()> {
    let graph = gen_prio_one_rand();
    let mut evaluations = Vec::new();
    for name in PRIORITY_PLAYERS {
        priority_player(name)?;
        let factory = || priority_player(name).expect("known player");
        let r = evaluate_priority_under_relabeling(&graph, &factory)?;
        evaluations.push(DemoRow {
            strategy: name.into(),
            ratio_4dp: render_4dp(&r),
            ratio: format_rational(&r),
        });
    }
    let report = check_randomized_priority_bound(&graph)?;
    let worst = report.rows.iter().map(|r| r.ratio.clone()).max().unwrap_or_default();
    let demo = Demo {
        evaluations,
        checker_bound: format_rational(&report.bound),
        checker_all_hold: report.all_hold,
        checker_worst: format_rational(&worst),
    };
    if g.format == crate::Format::Json {
        println!("{}", serde_json::to_string_pretty(&demo)?);
    } else {
        for r in &demo.evaluations {
            println!("{:<22} {:>8} {}", r.strategy, r.ratio_4dp, r.ratio);
        }
        println!(
            "first-step checker: worst {} against {} ({})",
            demo.checker_worst,
            demo.checker_bound,
            if demo.checker_all_hold { "holds" } else { "fails" }
        );
    }
    if !report.all_hold {
        return Err(CliError::Check(
            "first-step checker found a strategy above the bound".into(),
        ));
    }
    Ok(())
}
