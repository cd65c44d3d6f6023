//! Adversaries for online max-sat under input models 0, 2 and 3.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::protocol::MaxSatGameAlgorithm;
use super::transcript::{Certificate, Decisions, FinalInstance, GameSummary, GameTranscript, Item, TurnRecord};
use crate::error::{Error, Result};
use crate::instances::{
    optimal_maxsat, Assignment, Clause, ClauseId, ClauseView, CnfInstance, DataItemView, InputModel, Literal, VarId,
};
use crate::rational::{q, qi, to_f64, Rational};

/// Exhaustive witness search up to this many variables, sampling beyond.
pub const WITNESS_EXHAUSTIVE_LIMIT: usize = 20;
pub const WITNESS_SAMPLES: usize = 1_000_000;
const WITNESS_SEED: u64 = 0x5eed;

/// Incrementally built unit-weight formula, presented variable by variable.
struct Builder<'a> {
    algo: &'a mut dyn MaxSatGameAlgorithm,
    model: InputModel,
    clauses: Vec<Vec<Literal>>,
    occurs: Vec<Vec<ClauseId>>,
    values: Vec<Vec<Option<bool>>>,
    order: Vec<VarId>,
    turns: Vec<TurnRecord>,
}

impl<'a> Builder<'a> {
    fn new(algo: &'a mut dyn MaxSatGameAlgorithm, model: InputModel) -> Self {
        let width = algo.width();
        Builder {
            algo,
            model,
            clauses: Vec::new(),
            occurs: Vec::new(),
            values: vec![Vec::new(); width],
            order: Vec::new(),
            turns: Vec::new(),
        }
    }

    fn width(&self) -> usize {
        self.values.len()
    }

    fn new_var(&mut self) -> VarId {
        self.occurs.push(Vec::new());
        for v in &mut self.values {
            v.push(None);
        }
        self.occurs.len() - 1
    }

    fn new_clause(&mut self, literals: &[Literal]) -> ClauseId {
        let id = self.clauses.len();
        self.clauses.push(Vec::new());
        for &l in literals {
            self.add(id, l);
        }
        id
    }

    fn add(&mut self, clause: ClauseId, literal: Literal) {
        self.clauses[clause].push(literal);
        self.clauses[clause].sort();
        self.occurs[literal.variable].push(clause);
    }

    fn view(&self, var: VarId) -> Result<DataItemView> {
        let mut ids = self.occurs[var].clone();
        ids.sort_unstable();
        let mut full = DataItemView {
            model: InputModel::Literals,
            variable: var,
            positive_occurrences: Vec::new(),
            negative_occurrences: Vec::new(),
        };
        for id in ids {
            let lits = &self.clauses[id];
            let own = lits.iter().find(|l| l.variable == var).expect("occurrence list");
            let other_literals: Vec<Literal> = lits.iter().copied().filter(|l| l.variable != var).collect();
            let view = ClauseView {
                clause: id,
                weight: Rational::one(),
                length: Some(lits.len()),
                others: Some(other_literals.iter().map(|l| l.variable).collect()),
                other_literals: Some(other_literals),
            };
            if own.positive {
                full.positive_occurrences.push(view);
            } else {
                full.negative_occurrences.push(view);
            }
        }
        full.project(self.model)
    }

    /// Presents `var` and returns one value per assignment.
    fn present(&mut self, var: VarId, note: impl Into<String>) -> Result<Vec<bool>> {
        let turn = self.turns.len();
        let view = self.view(var)?;
        let values = self.algo.on_variable(&view);
        if values.len() != self.width() {
            return Err(Error::protocol(
                turn,
                format!("{} values for {} assignments", values.len(), self.width()),
            ));
        }
        for (a, &b) in self.values.iter_mut().zip(&values) {
            a[var] = Some(b);
        }
        self.order.push(var);
        self.turns.push(TurnRecord {
            turn,
            item: Item::Variable { view },
            decisions: Decisions::Values { values: values.clone() },
            note: note.into(),
        });
        Ok(values)
    }

    fn instance(&self) -> Result<CnfInstance> {
        let clauses = self
            .clauses
            .iter()
            .enumerate()
            .map(|(id, lits)| Clause::new(id, Rational::one(), lits.clone()))
            .collect::<Result<Vec<_>>>()?;
        let mut order = self.order.clone();
        let mut seen = vec![false; self.occurs.len()];
        for &v in &order {
            seen[v] = true;
        }
        order.extend((0..self.occurs.len()).filter(|&v| !seen[v]));
        CnfInstance::with_order(order, clauses)
    }

    fn assignments(&self) -> Vec<Assignment> {
        self.values
            .iter()
            .map(|vals| {
                let mut a = Assignment::empty(vals.len());
                for (v, b) in vals.iter().enumerate() {
                    if let Some(b) = b {
                        a.set(v, *b);
                    }
                }
                a
            })
            .collect()
    }

    /// Checks the certificate and packages the transcript.
    fn finish(
        self,
        game: &str,
        params: BTreeMap<String, String>,
        certificate: Vec<Option<bool>>,
        bound: Option<Rational>,
        mut notes: Vec<String>,
    ) -> Result<GameTranscript> {
        let instance = self.instance()?;
        let mut cert = Assignment::empty(instance.n_vars());
        for (v, b) in certificate.iter().enumerate() {
            cert.set(v, b.unwrap_or(false));
        }
        let total = instance.total_weight();
        let cert_value = instance.satisfied_weight(&cert);
        if cert_value != total {
            return Err(Error::Invariant(format!(
                "certificate satisfies {cert_value} of {total}"
            )));
        }
        let per_branch: Vec<Rational> = self
            .assignments()
            .iter()
            .map(|a| instance.satisfied_weight(a))
            .collect();
        let best = per_branch.iter().max().cloned().unwrap_or_else(Rational::zero);
        notes.push(format!(
            "per-assignment satisfied: {}",
            per_branch.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
        ));
        let ratio = &best / &total;
        Ok(GameTranscript {
            game: game.into(),
            algorithm: self.algo.name(),
            params,
            turns: self.turns,
            certificate: Certificate::Assignment { assignment: cert },
            final_instance: FinalInstance::Cnf { instance },
            summary: GameSummary {
                algorithm_value: best,
                certificate_value: total,
                ratio,
                bound,
                notes,
            },
        })
    }
}

fn check_width(algo: &dyn MaxSatGameAlgorithm, k: usize) -> Result<()> {
    if k == 0 || algo.width() == 0 || algo.width() > k {
        return Err(Error::Malformed(format!(
            "algorithm width {} does not fit k = {k}",
            algo.width()
        )));
    }
    Ok(())
}

/// Packed bit rows for fast agreement counts.
struct BitRows {
    words: usize,
    m: usize,
    rows: Vec<Vec<u64>>,
}

impl BitRows {
    fn new(rows: &[Vec<bool>]) -> Self {
        let m = rows.first().map_or(0, Vec::len);
        let words = m.div_ceil(64).max(1);
        let rows = rows.iter().map(|r| pack(r, words)).collect();
        BitRows { words, m, rows }
    }

    fn agreements(&self, a: &[u64], out: &mut [usize]) {
        for (row, slot) in self.rows.iter().zip(out.iter_mut()) {
            let differ: u32 = row.iter().zip(a).map(|(x, y)| (x ^ y).count_ones()).sum();
            *slot = self.m - differ as usize;
        }
    }
}

fn pack(bits: &[bool], words: usize) -> Vec<u64> {
    let mut out = vec![0u64; words];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

fn unpack(words: &[u64], m: usize) -> Vec<bool> {
    (0..m).map(|i| words[i / 64] >> (i % 64) & 1 == 1).collect()
}

/// Finds an assignment minimizing `cost(agreements)`, exhaustively or by sampling.
fn search_witness(rows: &[Vec<bool>], cost: &dyn Fn(&[usize]) -> usize) -> (Vec<bool>, Vec<usize>) {
    let packed = BitRows::new(rows);
    let m = packed.m;
    let mut agree = vec![0; rows.len()];
    let mut best: Option<(usize, Vec<u64>)> = None;
    let mut consider = |a: Vec<u64>, agree: &mut Vec<usize>| -> bool {
        packed.agreements(&a, agree);
        let c = cost(agree);
        if best.as_ref().map_or(true, |(b, _)| c < *b) {
            best = Some((c, a));
        }
        c == 0
    };
    if m <= WITNESS_EXHAUSTIVE_LIMIT {
        for bits in 0..1u64 << m {
            if consider(vec![bits], &mut agree) {
                break;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(WITNESS_SEED);
        let tail = m % 64;
        for _ in 0..WITNESS_SAMPLES {
            let mut a: Vec<u64> = (0..packed.words).map(|_| rng.gen()).collect();
            if tail != 0 {
                *a.last_mut().expect("nonempty") &= (1u64 << tail) - 1;
            }
            if consider(a, &mut agree) {
                break;
            }
        }
    }
    let (_, words) = best.expect("at least one candidate");
    packed.agreements(&words, &mut agree);
    (unpack(&words, m), agree)
}

fn branch_rows(b: &Builder, vars: &[VarId]) -> Vec<Vec<bool>> {
    b.values
        .iter()
        .map(|vals| vars.iter().map(|&v| vals[v].expect("presented")).collect())
        .collect()
}

fn params(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| ((*k).to_string(), v.clone())).collect()
}

/// Each `x_i` shares two clauses with `y`; the adversary decides afterwards
/// whether `x_i` is equivalent or inequivalent to `y`.
pub fn run_maxsat_equivalence_adversary(
    k: usize,
    n: usize,
    epsilon: &Rational,
    algorithm: &mut dyn MaxSatGameAlgorithm,
) -> Result<GameTranscript> {
    check_width(algorithm, k)?;
    if n < 2 || n % 2 != 0 {
        return Err(Error::Malformed(format!("n = {n} must be even and positive")));
    }
    if !epsilon.is_positive() {
        return Err(Error::Malformed("epsilon must be positive".into()));
    }
    let eps = to_f64(epsilon);
    if (k as f64).ln() >= 7.0 * eps * eps * n as f64 {
        return Err(Error::Refused(format!(
            "k = {k} is not below e^(7 eps^2 n) = {:.3}",
            (7.0 * eps * eps * n as f64).exp()
        )));
    }
    let mut b = Builder::new(algorithm, InputModel::Variables);
    let xs: Vec<VarId> = (0..n).map(|_| b.new_var()).collect();
    let y = b.new_var();
    for &x in &xs {
        b.new_clause(&[Literal::pos(x), Literal::pos(y)]);
        b.new_clause(&[Literal::neg(x), Literal::pos(y)]);
    }
    for &x in &xs {
        b.present(x, "")?;
    }
    let rows = branch_rows(&b, &xs);
    let (witness, agree) = search_witness(&rows, &|ag| ag.iter().map(|&a| (2 * a).abs_diff(n)).max().unwrap_or(0));
    let limit = qi(4) * epsilon * qi(n as i64);
    let ok = agree
        .iter()
        .all(|&a| Rational::from_integer((2 * a).abs_diff(n).into()) < limit);
    if !ok {
        return Err(Error::WitnessNotFound(format!(
            "agreements {agree:?} with n = {n}: need each strictly within n/2 +- {}",
            &limit / qi(2)
        )));
    }
    for (i, &a) in witness.iter().enumerate() {
        // A(x_i) = 1: x_i <-> y; A(x_i) = 0: x_i xor y.
        let (c_pos, c_neg) = (2 * i, 2 * i + 1);
        b.clauses[c_pos] = vec![
            Literal::pos(xs[i]),
            Literal {
                variable: y,
                positive: !a,
            },
        ];
        b.clauses[c_neg] = vec![
            Literal::neg(xs[i]),
            Literal {
                variable: y,
                positive: a,
            },
        ];
    }
    b.present(y, "signs of y fixed by the witness")?;
    let mut cert: Vec<Option<bool>> = witness.iter().map(|&a| Some(a)).collect();
    cert.push(Some(true));
    let notes = vec![format!("witness agreements per assignment: {agree:?}")];
    let bound = q(3, 4) + epsilon;
    b.finish(
        "maxsat-equivalence",
        params(&[
            ("k", k.to_string()),
            ("n", n.to_string()),
            ("epsilon", epsilon.to_string()),
        ]),
        cert,
        Some(bound),
        notes,
    )
}

/// The fixed width-2 game on `x1, x2, y` (plus `z` when `x1` is not split).
pub fn run_maxsat_two_variable_game(algorithm: &mut dyn MaxSatGameAlgorithm) -> Result<GameTranscript> {
    if algorithm.width() != 2 {
        return Err(Error::Malformed(
            "the two-variable game needs exactly two assignments".into(),
        ));
    }
    let mut b = Builder::new(algorithm, InputModel::Variables);
    let x1 = b.new_var();
    let y = b.new_var();
    b.new_clause(&[Literal::pos(x1), Literal::pos(y)]);
    b.new_clause(&[Literal::neg(x1), Literal::pos(y)]);
    let first = b.present(x1, "")?;
    let sign = |positive: bool| Literal { variable: y, positive };
    let note;
    if first[0] == first[1] {
        let c = first[0];
        // Both set x1 = c: make x1 = c force y = 1 and y = 1 lose a clause.
        b.clauses[0] = vec![Literal::pos(x1), sign(!c)];
        b.clauses[1] = vec![Literal::neg(x1), sign(c)];
        let z = b.new_var();
        b.new_clause(&[Literal::neg(y), Literal::pos(z)]);
        b.new_clause(&[Literal::neg(y), Literal::neg(z)]);
        b.present(y, "")?;
        b.present(z, "")?;
        note = format!("no split on x1 (both {})", u8::from(c));
    } else {
        let x2 = b.new_var();
        b.new_clause(&[Literal::pos(x2), Literal::pos(y)]);
        b.new_clause(&[Literal::neg(x2), Literal::pos(y)]);
        let lead = if first[0] { 0 } else { 1 };
        let second = b.present(x2, "")?;
        let decision = (second[lead], second[1 - lead]);
        // y-sign in the clauses with x1, ~x1, x2, ~x2.
        let signs = match decision {
            (false, false) => [false, false, true, false],
            (true, false) => [false, true, true, false],
            (true, true) => [false, false, false, true],
            (false, true) => [true, false, true, false],
        };
        b.clauses[0] = vec![Literal::pos(x1), sign(signs[0])];
        b.clauses[1] = vec![Literal::neg(x1), sign(signs[1])];
        b.clauses[2] = vec![Literal::pos(x2), sign(signs[2])];
        b.clauses[3] = vec![Literal::neg(x2), sign(signs[3])];
        for c in &mut b.clauses {
            c.sort();
        }
        b.present(y, "")?;
        note = format!(
            "split on x1; x2 decided ({}, {})",
            u8::from(decision.0),
            u8::from(decision.1)
        );
    }
    for c in &mut b.clauses {
        c.sort();
    }
    let instance = b.instance()?;
    let (_, witness) = optimal_maxsat(&instance)?;
    let cert = witness.values().to_vec();
    b.finish("maxsat-two-variable", BTreeMap::new(), cert, Some(q(3, 4)), vec![note])
}

/// The forced ratio of the model-0 adversary against `t` assignments.
pub fn model0_target(t: usize) -> Rational {
    match t {
        0 | 1 => q(1, 2),
        2 => q(5, 8),
        _ => (1..t)
            .map(|s| {
                let (a, bb) = model0_sides(t, s);
                let w = split_fraction(&a, &bb);
                &a * &w + (Rational::one() - &w) / qi(2)
            })
            .max()
            .expect("t >= 3"),
    }
}

fn model0_sides(k: usize, t: usize) -> (Rational, Rational) {
    let a = (Rational::one() + model0_target(t)) / qi(2);
    let b = (Rational::one() + model0_target(k - t)) / qi(2);
    (a, b)
}

/// `w = (b - 1/2) / (a + b - 1)`.
pub fn split_fraction(a: &Rational, b: &Rational) -> Rational {
    (b - q(1, 2)) / (a + b - qi(1))
}

struct Model0<'b, 'a> {
    b: &'b mut Builder<'a>,
    cert: Vec<Option<bool>>,
}

impl Model0<'_, '_> {
    fn var(&mut self) -> VarId {
        self.cert.push(None);
        self.b.new_var()
    }

    /// Satisfies leftover pool clauses for the certificate with one fresh variable.
    fn patch(&mut self, clauses: &[ClauseId]) -> Result<()> {
        if clauses.is_empty() {
            return Ok(());
        }
        let p = self.var();
        for &c in clauses {
            self.b.add(c, Literal::pos(p));
        }
        self.cert[p] = Some(true);
        self.b.present(p, "leftover patch")?;
        Ok(())
    }

    /// Plays the adversary for the `watched` assignments on `pool`, a list of
    /// clauses none of them satisfies.
    fn play(&mut self, watched: &[usize], pool: &[ClauseId]) -> Result<()> {
        match watched.len() {
            0 => self.patch(pool),
            1 => self.play_one(watched[0], pool),
            2 => self.play_two(watched, pool),
            _ => self.play_many(watched, pool),
        }
    }

    fn play_one(&mut self, w: usize, pool: &[ClauseId]) -> Result<()> {
        let mut chunks = pool.chunks_exact(2);
        for pair in &mut chunks {
            let u = self.var();
            self.b.add(pair[0], Literal::pos(u));
            self.b.add(pair[1], Literal::neg(u));
            let vals = self.b.present(u, "pair")?;
            let chosen = if vals[w] { pair[0] } else { pair[1] };
            let z = self.var();
            self.b.add(chosen, Literal::pos(z));
            self.b.present(z, "pair completion")?;
            self.cert[u] = Some(!vals[w]);
            self.cert[z] = Some(true);
        }
        self.patch(chunks.remainder())
    }

    fn play_two(&mut self, watched: &[usize], pool: &[ClauseId]) -> Result<()> {
        let mut splits = 0;
        let mut chunks = pool.chunks_exact(4);
        for c in &mut chunks {
            let x = self.var();
            for &id in &c[..2] {
                self.b.add(id, Literal::pos(x));
            }
            for &id in &c[2..] {
                self.b.add(id, Literal::neg(x));
            }
            let vals = self.b.present(x, "round")?;
            let (p, q) = (vals[watched[0]], vals[watched[1]]);
            let side = |v: bool| if v { [c[0], c[1]] } else { [c[2], c[3]] };
            let y = self.var();
            if p == q {
                for id in side(p) {
                    self.b.add(id, Literal::pos(y));
                }
                self.b.present(y, "round without split")?;
                self.cert[x] = Some(!p);
                self.cert[y] = Some(true);
                continue;
            }
            let target = watched[splits % 2];
            splits += 1;
            let tv = vals[target];
            let other = side(!tv);
            self.b.add(other[0], Literal::pos(y));
            self.b.add(other[1], Literal::neg(y));
            let yv = self.b.present(y, format!("split round, target {target}"))?;
            let ty = yv[target];
            let z = self.var();
            self.b.add(if ty { other[0] } else { other[1] }, Literal::pos(z));
            self.b.present(z, "split completion")?;
            self.cert[x] = Some(tv);
            self.cert[y] = Some(!ty);
            self.cert[z] = Some(true);
        }
        self.patch(chunks.remainder())
    }

    fn play_many(&mut self, watched: &[usize], pool: &[ClauseId]) -> Result<()> {
        let k = watched.len();
        let mut chunks = pool.chunks_exact(16);
        let mut vars = Vec::new();
        for c in &mut chunks {
            let v = self.var();
            for &id in &c[..8] {
                self.b.add(id, Literal::pos(v));
            }
            for &id in &c[8..] {
                self.b.add(id, Literal::neg(v));
            }
            vars.push((v, c));
        }
        let rest = chunks.remainder().to_vec();
        let mut groups: BTreeMap<Vec<bool>, Vec<(VarId, &[ClauseId])>> = BTreeMap::new();
        for &(v, c) in &vars {
            let vals = self.b.present(v, "top-level variable")?;
            let s: Vec<bool> = watched.iter().map(|&j| vals[j]).collect();
            groups.entry(s).or_default().push((v, c));
        }
        for (s, members) in groups {
            let ones: Vec<usize> = watched.iter().zip(&s).filter(|(_, &b)| b).map(|(&j, _)| j).collect();
            let zeros: Vec<usize> = watched.iter().zip(&s).filter(|(_, &b)| !b).map(|(&j, _)| j).collect();
            if ones.is_empty() || zeros.is_empty() {
                let common = !ones.is_empty();
                let y = self.var();
                for &(v, c) in &members {
                    let satisfied = if common { &c[..8] } else { &c[8..] };
                    for &id in satisfied {
                        self.b.add(id, Literal::pos(y));
                    }
                    self.cert[v] = Some(!common);
                }
                self.cert[y] = Some(true);
                self.b.present(y, format!("uniform group {}", bits(&s)))?;
                continue;
            }
            let t = ones.len();
            let (a, bb) = model0_sides(k, t);
            let w = split_fraction(&a, &bb);
            let scaled = &w * qi(members.len() as i64);
            let n1 = (scaled + q(1, 2)).floor().to_integer();
            let n1 = usize::try_from(n1).unwrap_or(0).min(members.len());
            let (first, second) = members.split_at(n1);
            let mut pool1 = Vec::new();
            for &(v, c) in first {
                self.cert[v] = Some(true);
                pool1.extend_from_slice(&c[8..]);
            }
            let mut pool2 = Vec::new();
            for &(v, c) in second {
                self.cert[v] = Some(false);
                pool2.extend_from_slice(&c[..8]);
            }
            self.play(&ones, &pool1)?;
            self.play(&zeros, &pool2)?;
        }
        self.patch(&rest)
    }
}

fn bits(s: &[bool]) -> String {
    s.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Largest `k` the model-0 adversary accepts.
pub const MODEL0_MAX_K: usize = 3;

/// Pool clauses per unit of `scale` at the top level.
fn model0_pool_size(k: usize, scale: usize) -> usize {
    match k {
        1 => 2 * scale,
        2 => 8 * scale,
        _ => 16 * scale,
    }
}

/// Forces every assignment of a max-of-`k` algorithm that sees only clause
/// names below `model0_target(k)` up to rounding slack.
pub fn run_maxsat_model0_adversary(
    k: usize,
    algorithm: &mut dyn MaxSatGameAlgorithm,
    scale: usize,
) -> Result<GameTranscript> {
    if algorithm.width() != k {
        return Err(Error::Malformed(format!(
            "algorithm width {} differs from k = {k}",
            algorithm.width()
        )));
    }
    if k == 0 || k > MODEL0_MAX_K {
        return Err(Error::Refused(format!("k = {k} is outside 1..={MODEL0_MAX_K}")));
    }
    if scale == 0 {
        return Err(Error::Malformed("scale must be positive".into()));
    }
    let mut b = Builder::new(algorithm, InputModel::Names);
    let pool: Vec<ClauseId> = (0..model0_pool_size(k, scale)).map(|_| b.new_clause(&[])).collect();
    let watched: Vec<usize> = (0..k).collect();
    let mut game = Model0 {
        b: &mut b,
        cert: Vec::new(),
    };
    game.play(&watched, &pool)?;
    let cert = game.cert;
    let target = model0_target(k);
    let transcript = b.finish(
        "maxsat-model0",
        params(&[("k", k.to_string()), ("scale", scale.to_string())]),
        cert,
        Some(target.clone()),
        Vec::new(),
    )?;
    let mut transcript = transcript;
    let slack = &transcript.summary.ratio - &target;
    transcript.summary.notes.push(format!(
        "target {target}; measured slack {slack} ({:.6})",
        to_f64(&slack)
    ));
    Ok(transcript)
}

/// `x_i` is tied to `y_i` by an equivalence and a unit clause on `y_i` is
/// chosen after every `x` has been assigned.
pub fn run_maxsat_model3_adversary(
    k: usize,
    n: usize,
    epsilon: &Rational,
    algorithm: &mut dyn MaxSatGameAlgorithm,
) -> Result<GameTranscript> {
    check_width(algorithm, k)?;
    if n < 2 || n % 2 != 0 {
        return Err(Error::Malformed(format!("n = {n} must be even and positive")));
    }
    if !epsilon.is_positive() {
        return Err(Error::Malformed("epsilon must be positive".into()));
    }
    let eps = to_f64(epsilon);
    if (k as f64).ln() >= 144.0 * eps * eps * n as f64 {
        return Err(Error::Refused(format!(
            "k = {k} is not below e^(144 eps^2 n) = {:.3}",
            (144.0 * eps * eps * n as f64).exp()
        )));
    }
    let m = n / 2;
    let mut b = Builder::new(algorithm, InputModel::Literals);
    let xs: Vec<VarId> = (0..m).map(|_| b.new_var()).collect();
    let ys: Vec<VarId> = (0..m).map(|_| b.new_var()).collect();
    for i in 0..m {
        b.new_clause(&[Literal::pos(xs[i]), Literal::neg(ys[i])]);
        b.new_clause(&[Literal::neg(xs[i]), Literal::pos(ys[i])]);
    }
    for &x in &xs {
        b.present(x, "")?;
    }
    let rows = branch_rows(&b, &xs);
    let (witness, agree) = search_witness(&rows, &|ag| ag.iter().map(|&a| m - a).max().unwrap_or(0));
    let disagree: Vec<usize> = agree.iter().map(|&a| m - a).collect();
    // Each branch keeps all three clauses only where it disagrees with A.
    let limit = qi(n as i64) / qi(4) + q(3, 2) * epsilon * qi(n as i64);
    if disagree.iter().any(|&d| qi(d as i64) >= limit) {
        return Err(Error::WitnessNotFound(format!(
            "disagreements {disagree:?}: need each below n/4 + 1.5 eps n = {limit}"
        )));
    }
    for i in 0..m {
        b.new_clause(&[Literal {
            variable: ys[i],
            positive: !witness[i],
        }]);
    }
    for &y in &ys {
        b.present(y, "")?;
    }
    let mut cert: Vec<Option<bool>> = witness.iter().map(|&a| Some(!a)).collect();
    cert.extend(witness.iter().map(|&a| Some(!a)));
    let bound = q(5, 6) + epsilon;
    b.finish(
        "maxsat-model3",
        params(&[
            ("k", k.to_string()),
            ("n", n.to_string()),
            ("epsilon", epsilon.to_string()),
        ]),
        cert,
        Some(bound),
        vec![format!("witness disagreements per assignment: {disagree:?}")],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversaries::protocol::{Complementary, MaxOfK, RandomAssignments};
    use crate::maxsat::{Johnson, Width2Johnson};

    #[test]
    fn targets() {
        assert_eq!(model0_target(1), q(1, 2));
        assert_eq!(model0_target(2), q(5, 8));
        assert_eq!(model0_target(3), q(23, 36));
        let (a, b) = model0_sides(3, 1);
        assert_eq!(split_fraction(&a, &b), q(5, 9));
    }

    #[test]
    fn model0_two_rounds_is_five_eighths() {
        let t = run_maxsat_model0_adversary(2, &mut Complementary::new(2), 1).unwrap();
        assert_eq!(t.summary.ratio, q(5, 8));
        assert_eq!(t.summary.certificate_value, qi(8));
        t.replay().unwrap();
    }

    #[test]
    fn model0_single_is_half() {
        let mut algo = MaxOfK::single(Box::new(Johnson::default()));
        let t = run_maxsat_model0_adversary(1, &mut algo, 10).unwrap();
        assert_eq!(t.summary.ratio, q(1, 2));
        t.replay().unwrap();
    }

    #[test]
    fn model0_three_is_below_two_thirds() {
        let t = run_maxsat_model0_adversary(3, &mut Complementary::new(3), 40).unwrap();
        assert!(t.summary.ratio < q(2, 3), "{}", t.summary.ratio);
        t.replay().unwrap();
        let t = run_maxsat_model0_adversary(3, &mut RandomAssignments::new(3, 7), 40).unwrap();
        assert!(t.summary.ratio < q(2, 3), "{}", t.summary.ratio);
    }

    #[test]
    fn two_variable_game_caps_at_three_quarters() {
        for p in [qi(1), q(3, 2), qi(2)] {
            let t = run_maxsat_two_variable_game(&mut Width2Johnson::new(p).unwrap()).unwrap();
            assert_eq!(t.summary.certificate_value, qi(4));
            assert!(t.summary.algorithm_value <= qi(3));
            t.replay().unwrap();
        }
        for seed in 0..8 {
            let t = run_maxsat_two_variable_game(&mut RandomAssignments::new(2, seed)).unwrap();
            assert_eq!(t.summary.algorithm_value, qi(3));
        }
    }

    #[test]
    fn equivalence_game() {
        let t = run_maxsat_equivalence_adversary(2, 40, &q(1, 10), &mut Width2Johnson::new(qi(2)).unwrap()).unwrap();
        assert!(t.summary.ratio < q(85, 100));
        t.replay().unwrap();
        let mut single = MaxOfK::single(Box::new(Johnson::default()));
        let t = run_maxsat_equivalence_adversary(1, 40, &q(1, 10), &mut single).unwrap();
        assert!(t.summary.ratio < q(3, 4) + q(1, 10));
    }

    #[test]
    fn equivalence_refuses_large_k() {
        let r = run_maxsat_equivalence_adversary(100, 10, &q(1, 10), &mut RandomAssignments::new(100, 0));
        assert!(matches!(r, Err(Error::Refused(_))));
    }

    #[test]
    fn model3_game() {
        let t = run_maxsat_model3_adversary(4, 60, &q(1, 20), &mut RandomAssignments::new(4, 3)).unwrap();
        assert!(t.summary.ratio < q(5, 6) + q(1, 20));
        t.replay().unwrap();
        let mut single = MaxOfK::single(Box::new(Johnson::default()));
        let t = run_maxsat_model3_adversary(1, 40, &q(1, 20), &mut single).unwrap();
        assert!(t.summary.ratio < q(5, 6) + q(1, 20));
        t.replay().unwrap();
    }

    #[test]
    fn witness_search_balances() {
        let rows = vec![vec![true; 10], vec![false; 10]];
        let (_, agree) = search_witness(&rows, &|ag| ag.iter().map(|&a| (2 * a).abs_diff(10)).max().unwrap());
        assert_eq!(agree, vec![5, 5]);
    }
}
