//! The recursive adversary against width-bounded online matching.
//!
//! Every online vertex is certified to one offline vertex that none of the
//! matchings of the current frame has touched, so the certificate is a
//! perfect matching while each algorithm matching stays near `n/2`.

use std::collections::{BTreeMap, BTreeSet};

use super::protocol::{Directive, MatchingGameAlgorithm};
use super::transcript::{Certificate, Decisions, FinalInstance, GameSummary, GameTranscript, Item, TurnRecord};
use crate::error::{Error, Result};
use crate::instances::enumerate::binomial;
use crate::instances::{BipartiteInstance, Matching};
use crate::rational::Rational;

/// How the adversary sizes its first stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WidthMode {
    /// Max-of-k: a frame with `j` matchings stops at fewer than `j+1` fresh vertices.
    MaxOfK,
    /// Branching allowed: every frame stops at fewer than `k+1` fresh vertices.
    Width,
}

/// `c_1 = 1`, `c_{j+1} = j+1 + sum_{m<=j} C(j, m-1) c_m`.
pub fn width_bound_constant(k: usize) -> u64 {
    let mut c = vec![0u64; k + 1];
    for j in 1..=k {
        let mut s = j as u64;
        for (m, cm) in c.iter().enumerate().take(j).skip(1) {
            s += binomial(j as u128 - 1, m as u128 - 1) as u64 * cm;
        }
        c[j] = s;
    }
    c[k]
}

struct Frame {
    matchings: BTreeSet<usize>,
    pending: Vec<(BTreeSet<usize>, Vec<usize>)>,
}

struct Game<'a> {
    algo: &'a mut dyn MatchingGameAlgorithm,
    k: usize,
    n: usize,
    mode: WidthMode,
    used: Vec<Vec<bool>>,
    matchings: Vec<Matching>,
    live: Vec<usize>,
    stack: Vec<Frame>,
    adjacency: Vec<Vec<usize>>,
    certificate: Matching,
    turns: Vec<TurnRecord>,
}

impl Game<'_> {
    fn turn(&self) -> usize {
        self.adjacency.len()
    }

    fn apply_directives(&mut self, neighbors: &[usize]) -> Result<()> {
        let turn = self.turn();
        let directives = self.algo.directives(turn, neighbors, self.live.len());
        for d in directives {
            match d {
                Directive::Branch(pos) => {
                    let &a = self
                        .live
                        .get(pos)
                        .ok_or_else(|| Error::protocol(turn, format!("branch from missing position {pos}")))?;
                    if self.live.len() >= self.k {
                        return Err(Error::protocol(turn, format!("branching exceeds width {}", self.k)));
                    }
                    let b = self.matchings.len();
                    self.matchings.push(self.matchings[a].clone());
                    self.used.push(self.used[a].clone());
                    self.live.push(b);
                    for f in &mut self.stack {
                        if f.matchings.contains(&a) {
                            f.matchings.insert(b);
                        }
                        for (s, _) in &mut f.pending {
                            if s.contains(&a) {
                                s.insert(b);
                            }
                        }
                    }
                }
                Directive::Cut(pos) => {
                    if pos >= self.live.len() || self.live.len() == 1 {
                        return Err(Error::protocol(turn, format!("cannot cut position {pos}")));
                    }
                    self.live.remove(pos);
                }
            }
        }
        Ok(())
    }

    /// Presents one online vertex and certifies it to `pick(after-decisions)`.
    fn present(&mut self, neighbors: Vec<usize>, note: &str, pick: impl Fn(&Self) -> Option<usize>) -> Result<usize> {
        let turn = self.turn();
        self.apply_directives(&neighbors)?;
        let available: Vec<Vec<usize>> = self
            .live
            .iter()
            .map(|&m| neighbors.iter().copied().filter(|&u| !self.used[m][u]).collect())
            .collect();
        let decisions = self.algo.on_arrival(turn, &neighbors, &available);
        if decisions.len() != self.live.len() {
            return Err(Error::protocol(
                turn,
                format!("{} decisions for {} live matchings", decisions.len(), self.live.len()),
            ));
        }
        let mut choices = Vec::with_capacity(decisions.len());
        for ((&m, avail), d) in self.live.iter().zip(&available).zip(&decisions) {
            if let Some(u) = *d {
                if !neighbors.contains(&u) {
                    return Err(Error::protocol(turn, format!("{u} is not a neighbor")));
                }
                if !avail.contains(&u) {
                    return Err(Error::protocol(turn, format!("{u} is already used by matching {m}")));
                }
            }
            choices.push((m, *d));
        }
        for &(m, d) in &choices {
            if let Some(u) = d {
                self.used[m][u] = true;
                self.matchings[m].insert(turn, u);
            }
        }
        self.adjacency.push(neighbors);
        let c = pick(self).ok_or_else(|| Error::Invariant(format!("no vertex to certify at turn {turn}")))?;
        self.certificate.insert(turn, c);
        self.turns.push(TurnRecord {
            turn,
            item: Item::Online {
                neighbors: self.adjacency[turn].clone(),
            },
            decisions: Decisions::Matches { choices },
            note: format!("{note}; depth {}; certify {c}", self.stack.len()),
        });
        Ok(c)
    }

    fn fresh(&self, frame: &BTreeSet<usize>, avail: &[usize]) -> Vec<usize> {
        avail
            .iter()
            .copied()
            .filter(|&u| frame.iter().all(|&m| !self.used[m][u]))
            .collect()
    }

    fn play(&mut self, matchings: BTreeSet<usize>, mut avail: Vec<usize>) -> Result<()> {
        self.stack.push(Frame {
            matchings,
            pending: Vec::new(),
        });
        let top = self.stack.len() - 1;
        loop {
            let frame = self.stack[top].matchings.clone();
            let threshold = match self.mode {
                WidthMode::MaxOfK => frame.len() + 1,
                WidthMode::Width => self.k + 1,
            };
            if self.fresh(&frame, &avail).len() < threshold {
                break;
            }
            let c = self.present(avail.clone(), "stage 1", |g| {
                let f = &g.stack[top].matchings;
                avail.iter().copied().find(|&u| f.iter().all(|&m| !g.used[m][u]))
            })?;
            avail.retain(|&u| u != c);
        }
        let frame = self.stack[top].matchings.clone();
        for v in self.fresh(&frame, &avail) {
            self.present(vec![v], "leftover", |_| Some(v))?;
            avail.retain(|&u| u != v);
        }
        let frame = self.stack[top].matchings.clone();
        let mut classes: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for &u in &avail {
            let sig: Vec<usize> = frame.iter().copied().filter(|&m| self.used[m][u]).collect();
            classes.entry(sig).or_default().push(u);
        }
        let mut finish = Vec::new();
        for (sig, verts) in classes {
            if sig.len() == frame.len() {
                finish.extend(verts);
            } else {
                let rest: BTreeSet<usize> = frame.iter().copied().filter(|m| !sig.contains(m)).collect();
                self.stack[top].pending.push((rest, verts));
            }
        }
        while !self.stack[top].pending.is_empty() {
            let (sub, verts) = self.stack[top].pending.remove(0);
            self.play(sub, verts)?;
        }
        finish.sort_unstable();
        for v in finish {
            self.present(vec![v], "finish", |_| Some(v))?;
        }
        self.stack.pop();
        Ok(())
    }
}

/// Plays the adversary against `algorithm` on `n` offline vertices.
pub fn run_width_matching_adversary(
    k: usize,
    n: usize,
    algorithm: &mut dyn MatchingGameAlgorithm,
    mode: WidthMode,
) -> Result<GameTranscript> {
    if k == 0 || n == 0 {
        return Err(Error::Malformed("width game needs k >= 1 and n >= 1".into()));
    }
    if algorithm.width() > k {
        return Err(Error::protocol(
            0,
            format!("algorithm width {} exceeds {k}", algorithm.width()),
        ));
    }
    let init = algorithm.initial_matchings();
    if init == 0 || init > k || (mode == WidthMode::MaxOfK && init != algorithm.width()) {
        return Err(Error::protocol(0, format!("{init} initial matchings are not allowed")));
    }
    let name = algorithm.name();
    let mut game = Game {
        algo: algorithm,
        k,
        n,
        mode,
        used: vec![vec![false; n]; init],
        matchings: vec![Matching::new(); init],
        live: (0..init).collect(),
        stack: Vec::new(),
        adjacency: Vec::new(),
        certificate: Matching::new(),
        turns: Vec::new(),
    };
    game.play((0..init).collect(), (0..n).collect())?;
    let instance = BipartiteInstance::new(n, game.adjacency.clone())?;
    game.certificate.validate(&instance)?;
    if game.certificate.size() != game.n {
        return Err(Error::Invariant("certificate is not perfect".into()));
    }
    let best = game.matchings.iter().map(Matching::size).max().unwrap_or(0);
    let c = width_bound_constant(k);
    let bound = Rational::new((n as u64 + 2 * c).into(), (2 * n as u64).into());
    let mut params = BTreeMap::new();
    params.insert("k".into(), k.to_string());
    params.insert("n".into(), n.to_string());
    params.insert("mode".into(), format!("{mode:?}"));
    let mut notes = vec![format!("c_k = {c}")];
    if game.matchings.len() > init {
        notes.push(format!("{} matchings after branching", game.matchings.len()));
    }
    Ok(GameTranscript {
        game: "width-matching".into(),
        algorithm: name,
        params,
        turns: game.turns,
        certificate: Certificate::Matching {
            matching: game.certificate,
        },
        final_instance: FinalInstance::Bipartite { instance },
        summary: GameSummary {
            algorithm_value: Rational::from_integer(best.into()),
            certificate_value: Rational::from_integer(n.into()),
            ratio: Rational::new(best.into(), n.into()),
            bound: Some(bound),
            notes,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversaries::protocol::{Balance, GreedyLow};

    #[test]
    fn constants() {
        assert_eq!(width_bound_constant(1), 1);
        assert_eq!(width_bound_constant(2), 3);
        assert_eq!(width_bound_constant(3), 10);
    }

    #[test]
    fn greedy_is_held_to_half() {
        let t = run_width_matching_adversary(1, 100, &mut GreedyLow { k: 1 }, WidthMode::MaxOfK).unwrap();
        assert!(t.summary.algorithm_value <= Rational::from_integer(51.into()));
        t.replay().unwrap();
    }

    #[test]
    fn balance_two() {
        let t = run_width_matching_adversary(2, 50, &mut Balance { k: 2 }, WidthMode::MaxOfK).unwrap();
        assert!(t.summary.algorithm_value <= Rational::from_integer(28.into()));
    }
}
