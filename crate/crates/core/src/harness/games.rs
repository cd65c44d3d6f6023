//! Named adversary/algorithm pairings for the game driver.

use std::time::Instant;

use super::report::RatioReport;
use crate::adversaries::*;
use crate::error::{Error, Result};
use crate::maxsat::{GreedyWeight, Johnson, Proportional, Width2Johnson};
use crate::rational::{q, Rational};

/// Parameters shared by all games; each game reads the ones it needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameParams {
    pub k: usize,
    pub n: usize,
    pub epsilon: Rational,
    pub scale: usize,
    pub seed: u64,
    /// Parameter of the two-assignment Johnson variant.
    pub p: Rational,
}

impl Default for GameParams {
    fn default() -> Self {
        GameParams {
            k: 2,
            n: 20,
            epsilon: q(1, 10),
            scale: 1,
            seed: 0,
            p: q(3, 2),
        }
    }
}

pub const GAMES: [&str; 7] = [
    "width",
    "max-of-k",
    "priority",
    "maxsat-equivalence",
    "maxsat-two-variable",
    "maxsat-model0",
    "maxsat-model3",
];

pub const MATCHING_PLAYERS: [&str; 6] = [
    "greedy-low",
    "greedy-high",
    "greedy-random",
    "balance",
    "staggered",
    "branching-greedy",
];

pub const PRIORITY_PLAYERS: [&str; 7] = [
    "priority-greedy-low",
    "priority-greedy-high",
    "fewest-available",
    "always-reject",
    "alternating",
    "prio-one-rand",
    "degree-based",
];

pub const MAXSAT_PLAYERS: [&str; 6] = [
    "johnson",
    "greedy-weight",
    "proportional",
    "width2-johnson",
    "complementary",
    "random",
];

/// Scripted per-turn decisions for the matching games.
#[derive(Clone, Debug)]
pub struct ScriptedMatching {
    k: usize,
    turns: Vec<Vec<Option<usize>>>,
}

impl ScriptedMatching {
    /// One line per arrival, one token per matching: an offline index or `-`.
    pub fn parse(k: usize, text: &str) -> Result<Self> {
        let mut turns = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| match t {
                    "-" => Ok(None),
                    _ => t
                        .parse()
                        .map(Some)
                        .map_err(|_| Error::parse(i + 1, 1, format!("bad decision {t:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != k {
                return Err(Error::parse(i + 1, 1, format!("expected {k} decisions")));
            }
            turns.push(row);
        }
        Ok(ScriptedMatching { k, turns })
    }
}

impl MatchingGameAlgorithm for ScriptedMatching {
    fn name(&self) -> String {
        "scripted".into()
    }

    fn width(&self) -> usize {
        self.k
    }

    fn on_arrival(&mut self, turn: usize, _: &[usize], available: &[Vec<usize>]) -> Vec<Option<usize>> {
        self.turns
            .get(turn)
            .cloned()
            .unwrap_or_else(|| vec![None; available.len()])
    }
}

pub fn matching_player(name: &str, params: &GameParams) -> Result<Box<dyn MatchingGameAlgorithm>> {
    let k = params.k;
    Ok(match name {
        "greedy-low" => Box::new(GreedyLow { k }),
        "greedy-high" => Box::new(GreedyHigh { k }),
        "greedy-random" => Box::new(GreedyRandom::new(k, params.seed)),
        "balance" => Box::new(Balance { k }),
        "staggered" => Box::new(Staggered { k }),
        "branching-greedy" => Box::new(BranchingGreedy { k, every: 3 }),
        _ => return Err(Error::Malformed(format!("unknown matching player {name:?}"))),
    })
}

pub fn priority_player(name: &str) -> Result<Box<dyn PriorityAlgorithm>> {
    Ok(match name {
        "priority-greedy-low" => Box::new(PriorityGreedyLow),
        "priority-greedy-high" => Box::new(PriorityGreedyHigh),
        "fewest-available" => Box::new(FewestAvailable),
        "always-reject" => Box::new(AlwaysReject),
        "alternating" => Box::new(AlternatingPriority),
        "prio-one-rand" => Box::new(PrioOneRand),
        "degree-based" => Box::new(DegreeBased),
        _ => return Err(Error::Malformed(format!("unknown priority player {name:?}"))),
    })
}

pub fn maxsat_player(name: &str, params: &GameParams) -> Result<Box<dyn MaxSatGameAlgorithm>> {
    let k = params.k;
    let copies = |f: &dyn Fn(u64) -> Box<dyn crate::maxsat::OnlineAssigner>| -> Box<dyn MaxSatGameAlgorithm> {
        Box::new(MaxOfK {
            members: (0..k as u64).map(f).collect(),
        })
    };
    Ok(match name {
        "johnson" => copies(&|_| Box::new(Johnson::new())),
        "greedy-weight" => copies(&|_| Box::new(GreedyWeight::default())),
        "proportional" => copies(&|i| Box::new(Proportional::new(params.seed.wrapping_add(i)))),
        "width2-johnson" => Box::new(Width2Johnson::new(params.p.clone())?),
        "complementary" => Box::new(Complementary::new(k)),
        "random" => Box::new(RandomAssignments::new(k, params.seed)),
        _ => return Err(Error::Malformed(format!("unknown max-sat player {name:?}"))),
    })
}

/// A finished, replay-verified game.
#[derive(Clone, Debug)]
pub struct GameOutcome {
    pub transcript: GameTranscript,
    pub report: RatioReport,
}

/// Plays `game` against the named player (or a scripted one), then replays
/// the transcript before reporting.
pub fn run_game(
    game: &str,
    player: &str,
    params: &GameParams,
    script: Option<ScriptedMatching>,
) -> Result<GameOutcome> {
    let start = Instant::now();
    let transcript = match game {
        "width" | "max-of-k" => {
            let mut algo: Box<dyn MatchingGameAlgorithm> = match script {
                Some(s) => Box::new(s),
                None => matching_player(player, params)?,
            };
            let mode = if game == "width" {
                WidthMode::Width
            } else {
                WidthMode::MaxOfK
            };
            run_width_matching_adversary(params.k, params.n, algo.as_mut(), mode)?
        }
        "priority" => run_priority_adversary(params.n, priority_player(player)?.as_mut())?,
        "maxsat-equivalence" => run_maxsat_equivalence_adversary(
            params.k,
            params.n,
            &params.epsilon,
            maxsat_player(player, params)?.as_mut(),
        )?,
        "maxsat-two-variable" => {
            let two = GameParams { k: 2, ..params.clone() };
            run_maxsat_two_variable_game(maxsat_player(player, &two)?.as_mut())?
        }
        "maxsat-model0" => {
            run_maxsat_model0_adversary(params.k, maxsat_player(player, params)?.as_mut(), params.scale)?
        }
        "maxsat-model3" => run_maxsat_model3_adversary(
            params.k,
            params.n,
            &params.epsilon,
            maxsat_player(player, params)?.as_mut(),
        )?,
        _ => {
            return Err(Error::Malformed(format!(
                "unknown game {game:?}; expected one of {GAMES:?}"
            )))
        }
    };
    transcript.replay()?;
    let n = transcript.turns.len();
    let report = RatioReport::new(
        format!("{game}/{}", transcript.algorithm),
        n,
        transcript.summary.ratio.clone(),
    )
    .with_time(start.elapsed());
    Ok(GameOutcome { transcript, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_named_player_runs() {
        let params = GameParams {
            k: 2,
            n: 21,
            ..GameParams::default()
        };
        for p in MATCHING_PLAYERS {
            run_game(
                "width",
                p,
                &GameParams {
                    n: 30,
                    ..params.clone()
                },
                None,
            )
            .unwrap();
        }
        for p in PRIORITY_PLAYERS {
            run_game("priority", p, &GameParams { n: 9, ..params.clone() }, None).unwrap();
        }
        for p in MAXSAT_PLAYERS {
            run_game("maxsat-model0", p, &params, None).unwrap();
            run_game(
                "maxsat-equivalence",
                p,
                &GameParams {
                    n: 40,
                    ..params.clone()
                },
                None,
            )
            .unwrap();
        }
    }

    #[test]
    fn scripted_protocol_violation_is_reported() {
        let script = ScriptedMatching::parse(1, "7\n").unwrap();
        let params = GameParams {
            k: 1,
            n: 4,
            ..GameParams::default()
        };
        let err = run_game("width", "scripted", &params, Some(script)).unwrap_err();
        assert!(matches!(err, Error::Protocol { turn: 0, .. }), "{err:?}");
    }

    #[test]
    fn priority_report() {
        let out = run_game(
            "priority",
            "fewest-available",
            &GameParams {
                n: 21,
                ..GameParams::default()
            },
            None,
        )
        .unwrap();
        assert!(out.report.ratio <= q(11, 21));
    }
}
