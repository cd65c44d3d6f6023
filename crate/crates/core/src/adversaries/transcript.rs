//! Game records: one JSON line per turn, replayable against the final instance.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::protocol::DataItem;
use crate::error::{Error, Result};
use crate::instances::{
    optimal_maxsat, view_data_item, Assignment, BipartiteInstance, CnfInstance, DataItemView, Matching,
};
use crate::rational::{serde_rational, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Item {
    /// An online vertex of the width game; it becomes online vertex `turn`.
    Online {
        neighbors: Vec<usize>,
    },
    /// A priority data item; it becomes online vertex `turn`.
    Priority {
        item: DataItem,
    },
    Variable {
        view: DataItemView,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Decisions {
    /// `(matching id, choice)` for every live matching.
    Matches {
        choices: Vec<(usize, Option<usize>)>,
    },
    Single {
        choice: Option<usize>,
    },
    /// One value per assignment.
    Values {
        values: Vec<bool>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TurnRecord {
    pub turn: usize,
    pub item: Item,
    pub decisions: Decisions,
    /// Adversary bookkeeping for this turn.
    #[serde(default)]
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Matching { matching: Matching },
    Assignment { assignment: Assignment },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FinalInstance {
    Bipartite { instance: BipartiteInstance },
    Cnf { instance: CnfInstance },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameSummary {
    /// Best value over the algorithm's parallel solutions.
    #[serde(with = "serde_rational")]
    pub algorithm_value: Rational,
    #[serde(with = "serde_rational")]
    pub certificate_value: Rational,
    #[serde(with = "serde_rational")]
    pub ratio: Rational,
    /// The ratio ceiling the construction promises.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub bound: Option<Rational>,
    #[serde(default)]
    pub notes: Vec<String>,
}

mod opt_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::rational::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s}"))))
            .transpose()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameTranscript {
    pub game: String,
    pub algorithm: String,
    pub params: BTreeMap<String, String>,
    pub turns: Vec<TurnRecord>,
    pub certificate: Certificate,
    pub final_instance: FinalInstance,
    pub summary: GameSummary,
}

#[derive(Serialize, Deserialize)]
struct Header {
    game: String,
    algorithm: String,
    params: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct Footer {
    certificate: Certificate,
    final_instance: FinalInstance,
    summary: GameSummary,
}

impl GameTranscript {
    /// Header line, one line per turn, footer line.
    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = serde_json::to_string(&Header {
            game: self.game.clone(),
            algorithm: self.algorithm.clone(),
            params: self.params.clone(),
        })?;
        out.push('\n');
        for t in &self.turns {
            out.push_str(&serde_json::to_string(t)?);
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&Footer {
            certificate: self.certificate.clone(),
            final_instance: self.final_instance.clone(),
            summary: self.summary.clone(),
        })?);
        out.push('\n');
        Ok(out)
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        if lines.len() < 2 {
            return Err(Error::parse(
                lines.len() + 1,
                1,
                "transcript needs a header and a footer",
            ));
        }
        let at = |i: usize, e: serde_json::Error| Error::parse(i + 1, e.column(), e.to_string());
        let header: Header = serde_json::from_str(lines[0]).map_err(|e| at(0, e))?;
        let last = lines.len() - 1;
        let footer: Footer = serde_json::from_str(lines[last]).map_err(|e| at(last, e))?;
        let turns = lines[1..last]
            .iter()
            .enumerate()
            .map(|(i, l)| serde_json::from_str(l).map_err(|e| at(i + 1, e)))
            .collect::<Result<Vec<TurnRecord>>>()?;
        Ok(GameTranscript {
            game: header.game,
            algorithm: header.algorithm,
            params: header.params,
            turns,
            certificate: footer.certificate,
            final_instance: footer.final_instance,
            summary: footer.summary,
        })
    }

    /// Re-derives every claim of the transcript from its turns and final instance.
    pub fn replay(&self) -> Result<()> {
        let (alg, cert) = match &self.final_instance {
            FinalInstance::Bipartite { instance } => self.replay_bipartite(instance)?,
            FinalInstance::Cnf { instance } => self.replay_cnf(instance)?,
        };
        if alg != self.summary.algorithm_value {
            return Err(Error::Invariant(format!(
                "algorithm value {} replays as {alg}",
                self.summary.algorithm_value
            )));
        }
        if cert != self.summary.certificate_value {
            return Err(Error::Invariant(format!(
                "certificate value {} replays as {cert}",
                self.summary.certificate_value
            )));
        }
        if !cert.is_zero() && &alg / &cert != self.summary.ratio {
            return Err(Error::Invariant("ratio does not match the replayed values".into()));
        }
        Ok(())
    }

    fn replay_bipartite(&self, g: &BipartiteInstance) -> Result<(Rational, Rational)> {
        if self.turns.len() != g.n_online() {
            return Err(Error::Invariant("one turn per online vertex expected".into()));
        }
        let mut matchings: BTreeMap<usize, Matching> = BTreeMap::new();
        for t in &self.turns {
            let neighbors = match &t.item {
                Item::Online { neighbors } => neighbors.clone(),
                Item::Priority { item } => item.neighbors.clone(),
                Item::Variable { .. } => return Err(Error::Invariant("variable item in a matching game".into())),
            };
            let mut sorted = neighbors.clone();
            sorted.sort_unstable();
            if g.neighbors(t.turn) != sorted.as_slice() {
                return Err(Error::Invariant(format!(
                    "turn {} differs from the final instance",
                    t.turn
                )));
            }
            let choices = match &t.decisions {
                Decisions::Matches { choices } => choices.clone(),
                Decisions::Single { choice } => vec![(0, *choice)],
                Decisions::Values { .. } => return Err(Error::Invariant("truth values in a matching game".into())),
            };
            for (id, choice) in choices {
                let m = matchings.entry(id).or_default();
                if let Some(u) = choice {
                    m.insert(t.turn, u);
                }
            }
        }
        let mut best = 0;
        for m in matchings.values() {
            m.validate(g)?;
            best = best.max(m.size());
        }
        let Certificate::Matching { matching } = &self.certificate else {
            return Err(Error::Invariant("matching game without a matching certificate".into()));
        };
        matching.validate(g)?;
        Ok((
            Rational::from_integer(best.into()),
            Rational::from_integer(matching.size().into()),
        ))
    }

    fn replay_cnf(&self, inst: &CnfInstance) -> Result<(Rational, Rational)> {
        let mut assignments: Vec<Assignment> = Vec::new();
        for t in &self.turns {
            let Item::Variable { view } = &t.item else {
                return Err(Error::Invariant("non-variable item in a max-sat game".into()));
            };
            if &view_data_item(inst, view.variable, view.model)? != view {
                return Err(Error::Invariant(format!(
                    "view of variable {} differs from the final instance",
                    view.variable
                )));
            }
            let Decisions::Values { values } = &t.decisions else {
                return Err(Error::Invariant("max-sat turn without truth values".into()));
            };
            if assignments.is_empty() {
                assignments = vec![Assignment::empty(inst.n_vars()); values.len()];
            }
            if values.len() != assignments.len() {
                return Err(Error::Invariant("assignment count changed mid-game".into()));
            }
            for (a, &b) in assignments.iter_mut().zip(values) {
                a.set(view.variable, b);
            }
        }
        let best = assignments
            .iter()
            .map(|a| inst.satisfied_weight(a))
            .max()
            .unwrap_or_else(Rational::zero);
        let Certificate::Assignment { assignment } = &self.certificate else {
            return Err(Error::Invariant(
                "max-sat game without an assignment certificate".into(),
            ));
        };
        let cert = inst.satisfied_weight(assignment);
        if inst.n_vars() <= 20 {
            let opt = optimal_maxsat(inst)?.0;
            if opt != cert {
                return Err(Error::Invariant(format!("certificate {cert} is not optimal ({opt})")));
            }
        } else if cert != inst.total_weight() {
            return Err(Error::Invariant("certificate does not satisfy every clause".into()));
        }
        Ok((best, cert))
    }
}
