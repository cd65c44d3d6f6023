//! Per-variable data items under the four max-sat input models.

use serde::{Deserialize, Serialize};

use super::cnf::{ClauseId, CnfInstance, Literal, VarId};
use crate::error::{Error, Result};
use crate::rational::{serde_rational, Rational};

/// How much of each clause a variable's data item reveals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum InputModel {
    /// Clause names and weights.
    Names = 0,
    /// Plus clause lengths.
    Lengths = 1,
    /// Plus the names of the other variables in each clause.
    Variables = 2,
    /// Plus the signs of those variables.
    Literals = 3,
}

impl InputModel {
    pub fn from_level(level: u8) -> Result<Self> {
        match level {
            0 => Ok(InputModel::Names),
            1 => Ok(InputModel::Lengths),
            2 => Ok(InputModel::Variables),
            3 => Ok(InputModel::Literals),
            _ => Err(Error::Malformed(format!("input model {level} does not exist"))),
        }
    }

    pub fn level(self) -> u8 {
        self as u8
    }
}

/// One clause as seen from inside a variable's data item.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseView {
    pub clause: ClauseId,
    #[serde(with = "serde_rational")]
    pub weight: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    /// The other variables of the clause, sorted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub others: Option<Vec<VarId>>,
    /// The other literals of the clause, sorted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other_literals: Option<Vec<Literal>>,
}

impl ClauseView {
    fn project(&self, model: InputModel) -> ClauseView {
        ClauseView {
            clause: self.clause,
            weight: self.weight.clone(),
            length: if model >= InputModel::Lengths {
                self.length
            } else {
                None
            },
            others: if model >= InputModel::Variables {
                self.others.clone()
            } else {
                None
            },
            other_literals: if model >= InputModel::Literals {
                self.other_literals.clone()
            } else {
                None
            },
        }
    }
}

/// The data item of one variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataItemView {
    pub model: InputModel,
    pub variable: VarId,
    pub positive_occurrences: Vec<ClauseView>,
    pub negative_occurrences: Vec<ClauseView>,
}

impl DataItemView {
    /// Drops every field not visible under `model`.
    pub fn project(&self, model: InputModel) -> Result<DataItemView> {
        if model > self.model {
            return Err(Error::Malformed(format!(
                "cannot project a model {} view up to model {}",
                self.model.level(),
                model.level()
            )));
        }
        Ok(DataItemView {
            model,
            variable: self.variable,
            positive_occurrences: self.positive_occurrences.iter().map(|c| c.project(model)).collect(),
            negative_occurrences: self.negative_occurrences.iter().map(|c| c.project(model)).collect(),
        })
    }

    /// All occurrences with their polarity.
    pub fn occurrences(&self) -> impl Iterator<Item = (&ClauseView, bool)> {
        self.positive_occurrences
            .iter()
            .map(|c| (c, true))
            .chain(self.negative_occurrences.iter().map(|c| (c, false)))
    }
}

/// The data item for `variable` under `model`.
pub fn view_data_item(instance: &CnfInstance, variable: VarId, model: InputModel) -> Result<DataItemView> {
    if variable >= instance.n_vars() {
        return Err(Error::Malformed(format!("unknown variable {variable}")));
    }
    let mut full = DataItemView {
        model: InputModel::Literals,
        variable,
        positive_occurrences: Vec::new(),
        negative_occurrences: Vec::new(),
    };
    for clause in instance.clauses() {
        let Some(lit) = clause.literal_of(variable) else {
            continue;
        };
        let other_literals: Vec<Literal> = clause
            .literals
            .iter()
            .copied()
            .filter(|l| l.variable != variable)
            .collect();
        let view = ClauseView {
            clause: clause.id,
            weight: clause.weight.clone(),
            length: Some(clause.len()),
            others: Some(other_literals.iter().map(|l| l.variable).collect()),
            other_literals: Some(other_literals),
        };
        if lit.positive {
            full.positive_occurrences.push(view);
        } else {
            full.negative_occurrences.push(view);
        }
    }
    full.project(model)
}
