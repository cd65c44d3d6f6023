use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{serde_rational, Rational};

pub type VarId = usize;
pub type ClauseId = usize;

/// A variable or its negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub variable: VarId,
    pub positive: bool,
}

impl Literal {
    pub fn pos(variable: VarId) -> Self {
        Literal {
            variable,
            positive: true,
        }
    }

    pub fn neg(variable: VarId) -> Self {
        Literal {
            variable,
            positive: false,
        }
    }

    pub fn negated(self) -> Self {
        Literal {
            variable: self.variable,
            positive: !self.positive,
        }
    }

    /// Truth value of the literal when its variable takes `value`.
    pub fn eval(self, value: bool) -> bool {
        self.positive == value
    }
}

impl std::fmt::Display for Literal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.positive {
            write!(f, "x{}", self.variable)
        } else {
            write!(f, "~x{}", self.variable)
        }
    }
}

/// A weighted disjunction of literals over distinct variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub id: ClauseId,
    #[serde(with = "serde_rational")]
    pub weight: Rational,
    /// Sorted by variable id.
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(id: ClauseId, weight: Rational, mut literals: Vec<Literal>) -> Result<Self> {
        if literals.is_empty() {
            return Err(Error::Malformed(format!("clause {id} is empty")));
        }
        if weight.is_negative() {
            return Err(Error::Malformed(format!("clause {id} has negative weight")));
        }
        literals.sort();
        if literals.windows(2).any(|w| w[0].variable == w[1].variable) {
            return Err(Error::Malformed(format!("clause {id} mentions a variable twice")));
        }
        Ok(Clause { id, weight, literals })
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn literal_of(&self, variable: VarId) -> Option<Literal> {
        self.literals.iter().copied().find(|l| l.variable == variable)
    }

    pub fn is_satisfied_by(&self, assignment: &Assignment) -> bool {
        self.literals
            .iter()
            .any(|l| assignment.get(l.variable).is_some_and(|v| l.eval(v)))
    }
}

/// A weighted CNF formula whose variables arrive in the order of `variables`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfInstance {
    variables: Vec<VarId>,
    clauses: Vec<Clause>,
}

impl CnfInstance {
    /// Builds an instance over variables `0..n_vars` arriving in index order.
    pub fn new(n_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        Self::with_order((0..n_vars).collect(), clauses)
    }

    /// Builds an instance whose arrival order is `variables`, a permutation of `0..len`.
    pub fn with_order(variables: Vec<VarId>, clauses: Vec<Clause>) -> Result<Self> {
        let n = variables.len();
        let mut seen = vec![false; n];
        for &v in &variables {
            if v >= n || seen[v] {
                return Err(Error::Malformed(format!(
                    "variable order is not a permutation of 0..{n}"
                )));
            }
            seen[v] = true;
        }
        let mut ids = std::collections::HashSet::new();
        for c in &clauses {
            if !ids.insert(c.id) {
                return Err(Error::Malformed(format!("duplicate clause id {}", c.id)));
            }
            if c.literals.is_empty() {
                return Err(Error::Malformed(format!("clause {} is empty", c.id)));
            }
            if let Some(l) = c.literals.iter().find(|l| l.variable >= n) {
                return Err(Error::Malformed(format!(
                    "clause {} mentions unknown variable {}",
                    c.id, l.variable
                )));
            }
        }
        Ok(CnfInstance { variables, clauses })
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    /// Variables in arrival order.
    pub fn variables(&self) -> &[VarId] {
        &self.variables
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, id: ClauseId) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.id == id)
    }

    pub fn total_weight(&self) -> Rational {
        self.clauses.iter().map(|c| c.weight.clone()).sum()
    }

    /// Weight of the clauses satisfied by a (possibly partial) assignment.
    pub fn satisfied_weight(&self, assignment: &Assignment) -> Rational {
        self.clauses
            .iter()
            .filter(|c| c.is_satisfied_by(assignment))
            .map(|c| c.weight.clone())
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// For each variable, the `(clause index, literal)` pairs in which it occurs.
    pub fn occurrences(&self) -> Vec<Vec<(usize, Literal)>> {
        let mut occ = vec![Vec::new(); self.n_vars()];
        for (idx, c) in self.clauses.iter().enumerate() {
            for &l in &c.literals {
                occ[l.variable].push((idx, l));
            }
        }
        occ
    }

    /// Same formula with clauses listed in a different order.
    pub fn with_clause_order(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.clauses.len() {
            return Err(Error::Malformed("clause permutation has wrong length".into()));
        }
        let clauses = perm.iter().map(|&i| self.clauses[i].clone()).collect();
        Self::with_order(self.variables.clone(), clauses)
    }

    /// Same formula with variable `v` renamed to `perm[v]`.
    pub fn renamed(&self, perm: &[VarId]) -> Result<Self> {
        if perm.len() != self.n_vars() {
            return Err(Error::Malformed("variable renaming has wrong length".into()));
        }
        let clauses = self
            .clauses
            .iter()
            .map(|c| {
                let lits = c
                    .literals
                    .iter()
                    .map(|l| Literal {
                        variable: perm[l.variable],
                        positive: l.positive,
                    })
                    .collect();
                Clause::new(c.id, c.weight.clone(), lits)
            })
            .collect::<Result<Vec<_>>>()?;
        let order = self.variables.iter().map(|&v| perm[v]).collect();
        Self::with_order(order, clauses)
    }
}

/// Truth values indexed by variable id; `None` means unassigned.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn empty(n_vars: usize) -> Self {
        Assignment {
            values: vec![None; n_vars],
        }
    }

    pub fn from_bits(n_vars: usize, bits: u64) -> Self {
        Assignment {
            values: (0..n_vars).map(|v| Some(bits >> v & 1 == 1)).collect(),
        }
    }

    pub fn from_values(values: &[bool]) -> Self {
        Assignment {
            values: values.iter().map(|&b| Some(b)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: VarId) -> Option<bool> {
        self.values.get(v).copied().flatten()
    }

    pub fn set(&mut self, v: VarId, value: bool) {
        if v >= self.values.len() {
            self.values.resize(v + 1, None);
        }
        self.values[v] = Some(value);
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    pub fn values(&self) -> &[Option<bool>] {
        &self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    #[test]
    fn clause_rejects_repeated_variable() {
        assert!(Clause::new(0, qi(1), vec![Literal::pos(0), Literal::neg(0)]).is_err());
        assert!(Clause::new(0, qi(1), vec![]).is_err());
        assert!(Clause::new(0, qi(-1), vec![Literal::pos(0)]).is_err());
    }

    #[test]
    fn instance_validates_ids() {
        let c = Clause::new(0, qi(1), vec![Literal::pos(3)]).unwrap();
        assert!(CnfInstance::new(2, vec![c.clone()]).is_err());
        let d = Clause::new(0, qi(1), vec![Literal::pos(1)]).unwrap();
        assert!(CnfInstance::new(2, vec![d.clone(), d]).is_err());
        assert!(CnfInstance::with_order(vec![0, 0], vec![]).is_err());
    }

    #[test]
    fn satisfied_weight_counts_partial() {
        let inst = CnfInstance::new(
            2,
            vec![
                Clause::new(0, qi(2), vec![Literal::pos(0), Literal::neg(1)]).unwrap(),
                Clause::new(1, qi(3), vec![Literal::pos(1)]).unwrap(),
            ],
        )
        .unwrap();
        let mut a = Assignment::empty(2);
        assert_eq!(inst.satisfied_weight(&a), qi(0));
        a.set(1, false);
        assert_eq!(inst.satisfied_weight(&a), qi(2));
    }
}
