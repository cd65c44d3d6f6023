//! Moving a feasible point of a linear system to an extreme point, exactly.
//!
//! The system is `A_eq x = b_eq`, `A_le x <= b_le`, `x >= 0`. Starting from a
//! feasible point we repeatedly pick a direction in the null space of the
//! tight constraints restricted to the support, and walk until a variable
//! hits zero or a slack inequality becomes tight. Each walk shrinks the
//! support or raises the rank of the tight set, so the loop ends at a point
//! whose support columns are linearly independent, i.e. a vertex.
//!
//! The entering direction is always the lowest-index free column, which
//! makes the result a deterministic function of the input.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Row `coefficients . x  (= or <=)  rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub coefficients: Vec<Rational>,
    pub rhs: Rational,
}

impl Row {
    pub fn new(coefficients: Vec<Rational>, rhs: Rational) -> Self {
        Row { coefficients, rhs }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.coefficients
            .iter()
            .zip(x)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, v)| a * v)
            .fold(Rational::zero(), |s, t| s + t)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearSystem {
    pub n_vars: usize,
    pub equalities: Vec<Row>,
    pub inequalities: Vec<Row>,
}

impl LinearSystem {
    pub fn new(n_vars: usize) -> Self {
        LinearSystem {
            n_vars,
            ..Default::default()
        }
    }

    /// Human-readable list of every violated constraint (empty when feasible).
    pub fn violations(&self, x: &[Rational]) -> Vec<String> {
        let mut out = Vec::new();
        if x.len() != self.n_vars {
            out.push(format!("point has {} coordinates, expected {}", x.len(), self.n_vars));
            return out;
        }
        for (j, v) in x.iter().enumerate() {
            if v.is_negative() {
                out.push(format!("x[{j}] = {v} < 0"));
            }
        }
        for (i, r) in self.equalities.iter().enumerate() {
            let lhs = r.eval(x);
            if lhs != r.rhs {
                out.push(format!("equality {i}: {lhs} != {}", r.rhs));
            }
        }
        for (i, r) in self.inequalities.iter().enumerate() {
            let lhs = r.eval(x);
            if lhs > r.rhs {
                out.push(format!("inequality {i}: {lhs} > {}", r.rhs));
            }
        }
        out
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        self.violations(x).is_empty()
    }
}

/// Echelon form of the tight rows restricted to the current support.
struct Echelon {
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Echelon {
    /// Reduces `row` against the basis; adds it if independent on `support`.
    fn insert(&mut self, mut row: Vec<Rational>, support: &[bool]) {
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if !row[p].is_zero() {
                let factor = row[p].clone();
                for (c, v) in r.iter().enumerate() {
                    if support[c] && !v.is_zero() {
                        row[c] -= &factor * v;
                    }
                }
            }
        }
        let Some(p) = (0..row.len()).find(|&c| support[c] && !row[c].is_zero()) else {
            return;
        };
        self.add_with_pivot(row, p, support);
    }

    fn add_with_pivot(&mut self, mut row: Vec<Rational>, p: usize, support: &[bool]) {
        let inv = Rational::one() / &row[p];
        for (c, v) in row.iter_mut().enumerate() {
            if support[c] && !v.is_zero() {
                *v *= &inv;
            }
        }
        for r in &mut self.rows {
            if !r[p].is_zero() {
                let factor = r[p].clone();
                for (c, v) in row.iter().enumerate() {
                    if support[c] && !v.is_zero() {
                        r[c] -= &factor * v;
                    }
                }
            }
        }
        self.rows.push(row);
        self.pivots.push(p);
    }

    /// Drops column `col` from the support, re-pivoting its row if needed.
    fn remove_column(&mut self, col: usize, support: &[bool]) {
        let Some(idx) = self.pivots.iter().position(|&p| p == col) else {
            return;
        };
        let row = self.rows.swap_remove(idx);
        self.pivots.swap_remove(idx);
        if let Some(p) = (0..row.len()).find(|&c| support[c] && !row[c].is_zero()) {
            self.add_with_pivot(row, p, support);
        }
    }
}

/// Walks `x` to an extreme point of `system`; errors if `x` is infeasible.
pub fn sparsify(system: &LinearSystem, x: &[Rational]) -> Result<Vec<Rational>> {
    let violations = system.violations(x);
    if !violations.is_empty() {
        return Err(Error::Invariant(format!(
            "starting point infeasible: {}",
            violations.join("; ")
        )));
    }
    let n = system.n_vars;
    let mut x = x.to_vec();
    let mut support: Vec<bool> = x.iter().map(|v| v.is_positive()).collect();
    let mut echelon = Echelon {
        rows: Vec::new(),
        pivots: Vec::new(),
    };
    for r in &system.equalities {
        echelon.insert(r.coefficients.clone(), &support);
    }
    let mut tight: Vec<bool> = system.inequalities.iter().map(|r| r.eval(&x) == r.rhs).collect();
    for (r, _) in system.inequalities.iter().zip(&tight).filter(|(_, &t)| t) {
        echelon.insert(r.coefficients.clone(), &support);
    }

    loop {
        let is_pivot = {
            let mut v = vec![false; n];
            for &p in &echelon.pivots {
                v[p] = true;
            }
            v
        };
        let Some(free) = (0..n).find(|&j| support[j] && !is_pivot[j]) else {
            break;
        };
        // Direction: +1 on the free column, balanced on the pivot columns.
        let mut dir: Vec<(usize, Rational)> = vec![(free, Rational::one())];
        for (r, &p) in echelon.rows.iter().zip(&echelon.pivots) {
            if !r[free].is_zero() {
                dir.push((p, -r[free].clone()));
            }
        }
        if dir.iter().all(|(_, d)| !d.is_negative()) {
            for (_, d) in &mut dir {
                *d = -d.clone();
            }
        }
        let mut step: Option<Rational> = None;
        for (j, d) in &dir {
            if d.is_negative() {
                let t = &x[*j] / -d;
                if step.as_ref().map_or(true, |s| t < *s) {
                    step = Some(t);
                }
            }
        }
        let mut slopes = vec![Rational::zero(); system.inequalities.len()];
        for (i, r) in system.inequalities.iter().enumerate() {
            if tight[i] {
                continue;
            }
            let slope: Rational = dir
                .iter()
                .filter(|(j, _)| !r.coefficients[*j].is_zero())
                .map(|(j, d)| &r.coefficients[*j] * d)
                .fold(Rational::zero(), |s, t| s + t);
            if slope.is_positive() {
                let t = (&r.rhs - r.eval(&x)) / &slope;
                if step.as_ref().map_or(true, |s| t < *s) {
                    step = Some(t);
                }
            }
            slopes[i] = slope;
        }
        let step = step.ok_or_else(|| Error::Invariant("unbounded walk direction".into()))?;
        for (j, d) in &dir {
            x[*j] += &step * d;
        }
        for (j, _) in &dir {
            if x[*j].is_negative() {
                return Err(Error::Invariant(format!("x[{j}] became negative")));
            }
            if x[*j].is_zero() && support[*j] {
                support[*j] = false;
                echelon.remove_column(*j, &support);
            }
        }
        for (i, r) in system.inequalities.iter().enumerate() {
            if !tight[i] && slopes[i].is_positive() && r.eval(&x) == r.rhs {
                tight[i] = true;
                echelon.insert(r.coefficients.clone(), &support);
            }
        }
    }
    let violations = system.violations(&x);
    if !violations.is_empty() {
        return Err(Error::Invariant(format!(
            "extreme point infeasible: {}",
            violations.join("; ")
        )));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn box_corner() {
        // x + y = 1, x, y >= 0 from (1/2, 1/2) lands on a corner.
        let mut s = LinearSystem::new(2);
        s.equalities.push(Row::new(vec![qi(1), qi(1)], qi(1)));
        let x = sparsify(&s, &[q(1, 2), q(1, 2)]).unwrap();
        assert_eq!(x.iter().filter(|v| !v.is_zero()).count(), 1);
        assert!(s.is_feasible(&x));
    }

    #[test]
    fn inequality_becomes_tight() {
        // x + y + z = 1, x - y <= 0.
        let mut s = LinearSystem::new(3);
        s.equalities.push(Row::new(vec![qi(1), qi(1), qi(1)], qi(1)));
        s.inequalities.push(Row::new(vec![qi(1), qi(-1), qi(0)], qi(0)));
        let x = sparsify(&s, &[q(1, 4), q(1, 2), q(1, 4)]).unwrap();
        assert!(s.is_feasible(&x));
        assert!(x.iter().filter(|v| !v.is_zero()).count() <= 2);
    }

    #[test]
    fn infeasible_start_is_rejected() {
        let mut s = LinearSystem::new(1);
        s.equalities.push(Row::new(vec![qi(1)], qi(1)));
        assert!(sparsify(&s, &[qi(2)]).is_err());
    }
}
