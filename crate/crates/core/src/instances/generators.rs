//! Hard-instance families and seeded random instances.

use rand::Rng;

use super::bipartite::BipartiteInstance;
use super::cnf::{Clause, CnfInstance, Literal};
use crate::error::{Error, Result};
use crate::rational::{q, qi, Rational};

/// The family on which Random is stuck near 1/2.
///
/// Online vertices `0..k` have the shared neighbors `0..k` plus a private
/// neighbor `2k-1-i`; online vertex `k+j` has the single neighbor `k-1-j`.
/// Listing online vertices left to right in reverse reproduces the printed
/// matrix, whose columns arrive from right to left.
pub fn gen_rand_hard(k: usize) -> Result<BipartiteInstance> {
    if k == 0 {
        return Err(Error::Malformed("rand-hard needs k >= 1".into()));
    }
    let mut adjacency = Vec::with_capacity(2 * k);
    for i in 0..k {
        let mut adj: Vec<usize> = (0..k).collect();
        adj.push(2 * k - 1 - i);
        adjacency.push(adj);
    }
    for j in 0..k {
        adjacency.push(vec![k - 1 - j]);
    }
    BipartiteInstance::new(2 * k, adjacency)
}

/// Online vertex `i` neighbors offline vertices `i..n`.
pub fn gen_upper_triangular(n: usize) -> BipartiteInstance {
    let adjacency = (0..n).map(|i| (i..n).collect()).collect();
    BipartiteInstance::new(n, adjacency).expect("valid by construction")
}

pub fn gen_complete(n_online: usize, n_offline: usize) -> BipartiteInstance {
    BipartiteInstance::new(n_offline, vec![(0..n_offline).collect(); n_online]).expect("valid by construction")
}

/// Online `v, a, b` = 0, 1, 2; offline `u, u', u''` = 0, 1, 2.
pub fn gen_prio_one_rand() -> BipartiteInstance {
    BipartiteInstance::new(3, vec![vec![0, 1], vec![1, 2], vec![1, 2]]).expect("valid by construction")
}

/// Two-variable instances on which Width-2-Johnson with parameter `p` stays below 3/4.
///
/// For `p > 1.5` (with `1/2 < w < 1`, `p > 1+w`):
/// `{~x1 v ~x2 : 1, x1 v x2 : w, ~x2 : w}`. Both assignments set `x1 = 0`,
/// after which each can satisfy only one of the two weight-`w` clauses, so
/// the ratio is `(1+w)/(1+2w)`.
///
/// For `p < 1.5` (with `0 < w < 1/2`, `p < 1+w`):
/// `{x1 : 1, ~x1 : w, ~x2 : 1, x2 : w}`. The assignments split on both
/// variables, each collecting `1+w` out of `2`.
pub fn gen_width2_counterexample(p: &Rational, w: &Rational) -> Result<CnfInstance> {
    let one = qi(1);
    let half = q(1, 2);
    let three_halves = q(3, 2);
    let zero = qi(0);
    let clause = |id, weight: &Rational, lits| Clause::new(id, weight.clone(), lits);
    if *p > three_halves && *w > half && *w < one && *p > &one + w {
        CnfInstance::new(
            2,
            vec![
                clause(0, &one, vec![Literal::neg(0), Literal::neg(1)])?,
                clause(1, w, vec![Literal::pos(0), Literal::pos(1)])?,
                clause(2, w, vec![Literal::neg(1)])?,
            ],
        )
    } else if *p < three_halves && *w > zero && *w < half && *p < &one + w {
        CnfInstance::new(
            2,
            vec![
                clause(0, &one, vec![Literal::pos(0)])?,
                clause(1, w, vec![Literal::neg(0)])?,
                clause(2, &one, vec![Literal::neg(1)])?,
                clause(3, w, vec![Literal::pos(1)])?,
            ],
        )
    } else {
        Err(Error::Refused(format!(
            "no counterexample for p={p}, w={w}: outside the supported parameter ranges"
        )))
    }
}

/// Random weighted CNF with clause lengths in `1..=max_len` and weights `a/b`,
/// `a` in `1..=10`, `b` in `1..=4`.
pub fn random_cnf<R: Rng>(rng: &mut R, n_vars: usize, n_clauses: usize, max_len: usize) -> CnfInstance {
    let max_len = max_len.clamp(1, n_vars.max(1));
    let mut clauses = Vec::with_capacity(n_clauses);
    for id in 0..n_clauses {
        let len = rng.gen_range(1..=max_len);
        let mut vars: Vec<usize> = (0..n_vars).collect();
        for i in 0..len {
            let j = rng.gen_range(i..n_vars);
            vars.swap(i, j);
        }
        let lits = vars[..len]
            .iter()
            .map(|&v| Literal {
                variable: v,
                positive: rng.gen_bool(0.5),
            })
            .collect();
        let weight = q(rng.gen_range(1..=10), rng.gen_range(1..=4));
        clauses.push(Clause::new(id, weight, lits).expect("distinct variables"));
    }
    CnfInstance::new(n_vars, clauses).expect("valid by construction")
}

/// Random bipartite graph with independent edges of probability `p`.
pub fn random_bipartite<R: Rng>(rng: &mut R, n_online: usize, n_offline: usize, p: f64) -> BipartiteInstance {
    let adjacency = (0..n_online)
        .map(|_| (0..n_offline).filter(|_| rng.gen_bool(p)).collect())
        .collect();
    BipartiteInstance::new(n_offline, adjacency).expect("valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::oracle::optimal_matching;

    #[test]
    fn smallest_rand_hard() {
        let g = gen_rand_hard(1).unwrap();
        assert_eq!(g.adjacency(), &[vec![0, 1], vec![0]]);
    }

    #[test]
    fn families_have_perfect_matchings() {
        for k in 1..=6 {
            assert_eq!(optimal_matching(&gen_rand_hard(k).unwrap()).0, 2 * k);
        }
        for n in 1..=8 {
            assert_eq!(optimal_matching(&gen_upper_triangular(n)).0, n);
        }
    }

    #[test]
    fn counterexample_refuses_boundary() {
        assert!(gen_width2_counterexample(&q(3, 2), &q(1, 4)).is_err());
        assert!(gen_width2_counterexample(&qi(2), &q(1, 4)).is_err());
        assert_eq!(gen_width2_counterexample(&qi(2), &q(3, 4)).unwrap().clauses().len(), 3);
        assert_eq!(gen_width2_counterexample(&qi(1), &q(1, 4)).unwrap().clauses().len(), 4);
    }
}
