//! Monotone submodular objectives over sets of clauses.

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::instances::CnfInstance;
use crate::rational::Rational;

/// Value oracle for a normalized monotone submodular `F` on clause indices.
///
/// Sets are membership vectors indexed by clause position.
pub trait SubmodularOracle: Sync {
    fn ground_size(&self) -> usize;

    fn value(&self, set: &[bool]) -> Rational;

    /// `F` of the complement of `set`.
    fn complement_value(&self, set: &[bool]) -> Rational {
        let c: Vec<bool> = set.iter().map(|b| !b).collect();
        self.value(&c)
    }
}

/// Sum of clause weights: plain weighted max-sat.
#[derive(Clone, Debug)]
pub struct ModularWeight {
    pub weights: Vec<Rational>,
}

impl ModularWeight {
    pub fn of_instance(instance: &CnfInstance) -> Self {
        ModularWeight {
            weights: instance.clauses().iter().map(|c| c.weight.clone()).collect(),
        }
    }
}

impl SubmodularOracle for ModularWeight {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, set: &[bool]) -> Rational {
        self.weights
            .iter()
            .zip(set)
            .filter(|(_, &b)| b)
            .fold(Rational::zero(), |s, (w, _)| s + w)
    }
}

/// Each clause covers some weighted elements; `F(S)` is the weight of the union.
#[derive(Clone, Debug)]
pub struct WeightedCoverage {
    pub element_weights: Vec<Rational>,
    pub covers: Vec<Vec<usize>>,
}

impl WeightedCoverage {
    pub fn new(element_weights: Vec<Rational>, covers: Vec<Vec<usize>>) -> Result<Self> {
        if covers.iter().flatten().any(|&e| e >= element_weights.len()) {
            return Err(Error::Malformed("coverage refers to an unknown element".into()));
        }
        if element_weights.iter().any(|w| w < &Rational::zero()) {
            return Err(Error::Malformed("negative element weight".into()));
        }
        Ok(WeightedCoverage {
            element_weights,
            covers,
        })
    }

    pub fn random<R: Rng>(rng: &mut R, n_clauses: usize, n_elements: usize) -> Self {
        let element_weights = (0..n_elements)
            .map(|_| Rational::from_integer(rng.gen_range(1..=5).into()))
            .collect();
        let covers = (0..n_clauses)
            .map(|_| (0..n_elements).filter(|_| rng.gen_bool(0.3)).collect())
            .collect();
        WeightedCoverage {
            element_weights,
            covers,
        }
    }
}

impl SubmodularOracle for WeightedCoverage {
    fn ground_size(&self) -> usize {
        self.covers.len()
    }

    fn value(&self, set: &[bool]) -> Rational {
        let mut hit = vec![false; self.element_weights.len()];
        for (c, _) in self.covers.iter().zip(set).filter(|(_, &b)| b) {
            for &e in c {
                hit[e] = true;
            }
        }
        self.element_weights
            .iter()
            .zip(&hit)
            .filter(|(_, &h)| h)
            .fold(Rational::zero(), |s, (w, _)| s + w)
    }
}

/// `min(budget, inner(S))`.
#[derive(Clone, Debug)]
pub struct BudgetedCoverage {
    pub inner: WeightedCoverage,
    pub budget: Rational,
}

impl SubmodularOracle for BudgetedCoverage {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn value(&self, set: &[bool]) -> Rational {
        self.inner.value(set).min(self.budget.clone())
    }
}

/// Randomized spot checks of normalization, monotonicity and submodularity.
pub fn spot_check_oracle<R: Rng>(oracle: &dyn SubmodularOracle, rng: &mut R, trials: usize) -> Result<()> {
    let m = oracle.ground_size();
    if !oracle.value(&vec![false; m]).is_zero() {
        return Err(Error::Invariant("F(empty) is not zero".into()));
    }
    let random_set = |rng: &mut R| -> Vec<bool> { (0..m).map(|_| rng.gen_bool(0.5)).collect() };
    for _ in 0..trials {
        let mut order: Vec<usize> = (0..m).collect();
        for i in 0..m {
            let j = rng.gen_range(i..m);
            order.swap(i, j);
        }
        let mut set = vec![false; m];
        let mut prev = oracle.value(&set);
        for &e in &order {
            set[e] = true;
            let v = oracle.value(&set);
            if v < prev {
                return Err(Error::Invariant("F decreased along a chain".into()));
            }
            prev = v;
        }
        let s = random_set(rng);
        let t = random_set(rng);
        let union: Vec<bool> = s.iter().zip(&t).map(|(a, b)| *a || *b).collect();
        let inter: Vec<bool> = s.iter().zip(&t).map(|(a, b)| *a && *b).collect();
        if oracle.value(&s) + oracle.value(&t) < oracle.value(&union) + oracle.value(&inter) {
            return Err(Error::Invariant("submodularity fails on a sampled pair".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn synthetic_oracles_pass_spot_checks() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cov = WeightedCoverage::random(&mut rng, 8, 6);
        spot_check_oracle(&cov, &mut rng, 50).unwrap();
        let b = BudgetedCoverage {
            inner: cov,
            budget: qi(5),
        };
        spot_check_oracle(&b, &mut rng, 50).unwrap();
        let m = ModularWeight {
            weights: vec![qi(1), qi(2)],
        };
        assert_eq!(m.complement_value(&[true, false]), qi(2));
    }
}
