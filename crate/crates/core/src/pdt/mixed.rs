use serde::Serialize;

use super::{compile, BoundCheck, CompileOptions, CompiledPdt, Split};
use crate::circuit::MixedCircuit;
use crate::error::Result;

/// Public-randomness distribution over PDTs, one per mixture branch.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomizedPdt {
    branches: Vec<(f64, CompiledPdt)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixedInputReport {
    pub input: Vec<bool>,
    pub success: f64,
    pub epsilon: f64,
}

pub fn compile_mixed(
    mixed: &MixedCircuit,
    split: Split,
    options: CompileOptions,
) -> Result<RandomizedPdt> {
    let branches = mixed
        .branches()
        .iter()
        .map(|(p, c)| Ok((*p, compile(c, split, options)?)))
        .collect::<Result<_>>()?;
    Ok(RandomizedPdt { branches })
}

impl RandomizedPdt {
    pub fn branches(&self) -> &[(f64, CompiledPdt)] {
        &self.branches
    }

    /// Probability of output 1 on `(x, y)` averaged over branches.
    pub fn prob_one(&self, x: &[bool], y: &[bool]) -> Result<f64> {
        self.branches
            .iter()
            .try_fold(0.0, |acc, (p, pdt)| Ok(acc + p * pdt.run(x, y)?.prob_one))
    }

    /// `Σ_i p_i · Pr[branch i outputs f]`.
    pub fn success_probability(&self, x: &[bool], y: &[bool], f: bool) -> Result<f64> {
        let p1 = self.prob_one(x, y)?;
        Ok(if f { p1 } else { 1.0 - p1 })
    }

    /// Worst-case branch cost in bits.
    pub fn smp_cost(&self) -> usize {
        self.branches
            .iter()
            .map(|b| b.1.smp_cost())
            .max()
            .unwrap_or(0)
    }

    pub fn magic_count(&self) -> usize {
        self.branches
            .iter()
            .map(|b| b.1.magic_count())
            .max()
            .unwrap_or(0)
    }

    pub fn c_m(&self) -> usize {
        self.branches.iter().map(|b| b.1.c_m()).max().unwrap_or(1)
    }

    pub fn bound_checks(&self) -> Vec<BoundCheck> {
        vec![BoundCheck::at_most(
            "worst_branch_smp_cost",
            self.smp_cost(),
            4 * self.c_m() * self.magic_count() + 2,
        )]
    }

    /// Per-input success and error against a target function.
    pub fn report(&self, f: impl Fn(&[bool], &[bool]) -> bool) -> Result<Vec<MixedInputReport>> {
        let split = self.branches[0].1.split();
        let n = split.total();
        (0..1usize << n)
            .map(|idx| {
                let bits = crate::statevector::index_to_bits(idx, n);
                let (x, y) = split.divide(&bits);
                let success = self.success_probability(x, y, f(x, y))?;
                Ok(MixedInputReport {
                    input: bits.clone(),
                    success,
                    epsilon: 1.0 - success,
                })
            })
            .collect()
    }
}
