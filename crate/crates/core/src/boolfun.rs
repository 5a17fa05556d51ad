//! Boolean functions of namespaced variables.
//!
//! [`AffineForm`] is a sparse GF(2)-affine function and is what the
//! parity-decision-tree compiler propagates. [`BoolFun`] is an explicit truth
//! table over at most [`MAX_VARS`] variables. [`FrameForm`] is an XOR of an
//! affine part and any number of small truth tables; garden-hose gadgets emit
//! frame functions in this shape, which keeps every individual table small
//! even when the total support grows.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VARS: usize = 20;

/// A variable id. Alice and Bob input bits and measurement outcomes live in
/// separate namespaces so they can never collide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Var {
    Alice(u32),
    Bob(u32),
    Outcome(u32),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Alice(i) => write!(f, "x{i}"),
            Var::Bob(i) => write!(f, "y{i}"),
            Var::Outcome(i) => write!(f, "r{i}"),
        }
    }
}

/// `constant ⊕ (⊕_{v ∈ vars} v)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineForm {
    vars: BTreeSet<Var>,
    constant: bool,
}

impl AffineForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(value: bool) -> Self {
        Self {
            vars: BTreeSet::new(),
            constant: value,
        }
    }

    pub fn var(v: Var) -> Self {
        Self {
            vars: BTreeSet::from([v]),
            constant: false,
        }
    }

    pub fn from_parts(vars: impl IntoIterator<Item = Var>, constant: bool) -> Self {
        let mut form = Self::constant(constant);
        for v in vars {
            form.toggle(v);
        }
        form
    }

    pub fn vars(&self) -> &BTreeSet<Var> {
        &self.vars
    }

    pub fn constant_term(&self) -> bool {
        self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.vars.is_empty() && !self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn toggle(&mut self, v: Var) {
        if !self.vars.remove(&v) {
            self.vars.insert(v);
        }
    }

    pub fn flip_constant(&mut self) {
        self.constant = !self.constant;
    }

    pub fn xor_assign(&mut self, other: &AffineForm) {
        for &v in &other.vars {
            self.toggle(v);
        }
        self.constant ^= other.constant;
    }

    pub fn xor(&self, other: &AffineForm) -> AffineForm {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn evaluate(&self, assign: &impl Fn(Var) -> bool) -> bool {
        self.vars
            .iter()
            .fold(self.constant, |acc, &v| acc ^ assign(v))
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.vars.iter().map(ToString::to_string).collect();
        if self.constant || parts.is_empty() {
            parts.push(if self.constant { "1" } else { "0" }.into());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Explicit truth table. Bit `j` of a table index is the value of `vars[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoolFun {
    vars: Vec<Var>,
    table: Vec<bool>,
}

impl BoolFun {
    pub fn new(vars: Vec<Var>, table: Vec<bool>) -> Result<Self> {
        if vars.len() > MAX_VARS {
            return Err(Error::TooManyVariables(vars.len()));
        }
        if table.len() != 1usize << vars.len() {
            return Err(Error::DimensionMismatch {
                expected: 1 << vars.len(),
                got: table.len(),
            });
        }
        let mut sorted = vars.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != vars.len() {
            return Err(Error::InvalidArgument(
                "duplicate variable in BoolFun".into(),
            ));
        }
        if sorted == vars {
            return Ok(Self { vars, table });
        }
        // canonical order: sorted variables
        let positions: Vec<usize> = sorted
            .iter()
            .map(|v| vars.iter().position(|w| w == v).unwrap())
            .collect();
        let table = (0..table.len())
            .map(|idx| {
                let orig = positions
                    .iter()
                    .enumerate()
                    .fold(0usize, |acc, (j, &p)| acc | (((idx >> j) & 1) << p));
                table[orig]
            })
            .collect();
        Ok(Self {
            vars: sorted,
            table,
        })
    }

    /// Tabulates `f` over all assignments of `vars`.
    pub fn from_fn(vars: Vec<Var>, f: impl Fn(&dyn Fn(Var) -> bool) -> bool) -> Result<Self> {
        let mut vars = vars;
        vars.sort();
        vars.dedup();
        if vars.len() > MAX_VARS {
            return Err(Error::TooManyVariables(vars.len()));
        }
        let table = (0..1usize << vars.len())
            .map(|idx| {
                let lookup = |v: Var| {
                    let j = vars
                        .binary_search(&v)
                        .expect("variable outside BoolFun support");
                    (idx >> j) & 1 == 1
                };
                f(&lookup)
            })
            .collect();
        Ok(Self { vars, table })
    }

    pub fn constant(value: bool) -> Self {
        Self {
            vars: Vec::new(),
            table: vec![value],
        }
    }

    pub fn var(v: Var) -> Self {
        Self {
            vars: vec![v],
            table: vec![false, true],
        }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, assign: &impl Fn(Var) -> bool) -> usize {
        self.vars
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &v)| acc | ((assign(v) as usize) << j))
    }

    pub fn evaluate(&self, assign: &impl Fn(Var) -> bool) -> bool {
        self.table[self.index_of(assign)]
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|b| !b)
    }

    fn combine(&self, other: &BoolFun, op: impl Fn(bool, bool) -> bool) -> Result<BoolFun> {
        let mut vars: Vec<Var> = self.vars.iter().chain(&other.vars).copied().collect();
        vars.sort();
        vars.dedup();
        BoolFun::from_fn(vars, |a| op(self.evaluate(&a), other.evaluate(&a)))
    }

    pub fn xor(&self, other: &BoolFun) -> Result<BoolFun> {
        self.combine(other, |a, b| a ^ b)
    }

    pub fn and(&self, other: &BoolFun) -> Result<BoolFun> {
        self.combine(other, |a, b| a & b)
    }

    pub fn not(&self) -> BoolFun {
        Self {
            vars: self.vars.clone(),
            table: self.table.iter().map(|b| !b).collect(),
        }
    }

    pub fn from_affine(form: &AffineForm) -> Result<BoolFun> {
        BoolFun::from_fn(form.vars().iter().copied().collect(), |a| form.evaluate(&a))
    }

    /// Recovers the affine form when the table is affine.
    pub fn to_affine(&self) -> Option<AffineForm> {
        let constant = self.table[0];
        let vars = self
            .vars
            .iter()
            .enumerate()
            .filter(|(j, _)| self.table[1 << j] != constant)
            .map(|(_, &v)| v);
        let form = AffineForm::from_parts(vars, constant);
        let affine = (0..self.table.len()).all(|idx| {
            let parity = (0..self.vars.len())
                .filter(|&j| (idx >> j) & 1 == 1 && form.vars().contains(&self.vars[j]))
                .count()
                % 2
                == 1;
            self.table[idx] == constant ^ parity
        });
        affine.then_some(form)
    }

    /// Drops variables the table does not depend on.
    pub fn reduce(&self) -> BoolFun {
        let relevant: Vec<Var> = self
            .vars
            .iter()
            .enumerate()
            .filter(|&(j, _)| {
                (0..self.table.len())
                    .any(|idx| idx >> j & 1 == 0 && self.table[idx] != self.table[idx | (1 << j)])
            })
            .map(|(_, &v)| v)
            .collect();
        if relevant.len() == self.vars.len() {
            return self.clone();
        }
        let keep = relevant.clone();
        BoolFun::from_fn(relevant, |a| {
            self.evaluate(&|v| keep.binary_search(&v).is_ok() && a(v))
        })
        .expect("subset of a valid support")
    }

    /// Algebraic normal form coefficients, indexed like the truth table.
    pub fn anf(&self) -> Vec<bool> {
        let mut coeffs = self.table.clone();
        let n = self.vars.len();
        for j in 0..n {
            for idx in 0..coeffs.len() {
                if idx >> j & 1 == 1 {
                    coeffs[idx] ^= coeffs[idx ^ (1 << j)];
                }
            }
        }
        coeffs
    }
}

/// `affine ⊕ (⊕_i terms[i])`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameForm {
    pub affine: AffineForm,
    pub terms: Vec<BoolFun>,
}

impl From<AffineForm> for FrameForm {
    fn from(affine: AffineForm) -> Self {
        Self {
            affine,
            terms: Vec::new(),
        }
    }
}

impl From<BoolFun> for FrameForm {
    fn from(term: BoolFun) -> Self {
        let mut form = Self {
            affine: AffineForm::zero(),
            terms: vec![term],
        };
        form.normalize();
        form
    }
}

impl FrameForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        AffineForm::var(v).into()
    }

    pub fn is_affine(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_affine(&self) -> Option<&AffineForm> {
        self.is_affine().then_some(&self.affine)
    }

    /// Structural zero test; exact after [`FrameForm::normalize`] when the
    /// nonlinear terms have pairwise distinct supports.
    pub fn is_zero(&self) -> bool {
        self.affine.is_zero() && self.terms.iter().all(BoolFun::is_zero)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut vars = self.affine.vars().clone();
        for t in &self.terms {
            vars.extend(t.vars().iter().copied());
        }
        vars
    }

    pub fn evaluate(&self, assign: &impl Fn(Var) -> bool) -> bool {
        self.terms
            .iter()
            .fold(self.affine.evaluate(assign), |acc, t| {
                acc ^ t.evaluate(assign)
            })
    }

    pub fn xor_assign(&mut self, other: &FrameForm) {
        self.affine.xor_assign(&other.affine);
        if !other.terms.is_empty() {
            self.terms.extend(other.terms.iter().cloned());
            self.normalize();
        }
    }

    pub fn xor(&self, other: &FrameForm) -> FrameForm {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    fn atoms(&self) -> Vec<BoolFun> {
        let mut atoms = Vec::new();
        if self.affine.constant_term() {
            atoms.push(BoolFun::constant(true));
        }
        atoms.extend(self.affine.vars().iter().map(|&v| BoolFun::var(v)));
        atoms.extend(self.terms.iter().cloned());
        atoms
    }

    /// Product over GF(2), distributed term by term.
    pub fn and(&self, other: &FrameForm) -> Result<FrameForm> {
        let mut out = FrameForm::zero();
        let rhs = other.atoms();
        for a in self.atoms() {
            for b in &rhs {
                out.terms.push(a.and(b)?);
            }
        }
        out.normalize();
        Ok(out)
    }

    /// Folds affine terms into the affine part, merges tables with equal
    /// supports and drops zero tables.
    pub fn normalize(&mut self) {
        let mut by_support: BTreeMap<Vec<Var>, BoolFun> = BTreeMap::new();
        for term in self.terms.drain(..) {
            let term = term.reduce();
            if let Some(affine) = term.to_affine() {
                self.affine.xor_assign(&affine);
                continue;
            }
            match by_support.remove(term.vars()) {
                Some(existing) => {
                    let merged = existing.xor(&term).expect("equal supports");
                    by_support.insert(merged.vars().to_vec(), merged);
                }
                None => {
                    by_support.insert(term.vars().to_vec(), term);
                }
            }
        }
        for (_, term) in by_support {
            let term = term.reduce();
            if let Some(affine) = term.to_affine() {
                self.affine.xor_assign(&affine);
            } else {
                self.terms.push(term);
            }
        }
    }

    /// Collapses the whole form into one truth table (at most [`MAX_VARS`]
    /// variables).
    pub fn to_boolfun(&self) -> Result<BoolFun> {
        let vars: Vec<Var> = self.vars().into_iter().collect();
        if vars.len() > MAX_VARS {
            return Err(Error::TooManyVariables(vars.len()));
        }
        BoolFun::from_fn(vars, |a| self.evaluate(&a))
    }

    /// Splits into `(left, right)` with `self = left ⊕ right`, where every
    /// variable of `left` satisfies `is_left` and no variable of `right` does.
    /// Returns `None` when some nonlinear term mixes both sides.
    pub fn split(&self, is_left: impl Fn(Var) -> bool) -> Option<(FrameForm, FrameForm)> {
        let mut left = FrameForm::zero();
        let mut right = FrameForm::zero();
        for &v in self.affine.vars() {
            if is_left(v) {
                left.affine.toggle(v);
            } else {
                right.affine.toggle(v);
            }
        }
        if self.affine.constant_term() {
            left.affine.flip_constant();
        }
        for term in &self.terms {
            let lefts = term.vars().iter().filter(|&&v| is_left(v)).count();
            if lefts == term.arity() {
                left.terms.push(term.clone());
            } else if lefts == 0 {
                right.terms.push(term.clone());
            } else {
                return None;
            }
        }
        Some((left, right))
    }
}

impl fmt::Display for FrameForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.affine)?;
        for t in &self.terms {
            let vars: Vec<String> = t.vars().iter().map(ToString::to_string).collect();
            write!(f, " + T({})", vars.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assignment(bits: u32, vars: &[Var]) -> impl Fn(Var) -> bool + '_ {
        move |v| {
            let j = vars.iter().position(|&w| w == v).unwrap();
            bits >> j & 1 == 1
        }
    }

    #[test]
    fn affine_evaluates_as_parity() {
        let vars = [Var::Alice(0), Var::Bob(1), Var::Outcome(2)];
        let form = AffineForm::from_parts([vars[0], vars[2]], true);
        for bits in 0..8u32 {
            let expected = true ^ (bits & 1 == 1) ^ (bits >> 2 & 1 == 1);
            assert_eq!(form.evaluate(&assignment(bits, &vars)), expected);
        }
    }

    #[test]
    fn affine_round_trips_through_table() {
        let form = AffineForm::from_parts([Var::Bob(3), Var::Alice(1)], true);
        let table = BoolFun::from_affine(&form).unwrap();
        assert_eq!(table.to_affine(), Some(form));
        let and = BoolFun::var(Var::Alice(0))
            .and(&BoolFun::var(Var::Bob(0)))
            .unwrap();
        assert_eq!(and.to_affine(), None);
    }

    #[test]
    fn unsorted_vars_are_canonicalised() {
        // f(b, a) = b AND NOT a, given with vars [Bob, Alice]
        let f = BoolFun::new(
            vec![Var::Bob(0), Var::Alice(0)],
            vec![false, true, false, false],
        )
        .unwrap();
        assert_eq!(f.vars(), &[Var::Alice(0), Var::Bob(0)]);
        let vars = [Var::Alice(0), Var::Bob(0)];
        for bits in 0..4u32 {
            let a = bits & 1 == 1;
            let b = bits >> 1 & 1 == 1;
            assert_eq!(f.evaluate(&assignment(bits, &vars)), b && !a);
        }
    }

    #[test]
    fn var_cap_enforced() {
        let vars: Vec<Var> = (0..21).map(Var::Outcome).collect();
        assert_eq!(
            BoolFun::from_fn(vars, |_| false).unwrap_err(),
            Error::TooManyVariables(21)
        );
    }

    #[test]
    fn reduce_drops_dummy_variables() {
        let f = BoolFun::from_fn(vec![Var::Alice(0), Var::Alice(1)], |a| a(Var::Alice(1))).unwrap();
        assert_eq!(f.reduce(), BoolFun::var(Var::Alice(1)));
    }

    #[test]
    fn anf_of_and_is_single_monomial() {
        let f = BoolFun::var(Var::Alice(0))
            .and(&BoolFun::var(Var::Bob(0)))
            .unwrap();
        assert_eq!(f.anf(), vec![false, false, false, true]);
    }

    #[test]
    fn frame_form_product_and_split() {
        let a = FrameForm::var(Var::Alice(0)).xor(&FrameForm::var(Var::Outcome(1)));
        let b = FrameForm::var(Var::Bob(0));
        let prod = a.and(&b).unwrap();
        let vars = [Var::Alice(0), Var::Outcome(1), Var::Bob(0)];
        for bits in 0..8u32 {
            let asg = assignment(bits, &vars);
            assert_eq!(
                prod.evaluate(&asg),
                (asg(vars[0]) ^ asg(vars[1])) & asg(vars[2])
            );
        }
        assert!(prod.split(|v| matches!(v, Var::Alice(_))).is_none());
        let (l, r) = a.split(|v| matches!(v, Var::Alice(_))).unwrap();
        assert_eq!(l, FrameForm::var(Var::Alice(0)));
        assert_eq!(r, FrameForm::var(Var::Outcome(1)));
    }

    #[test]
    fn normalize_cancels_duplicate_terms() {
        let t = BoolFun::var(Var::Alice(0))
            .and(&BoolFun::var(Var::Bob(0)))
            .unwrap();
        let mut f = FrameForm::from(t.clone());
        f.xor_assign(&FrameForm::from(t));
        assert!(f.is_zero());
        assert!(f.terms.is_empty());
    }
}
