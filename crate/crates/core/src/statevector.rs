//! Dense statevector simulation, the reference every compiled artifact is
//! checked against.
//!
//! Measurements are handled by exact branching (no sampling): each outcome
//! spawns a weighted branch. Post-selection projects every branch and keeps
//! the accumulated probability, which is reported next to the normalized
//! output distribution.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{gate_matrix, AdaptiveCircuit, AdaptiveNode, Gate, Layer, LayeredCircuit};
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};
use crate::pauli::CliffordGate;

pub const MAX_QUBITS: usize = 22;
pub const MAX_UNITARY_QUBITS: usize = 11;
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::SizeCap {
                qubits: n,
                cap: MAX_QUBITS,
            });
        }
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        amps[index] = c(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::InvalidArgument(
                "amplitude count is not a power of two".into(),
            ));
        }
        let n = amps.len().trailing_zeros() as usize;
        if n > MAX_QUBITS {
            return Err(Error::SizeCap {
                qubits: n,
                cap: MAX_QUBITS,
            });
        }
        Ok(Self { n, amps })
    }

    /// `|input⟩ ⊗ |advice⟩` for a circuit, inputs on the low qubits.
    pub fn initial(circuit: &LayeredCircuit, input: &[bool]) -> Result<Self> {
        if input.len() != circuit.num_inputs() {
            return Err(Error::DimensionMismatch {
                expected: circuit.num_inputs(),
                got: input.len(),
            });
        }
        let n = circuit.num_qubits();
        let low = bits_to_index(input);
        let mut state = Self::basis(n, low)?;
        if let Some(advice) = circuit.advice_state() {
            state.amps[low] = c(0.0, 0.0);
            for (a, amp) in advice.iter().enumerate() {
                state.amps[low | (a << circuit.num_inputs())] = *amp;
            }
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubits(&self, qubits: &[usize]) -> Result<()> {
        match qubits.iter().find(|&&q| q >= self.n) {
            Some(&q) => Err(Error::QubitOutOfRange {
                qubit: q,
                count: self.n,
            }),
            None => Ok(()),
        }
    }

    /// Applies a `2^k × 2^k` matrix; `qubits[0]` is the most significant bit
    /// of the local index.
    pub fn apply_matrix(&mut self, qubits: &[usize], m: &CMatrix) -> Result<()> {
        self.check_qubits(qubits)?;
        let k = qubits.len();
        let dim = 1usize << k;
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: m.nrows(),
            });
        }
        let offsets: Vec<usize> = (0..dim)
            .map(|l| (0..k).fold(0, |acc, j| acc | (((l >> (k - 1 - j)) & 1) << qubits[j])))
            .collect();
        let mask = offsets[dim - 1];
        let mut local = vec![c(0.0, 0.0); dim];
        for base in 0..self.amps.len() {
            if base & mask != 0 {
                continue;
            }
            for (l, off) in offsets.iter().enumerate() {
                local[l] = self.amps[base | off];
            }
            for (r, off) in offsets.iter().enumerate() {
                let mut acc = c(0.0, 0.0);
                for (l, v) in local.iter().enumerate() {
                    acc += m[(r, l)] * v;
                }
                self.amps[base | off] = acc;
            }
        }
        Ok(())
    }

    fn permute(&mut self, f: impl Fn(usize) -> usize) {
        let mut out = vec![c(0.0, 0.0); self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            out[f(b)] = *a;
        }
        self.amps = out;
    }

    fn phase_where(&mut self, mask: usize, phase: Complex64) {
        for (b, a) in self.amps.iter_mut().enumerate() {
            if b & mask == mask {
                *a *= phase;
            }
        }
    }

    pub fn apply_clifford(&mut self, g: &CliffordGate) -> Result<()> {
        g.check(self.n)?;
        let i = c(0.0, 1.0);
        match *g {
            CliffordGate::X(q) => self.permute(|b| b ^ (1 << q)),
            CliffordGate::Z(q) => self.phase_where(1 << q, c(-1.0, 0.0)),
            CliffordGate::S(q) => self.phase_where(1 << q, i),
            CliffordGate::Sdg(q) => self.phase_where(1 << q, -i),
            CliffordGate::Cnot(a, t) => {
                self.permute(|b| if b >> a & 1 == 1 { b ^ (1 << t) } else { b })
            }
            CliffordGate::Cz(a, b) => self.phase_where((1 << a) | (1 << b), c(-1.0, 0.0)),
            CliffordGate::Swap(a, t) => self.permute(|b| {
                if (b >> a & 1) != (b >> t & 1) {
                    b ^ (1 << a) ^ (1 << t)
                } else {
                    b
                }
            }),
            CliffordGate::H(_) | CliffordGate::Y(_) => {
                let m = gate_matrix(&Gate::Clifford(*g), &BTreeMap::new())?;
                self.apply_matrix(&g.qubits(), &m)?;
            }
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &Gate, matrices: &BTreeMap<String, CMatrix>) -> Result<()> {
        match gate {
            Gate::Clifford(g) => self.apply_clifford(g),
            Gate::T(q) => {
                self.check_qubits(&[*q])?;
                self.phase_where(
                    1 << q,
                    Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
                );
                Ok(())
            }
            Gate::Tdg(q) => {
                self.check_qubits(&[*q])?;
                self.phase_where(
                    1 << q,
                    Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4),
                );
                Ok(())
            }
            Gate::Toffoli { controls, target } => {
                self.check_qubits(&gate.qubits())?;
                let mask = controls.iter().fold(0, |m, &q| m | (1 << q));
                self.permute(|b| {
                    if b & mask == mask {
                        b ^ (1 << target)
                    } else {
                        b
                    }
                });
                Ok(())
            }
            Gate::Magic { qubits, .. } => self.apply_matrix(qubits, &gate_matrix(gate, matrices)?),
            Gate::Measure(_) | Gate::PostSelect(_) => Err(Error::Unsupported(
                "measurement is not a unitary gate".into(),
            )),
        }
    }

    /// Probability that `qubits` read `outcome` (bit `j` ↔ `qubits[j]`).
    pub fn outcome_probability(&self, qubits: &[usize], outcome: u64) -> f64 {
        let (mask, want) = outcome_mask(qubits, outcome);
        self.amps
            .iter()
            .enumerate()
            .filter(|(b, _)| b & mask == want)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects onto an outcome and renormalizes; returns its probability.
    pub fn project(&mut self, qubits: &[usize], outcome: u64) -> Result<f64> {
        self.check_qubits(qubits)?;
        let p = self.outcome_probability(qubits, outcome);
        if p <= PROBABILITY_TOLERANCE {
            return Err(Error::ZeroProbabilityPostSelection);
        }
        let (mask, want) = outcome_mask(qubits, outcome);
        let scale = 1.0 / p.sqrt();
        for (b, a) in self.amps.iter_mut().enumerate() {
            *a = if b & mask == want {
                *a * scale
            } else {
                c(0.0, 0.0)
            };
        }
        Ok(p)
    }

    /// Probability of reading 1 on qubit `q`.
    pub fn prob_one(&self, q: usize) -> f64 {
        self.outcome_probability(&[q], 1)
    }

    pub fn apply_unitary_circuit(&mut self, circuit: &LayeredCircuit) -> Result<()> {
        for g in circuit.gates() {
            self.apply_gate(&g, circuit.matrices())?;
        }
        Ok(())
    }
}

fn outcome_mask(qubits: &[usize], outcome: u64) -> (usize, usize) {
    qubits.iter().enumerate().fold((0, 0), |(m, w), (j, &q)| {
        (m | (1 << q), w | ((((outcome >> j) & 1) as usize) << q))
    })
}

pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | ((b as usize) << i))
}

pub fn index_to_bits(index: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| index >> i & 1 == 1).collect()
}

/// Outcome probabilities; bit `j` of a key is the value of the `j`-th
/// recorded qubit.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct OutputDistribution {
    pub width: usize,
    pub probs: BTreeMap<u64, f64>,
}

impl OutputDistribution {
    pub fn prob(&self, outcome: u64) -> f64 {
        self.probs.get(&outcome).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    pub fn total_variation(&self, other: &OutputDistribution) -> f64 {
        let keys: std::collections::BTreeSet<u64> = self
            .probs
            .keys()
            .chain(other.probs.keys())
            .copied()
            .collect();
        keys.iter()
            .map(|&k| (self.prob(k) - other.prob(k)).abs())
            .sum::<f64>()
            / 2.0
    }

    fn add(&mut self, outcome: u64, p: f64) {
        if p > 0.0 {
            *self.probs.entry(outcome).or_insert(0.0) += p;
        }
    }

    fn scaled(mut self, s: f64) -> Self {
        for p in self.probs.values_mut() {
            *p *= s;
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunResult {
    /// Distribution of the output qubit, conditioned on post-selection.
    pub output: OutputDistribution,
    /// Probability that every post-selection succeeds (1 without any).
    pub postselect_probability: f64,
}

impl RunResult {
    pub fn prob_one(&self) -> f64 {
        self.output.prob(1)
    }
}

fn run_branches(
    circuit: &LayeredCircuit,
    input: &[bool],
) -> Result<(Vec<(f64, StateVector)>, f64)> {
    let mut branches = vec![(1.0, StateVector::initial(circuit, input)?)];
    for layer in circuit.layers() {
        match layer {
            Layer::Clifford(gs) => {
                for (_, s) in &mut branches {
                    for g in gs {
                        s.apply_clifford(g)?;
                    }
                }
            }
            Layer::Event(Gate::Measure(qs)) => {
                let mut next = Vec::new();
                for (w, s) in branches {
                    for outcome in 0..1u64 << qs.len() {
                        let p = s.outcome_probability(qs, outcome);
                        if p > PROBABILITY_TOLERANCE {
                            let mut t = s.clone();
                            t.project(qs, outcome)?;
                            next.push((w * p, t));
                        }
                    }
                }
                branches = next;
            }
            Layer::Event(Gate::PostSelect(pairs)) => {
                let qs: Vec<usize> = pairs.iter().map(|p| p.0).collect();
                let outcome = pairs
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, p)| acc | ((p.1 as u64) << j));
                let mut next = Vec::new();
                for (w, mut s) in branches {
                    let p = s.outcome_probability(&qs, outcome);
                    if p > PROBABILITY_TOLERANCE {
                        s.project(&qs, outcome)?;
                        next.push((w * p, s));
                    }
                }
                if next.is_empty() {
                    return Err(Error::ZeroProbabilityPostSelection);
                }
                branches = next;
            }
            Layer::Event(g) => {
                for (_, s) in &mut branches {
                    s.apply_gate(g, circuit.matrices())?;
                }
            }
        }
    }
    let total: f64 = branches.iter().map(|b| b.0).sum();
    Ok((branches, total))
}

/// Exact output distribution of the circuit on a classical input.
pub fn run(circuit: &LayeredCircuit, input: &[bool]) -> Result<RunResult> {
    let (branches, total) = run_branches(circuit, input)?;
    let mut output = OutputDistribution {
        width: 1,
        probs: BTreeMap::new(),
    };
    for (w, s) in &branches {
        let p1 = s.prob_one(circuit.output());
        output.add(0, w * (1.0 - p1) / total);
        output.add(1, w * p1 / total);
    }
    Ok(RunResult {
        output,
        postselect_probability: total,
    })
}

/// Exact distribution of a final measurement of every qubit.
pub fn run_full(circuit: &LayeredCircuit, input: &[bool]) -> Result<OutputDistribution> {
    let (branches, total) = run_branches(circuit, input)?;
    let mut out = OutputDistribution {
        width: circuit.num_qubits(),
        probs: BTreeMap::new(),
    };
    for (w, s) in &branches {
        for (b, a) in s.amps.iter().enumerate() {
            out.add(b as u64, w * a.norm_sqr() / total);
        }
    }
    Ok(out)
}

/// Probability of output 1 for every input (input bit `i` = bit `i` of the
/// index); inputs whose post-selection fails map to `None`.
pub fn truth_table(circuit: &LayeredCircuit) -> Result<Vec<Option<f64>>> {
    let n = circuit.num_inputs();
    if n > 24 {
        return Err(Error::SizeCap { qubits: n, cap: 24 });
    }
    (0..1usize << n)
        .into_par_iter()
        .map(|idx| match run(circuit, &index_to_bits(idx, n)) {
            Ok(r) => Ok(Some(r.prob_one())),
            Err(Error::ZeroProbabilityPostSelection) => Ok(None),
            Err(e) => Err(e),
        })
        .collect()
}

/// Full unitary of a measurement-free circuit on all of its qubits.
pub fn unitary_of(circuit: &LayeredCircuit) -> Result<CMatrix> {
    let n = circuit.num_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(Error::SizeCap {
            qubits: n,
            cap: MAX_UNITARY_QUBITS,
        });
    }
    let dim = 1usize << n;
    let columns: Vec<Vec<Complex64>> = (0..dim)
        .into_par_iter()
        .map(|b| {
            let mut s = StateVector::basis(n, b)?;
            s.apply_unitary_circuit(circuit)?;
            Ok(s.amps)
        })
        .collect::<Result<_>>()?;
    Ok(CMatrix::from_fn(dim, dim, |r, col| columns[col][r]))
}

/// Exact output distribution of an adaptive circuit.
pub fn run_adaptive(circuit: &AdaptiveCircuit, input: &[bool]) -> Result<OutputDistribution> {
    fn go(
        node: &AdaptiveNode,
        mut s: StateVector,
        circuit: &AdaptiveCircuit,
    ) -> Result<OutputDistribution> {
        for g in &node.gates {
            s.apply_gate(g, circuit.header.matrices())?;
        }
        let Some(branch) = &node.branch else {
            let p1 = s.prob_one(circuit.header.output());
            let mut out = OutputDistribution {
                width: 1,
                probs: BTreeMap::new(),
            };
            out.add(0, 1.0 - p1);
            out.add(1, p1);
            return Ok(out);
        };
        let mut out = OutputDistribution {
            width: 1,
            probs: BTreeMap::new(),
        };
        for outcome in 0..1u64 << branch.measured.len() {
            let p = s.outcome_probability(&branch.measured, outcome);
            if p <= PROBABILITY_TOLERANCE {
                continue;
            }
            let child = branch
                .children
                .get(&outcome)
                .ok_or(Error::MissingBranch(outcome))?;
            let mut t = s.clone();
            t.project(&branch.measured, outcome)?;
            for (k, q) in go(child, t, circuit)?.scaled(p).probs {
                out.add(k, q);
            }
        }
        Ok(out)
    }
    go(
        &circuit.root,
        StateVector::initial(&circuit.header, input)?,
        circuit,
    )
}
