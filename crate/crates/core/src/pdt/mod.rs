//! Circuits to parity decision trees and classical protocols.
//!
//! Running a circuit on `|x, y⟩|ψ⟩` is running it on `|0, 0⟩|ψ⟩` behind the
//! Pauli frame `X^x X^y`. The compiler pushes that frame through every
//! Clifford layer symbolically; it stays an affine function of the input bits.
//! Just before each magic gate (or post-selection) the frame components on
//! the touched qubits become parity queries, and the referee, who simulates
//! the all-zero-input circuit, applies the queried Paulis to his simulation.
//! T-like (diagonal) gates commute with `Z`, so only their `X` parity is
//! queried. A last `X` parity of the output qubit flips the final outcome.

mod adaptive;
mod mixed;

use rayon::prelude::*;
use serde::Serialize;

pub use adaptive::*;
pub use mixed::*;

use crate::boolfun::{AffineForm, FrameForm, Var};
use crate::circuit::{Gate, Layer, LayeredCircuit};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::pauli::{CliffordGate, CliffordTableau, SymbolicPauliFrame};
use crate::statevector::{self, index_to_bits, StateVector};

pub const EXACT_TOLERANCE: f64 = 1e-9;
pub const EXPLICIT_TABLE_MAX_DEPTH: usize = 16;

/// Partition of the circuit's input bits: the first `alice` bits belong to
/// Alice, the next `bob` bits to Bob.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Split {
    pub alice: usize,
    pub bob: usize,
}

impl Split {
    pub fn new(alice: usize, bob: usize) -> Self {
        Self { alice, bob }
    }

    /// First half to Alice (rounded up), the rest to Bob.
    pub fn halves(n: usize) -> Self {
        Self {
            alice: n.div_ceil(2),
            bob: n / 2,
        }
    }

    pub fn total(&self) -> usize {
        self.alice + self.bob
    }

    pub fn check(&self, num_inputs: usize) -> Result<()> {
        if self.total() != num_inputs {
            return Err(Error::InvalidArgument(format!(
                "split {},{} does not cover {num_inputs} input bits",
                self.alice, self.bob
            )));
        }
        Ok(())
    }

    pub fn var(&self, input_bit: usize) -> Var {
        if input_bit < self.alice {
            Var::Alice(input_bit as u32)
        } else {
            Var::Bob((input_bit - self.alice) as u32)
        }
    }

    pub fn input_bit(&self, v: Var) -> Option<usize> {
        match v {
            Var::Alice(i) if (i as usize) < self.alice => Some(i as usize),
            Var::Bob(j) if (j as usize) < self.bob => Some(self.alice + j as usize),
            _ => None,
        }
    }

    pub fn join(&self, x: &[bool], y: &[bool]) -> Vec<bool> {
        x.iter().chain(y).copied().collect()
    }

    pub fn divide<'a>(&self, bits: &'a [bool]) -> (&'a [bool], &'a [bool]) {
        bits.split_at(self.alice)
    }
}

/// `⟨alice_mask, x⟩ ⊕ ⟨bob_mask, y⟩ ⊕ constant`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityQuery {
    pub alice_mask: Vec<bool>,
    pub bob_mask: Vec<bool>,
    #[serde(rename = "const")]
    pub constant: bool,
}

fn inner(mask: &[bool], bits: &[bool]) -> bool {
    mask.iter()
        .zip(bits)
        .fold(false, |acc, (m, b)| acc ^ (m & b))
}

impl ParityQuery {
    pub fn from_affine(form: &AffineForm, split: Split) -> Result<Self> {
        let mut q = ParityQuery {
            alice_mask: vec![false; split.alice],
            bob_mask: vec![false; split.bob],
            constant: form.constant_term(),
        };
        for &v in form.vars() {
            match (v, split.input_bit(v)) {
                (Var::Alice(i), Some(_)) => q.alice_mask[i as usize] = true,
                (Var::Bob(j), Some(_)) => q.bob_mask[j as usize] = true,
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "variable {v} is not an input bit"
                    )))
                }
            }
        }
        Ok(q)
    }

    pub fn is_zero(&self) -> bool {
        !self.constant && !self.alice_mask.iter().any(|&b| b) && !self.bob_mask.iter().any(|&b| b)
    }

    /// Alice's share of the answer.
    pub fn alice_share(&self, x: &[bool]) -> bool {
        inner(&self.alice_mask, x)
    }

    /// Bob's share of the answer (carries the constant).
    pub fn bob_share(&self, y: &[bool]) -> bool {
        inner(&self.bob_mask, y) ^ self.constant
    }

    pub fn evaluate(&self, x: &[bool], y: &[bool]) -> bool {
        self.alice_share(x) ^ self.bob_share(y)
    }
}

/// Queries controlling the Pauli correction of one qubit just before an
/// event; `None` means the correction is known to be trivial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Correction {
    pub qubit: usize,
    pub x: Option<usize>,
    pub z: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScheduledEvent {
    /// Index into the circuit's layer list.
    pub layer: usize,
    pub corrections: Vec<Correction>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CompileOptions {
    /// Drop queries whose parity is identically zero.
    pub minimize: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

impl BoundCheck {
    pub fn at_most(name: &str, value: usize, bound: usize) -> Self {
        Self {
            name: name.into(),
            value: value as f64,
            bound: bound as f64,
            holds: value <= bound,
        }
    }
}

/// Probability of output 1 together with the probability that the
/// referee's post-selections succeed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RefereeOutcome {
    pub prob_one: f64,
    pub postselect_probability: f64,
}

/// Outputs 0 iff outcome 0 has probability above 1/2; exact ties are errors.
pub fn determinize(prob_one: f64) -> Result<bool> {
    if (prob_one - 0.5).abs() <= 1e-12 {
        return Err(Error::Tie);
    }
    Ok(prob_one > 0.5)
}

fn is_diagonal(m: &CMatrix) -> bool {
    (0..m.nrows()).all(|r| (0..m.ncols()).all(|c| r == c || m[(r, c)].norm() < 1e-12))
}

/// A non-adaptive parity decision tree: fixed parity queries and a referee
/// that simulates the all-zero-input circuit with the queried corrections.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledPdt {
    circuit: LayeredCircuit,
    split: Split,
    queries: Vec<ParityQuery>,
    schedule: Vec<ScheduledEvent>,
    final_query: Option<usize>,
    /// Clifford circuit with a deterministic outcome: the constant has been
    /// folded into the final query and the referee outputs its answer.
    direct_output: bool,
}

/// Compiles a measurement-free circuit (post-selections allowed).
pub fn compile(
    circuit: &LayeredCircuit,
    split: Split,
    options: CompileOptions,
) -> Result<CompiledPdt> {
    split.check(circuit.num_inputs())?;
    let n = circuit.num_qubits();
    let mut frame = SymbolicPauliFrame::new(n);
    for i in 0..circuit.num_inputs() {
        frame.x[i] = FrameForm::var(split.var(i));
    }
    let mut queries = Vec::new();
    let mut add_query = |form: &FrameForm| -> Result<Option<usize>> {
        let affine = form
            .as_affine()
            .ok_or_else(|| Error::Unsupported("frame left the affine regime".into()))?;
        if options.minimize && affine.is_zero() {
            return Ok(None);
        }
        queries.push(ParityQuery::from_affine(affine, split)?);
        Ok(Some(queries.len() - 1))
    };
    let mut schedule = Vec::new();
    for (li, layer) in circuit.layers().iter().enumerate() {
        let event = match layer {
            Layer::Clifford(gates) => {
                frame = frame.conjugate(&CliffordTableau::from_gates(n, gates)?)?;
                continue;
            }
            Layer::Event(e) => e,
        };
        let x_only = match event {
            Gate::Measure(_) => {
                return Err(Error::Unsupported(
                    "mid-circuit measurement needs the adaptive compiler".into(),
                ))
            }
            Gate::T(_) | Gate::Tdg(_) => true,
            Gate::Magic { .. } => is_diagonal(&circuit.gate_matrix(event)?),
            Gate::Toffoli { .. } | Gate::PostSelect(_) => false,
            Gate::Clifford(_) => unreachable!("Clifford gates live in Clifford layers"),
        };
        let mut corrections = Vec::new();
        for q in event.qubits() {
            let x = add_query(&frame.x[q])?;
            frame.x[q] = FrameForm::zero();
            let z = if x_only {
                None
            } else {
                let z = add_query(&frame.z[q])?;
                frame.z[q] = FrameForm::zero();
                z
            };
            corrections.push(Correction { qubit: q, x, z });
        }
        schedule.push(ScheduledEvent {
            layer: li,
            corrections,
        });
    }
    let final_query = add_query(&frame.x[circuit.output()])?;
    let mut pdt = CompiledPdt {
        circuit: circuit.clone(),
        split,
        queries,
        schedule,
        final_query,
        direct_output: false,
    };
    if let (true, Some(fq)) = (pdt.schedule.is_empty(), final_query) {
        let answers = vec![false; pdt.queries.len()];
        let p = pdt.referee(&answers)?.prob_one;
        if !(EXACT_TOLERANCE..=1.0 - EXACT_TOLERANCE).contains(&p) {
            pdt.queries[fq].constant ^= p > 0.5;
            pdt.direct_output = true;
        }
    }
    Ok(pdt)
}

impl CompiledPdt {
    pub fn circuit(&self) -> &LayeredCircuit {
        &self.circuit
    }

    pub fn split(&self) -> Split {
        self.split
    }

    pub fn queries(&self) -> &[ParityQuery] {
        &self.queries
    }

    pub fn schedule(&self) -> &[ScheduledEvent] {
        &self.schedule
    }

    pub fn final_query(&self) -> Option<usize> {
        self.final_query
    }

    pub fn depth(&self) -> usize {
        self.queries.len()
    }

    pub fn smp_cost(&self) -> usize {
        2 * self.depth()
    }

    pub fn magic_count(&self) -> usize {
        self.circuit.magic_count()
    }

    /// Largest magic-gate weight `c_M` (at least 1).
    pub fn c_m(&self) -> usize {
        self.circuit.max_magic_weight().max(1)
    }

    pub fn answers(&self, x: &[bool], y: &[bool]) -> Vec<bool> {
        self.queries.iter().map(|q| q.evaluate(x, y)).collect()
    }

    /// The referee's function `g`: simulate the all-zero-input circuit,
    /// applying the queried corrections before each event.
    pub fn referee(&self, answers: &[bool]) -> Result<RefereeOutcome> {
        if answers.len() != self.queries.len() {
            return Err(Error::DimensionMismatch {
                expected: self.queries.len(),
                got: answers.len(),
            });
        }
        let flip = self.final_query.map(|i| answers[i]).unwrap_or(false);
        if self.direct_output {
            return Ok(RefereeOutcome {
                prob_one: flip as u8 as f64,
                postselect_probability: 1.0,
            });
        }
        if self.circuit.is_basis_preserving() {
            return self.basis_referee(answers, flip);
        }
        let zeros = vec![false; self.circuit.num_inputs()];
        let mut state = StateVector::initial(&self.circuit, &zeros)?;
        let mut postselect_probability = 1.0;
        let mut events = self.schedule.iter();
        for layer in self.circuit.layers() {
            let event = match layer {
                Layer::Clifford(gates) => {
                    for g in gates {
                        state.apply_clifford(g)?;
                    }
                    continue;
                }
                Layer::Event(e) => e,
            };
            let scheduled = events.next().expect("one schedule entry per event");
            for c in &scheduled.corrections {
                if c.x.is_some_and(|i| answers[i]) {
                    state.apply_clifford(&CliffordGate::X(c.qubit))?;
                }
                if c.z.is_some_and(|i| answers[i]) {
                    state.apply_clifford(&CliffordGate::Z(c.qubit))?;
                }
            }
            match event {
                Gate::PostSelect(pairs) => {
                    let qs: Vec<usize> = pairs.iter().map(|p| p.0).collect();
                    let outcome = pairs
                        .iter()
                        .enumerate()
                        .fold(0, |acc, (j, p)| acc | ((p.1 as u64) << j));
                    postselect_probability *= state.project(&qs, outcome)?;
                }
                g => state.apply_gate(g, self.circuit.matrices())?,
            }
        }
        let p = state.prob_one(self.circuit.output());
        Ok(RefereeOutcome {
            prob_one: if flip { 1.0 - p } else { p },
            postselect_probability,
        })
    }

    /// Referee for circuits that keep basis states basis states: tracks one
    /// bit string instead of the dense state.
    fn basis_referee(&self, answers: &[bool], flip: bool) -> Result<RefereeOutcome> {
        let mut bits = vec![false; self.circuit.num_qubits()];
        let mut events = self.schedule.iter();
        for g in self.circuit.gates() {
            if !g.is_clifford() {
                let scheduled = events.next().expect("one schedule entry per event");
                for c in &scheduled.corrections {
                    bits[c.qubit] ^= c.x.is_some_and(|i| answers[i]);
                }
            }
            match g {
                Gate::Clifford(CliffordGate::X(q) | CliffordGate::Y(q)) => bits[q] ^= true,
                Gate::Clifford(CliffordGate::Cnot(a, b)) => bits[b] ^= bits[a],
                Gate::Clifford(CliffordGate::Swap(a, b)) => bits.swap(a, b),
                Gate::Toffoli { controls, target } => {
                    bits[target] ^= controls.iter().all(|&q| bits[q])
                }
                Gate::PostSelect(pairs) if pairs.iter().any(|&(q, v)| bits[q] != v) => {
                    return Err(Error::ZeroProbabilityPostSelection);
                }
                _ => {}
            }
        }
        let p = bits[self.circuit.output()] as u8 as f64;
        Ok(RefereeOutcome {
            prob_one: if flip { 1.0 - p } else { p },
            postselect_probability: 1.0,
        })
    }

    pub fn run(&self, x: &[bool], y: &[bool]) -> Result<RefereeOutcome> {
        self.referee(&self.answers(x, y))
    }

    /// Deterministic protocol output on `(x, y)`.
    pub fn decide(&self, x: &[bool], y: &[bool]) -> Result<bool> {
        determinize(self.run(x, y)?.prob_one)
    }

    /// `g` as an explicit table of output-1 probabilities indexed by the
    /// answer bits (answer `i` is bit `i`); only for depth ≤ 16.
    pub fn explicit_table(&self) -> Result<Vec<f64>> {
        let k = self.depth();
        if k > EXPLICIT_TABLE_MAX_DEPTH {
            return Err(Error::Unsupported(format!(
                "explicit table for depth {k} > 16"
            )));
        }
        (0..1usize << k)
            .into_par_iter()
            .map(|idx| self.referee(&index_to_bits(idx, k)).map(|o| o.prob_one))
            .collect()
    }

    pub fn depth_bound(&self) -> usize {
        let k = self.magic_count();
        if self.circuit.is_t_only() {
            k + 1
        } else {
            2 * self.c_m() * k + 1 + 2 * self.circuit.postselected_qubits()
        }
    }

    pub fn bound_checks(&self) -> Vec<BoundCheck> {
        let k = self.magic_count();
        let ps = self.circuit.postselected_qubits();
        let mut checks = vec![
            BoundCheck::at_most("pdt_depth", self.depth(), self.depth_bound()),
            BoundCheck::at_most(
                "smp_cost_bits",
                self.smp_cost(),
                4 * self.c_m() * k + 2 + 4 * ps,
            ),
        ];
        if self.circuit.is_t_only() {
            checks.push(BoundCheck::at_most("t_only_depth", self.depth(), k + 1));
        }
        checks
    }

    pub fn smp(&self) -> SmpProtocol<'_> {
        SmpProtocol { pdt: self }
    }

    pub fn report(&self) -> PdtReport {
        PdtReport {
            queries: self.queries.clone(),
            depth: self.depth(),
            smp_cost_bits: self.smp_cost(),
            bound: 4 * self.c_m() * self.magic_count() + 2 + 4 * self.circuit.postselected_qubits(),
            depth_bound: self.depth_bound(),
            c_m: self.c_m(),
            magic_count: self.magic_count(),
            t_only: self.circuit.is_t_only(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PdtReport {
    pub queries: Vec<ParityQuery>,
    pub depth: usize,
    pub smp_cost_bits: usize,
    pub bound: usize,
    pub depth_bound: usize,
    #[serde(rename = "c_M")]
    pub c_m: usize,
    pub magic_count: usize,
    pub t_only: bool,
}

/// The simultaneous-message protocol of a PDT: each player sends their share
/// of every query, the referee XORs the shares and evaluates `g`.
#[derive(Clone, Copy, Debug)]
pub struct SmpProtocol<'a> {
    pdt: &'a CompiledPdt,
}

impl SmpProtocol<'_> {
    pub fn alice_message(&self, x: &[bool]) -> Vec<bool> {
        self.pdt.queries.iter().map(|q| q.alice_share(x)).collect()
    }

    pub fn bob_message(&self, y: &[bool]) -> Vec<bool> {
        self.pdt.queries.iter().map(|q| q.bob_share(y)).collect()
    }

    pub fn referee(&self, alice: &[bool], bob: &[bool]) -> Result<bool> {
        let answers: Vec<bool> = alice.iter().zip(bob).map(|(a, b)| a ^ b).collect();
        determinize(self.pdt.referee(&answers)?.prob_one)
    }

    pub fn cost_bits(&self) -> usize {
        self.pdt.smp_cost()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputCheck {
    pub input: Vec<bool>,
    pub oracle_prob_one: Option<f64>,
    pub compiled_prob_one: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub inputs_checked: usize,
    /// Inputs where post-selection is impossible (outside the support).
    pub unsupported_inputs: usize,
    pub max_deviation: f64,
    pub mismatches: Vec<InputCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the compiled PDT with the statevector oracle on every input.
pub fn verify_exhaustive(pdt: &CompiledPdt) -> Result<VerifyReport> {
    let n = pdt.circuit.num_inputs();
    if n > 24 {
        return Err(Error::SizeCap { qubits: n, cap: 24 });
    }
    let checks: Vec<(InputCheck, f64)> = (0..1usize << n)
        .into_par_iter()
        .map(|idx| {
            let bits = index_to_bits(idx, n);
            let (x, y) = pdt.split.divide(&bits);
            let oracle = match statevector::run(&pdt.circuit, &bits) {
                Ok(r) => Some(r.prob_one()),
                Err(Error::ZeroProbabilityPostSelection) => None,
                Err(e) => return Err(e),
            };
            let compiled = match pdt.run(x, y) {
                Ok(r) => Some(r.prob_one),
                Err(Error::ZeroProbabilityPostSelection) => None,
                Err(e) => return Err(e),
            };
            let deviation = match (oracle, compiled) {
                (Some(a), Some(b)) => (a - b).abs(),
                (None, None) => 0.0,
                _ => f64::INFINITY,
            };
            Ok((
                InputCheck {
                    input: bits,
                    oracle_prob_one: oracle,
                    compiled_prob_one: compiled,
                },
                deviation,
            ))
        })
        .collect::<Result<_>>()?;
    let max_deviation = checks.iter().map(|c| c.1).fold(0.0, f64::max);
    let unsupported_inputs = checks
        .iter()
        .filter(|c| c.0.oracle_prob_one.is_none())
        .count();
    let mismatches = checks
        .into_iter()
        .filter(|c| c.1 > EXACT_TOLERANCE)
        .map(|c| c.0)
        .collect();
    Ok(VerifyReport {
        inputs_checked: 1 << n,
        unsupported_inputs,
        max_deviation,
        mismatches,
    })
}

/// Like [`verify_exhaustive`] for classical reversible circuits (X, CNOT,
/// SWAP, Toffoli), with bit-string evaluation as the oracle. Reaches sizes
/// where the dense oracle is too slow.
pub fn verify_classical(pdt: &CompiledPdt) -> Result<VerifyReport> {
    let n = pdt.circuit.num_inputs();
    if n > 24 {
        return Err(Error::SizeCap { qubits: n, cap: 24 });
    }
    let advice = vec![false; pdt.circuit.num_advice()];
    let checks: Vec<(InputCheck, f64)> = (0..1usize << n)
        .into_par_iter()
        .map(|idx| {
            let bits = index_to_bits(idx, n);
            let (x, y) = pdt.split.divide(&bits);
            let full: Vec<bool> = bits.iter().chain(&advice).copied().collect();
            let out = pdt
                .circuit
                .apply_classical(&full)?
                .ok_or_else(|| Error::Unsupported("circuit is not classical reversible".into()))?;
            let oracle = out[pdt.circuit.output()] as u8 as f64;
            let compiled = pdt.run(x, y)?.prob_one;
            let deviation = (oracle - compiled).abs();
            Ok((
                InputCheck {
                    input: bits,
                    oracle_prob_one: Some(oracle),
                    compiled_prob_one: Some(compiled),
                },
                deviation,
            ))
        })
        .collect::<Result<_>>()?;
    let max_deviation = checks.iter().map(|c| c.1).fold(0.0, f64::max);
    let mismatches = checks
        .into_iter()
        .filter(|c| c.1 > EXACT_TOLERANCE)
        .map(|c| c.0)
        .collect();
    Ok(VerifyReport {
        inputs_checked: 1 << n,
        unsupported_inputs: 0,
        max_deviation,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::equality_circuit;

    #[test]
    fn clifford_equality_is_single_query() {
        let c = equality_circuit(1).unwrap();
        let pdt = compile(&c, Split::halves(2), CompileOptions::default()).unwrap();
        assert_eq!(pdt.depth(), 1);
        assert_eq!(
            pdt.queries()[0],
            ParityQuery {
                alice_mask: vec![true],
                bob_mask: vec![true],
                constant: true
            }
        );
        assert_eq!(pdt.smp_cost(), 2);
        for (x, y) in [(false, false), (false, true), (true, false), (true, true)] {
            assert_eq!(pdt.decide(&[x], &[y]).unwrap(), x == y);
        }
    }

    #[test]
    fn t_gates_query_only_x() {
        let c = LayeredCircuit::parse("inputs 2\noutput 0\nh 0\ncnot 1 0\nt 0\nh 0\nt 0\nh 0\n")
            .unwrap();
        let pdt = compile(&c, Split::halves(2), CompileOptions::default()).unwrap();
        assert_eq!(pdt.depth(), 3);
        assert!(pdt
            .schedule()
            .iter()
            .all(|e| e.corrections.iter().all(|c| c.z.is_none())));
        assert!(verify_exhaustive(&pdt).unwrap().passed());
    }

    #[test]
    fn toffoli_equality_matches_oracle() {
        let c = equality_circuit(2).unwrap();
        let pdt = compile(&c, Split::halves(4), CompileOptions::default()).unwrap();
        assert!(pdt.depth() <= 7);
        let report = verify_exhaustive(&pdt).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(pdt.bound_checks().iter().all(|b| b.holds));
        assert!(pdt.explicit_table().unwrap().len() == 1 << pdt.depth());
    }

    #[test]
    fn minimize_drops_zero_queries() {
        let c = equality_circuit(2).unwrap();
        let full = compile(&c, Split::halves(4), CompileOptions::default()).unwrap();
        let min = compile(&c, Split::halves(4), CompileOptions { minimize: true }).unwrap();
        assert!(min.depth() < full.depth());
        assert!(verify_exhaustive(&min).unwrap().passed());
    }

    #[test]
    fn measurement_is_rejected() {
        let c = LayeredCircuit::parse("inputs 1\noutput 0\nmeasure 0\n").unwrap();
        assert!(matches!(
            compile(&c, Split::new(1, 0), CompileOptions::default()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn ties_are_errors() {
        assert_eq!(determinize(0.5), Err(Error::Tie));
        assert_eq!(determinize(0.2), Ok(false));
    }
}
