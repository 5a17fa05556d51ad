//! Two-way protocol for adaptive circuits.
//!
//! Alice holds `x` and the advice and simulates the circuit with Bob's input
//! qubits set to 0; Bob's bits live only in a symbolic Pauli frame, which Bob
//! can evaluate. Before each magic gate Bob sends the `X` and `Z` frame bits
//! of the touched qubits; before each measurement he sends the `X` bits of
//! the measured qubits and Alice answers with the outcomes, so both know the
//! branch. A final bit from Bob fixes the output qubit's `X` correction.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{BoundCheck, Split};
use crate::boolfun::{FrameForm, Var};
use crate::circuit::{AdaptiveCircuit, AdaptiveNode, Gate};
use crate::error::{Error, Result};
use crate::pauli::{CliffordGate, SymbolicPauliFrame};
use crate::statevector::{OutputDistribution, StateVector, PROBABILITY_TOLERANCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Party {
    Alice,
    Bob,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Message {
    pub sender: Party,
    pub bits: Vec<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TwoWayTranscript {
    pub messages: Vec<Message>,
}

impl TwoWayTranscript {
    pub fn cost(&self) -> usize {
        self.messages.iter().map(|m| m.bits.len()).sum()
    }

    fn send(&mut self, sender: Party, bits: Vec<bool>) {
        self.messages.push(Message { sender, bits });
    }
}

struct Players<'a> {
    circuit: &'a AdaptiveCircuit,
    y: &'a [bool],
}

impl Players<'_> {
    fn bob_bit(&self, form: &FrameForm) -> bool {
        form.evaluate(&|v| match v {
            Var::Bob(j) => self.y[j as usize],
            _ => unreachable!("the frame only carries Bob's input bits"),
        })
    }

    /// Runs a segment's gates; returns the state and frame before its branch.
    fn segment(
        &self,
        node: &AdaptiveNode,
        state: &mut StateVector,
        frame: &mut SymbolicPauliFrame,
        transcript: &mut TwoWayTranscript,
    ) -> Result<()> {
        for g in &node.gates {
            if let Gate::Clifford(c) = g {
                state.apply_clifford(c)?;
                frame.apply_clifford(c)?;
                continue;
            }
            let mut bits = Vec::new();
            for q in g.qubits() {
                let (bx, bz) = (self.bob_bit(&frame.x[q]), self.bob_bit(&frame.z[q]));
                bits.extend([bx, bz]);
                if bx {
                    state.apply_clifford(&CliffordGate::X(q))?;
                }
                if bz {
                    state.apply_clifford(&CliffordGate::Z(q))?;
                }
                frame.x[q] = FrameForm::zero();
                frame.z[q] = FrameForm::zero();
            }
            transcript.send(Party::Bob, bits);
            state.apply_gate(g, self.circuit.header.matrices())?;
        }
        Ok(())
    }

    /// Bob's X bits for the measured qubits, applied by Alice.
    fn pre_measure(
        &self,
        measured: &[usize],
        state: &mut StateVector,
        frame: &mut SymbolicPauliFrame,
        transcript: &mut TwoWayTranscript,
    ) -> Result<()> {
        let mut bits = Vec::new();
        for &q in measured {
            let bx = self.bob_bit(&frame.x[q]);
            bits.push(bx);
            if bx {
                state.apply_clifford(&CliffordGate::X(q))?;
            }
            frame.x[q] = FrameForm::zero();
            frame.z[q] = FrameForm::zero();
        }
        transcript.send(Party::Bob, bits);
        Ok(())
    }

    fn start(&self, x: &[bool]) -> Result<(StateVector, SymbolicPauliFrame)> {
        let header = &self.circuit.header;
        let split = Split::new(x.len(), self.y.len());
        split.check(header.num_inputs())?;
        let bits: Vec<bool> = x
            .iter()
            .copied()
            .chain(std::iter::repeat_n(false, self.y.len()))
            .collect();
        let state = StateVector::initial(header, &bits)?;
        let mut frame = SymbolicPauliFrame::new(header.num_qubits());
        for j in 0..self.y.len() {
            frame.x[x.len() + j] = FrameForm::var(Var::Bob(j as u32));
        }
        Ok((state, frame))
    }
}

fn outcome_bits(outcome: u64, k: usize) -> Vec<bool> {
    (0..k).map(|j| outcome >> j & 1 == 1).collect()
}

/// One seeded execution: the transcript and Alice's output bit.
pub fn run_adaptive_protocol(
    circuit: &AdaptiveCircuit,
    split: Split,
    x: &[bool],
    y: &[bool],
    seed: u64,
) -> Result<(TwoWayTranscript, bool)> {
    if x.len() != split.alice || y.len() != split.bob {
        return Err(Error::DimensionMismatch {
            expected: split.total(),
            got: x.len() + y.len(),
        });
    }
    let players = Players { circuit, y };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut state, mut frame) = players.start(x)?;
    let mut transcript = TwoWayTranscript::default();
    let mut node = &circuit.root;
    loop {
        players.segment(node, &mut state, &mut frame, &mut transcript)?;
        let Some(branch) = &node.branch else { break };
        players.pre_measure(&branch.measured, &mut state, &mut frame, &mut transcript)?;
        let mut u: f64 = rng.gen();
        let mut outcome = (1u64 << branch.measured.len()) - 1;
        for o in 0..1u64 << branch.measured.len() {
            let p = state.outcome_probability(&branch.measured, o);
            if u < p {
                outcome = o;
                break;
            }
            u -= p;
        }
        state.project(&branch.measured, outcome)?;
        transcript.send(Party::Alice, outcome_bits(outcome, branch.measured.len()));
        node = branch
            .children
            .get(&outcome)
            .ok_or(Error::MissingBranch(outcome))?;
    }
    let out_q = circuit.header.output();
    let flip = players.bob_bit(&frame.x[out_q]);
    transcript.send(Party::Bob, vec![flip]);
    let p1 = state.prob_one(out_q);
    let bit = rng.gen::<f64>() < p1;
    Ok((transcript, bit ^ flip))
}

/// Exact output distribution of the protocol, plus the largest transcript
/// length over all reachable branches.
pub fn adaptive_protocol_distribution(
    circuit: &AdaptiveCircuit,
    split: Split,
    x: &[bool],
    y: &[bool],
) -> Result<(OutputDistribution, usize)> {
    let players = Players { circuit, y };
    let (state, frame) = players.start(&x[..split.alice.min(x.len())])?;
    fn go(
        players: &Players,
        node: &AdaptiveNode,
        mut state: StateVector,
        mut frame: SymbolicPauliFrame,
        mut transcript: TwoWayTranscript,
    ) -> Result<(BTreeMap<u64, f64>, usize)> {
        players.segment(node, &mut state, &mut frame, &mut transcript)?;
        let Some(branch) = &node.branch else {
            let out_q = players.circuit.header.output();
            let flip = players.bob_bit(&frame.x[out_q]);
            let p1 = state.prob_one(out_q);
            let p1 = if flip { 1.0 - p1 } else { p1 };
            return Ok((
                BTreeMap::from([(0, 1.0 - p1), (1, p1)]),
                transcript.cost() + 1,
            ));
        };
        players.pre_measure(&branch.measured, &mut state, &mut frame, &mut transcript)?;
        let mut dist = BTreeMap::new();
        let mut worst = 0;
        for o in 0..1u64 << branch.measured.len() {
            let p = state.outcome_probability(&branch.measured, o);
            if p <= PROBABILITY_TOLERANCE {
                continue;
            }
            let mut s = state.clone();
            s.project(&branch.measured, o)?;
            let mut t = transcript.clone();
            t.send(Party::Alice, outcome_bits(o, branch.measured.len()));
            let child = branch.children.get(&o).ok_or(Error::MissingBranch(o))?;
            let (d, cost) = go(players, child, s, frame.clone(), t)?;
            worst = worst.max(cost);
            for (k, q) in d {
                *dist.entry(k).or_insert(0.0) += p * q;
            }
        }
        Ok((dist, worst))
    }
    let (probs, worst) = go(
        &players,
        &circuit.root,
        state,
        frame,
        TwoWayTranscript::default(),
    )?;
    Ok((OutputDistribution { width: 1, probs }, worst))
}

/// Worst-case transcript length over all root-to-leaf paths.
pub fn adaptive_worst_case_bits(circuit: &AdaptiveCircuit) -> usize {
    fn go(node: &AdaptiveNode) -> usize {
        let own: usize = node
            .gates
            .iter()
            .filter(|g| g.is_magic())
            .map(|g| 2 * g.weight())
            .sum();
        own + node
            .branch
            .as_ref()
            .map(|b| 2 * b.measured.len() + b.children.values().map(go).max().unwrap_or(0))
            .unwrap_or(0)
    }
    go(&circuit.root) + 1
}

pub fn adaptive_bound_checks(circuit: &AdaptiveCircuit) -> Vec<BoundCheck> {
    let c_m = circuit.max_event_weight().max(1);
    vec![BoundCheck::at_most(
        "two_way_cost_bits",
        adaptive_worst_case_bits(circuit),
        2 * c_m * circuit.cost() + 1,
    )]
}
