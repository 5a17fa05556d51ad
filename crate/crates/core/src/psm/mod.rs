//! Quantum simultaneous-message protocols with a Clifford+T referee, and
//! their transformation into private simultaneous-message protocols with
//! classical messages.
//!
//! Bob teleports his message to Alice, who runs the referee circuit herself
//! behind a symbolic Pauli frame over the Bell-measurement outcomes. Each T
//! gate leaves a `P = S` correction conditioned on the current `X` frame bit;
//! it is removed without communication by a gadget built from pre-shared EPR
//! pairs. Alice finally measures the output qubit and both players send every
//! outcome bit `r` and Alice's bit `s` to the referee, who outputs
//! `s ⊕ decoder(r)`.

mod audit;
mod gadgets;
mod transform;

pub use audit::*;
pub use gadgets::*;
pub use transform::*;

use crate::circuit::{Gate, LayeredCircuit};
use crate::error::{Error, Result};
use crate::pauli::CliffordGate;
use crate::statevector::StateVector;

/// A quantum simultaneous-message protocol with shared EPR pairs.
///
/// `alice` acts on her `n_x` input bits (its inputs) and her message qubits
/// (its advice); likewise `bob`. An EPR pair `(i, j)` links Alice's message
/// qubit `i` with Bob's message qubit `j` before either circuit runs. The
/// referee's inputs are Alice's message qubits followed by Bob's; its advice
/// qubits are fresh `|0⟩` ancillas.
#[derive(Clone, Debug, PartialEq)]
pub struct QSmpSpec {
    pub alice: LayeredCircuit,
    pub bob: LayeredCircuit,
    pub referee: LayeredCircuit,
    pub epr: Vec<(usize, usize)>,
    pub epsilon: f64,
}

/// Positions of every register in the joint dense simulation:
/// `[x | M_A | y | M_B | ancillas]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointLayout {
    pub n_x: usize,
    pub m_a: usize,
    pub n_y: usize,
    pub m_b: usize,
    pub ancillas: usize,
}

impl JointLayout {
    pub fn total(&self) -> usize {
        self.n_x + self.m_a + self.n_y + self.m_b + self.ancillas
    }

    pub fn alice_qubit(&self, local: usize) -> usize {
        local
    }

    pub fn bob_qubit(&self, local: usize) -> usize {
        self.n_x + self.m_a + local
    }

    /// Joint position of referee qubit `q`.
    pub fn referee_qubit(&self, q: usize) -> usize {
        let m = self.m_a + self.m_b;
        if q < self.m_a {
            self.n_x + q
        } else if q < m {
            self.n_x + self.m_a + self.n_y + (q - self.m_a)
        } else {
            self.n_x + self.m_a + self.n_y + self.m_b + (q - m)
        }
    }
}

impl QSmpSpec {
    pub fn new(
        alice: LayeredCircuit,
        bob: LayeredCircuit,
        referee: LayeredCircuit,
        epr: Vec<(usize, usize)>,
        epsilon: f64,
    ) -> Result<Self> {
        let spec = Self {
            alice,
            bob,
            referee,
            epr,
            epsilon,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        for (name, c) in [("alice", &self.alice), ("bob", &self.bob)] {
            if c.advice_state().is_some() {
                return Err(Error::Unsupported(format!(
                    "{name}: message qubits start from EPR pairs or |0⟩"
                )));
            }
            if c.gates().any(|g| !g.is_unitary()) {
                return Err(Error::InvalidCircuit(format!(
                    "{name}: preparation must be unitary"
                )));
            }
        }
        let m = self.alice.num_advice() + self.bob.num_advice();
        if self.referee.num_inputs() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: self.referee.num_inputs(),
            });
        }
        let mut used_a = vec![false; self.alice.num_advice()];
        let mut used_b = vec![false; self.bob.num_advice()];
        for &(i, j) in &self.epr {
            if i >= used_a.len() || j >= used_b.len() || used_a[i] || used_b[j] {
                return Err(Error::InvalidArgument(format!("bad EPR pair ({i}, {j})")));
            }
            used_a[i] = true;
            used_b[j] = true;
        }
        if !(0.0..0.5).contains(&self.epsilon) {
            return Err(Error::InvalidArgument(format!(
                "epsilon {} outside [0, 1/2)",
                self.epsilon
            )));
        }
        Ok(())
    }

    pub fn layout(&self) -> JointLayout {
        JointLayout {
            n_x: self.alice.num_inputs(),
            m_a: self.alice.num_advice(),
            n_y: self.bob.num_inputs(),
            m_b: self.bob.num_advice(),
            ancillas: self.referee.num_advice(),
        }
    }

    /// Message qubits plus referee ancillas (`m + a`).
    pub fn logical_qubits(&self) -> usize {
        self.referee.num_qubits()
    }

    /// Joint state after EPR distribution and both preparations.
    pub fn prepared_state(&self, x: &[bool], y: &[bool]) -> Result<StateVector> {
        let l = self.layout();
        if x.len() != l.n_x || y.len() != l.n_y {
            return Err(Error::DimensionMismatch {
                expected: l.n_x + l.n_y,
                got: x.len() + y.len(),
            });
        }
        let mut index = 0usize;
        for (i, &b) in x.iter().enumerate() {
            index |= (b as usize) << l.alice_qubit(i);
        }
        for (j, &b) in y.iter().enumerate() {
            index |= (b as usize) << l.bob_qubit(j);
        }
        let mut state = StateVector::basis(l.total(), index)?;
        for &(i, j) in &self.epr {
            let a = l.alice_qubit(l.n_x + i);
            let b = l.bob_qubit(l.n_y + j);
            state.apply_clifford(&CliffordGate::H(a))?;
            state.apply_clifford(&CliffordGate::Cnot(a, b))?;
        }
        for g in self.alice.gates() {
            state.apply_gate(&g.relabel(&|q| l.alice_qubit(q)), self.alice.matrices())?;
        }
        for g in self.bob.gates() {
            state.apply_gate(&g.relabel(&|q| l.bob_qubit(q)), self.bob.matrices())?;
        }
        Ok(state)
    }

    /// Exact probability that the original protocol outputs 1.
    pub fn accept_probability(&self, x: &[bool], y: &[bool]) -> Result<f64> {
        let l = self.layout();
        let mut state = self.prepared_state(x, y)?;
        for g in self.referee.gates() {
            if let Gate::Measure(_) = g {
                continue;
            }
            state.apply_gate(&g.relabel(&|q| l.referee_qubit(q)), self.referee.matrices())?;
        }
        Ok(state.prob_one(l.referee_qubit(self.referee.output())))
    }

    /// Majority output of the original protocol, the function it computes.
    pub fn function_value(&self, x: &[bool], y: &[bool]) -> Result<bool> {
        crate::pdt::determinize(self.accept_probability(x, y)?)
    }

    /// Text form: `epsilon e`, `epr i j` lines, then `[alice]`, `[bob]` and
    /// `[referee]` sections in circuit format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut epsilon = 0.0;
        let mut epr = Vec::new();
        let mut sections: [(String, usize); 3] = Default::default();
        let mut current: Option<usize> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.split('#').next().unwrap_or("").trim();
            let section = match trimmed {
                "[alice]" => Some(0),
                "[bob]" => Some(1),
                "[referee]" => Some(2),
                _ => None,
            };
            if let Some(s) = section {
                current = Some(s);
                sections[s].1 = line;
                continue;
            }
            if let Some(s) = current {
                sections[s].0.push_str(raw);
                sections[s].0.push('\n');
                continue;
            }
            let words: Vec<&str> = trimmed.split_whitespace().collect();
            let syntax = |m: &str| Error::Syntax {
                line,
                message: m.to_string(),
            };
            match words.as_slice() {
                [] => {}
                ["epsilon", e] => epsilon = e.parse().map_err(|_| syntax("bad epsilon"))?,
                ["epr", i, j] => epr.push((
                    i.parse().map_err(|_| syntax("bad EPR index"))?,
                    j.parse().map_err(|_| syntax("bad EPR index"))?,
                )),
                _ => {
                    return Err(syntax(&format!(
                        "unexpected `{trimmed}` before the first section"
                    )))
                }
            }
        }
        let circuit = |s: usize, name: &str| -> Result<LayeredCircuit> {
            let (body, start) = &sections[s];
            if *start == 0 {
                return Err(Error::Syntax {
                    line: 1,
                    message: format!("missing [{name}] section"),
                });
            }
            LayeredCircuit::parse(body).map_err(|e| match e {
                Error::Syntax { line, message } => Error::Syntax {
                    line: line + start,
                    message,
                },
                other => other,
            })
        };
        Self::new(
            circuit(0, "alice")?,
            circuit(1, "bob")?,
            circuit(2, "referee")?,
            epr,
            epsilon,
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("epsilon {}\n", self.epsilon);
        for (i, j) in &self.epr {
            out.push_str(&format!("epr {i} {j}\n"));
        }
        for (name, c) in [
            ("alice", &self.alice),
            ("bob", &self.bob),
            ("referee", &self.referee),
        ] {
            out.push_str(&format!("[{name}]\n{}", c.to_text()));
        }
        out
    }
}
