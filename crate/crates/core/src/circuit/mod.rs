//! Layered Clifford+magic circuits.
//!
//! Qubits `0..num_inputs` carry the classical input bits, the remaining
//! `num_advice` qubits start in the advice state (default `|0…0⟩`). A circuit
//! is kept as alternating Clifford layers and single events (magic gate,
//! measurement, post-selection); pushing gates merges adjacent Clifford
//! layers, so the layer list is always normalized.

mod builders;
mod text;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use builders::*;

use crate::error::{Error, Result};
use crate::linalg::{c, unitarity_deviation, CMatrix};
use crate::pauli::CliffordGate;

pub const UNITARY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    Clifford(CliffordGate),
    T(usize),
    Tdg(usize),
    /// Flips `target` when every control is 1.
    Toffoli {
        controls: Vec<usize>,
        target: usize,
    },
    /// Named unitary from the circuit's matrix table. In its matrix the first
    /// listed qubit is the most significant bit of the local index.
    Magic {
        name: String,
        qubits: Vec<usize>,
    },
    Measure(Vec<usize>),
    PostSelect(Vec<(usize, bool)>),
}

impl Gate {
    /// The same gate with every qubit `q` renamed to `f(q)`.
    pub fn relabel(&self, f: &dyn Fn(usize) -> usize) -> Gate {
        use CliffordGate::*;
        match self {
            Gate::Clifford(c) => Gate::Clifford(match *c {
                H(q) => H(f(q)),
                S(q) => S(f(q)),
                Sdg(q) => Sdg(f(q)),
                X(q) => X(f(q)),
                Y(q) => Y(f(q)),
                Z(q) => Z(f(q)),
                Cnot(a, b) => Cnot(f(a), f(b)),
                Cz(a, b) => Cz(f(a), f(b)),
                Swap(a, b) => Swap(f(a), f(b)),
            }),
            Gate::T(q) => Gate::T(f(*q)),
            Gate::Tdg(q) => Gate::Tdg(f(*q)),
            Gate::Toffoli { controls, target } => Gate::Toffoli {
                controls: controls.iter().map(|&q| f(q)).collect(),
                target: f(*target),
            },
            Gate::Magic { name, qubits } => Gate::Magic {
                name: name.clone(),
                qubits: qubits.iter().map(|&q| f(q)).collect(),
            },
            Gate::Measure(qs) => Gate::Measure(qs.iter().map(|&q| f(q)).collect()),
            Gate::PostSelect(p) => Gate::PostSelect(p.iter().map(|&(q, v)| (f(q), v)).collect()),
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Clifford(g) => g.qubits(),
            Gate::T(q) | Gate::Tdg(q) => vec![*q],
            Gate::Toffoli { controls, target } => {
                controls.iter().copied().chain([*target]).collect()
            }
            Gate::Magic { qubits, .. } | Gate::Measure(qubits) => qubits.clone(),
            Gate::PostSelect(pairs) => pairs.iter().map(|p| p.0).collect(),
        }
    }

    pub fn weight(&self) -> usize {
        self.qubits().len()
    }

    pub fn is_clifford(&self) -> bool {
        matches!(self, Gate::Clifford(_))
    }

    pub fn is_magic(&self) -> bool {
        matches!(
            self,
            Gate::T(_) | Gate::Tdg(_) | Gate::Toffoli { .. } | Gate::Magic { .. }
        )
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self, Gate::Measure(_) | Gate::PostSelect(_))
    }

    fn check(&self, n: usize) -> Result<()> {
        if let Gate::Clifford(g) = self {
            return g.check(n);
        }
        let qs = self.qubits();
        if qs.is_empty() {
            return Err(Error::InvalidCircuit("gate acts on no qubits".into()));
        }
        if let Some(&q) = qs.iter().find(|&&q| q >= n) {
            return Err(Error::QubitOutOfRange { qubit: q, count: n });
        }
        let mut sorted = qs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != qs.len() {
            return Err(Error::InvalidCircuit(format!("repeated qubit in {self:?}")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Layer {
    Clifford(Vec<CliffordGate>),
    Event(Gate),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayeredCircuit {
    num_inputs: usize,
    num_advice: usize,
    output: usize,
    layers: Vec<Layer>,
    matrices: BTreeMap<String, CMatrix>,
    advice_state: Option<Vec<Complex64>>,
}

impl LayeredCircuit {
    pub fn new(num_inputs: usize, num_advice: usize, output: usize) -> Result<Self> {
        let n = num_inputs + num_advice;
        if output >= n {
            return Err(Error::QubitOutOfRange {
                qubit: output,
                count: n,
            });
        }
        Ok(Self {
            num_inputs,
            num_advice,
            output,
            layers: Vec::new(),
            matrices: BTreeMap::new(),
            advice_state: None,
        })
    }

    pub fn from_gates(
        num_inputs: usize,
        num_advice: usize,
        output: usize,
        gates: impl IntoIterator<Item = Gate>,
    ) -> Result<Self> {
        let mut circuit = Self::new(num_inputs, num_advice, output)?;
        circuit.extend(gates)?;
        Ok(circuit)
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_advice(&self) -> usize {
        self.num_advice
    }

    pub fn num_qubits(&self) -> usize {
        self.num_inputs + self.num_advice
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn set_output(&mut self, q: usize) -> Result<()> {
        if q >= self.num_qubits() {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                count: self.num_qubits(),
            });
        }
        self.output = q;
        Ok(())
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn matrices(&self) -> &BTreeMap<String, CMatrix> {
        &self.matrices
    }

    pub fn advice_state(&self) -> Option<&[Complex64]> {
        self.advice_state.as_deref()
    }

    /// Registers a named magic matrix (must be unitary).
    pub fn add_matrix(&mut self, name: &str, matrix: CMatrix) -> Result<()> {
        if !matrix.is_square() || !matrix.nrows().is_power_of_two() {
            return Err(Error::InvalidCircuit(format!(
                "matrix `{name}` is not 2^k × 2^k"
            )));
        }
        let deviation = unitarity_deviation(&matrix);
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NonUnitary {
                name: name.to_string(),
                deviation,
            });
        }
        self.matrices.insert(name.to_string(), matrix);
        Ok(())
    }

    pub fn set_advice_state(&mut self, amplitudes: Vec<Complex64>) -> Result<()> {
        let dim = 1usize << self.num_advice;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: amplitudes.len(),
            });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > UNITARY_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "advice state has squared norm {norm}"
            )));
        }
        self.advice_state = Some(amplitudes);
        Ok(())
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.check(self.num_qubits())?;
        if let Gate::Magic { name, qubits } = &gate {
            let m = self
                .matrices
                .get(name)
                .ok_or_else(|| Error::InvalidCircuit(format!("unknown magic matrix `{name}`")))?;
            if m.nrows() != 1 << qubits.len() {
                return Err(Error::DimensionMismatch {
                    expected: 1 << qubits.len(),
                    got: m.nrows(),
                });
            }
        }
        match (gate, self.layers.last_mut()) {
            (Gate::Clifford(g), Some(Layer::Clifford(layer))) => layer.push(g),
            (Gate::Clifford(g), _) => self.layers.push(Layer::Clifford(vec![g])),
            (event, _) => self.layers.push(Layer::Event(event)),
        }
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    pub fn gates(&self) -> impl Iterator<Item = Gate> + '_ {
        self.layers.iter().flat_map(|layer| match layer {
            Layer::Clifford(gs) => gs.iter().map(|g| Gate::Clifford(*g)).collect::<Vec<_>>(),
            Layer::Event(e) => vec![e.clone()],
        })
    }

    /// Copy of the header (sizes, output, matrices, advice) without gates.
    pub fn empty_like(&self) -> Self {
        Self {
            layers: Vec::new(),
            ..self.clone()
        }
    }

    /// Same gates, with `extra` fresh `|0⟩` advice qubits appended.
    pub fn with_extra_advice(&self, extra: usize) -> Self {
        let mut out = self.clone();
        out.num_advice += extra;
        if let Some(state) = &self.advice_state {
            let mut padded = vec![c(0.0, 0.0); state.len() << extra];
            padded[..state.len()].copy_from_slice(state);
            out.advice_state = Some(padded);
        }
        out
    }

    pub fn events(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().filter_map(|l| match l {
            Layer::Event(e) => Some(e),
            Layer::Clifford(_) => None,
        })
    }

    pub fn magic_count(&self) -> usize {
        self.events().filter(|e| e.is_magic()).count()
    }

    pub fn t_count(&self) -> usize {
        self.events()
            .filter(|e| matches!(e, Gate::T(_) | Gate::Tdg(_)))
            .count()
    }

    pub fn measurement_count(&self) -> usize {
        self.events()
            .filter(|e| matches!(e, Gate::Measure(_)))
            .count()
    }

    pub fn postselected_qubits(&self) -> usize {
        self.events()
            .map(|e| {
                if let Gate::PostSelect(p) = e {
                    p.len()
                } else {
                    0
                }
            })
            .sum()
    }

    /// Largest weight of any magic gate (`c_M`); 0 for Clifford circuits.
    pub fn max_magic_weight(&self) -> usize {
        self.events()
            .filter(|e| e.is_magic())
            .map(Gate::weight)
            .max()
            .unwrap_or(0)
    }

    pub fn is_t_only(&self) -> bool {
        self.events()
            .all(|e| matches!(e, Gate::T(_) | Gate::Tdg(_)))
    }

    /// Number of magic layers after as-soon-as-possible scheduling; any
    /// magic gate (T, Toffoli, named) counts as one layer on its qubits.
    pub fn t_depth(&self) -> usize {
        let mut depth = vec![0usize; self.num_qubits()];
        for g in self.gates() {
            let qs = g.qubits();
            let level = qs.iter().map(|&q| depth[q]).max().unwrap_or(0) + g.is_magic() as usize;
            for q in qs {
                depth[q] = level;
            }
        }
        depth.into_iter().max().unwrap_or(0)
    }

    /// Local matrix of a unitary gate (first listed qubit most significant).
    pub fn gate_matrix(&self, gate: &Gate) -> Result<CMatrix> {
        gate_matrix(gate, &self.matrices)
    }

    /// Whether every gate maps computational basis states to basis states
    /// up to phase, starting from a basis state.
    pub fn is_basis_preserving(&self) -> bool {
        use CliffordGate::*;
        self.advice_state.is_none()
            && self.gates().all(|g| match g {
                Gate::Clifford(H(_)) => false,
                Gate::Clifford(_) | Gate::T(_) | Gate::Tdg(_) | Gate::Toffoli { .. } => true,
                Gate::Measure(_) | Gate::PostSelect(_) => true,
                Gate::Magic { .. } => false,
            })
    }

    /// Applies the circuit to a computational basis state when every gate is
    /// a classical reversible gate (X, CNOT, SWAP, Toffoli). Returns `None`
    /// if the circuit contains anything else.
    pub fn apply_classical(&self, bits: &[bool]) -> Result<Option<Vec<bool>>> {
        if bits.len() != self.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits(),
                got: bits.len(),
            });
        }
        let mut state = bits.to_vec();
        for g in self.gates() {
            match g {
                Gate::Clifford(CliffordGate::X(q)) => state[q] ^= true,
                Gate::Clifford(CliffordGate::Cnot(a, b)) => state[b] ^= state[a],
                Gate::Clifford(CliffordGate::Swap(a, b)) => state.swap(a, b),
                Gate::Toffoli { controls, target } => {
                    state[target] ^= controls.iter().all(|&q| state[q]);
                }
                _ => return Ok(None),
            }
        }
        Ok(Some(state))
    }

    /// Circuit text (see [`LayeredCircuit::parse`]).
    pub fn to_text(&self) -> String {
        text::format(self)
    }

    /// Parses the line-based circuit format:
    ///
    /// ```text
    /// inputs 2
    /// advice 1
    /// output 2
    /// h 0
    /// cnot 0 1
    /// toffoli 0 1 2
    /// magic u 0 2
    /// measure 0 1
    /// postselect 1=0
    /// begin json
    /// {"matrices": {"u": [[[1,0],[0,0],...], ...]}, "advice_state": [[1,0],[0,0]]}
    /// end json
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        text::parse(text)
    }
}

pub fn gate_matrix(gate: &Gate, matrices: &BTreeMap<String, CMatrix>) -> Result<CMatrix> {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let i = c(0.0, 1.0);
    let s2 = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let m2 = |v: [Complex64; 4]| CMatrix::from_row_slice(2, 2, &v);
    let perm = |dim: usize, f: &dyn Fn(usize) -> usize| {
        let mut m = CMatrix::zeros(dim, dim);
        for b in 0..dim {
            m[(f(b), b)] = one;
        }
        m
    };
    let t_phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    Ok(match gate {
        Gate::Clifford(g) => match *g {
            CliffordGate::H(_) => m2([s2, s2, s2, -s2]),
            CliffordGate::S(_) => m2([one, zero, zero, i]),
            CliffordGate::Sdg(_) => m2([one, zero, zero, -i]),
            CliffordGate::X(_) => m2([zero, one, one, zero]),
            CliffordGate::Y(_) => m2([zero, -i, i, zero]),
            CliffordGate::Z(_) => m2([one, zero, zero, -one]),
            // local index: first qubit is bit 1, second is bit 0
            CliffordGate::Cnot(..) => perm(4, &|b| if b & 2 != 0 { b ^ 1 } else { b }),
            CliffordGate::Swap(..) => perm(4, &|b| ((b & 1) << 1) | (b >> 1)),
            CliffordGate::Cz(..) => {
                let mut m = CMatrix::identity(4, 4);
                m[(3, 3)] = -one;
                m
            }
        },
        Gate::T(_) => m2([one, zero, zero, t_phase]),
        Gate::Tdg(_) => m2([one, zero, zero, t_phase.conj()]),
        Gate::Toffoli { controls, .. } => {
            let k = controls.len();
            let dim = 1usize << (k + 1);
            let all = (dim - 1) & !1;
            perm(dim, &|b| if b & all == all { b ^ 1 } else { b })
        }
        Gate::Magic { name, .. } => matrices
            .get(name)
            .cloned()
            .ok_or_else(|| Error::InvalidCircuit(format!("unknown magic matrix `{name}`")))?,
        Gate::Measure(_) | Gate::PostSelect(_) => {
            return Err(Error::Unsupported(
                "measurement has no unitary matrix".into(),
            ))
        }
    })
}

/// Probabilistic mixture of unitary circuits on the same register.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedCircuit {
    branches: Vec<(f64, LayeredCircuit)>,
}

impl MixedCircuit {
    pub fn new(branches: Vec<(f64, LayeredCircuit)>) -> Result<Self> {
        let total: f64 = branches.iter().map(|b| b.0).sum();
        if branches.is_empty() || branches.iter().any(|b| b.0 < 0.0) || (total - 1.0).abs() > 1e-10
        {
            return Err(Error::BadProbabilities(total));
        }
        Ok(Self { branches })
    }

    pub fn branches(&self) -> &[(f64, LayeredCircuit)] {
        &self.branches
    }

    /// Worst-case magic count over the branches.
    pub fn magic_count(&self) -> usize {
        self.branches
            .iter()
            .map(|b| b.1.magic_count())
            .max()
            .unwrap_or(0)
    }
}

/// A circuit whose continuation depends on mid-circuit measurement outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptiveNode {
    /// Unitary gates of this segment (no measurements).
    pub gates: Vec<Gate>,
    pub branch: Option<Branch>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub measured: Vec<usize>,
    /// Keyed by outcome; bit `j` of the key is the outcome of `measured[j]`.
    pub children: BTreeMap<u64, AdaptiveNode>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdaptiveCircuit {
    /// Register sizes, output qubit, matrices and advice; its gates are ignored.
    pub header: LayeredCircuit,
    pub root: AdaptiveNode,
}

impl AdaptiveCircuit {
    pub fn new(header: LayeredCircuit, root: AdaptiveNode) -> Result<Self> {
        let header = header.empty_like();
        fn check(node: &AdaptiveNode, header: &LayeredCircuit) -> Result<()> {
            let mut probe = header.clone();
            for g in &node.gates {
                if !g.is_unitary() {
                    return Err(Error::InvalidCircuit(
                        "measurement inside an adaptive segment".into(),
                    ));
                }
                probe.push(g.clone())?;
            }
            if let Some(b) = &node.branch {
                probe.push(Gate::Measure(b.measured.clone()))?;
                for child in b.children.values() {
                    check(child, header)?;
                }
            }
            Ok(())
        }
        check(&root, &header)?;
        Ok(Self { header, root })
    }

    /// Worst case over root-to-leaf paths of magic gates plus measurements.
    pub fn cost(&self) -> usize {
        fn go(node: &AdaptiveNode) -> usize {
            let own = node.gates.iter().filter(|g| g.is_magic()).count();
            own + node
                .branch
                .as_ref()
                .map(|b| 1 + b.children.values().map(go).max().unwrap_or(0))
                .unwrap_or(0)
        }
        go(&self.root)
    }

    /// Largest weight over magic gates and measurements.
    pub fn max_event_weight(&self) -> usize {
        fn go(node: &AdaptiveNode) -> usize {
            let own = node
                .gates
                .iter()
                .filter(|g| g.is_magic())
                .map(Gate::weight)
                .max()
                .unwrap_or(0);
            let below = node
                .branch
                .as_ref()
                .map(|b| {
                    b.children
                        .values()
                        .map(go)
                        .max()
                        .unwrap_or(0)
                        .max(b.measured.len())
                })
                .unwrap_or(0);
            own.max(below)
        }
        go(&self.root)
    }
}
