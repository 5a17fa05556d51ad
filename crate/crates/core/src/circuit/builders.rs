use super::{Gate, Layer, LayeredCircuit};
use crate::error::{Error, Result};
use crate::pauli::CliffordGate;

fn cnot(c: usize, t: usize) -> Gate {
    Gate::Clifford(CliffordGate::Cnot(c, t))
}

fn x(q: usize) -> Gate {
    Gate::Clifford(CliffordGate::X(q))
}

fn h(q: usize) -> Gate {
    Gate::Clifford(CliffordGate::H(q))
}

/// Equality of two `n`-bit strings: `x` on qubits `0..n`, `y` on `n..2n`.
/// After `y_i ← x_i ⊕ y_i ⊕ 1` the answer is the AND of the `y` register,
/// computed by one `n`-controlled Toffoli onto an advice qubit (for `n = 1`
/// the single `y` qubit already holds it and the circuit is Clifford).
pub fn equality_circuit(n: usize) -> Result<LayeredCircuit> {
    if n == 0 {
        return Err(Error::InvalidArgument("equality needs n ≥ 1".into()));
    }
    let mut gates: Vec<Gate> = (0..n).flat_map(|i| [cnot(i, n + i), x(n + i)]).collect();
    if n == 1 {
        return LayeredCircuit::from_gates(2, 0, 1, gates);
    }
    gates.push(Gate::Toffoli {
        controls: (n..2 * n).collect(),
        target: 2 * n,
    });
    LayeredCircuit::from_gates(2 * n, 1, 2 * n, gates)
}

/// `CNOT(b→a) · Toffoli(control, a → b) · CNOT(b→a)`, a controlled swap of
/// `a` and `b` using one Toffoli.
pub fn cswap_from_toffoli(control: usize, a: usize, b: usize) -> Vec<Gate> {
    vec![
        cnot(b, a),
        Gate::Toffoli {
            controls: vec![control, a],
            target: b,
        },
        cnot(b, a),
    ]
}

/// Qubit layout of [`controlled_multiplexer`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplexerLayout {
    pub k: usize,
    pub control: usize,
    /// Index bits, most significant first.
    pub index: Vec<usize>,
    pub array: Vec<usize>,
    pub target: usize,
    pub ancillas: Vec<usize>,
}

impl MultiplexerLayout {
    pub fn new(k: usize) -> Self {
        let index: Vec<usize> = (1..=k).collect();
        let array: Vec<usize> = (k + 1..k + 1 + (1 << k)).collect();
        let target = k + 1 + (1 << k);
        let ancillas = (target + 1..target + 1 + 2 * k).collect();
        Self {
            k,
            control: 0,
            index,
            array,
            target,
            ancillas,
        }
    }

    pub fn num_inputs(&self) -> usize {
        self.target + 1
    }
}

/// Controlled multiplexer on `2^k` array bits: when the control is 1, swaps
/// array bit `i` (the value of the index register) with the target bit.
///
/// Level `k+1` splits on the leading index bit: two Toffolis load
/// `control ∧ ¬I₁` and `control ∧ I₁` into fresh ancillas, each drives a
/// level-`k` multiplexer on one half of the array, and two Toffolis clean up.
/// The base level is a single controlled swap, so the Toffoli count obeys
/// `g(0) = 1`, `g(k+1) = 2·g(k) + 4`.
pub fn controlled_multiplexer(k: usize) -> Result<(LayeredCircuit, MultiplexerLayout)> {
    if k == 0 {
        return Err(Error::InvalidArgument("multiplexer needs k ≥ 1".into()));
    }
    let layout = MultiplexerLayout::new(k);
    let mut gates = Vec::new();
    fn build(
        control: usize,
        index: &[usize],
        array: &[usize],
        target: usize,
        ancillas: &[usize],
        gates: &mut Vec<Gate>,
    ) {
        let Some((&lead, rest)) = index.split_first() else {
            gates.extend(cswap_from_toffoli(control, array[0], target));
            return;
        };
        let (low_anc, high_anc) = (ancillas[0], ancillas[1]);
        let load = |gates: &mut Vec<Gate>| {
            gates.push(x(lead));
            gates.push(Gate::Toffoli {
                controls: vec![control, lead],
                target: low_anc,
            });
            gates.push(x(lead));
            gates.push(Gate::Toffoli {
                controls: vec![control, lead],
                target: high_anc,
            });
        };
        load(gates);
        let half = array.len() / 2;
        build(low_anc, rest, &array[..half], target, &ancillas[2..], gates);
        build(
            high_anc,
            rest,
            &array[half..],
            target,
            &ancillas[2..],
            gates,
        );
        load(gates);
    }
    build(
        layout.control,
        &layout.index,
        &layout.array,
        layout.target,
        &layout.ancillas,
        &mut gates,
    );
    let circuit = LayeredCircuit::from_gates(layout.num_inputs(), 2 * k, layout.target, gates)?;
    Ok((circuit, layout))
}

/// Toffoli count `g(k)` of [`controlled_multiplexer`].
pub fn multiplexer_magic_count(k: usize) -> usize {
    (0..k).fold(1, |g, _| 2 * g + 4)
}

/// Qubit layout of [`abcd_referee`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbcdLayout {
    pub log_n: usize,
    /// Alice's message: control qubit then `log n` index qubits.
    pub alice: Vec<usize>,
    /// Bob's message: control qubit then `log n` index qubits.
    pub bob: Vec<usize>,
    pub fanout: Vec<usize>,
}

/// Referee of the ABCD trace protocol for `n × n` unitaries. Each player
/// sends a control qubit and a `log n`-qubit register. The referee XORs the
/// control qubits, copies Bob's control onto `log n` fan-out ancillas, swaps
/// the two registers under those copies in parallel, undoes the fan-out,
/// measures Bob's control qubit in the X basis and outputs 1 on outcome `+`.
pub fn abcd_referee(n: usize) -> Result<(LayeredCircuit, AbcdLayout)> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "n = {n} must be a power of two ≥ 2"
        )));
    }
    let l = n.trailing_zeros() as usize;
    let alice: Vec<usize> = (0..=l).collect();
    let bob: Vec<usize> = (l + 1..2 * (l + 1)).collect();
    let fanout: Vec<usize> = (2 * (l + 1)..2 * (l + 1) + l).collect();
    let mut gates = vec![cnot(bob[0], alice[0])];
    gates.extend(fanout.iter().map(|&f| cnot(bob[0], f)));
    for j in 0..l {
        gates.extend(cswap_from_toffoli(fanout[j], alice[j + 1], bob[j + 1]));
    }
    gates.extend(fanout.iter().map(|&f| cnot(bob[0], f)));
    gates.push(h(bob[0]));
    gates.push(x(bob[0]));
    let circuit = LayeredCircuit::from_gates(2 * (l + 1), l, bob[0], gates)?;
    Ok((
        circuit,
        AbcdLayout {
            log_n: l,
            alice,
            bob,
            fanout,
        },
    ))
}

/// Replaces every two-control Toffoli by a Clifford+T network of T-depth 1
/// using four fresh `|0⟩` ancillas per Toffoli (appended after the existing
/// advice). The CCZ phase `(-1)^{abc}` is `ω^{a+b+c-(a⊕b)-(a⊕c)-(b⊕c)+(a⊕b⊕c)}`
/// with `ω = e^{iπ/4}`; the parities are computed into the ancillas so all
/// seven T/T† gates act in parallel.
pub fn expand_toffolis(circuit: &LayeredCircuit) -> Result<LayeredCircuit> {
    let toffolis = circuit
        .events()
        .filter(|e| matches!(e, Gate::Toffoli { .. }))
        .count();
    let base = circuit.num_qubits();
    let mut out = circuit.with_extra_advice(4 * toffolis).empty_like();
    let mut next = base;
    for layer in circuit.layers() {
        let event = match layer {
            Layer::Clifford(gs) => {
                out.extend(gs.iter().map(|g| Gate::Clifford(*g)))?;
                continue;
            }
            Layer::Event(e) => e,
        };
        let Gate::Toffoli { controls, target } = event else {
            out.push(event.clone())?;
            continue;
        };
        if controls.len() != 2 {
            return Err(Error::Unsupported(format!(
                "T-depth-1 expansion needs exactly 2 controls, got {}",
                controls.len()
            )));
        }
        let (a, b, t) = (controls[0], controls[1], *target);
        let anc = [next, next + 1, next + 2, next + 3];
        next += 4;
        let parities = [
            cnot(a, anc[0]),
            cnot(b, anc[0]),
            cnot(a, anc[1]),
            cnot(t, anc[1]),
            cnot(b, anc[2]),
            cnot(t, anc[2]),
            cnot(a, anc[3]),
            cnot(b, anc[3]),
            cnot(t, anc[3]),
        ];
        out.push(h(t))?;
        out.extend(parities.clone())?;
        out.extend([Gate::T(a), Gate::T(b), Gate::T(t)])?;
        out.extend([
            Gate::Tdg(anc[0]),
            Gate::Tdg(anc[1]),
            Gate::Tdg(anc[2]),
            Gate::T(anc[3]),
        ])?;
        out.extend(parities.into_iter().rev())?;
        out.push(h(t))?;
    }
    Ok(out)
}
