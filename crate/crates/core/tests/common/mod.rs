//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use magicomm::boolfun::{AffineForm, FrameForm, Var};
use magicomm::circuit::{
    equality_circuit, AdaptiveCircuit, AdaptiveNode, Branch, Gate, LayeredCircuit, MixedCircuit,
};
use magicomm::gardenhose::{AliceMatching, BobMatching, GardenHoseProtocol};
use magicomm::pauli::{CliffordGate, CliffordTableau, PauliString, SymbolicPauliFrame};
use magicomm::psm::{xor_gadget_frame, GhGadget, QSmpSpec};
use magicomm::statevector::{unitary_of, StateVector};

// ---------------------------------------------------------------- circuits

pub fn clifford_from_code(kind: u8, a: usize, b: usize, n: usize) -> CliffordGate {
    use CliffordGate::*;
    let a = a % n;
    let mut b = b % n;
    if b == a {
        b = (a + 1) % n;
    }
    let kinds = if n == 1 { 6 } else { 9 };
    match kind % kinds {
        0 => H(a),
        1 => S(a),
        2 => Sdg(a),
        3 => X(a),
        4 => Y(a),
        5 => Z(a),
        6 => Cnot(a, b),
        7 => Cz(a, b),
        _ => Swap(a, b),
    }
}

/// Three input qubits (split 2 | 1), eight random Cliffords and up to three
/// T or T† gates.
pub fn random_clifford_t(seed: u64) -> LayeredCircuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = LayeredCircuit::new(3, 0, rng.gen_range(0..3)).unwrap();
    let t_count = rng.gen_range(0..=3);
    let mut t_slots: Vec<usize> = (0..t_count).map(|_| rng.gen_range(0..9)).collect();
    t_slots.sort();
    for i in 0..9 {
        while t_slots.first() == Some(&i) {
            t_slots.remove(0);
            let q = rng.gen_range(0..3);
            c.push(if rng.gen() { Gate::T(q) } else { Gate::Tdg(q) })
                .unwrap();
        }
        if i < 8 {
            let g = clifford_from_code(rng.gen(), rng.gen(), rng.gen(), 3);
            c.push(Gate::Clifford(g)).unwrap();
        }
    }
    c
}

/// Half exact equality on 2+2 bits, half a fair coin: success 3/4 on every
/// input.
pub fn mixed_fixture() -> MixedCircuit {
    let exact = equality_circuit(2).unwrap();
    let mut coin = LayeredCircuit::new(4, 1, 4).unwrap();
    coin.push(Gate::Clifford(CliffordGate::H(4))).unwrap();
    MixedCircuit::new(vec![(0.5, exact), (0.5, coin)]).unwrap()
}

pub fn magic_state() -> Vec<Complex64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        Complex64::new(r, 0.0),
        Complex64::from_polar(r, std::f64::consts::FRAC_PI_4),
    ]
}

/// `T` on `x ⊕ y` (in the Hadamard basis) by injection of the advice state
/// `T|+⟩`: CNOT data→ancilla, measure the ancilla, apply `S` on outcome 1.
pub fn injection_fixture() -> AdaptiveCircuit {
    use CliffordGate::*;
    let mut header = LayeredCircuit::new(2, 1, 0).unwrap();
    header.set_advice_state(magic_state()).unwrap();
    let tail = |extra: Vec<Gate>| {
        let mut gates = extra;
        gates.push(Gate::Clifford(H(0)));
        AdaptiveNode {
            gates,
            branch: None,
        }
    };
    let root = AdaptiveNode {
        gates: vec![
            Gate::Clifford(Cnot(1, 0)),
            Gate::Clifford(H(0)),
            Gate::Clifford(Cnot(0, 2)),
        ],
        branch: Some(Branch {
            measured: vec![2],
            children: BTreeMap::from([(0, tail(vec![])), (1, tail(vec![Gate::Clifford(S(0))]))]),
        }),
    };
    AdaptiveCircuit::new(header, root).unwrap()
}

/// `k` advice qubits put in `|+⟩`, copied into the data qubit and
/// post-selected on 1; output `x ⊕ y ⊕ k mod 2`.
pub fn postselect_fixture(k: usize) -> LayeredCircuit {
    use CliffordGate::*;
    let mut c = LayeredCircuit::new(2, k, 0).unwrap();
    for j in 0..k {
        c.push(Gate::Clifford(H(2 + j))).unwrap();
        c.push(Gate::Clifford(Cnot(2 + j, 0))).unwrap();
    }
    if k > 0 {
        c.push(Gate::PostSelect((0..k).map(|j| (2 + j, true)).collect()))
            .unwrap();
    }
    c.push(Gate::Clifford(Cnot(1, 0))).unwrap();
    c
}

// ---------------------------------------------------------------- PSM specs

/// Alice sends `|x⟩`, Bob `|y⟩`; the referee XORs them.
pub const XOR_SPEC: &str = "epsilon 0
[alice]
inputs 1
advice 1
output 0
cnot 0 1
[bob]
inputs 1
advice 1
output 0
cnot 0 1
[referee]
inputs 2
output 1
cnot 0 1
";

/// Two teleported qubits: Bob sends `|y⟩` and his half of an EPR pair on
/// which Alice applied `Z^x`; the referee decodes the Bell pair and adds `y`.
pub const EPR_XOR_SPEC: &str = "epsilon 0
epr 0 1
[alice]
inputs 1
advice 1
output 0
cz 0 1
[bob]
inputs 1
advice 2
output 0
cnot 0 1
[referee]
inputs 3
output 0
cnot 0 2
h 0
cnot 1 0
";

/// Identity-style referee: Bob's two message qubits hold `y` and `0`; the
/// referee folds the second into the first and measures it.
pub const PARITY_SPEC: &str = "epsilon 0
[alice]
inputs 1
advice 1
output 0
[bob]
inputs 1
advice 2
output 0
cnot 0 1
[referee]
inputs 3
output 1
cnot 2 1
";

/// `AND(x, y)` measured in a rotated basis: not deterministic, `ε > 0`.
pub const NOISY_SPEC: &str = "epsilon 0.2
[alice]
inputs 1
advice 1
output 0
cnot 0 1
[bob]
inputs 1
advice 1
output 0
cnot 0 1
h 1
t 1
h 1
[referee]
inputs 2
output 0
cnot 1 0
";

/// Depth-two referee: `x ⊕ y` on an ancilla, then `H T H T`. The second
/// correction has a condition mixing both players' outcome bits. Outputs
/// `x ⊕ y` with error `sin²(π/8)`.
pub const DEPTH_TWO_SPEC: &str = "epsilon 0.15
[alice]
inputs 1
advice 1
output 0
cnot 0 1
[bob]
inputs 1
advice 1
output 0
cnot 0 1
[referee]
inputs 2
advice 1
output 2
cnot 0 2
cnot 1 2
t 2
h 2
t 2
h 2
";

pub fn d0_specs() -> Vec<(&'static str, QSmpSpec)> {
    [
        ("xor", XOR_SPEC),
        ("epr_xor", EPR_XOR_SPEC),
        ("parity", PARITY_SPEC),
        ("noisy", NOISY_SPEC),
    ]
    .into_iter()
    .map(|(name, text)| (name, QSmpSpec::parse(text).unwrap()))
    .collect()
}

pub fn bits(idx: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| idx >> i & 1 == 1).collect()
}

pub fn all_inputs(spec: &QSmpSpec) -> Vec<(Vec<bool>, Vec<bool>)> {
    let l = spec.layout();
    (0..1usize << (l.n_x + l.n_y))
        .map(|idx| {
            let b = bits(idx, l.n_x + l.n_y);
            (b[..l.n_x].to_vec(), b[l.n_x..].to_vec())
        })
        .collect()
}

// ---------------------------------------------------------------- oracles

/// `⟨x₁| H |x₂⟩ / n` by the double loop over the Hadamard matrix entries.
pub fn naive_forr(x: &[i8]) -> f64 {
    let half = x.len() / 2;
    let norm = 1.0 / (half as f64).sqrt();
    let mut acc = 0.0;
    for i in 0..half {
        for j in 0..half {
            let sign = if (i & j).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            acc += x[i] as f64 * sign * norm * x[half + j] as f64;
        }
    }
    acc / x.len() as f64
}

fn widen(state: &StateVector, extra: usize) -> StateVector {
    let mut amps = state.amplitudes().to_vec();
    amps.resize(amps.len() << extra, Complex64::new(0.0, 0.0));
    StateVector::from_amplitudes(amps).unwrap()
}

/// Bell measurement of `(p, q)`: CNOT p→q, H p; `t` is p's outcome and `s`
/// is q's, so a qubit teleported out of `p` carries `X^s Z^t`.
pub fn bell_rotate(state: &mut StateVector, p: usize, q: usize) {
    state.apply_clifford(&CliffordGate::Cnot(p, q)).unwrap();
    state.apply_clifford(&CliffordGate::H(p)).unwrap();
}

/// Transcript distribution (`2·r + s`) of a Clifford-referee protocol with
/// Bob's message teleported through real EPR pairs.
pub fn full_epr_distribution(spec: &QSmpSpec, x: &[bool], y: &[bool]) -> Vec<f64> {
    let l = spec.layout();
    let base = l.total();
    let mut state = widen(&spec.prepared_state(x, y).unwrap(), 2 * l.m_b);
    let bob_half = |j: usize| base + 2 * j;
    let alice_half = |j: usize| base + 2 * j + 1;
    for j in 0..l.m_b {
        state.apply_clifford(&CliffordGate::H(bob_half(j))).unwrap();
        state
            .apply_clifford(&CliffordGate::Cnot(bob_half(j), alice_half(j)))
            .unwrap();
        bell_rotate(&mut state, l.bob_qubit(l.n_y + j), bob_half(j));
    }
    let relabel = |q: usize| {
        if q >= l.m_a && q < l.m_a + l.m_b {
            alice_half(q - l.m_a)
        } else {
            l.referee_qubit(q)
        }
    };
    let n = 2 * l.m_b;
    let mut out = vec![0.0; 2 << n];
    for r in 0..1usize << n {
        let mut s = state.clone();
        let mut qubits = Vec::new();
        let mut outcome = 0u64;
        for j in 0..l.m_b {
            // r[2j] = s_j (Bob's EPR half), r[2j+1] = t_j (the message qubit).
            qubits.push(bob_half(j));
            outcome |= ((r >> (2 * j) & 1) as u64) << (qubits.len() - 1);
            qubits.push(l.bob_qubit(l.n_y + j));
            outcome |= ((r >> (2 * j + 1) & 1) as u64) << (qubits.len() - 1);
        }
        let p = match s.project(&qubits, outcome) {
            Ok(p) => p,
            Err(_) => continue,
        };
        for g in spec.referee.gates() {
            if let Gate::Measure(_) = g {
                continue;
            }
            s.apply_gate(&g.relabel(&relabel), spec.referee.matrices())
                .unwrap();
        }
        let p1 = s.prob_one(relabel(spec.referee.output()));
        out[2 * r] = p * (1.0 - p1);
        out[2 * r + 1] = p * p1;
    }
    out
}

fn plus_with_pauli(g: bool, h: bool) -> [Complex64; 2] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = [Complex64::new(r, 0.0), Complex64::new(r, 0.0)];
    if h {
        v[1] = -v[1];
    }
    if g {
        v.swap(0, 1);
    }
    v
}

/// Amplitudes of qubit `q` when every other qubit is in a basis state.
fn single_qubit(state: &StateVector, q: usize) -> [Complex64; 2] {
    let amps = state.amplitudes();
    let (idx, _) = amps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
        .unwrap();
    let rest = idx & !(1 << q);
    [amps[rest], amps[rest | 1 << q]]
}

fn fidelity(a: [Complex64; 2], b: [Complex64; 2]) -> f64 {
    (a[0].conj() * b[0] + a[1].conj() * b[1]).norm()
}

fn s_power(state: &mut StateVector, q: usize, dagger: bool, apply: bool) {
    if apply {
        let g = if dagger {
            CliffordGate::Sdg(q)
        } else {
            CliffordGate::S(q)
        };
        state.apply_clifford(&g).unwrap();
    }
}

/// Dense five-qubit XOR gadget on `P^{a⊕b}|+⟩` for one outcome pattern
/// `(s1, t1, s2, t2)`: fidelity of the output qubit with the frame's
/// `X^g Z^h|+⟩`, or `None` when the pattern has probability 0.
pub fn dense_xor_gadget(a: bool, b: bool, outcomes: [bool; 4]) -> Option<f64> {
    let [s1, t1, s2, t2] = outcomes;
    let mut st = StateVector::zero(5).unwrap();
    st.apply_clifford(&CliffordGate::H(0)).unwrap();
    s_power(&mut st, 0, false, a ^ b);
    for (p, q) in [(1, 2), (3, 4)] {
        st.apply_clifford(&CliffordGate::H(p)).unwrap();
        st.apply_clifford(&CliffordGate::Cnot(p, q)).unwrap();
    }
    s_power(&mut st, 0, true, a);
    bell_rotate(&mut st, 0, 1);
    s_power(&mut st, 2, true, b);
    bell_rotate(&mut st, 2, 3);
    let pattern = (t1 as u64) | (s1 as u64) << 1 | (t2 as u64) << 2 | (s2 as u64) << 3;
    st.project(&[0, 1, 2, 3], pattern).ok()?;
    let v = |k| Var::Outcome(k);
    let lit = |b: bool| FrameForm::from(AffineForm::constant(b));
    let (g, h) = xor_gadget_frame(
        &FrameForm::zero(),
        &FrameForm::zero(),
        &lit(a),
        &lit(b),
        [v(0), v(1), v(2), v(3)],
    )
    .unwrap();
    let assign = |w: Var| match w {
        Var::Outcome(0) => s1,
        Var::Outcome(1) => t1,
        Var::Outcome(2) => s2,
        Var::Outcome(3) => t2,
        _ => false,
    };
    let expected = plus_with_pauli(g.evaluate(&assign), h.evaluate(&assign));
    Some(fidelity(expected, single_qubit(&st, 4)))
}

/// Gadget over Alice bits `Alice(i)` and Bob bits `Bob(j)` with slot
/// variables `Outcome(4k..4k+4)`.
pub fn test_gh_gadget(protocol: GardenHoseProtocol) -> GhGadget {
    let s = protocol.pipes() as u32;
    GhGadget {
        alice_vars: (0..protocol.alice_bits() as u32).map(Var::Alice).collect(),
        bob_vars: (0..protocol.bob_bits() as u32).map(Var::Bob).collect(),
        alice_slots: (0..s)
            .map(|k| (Var::Outcome(4 * k), Var::Outcome(4 * k + 1)))
            .collect(),
        bob_slots: (0..s)
            .map(|k| (Var::Outcome(4 * k + 2), Var::Outcome(4 * k + 3)))
            .collect(),
        protocol,
    }
}

fn alice_pairs(m: &AliceMatching, s: usize) -> Vec<(usize, usize)> {
    let half = |copy: usize, p: usize| 1 + 2 * (copy * s + p);
    let mut pairs = Vec::new();
    if let Some(t) = m.tap {
        pairs.push((0, half(0, t)));
    }
    for copy in 0..2 {
        pairs.extend(m.links.iter().map(|&(u, v)| (half(copy, u), half(copy, v))));
    }
    for e in 0..s {
        let linked = m.links.iter().any(|&(u, v)| u == e || v == e);
        if Some(e) != m.tap && !linked {
            pairs.push((half(0, e), half(1, e)));
        }
    }
    pairs
}

fn bob_pairs(m: &BobMatching, s: usize) -> (Vec<(usize, usize)>, Vec<usize>) {
    let half = |copy: usize, p: usize| 2 + 2 * (copy * s + p);
    let mut pairs = Vec::new();
    for copy in 0..2 {
        pairs.extend(m.links.iter().map(|&(u, v)| (half(copy, u), half(copy, v))));
    }
    let mut open = Vec::new();
    for e in 0..s {
        if !m.links.iter().any(|&(u, v)| u == e || v == e) {
            pairs.push((half(0, e), half(1, e)));
            open.push(half(0, e));
        }
    }
    (pairs, open)
}

/// Full-EPR simulation of the garden-hose gadget on `P^c|+⟩` with
/// `c = f(xa, xb)`; returns the smallest fidelity with the frame's
/// `X^g Z^h|+⟩` over `samples` sampled outcome patterns.
pub fn dense_gh_gadget(gadget: &GhGadget, xa: usize, xb: usize, samples: usize, seed: u64) -> f64 {
    let s = gadget.protocol.pipes();
    let n = 1 + 4 * s;
    let c = gadget.protocol.evaluate(xa, xb).unwrap().output;
    let alice = &gadget.protocol.alice_strategy()[xa];
    let bob = &gadget.protocol.bob_strategy()[xb];
    let mut st = StateVector::zero(n).unwrap();
    st.apply_clifford(&CliffordGate::H(0)).unwrap();
    s_power(&mut st, 0, false, c);
    for pipe in 0..2 * s {
        st.apply_clifford(&CliffordGate::H(1 + 2 * pipe)).unwrap();
        st.apply_clifford(&CliffordGate::Cnot(1 + 2 * pipe, 2 + 2 * pipe))
            .unwrap();
    }
    let a_pairs = alice_pairs(alice, s);
    let (b_pairs, b_open) = bob_pairs(bob, s);
    for &q in &b_open {
        s_power(&mut st, q, true, true);
    }
    for &(p, q) in a_pairs.iter().chain(&b_pairs) {
        bell_rotate(&mut st, p, q);
    }
    let last = match alice.tap {
        Some(t) => 1 + 2 * (s + t),
        None => 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 1.0;
    for _ in 0..samples {
        let mut cur = st.clone();
        let mut outcome = BTreeMap::new();
        for (slot, &(p, q)) in a_pairs.iter().enumerate() {
            for (qubit, var) in [(q, 4 * slot), (p, 4 * slot + 1)] {
                let bit = rng.gen::<f64>() < cur.prob_one(qubit);
                cur.project(&[qubit], bit as u64).unwrap();
                outcome.insert(var as u32, bit);
            }
        }
        for (slot, &(p, q)) in b_pairs.iter().enumerate() {
            for (qubit, var) in [(q, 4 * slot + 2), (p, 4 * slot + 3)] {
                let bit = rng.gen::<f64>() < cur.prob_one(qubit);
                cur.project(&[qubit], bit as u64).unwrap();
                outcome.insert(var as u32, bit);
            }
        }
        let (g, h) = gadget
            .frame(&FrameForm::zero(), &FrameForm::zero())
            .unwrap();
        let assign = |v: Var| match v {
            Var::Alice(i) => xa >> i & 1 == 1,
            Var::Bob(j) => xb >> j & 1 == 1,
            Var::Outcome(k) => outcome[&k],
        };
        let expected = plus_with_pauli(g.evaluate(&assign), h.evaluate(&assign));
        worst = worst.min(fidelity(expected, single_qubit(&cur, last)));
    }
    worst
}

// ---------------------------------------------------------------- properties

/// The tableau stays symplectic, matches `U P U†` on random Paulis and
/// respects products.
pub fn tableau_invariants(
    n: usize,
    gates: &[CliffordGate],
    p: &PauliString,
    q: &PauliString,
) -> Result<(), String> {
    let tab = CliffordTableau::from_gates(n, gates).map_err(|e| e.to_string())?;
    if !tab.is_valid() {
        return Err("tableau lost symplecticity".into());
    }
    let mut circuit = LayeredCircuit::new(n, 0, 0).unwrap();
    for g in gates {
        circuit.push(Gate::Clifford(*g)).unwrap();
    }
    let u = unitary_of(&circuit).map_err(|e| e.to_string())?;
    let cp = tab.conjugate(p).map_err(|e| e.to_string())?;
    let dense = &u * p.to_matrix() * u.adjoint();
    if magicomm::linalg::matrix_distance(&cp.to_matrix(), &dense) > 1e-9 {
        return Err(format!("conjugate({p}) = {cp} disagrees with U P U†"));
    }
    let lhs = tab.conjugate(&p.mul(q).unwrap()).unwrap();
    let rhs = cp.mul(&tab.conjugate(q).unwrap()).unwrap();
    if lhs != rhs {
        return Err(format!("conjugation is not multiplicative: {lhs} vs {rhs}"));
    }
    Ok(())
}

/// Pushing a symbolic frame gate by gate agrees with one tableau
/// conjugation, and evaluating commutes with conjugating.
pub fn frame_commutes(
    n: usize,
    gates: &[CliffordGate],
    masks: &[(u8, u8)],
    assign_bits: u8,
) -> Result<(), String> {
    let mut frame = SymbolicPauliFrame::new(n);
    for q in 0..n {
        let (mx, mz) = masks[q % masks.len()];
        let form = |mask: u8| {
            FrameForm::from(AffineForm::from_parts(
                (0..4).filter(|j| mask >> j & 1 == 1).map(Var::Bob),
                mask & 16 != 0,
            ))
        };
        frame.x[q] = form(mx);
        frame.z[q] = form(mz);
    }
    let tab = CliffordTableau::from_gates(n, gates).unwrap();
    let mut stepped = frame.clone();
    for g in gates {
        stepped.apply_clifford(g).unwrap();
    }
    let conjugated = frame.conjugate(&tab).unwrap();
    let assign = |v: Var| match v {
        Var::Bob(j) => assign_bits >> j & 1 == 1,
        _ => false,
    };
    let a = stepped.evaluate(&assign);
    let b = conjugated.evaluate(&assign);
    let c = tab.conjugate(&frame.evaluate(&assign)).unwrap();
    if !a.eq_up_to_phase(&b) || !a.eq_up_to_phase(&c) {
        return Err(format!("frame diagram does not commute: {a} / {b} / {c}"));
    }
    Ok(())
}

/// A random garden-hose protocol from seeds: `pipes` pipes, one input bit
/// per side, arbitrary partial matchings.
pub fn random_gh(pipes: usize, seed: u64) -> GardenHoseProtocol {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matching = |rng: &mut ChaCha8Rng, tap: bool| {
        let mut ends: Vec<usize> = (0..pipes).collect();
        for i in (1..ends.len()).rev() {
            ends.swap(i, rng.gen_range(0..=i));
        }
        let tap = if tap && rng.gen_bool(0.8) {
            ends.pop()
        } else {
            None
        };
        let mut links = Vec::new();
        while ends.len() >= 2 && rng.gen_bool(0.7) {
            let (a, b) = (ends.pop().unwrap(), ends.pop().unwrap());
            links.push((a, b));
        }
        (tap, links)
    };
    let alice: Vec<AliceMatching> = (0..2)
        .map(|_| {
            let (tap, links) = matching(&mut rng, true);
            AliceMatching { tap, links }
        })
        .collect();
    let bob: Vec<BobMatching> = (0..2)
        .map(|_| BobMatching {
            links: matching(&mut rng, false).1,
        })
        .collect();
    GardenHoseProtocol::new(pipes, 1, 1, alice, bob).unwrap()
}

/// Every evaluation terminates, visits each pipe end at most once, has at
/// most `2·pipes + 1` endpoints and spills on the side of its last endpoint.
pub fn gh_terminates(p: &GardenHoseProtocol) -> Result<(), String> {
    use magicomm::gardenhose::Endpoint;
    for xa in 0..1 << p.alice_bits() {
        for xb in 0..1 << p.bob_bits() {
            let e = p.evaluate(xa, xb).map_err(|e| e.to_string())?;
            if e.path.len() > 2 * p.pipes() + 1 {
                return Err(format!("path too long: {}", e.render()));
            }
            let mut seen = std::collections::HashSet::new();
            if !e.path.iter().all(|x| seen.insert(*x)) {
                return Err(format!("path revisits an end: {}", e.render()));
            }
            let side = matches!(e.path.last(), Some(Endpoint::Bob(_)));
            if side != e.output {
                return Err(format!("spill side mismatch: {}", e.render()));
            }
        }
    }
    Ok(())
}

/// Chi-square statistic (one degree of freedom) of each transcript bit over
/// `runs` seeded executions on random inputs.
pub fn bell_chi_square(spec: &QSmpSpec, runs: usize, seed: u64) -> Vec<f64> {
    let p = magicomm::psm::transform(spec, Default::default()).unwrap();
    let l = spec.layout();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ones = vec![0usize; p.transcript_len()];
    for _ in 0..runs {
        let x: Vec<bool> = (0..l.n_x).map(|_| rng.gen()).collect();
        let y: Vec<bool> = (0..l.n_y).map(|_| rng.gen()).collect();
        let run = p.run_transcript(&x, &y, rng.gen()).unwrap();
        for (k, &b) in run.r.iter().enumerate() {
            ones[k] += b as usize;
        }
    }
    let half = runs as f64 / 2.0;
    ones.iter()
        .map(|&o| 2.0 * (o as f64 - half).powi(2) / half)
        .collect()
}

/// χ² with one degree of freedom at `p = 10⁻⁶`.
pub const CHI_SQUARE_1E6: f64 = 23.93;
