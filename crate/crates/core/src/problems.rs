//! Reference problems: the ABCD trace problem with its Q‖* protocol, the
//! Forrelation value, and the equality and index pipelines.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::circuit::{
    abcd_referee, controlled_multiplexer, equality_circuit, expand_toffolis,
    multiplexer_magic_count, Gate, LayeredCircuit,
};
use crate::error::{Error, Result};
use crate::linalg::{block_diag, unitarity_deviation, CMatrix};
use crate::pauli::CliffordGate;
use crate::pdt::{compile, verify_classical, verify_exhaustive, BoundCheck, CompileOptions, Split};
use crate::psm::QSmpSpec;

/// Largest ABCD dimension simulated densely.
pub const ABCD_MAX_N: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Promise {
    /// `Re Tr(ABCD) ≥ 0.9 n`.
    High,
    /// `|Tr(ABCD)| ≤ 0.1 n`.
    Low,
    None,
}

/// Alice holds `A, C`, Bob holds `B, D`.
#[derive(Clone, Debug, PartialEq)]
pub struct AbcdInstance {
    pub n: usize,
    pub a: CMatrix,
    pub b: CMatrix,
    pub c: CMatrix,
    pub d: CMatrix,
    pub promise: Promise,
}

/// Haar-random unitary from the QR decomposition of a complex Gaussian
/// matrix, with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
    let g = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        )
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn phase_diagonal(v: &CMatrix, phases: &[f64]) -> CMatrix {
    let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        phases.len(),
        phases.iter().map(|&t| Complex64::from_polar(1.0, t)),
    ));
    v * diag * v.adjoint()
}

impl AbcdInstance {
    /// Checks unitarity and derives the promise from the actual trace.
    pub fn new(a: CMatrix, b: CMatrix, c: CMatrix, d: CMatrix) -> Result<Self> {
        let n = a.nrows();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "n = {n} must be a power of two ≥ 2"
            )));
        }
        for (name, m) in [("A", &a), ("B", &b), ("C", &c), ("D", &d)] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: m.nrows(),
                });
            }
            let deviation = unitarity_deviation(m);
            if deviation > 1e-10 {
                return Err(Error::NonUnitary {
                    name: name.into(),
                    deviation,
                });
            }
        }
        let mut inst = Self {
            n,
            a,
            b,
            c,
            d,
            promise: Promise::None,
        };
        let t = inst.trace();
        let nf = n as f64;
        inst.promise = if t.re >= 0.9 * nf {
            Promise::High
        } else if t.norm() <= 0.1 * nf + 1e-12 {
            Promise::Low
        } else {
            Promise::None
        };
        Ok(inst)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let i = CMatrix::identity(n, n);
        Self::new(i.clone(), i.clone(), i.clone(), i)
    }

    /// Random `A, B, C` and `D = (ABC)† V diag(e^{iθ}) V†`, so that
    /// `Tr(ABCD) = Σ e^{iθ_k}`.
    pub fn with_phases(n: usize, phases: &[f64], rng: &mut impl Rng) -> Result<Self> {
        if phases.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: phases.len(),
            });
        }
        let a = haar_unitary(n, rng);
        let b = haar_unitary(n, rng);
        let c = haar_unitary(n, rng);
        let w = phase_diagonal(&haar_unitary(n, rng), phases);
        let d = (&a * &b * &c).adjoint() * w;
        Self::new(a, b, c, d)
    }

    /// Phases within `±0.4`, so `Re Tr(ABCD) ≥ cos(0.4) n > 0.9 n`.
    pub fn random_high(n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phases: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.4..0.4)).collect();
        Self::with_phases(n, &phases, &mut rng)
    }

    /// Phases `φ + 2πk/n`, so `Tr(ABCD) = 0`.
    pub fn random_low(n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let phases: Vec<f64> = (0..n)
            .map(|k| phi + std::f64::consts::TAU * k as f64 / n as f64)
            .collect();
        Self::with_phases(n, &phases, &mut rng)
    }

    pub fn trace(&self) -> Complex64 {
        (&self.a * &self.b * &self.c * &self.d).trace()
    }

    /// Acceptance probability predicted from the trace, `1/2 + Re Tr(ABCD) / 2n`.
    pub fn predicted_accept(&self) -> f64 {
        0.5 + self.trace().re / (2.0 * self.n as f64)
    }
}

/// The ABCD protocol: `log n + 1` EPR pairs; Alice applies
/// `block-diag(Ā, C)` and Bob `block-diag(B†, Dᵀ)` to their halves, with the
/// first EPR pair as the block selector. The referee is [`abcd_referee`] with
/// its Toffolis expanded to Clifford+T.
pub fn abcd_qsmp_spec(inst: &AbcdInstance) -> Result<QSmpSpec> {
    if inst.n > ABCD_MAX_N {
        return Err(Error::SizeCap {
            qubits: inst.n,
            cap: ABCD_MAX_N,
        });
    }
    let (referee, layout) = abcd_referee(inst.n)?;
    let referee = expand_toffolis(&referee)?;
    let width = layout.log_n + 1;
    let qubits: Vec<usize> = (0..width).collect();
    let party = |name: &str, m: CMatrix| -> Result<LayeredCircuit> {
        let mut c = LayeredCircuit::new(0, width, 0)?;
        c.add_matrix(name, m)?;
        c.push(Gate::Magic {
            name: name.into(),
            qubits: qubits.clone(),
        })?;
        Ok(c)
    };
    let alice = party("alice", block_diag(&inst.a.conjugate(), &inst.c))?;
    let bob = party("bob", block_diag(&inst.b.adjoint(), &inst.d.transpose()))?;
    QSmpSpec::new(
        alice,
        bob,
        referee,
        (0..width).map(|i| (i, i)).collect(),
        0.05,
    )
}

/// Exact acceptance probability of the ABCD protocol.
pub fn abcd_accept_probability(inst: &AbcdInstance) -> Result<f64> {
    abcd_qsmp_spec(inst)?.accept_probability(&[], &[])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbcdReport {
    pub n: usize,
    pub promise: Promise,
    pub trace_re: f64,
    pub trace_im: f64,
    pub accept_probability: f64,
    pub threshold: BoundCheck,
}

/// Accept probability of a seeded high- or low-promise instance, checked
/// against `0.95` (high) or `0.55` (low).
pub fn abcd_report(n: usize, high: bool, seed: u64) -> Result<AbcdReport> {
    let inst = if high {
        AbcdInstance::random_high(n, seed)?
    } else {
        AbcdInstance::random_low(n, seed)?
    };
    let p = abcd_accept_probability(&inst)?;
    let threshold = if high {
        BoundCheck {
            name: "accept_at_least".into(),
            value: p,
            bound: 0.95,
            holds: p >= 0.95 - 1e-12,
        }
    } else {
        BoundCheck {
            name: "accept_at_most".into(),
            value: p,
            bound: 0.55,
            holds: p <= 0.55 + 1e-12,
        }
    };
    let t = inst.trace();
    Ok(AbcdReport {
        n,
        promise: inst.promise,
        trace_re: t.re,
        trace_im: t.im,
        accept_probability: p,
        threshold,
    })
}

/// Default Forrelation gap parameter.
pub const DEFAULT_ALPHA: f64 = 0.1;

/// In-place unnormalized Walsh–Hadamard transform.
pub fn fwht(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// `forr(x) = ⟨x₁| H |x₂⟩ / n` for `x = (x₁, x₂) ∈ {±1}ⁿ`, with `H` the
/// normalized Walsh–Hadamard transform on `n/2` entries.
pub fn forr(x: &[i8]) -> Result<f64> {
    let n = x.len();
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "n = {n} must be a power of two ≥ 4"
        )));
    }
    if x.iter().any(|&v| v != 1 && v != -1) {
        return Err(Error::InvalidArgument("entries must be ±1".into()));
    }
    let half = n / 2;
    let mut x2: Vec<f64> = x[half..].iter().map(|&v| v as f64).collect();
    fwht(&mut x2);
    let scale = 1.0 / (half as f64).sqrt();
    let inner: f64 = x[..half]
        .iter()
        .zip(&x2)
        .map(|(&a, b)| a as f64 * b * scale)
        .sum();
    Ok(inner / n as f64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForrelationInstance {
    pub x: Vec<i8>,
    pub y: Vec<i8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ForrelationClass {
    /// `forr(x·y) ≥ α`, answer −1.
    Forrelated,
    /// `forr(x·y) ≤ α/2`, answer +1.
    Uncorrelated,
    OutsidePromise,
}

impl ForrelationInstance {
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sign = || if rng.gen::<bool>() { 1 } else { -1 };
        Self {
            x: (0..n).map(|_| sign()).collect(),
            y: (0..n).map(|_| sign()).collect(),
        }
    }

    pub fn value(&self) -> Result<f64> {
        if self.x.len() != self.y.len() {
            return Err(Error::DimensionMismatch {
                expected: self.x.len(),
                got: self.y.len(),
            });
        }
        let xy: Vec<i8> = self.x.iter().zip(&self.y).map(|(a, b)| a * b).collect();
        forr(&xy)
    }

    pub fn classify(&self, alpha: f64) -> Result<ForrelationClass> {
        let v = self.value()?;
        Ok(if v >= alpha {
            ForrelationClass::Forrelated
        } else if v <= alpha / 2.0 {
            ForrelationClass::Uncorrelated
        } else {
            ForrelationClass::OutsidePromise
        })
    }
}

/// Qubit count up to which pipelines verify against the dense oracle; larger
/// classical circuits are verified by bit-string evaluation.
pub const DENSE_VERIFY_MAX_QUBITS: usize = 14;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub problem: String,
    pub size: usize,
    pub magic_count: usize,
    pub c_m: usize,
    pub pdt_depth: usize,
    pub smp_cost: usize,
    pub inputs_checked: usize,
    pub verified: bool,
    pub oracle: String,
    pub bound_checks: Vec<BoundCheck>,
}

fn pipeline(
    problem: &str,
    size: usize,
    circuit: &LayeredCircuit,
    split: Split,
) -> Result<PipelineReport> {
    let pdt = compile(circuit, split, CompileOptions::default())?;
    let (verify, oracle) = if circuit.num_qubits() <= DENSE_VERIFY_MAX_QUBITS {
        (verify_exhaustive(&pdt)?, "statevector")
    } else {
        (verify_classical(&pdt)?, "classical")
    };
    Ok(PipelineReport {
        problem: problem.into(),
        size,
        magic_count: pdt.magic_count(),
        c_m: pdt.c_m(),
        pdt_depth: pdt.depth(),
        smp_cost: pdt.smp_cost(),
        inputs_checked: verify.inputs_checked,
        verified: verify.passed(),
        oracle: oracle.into(),
        bound_checks: pdt.bound_checks(),
    })
}

/// Equality of two `n`-bit strings through one `n`-controlled Toffoli.
pub fn equality_pipeline(n: usize) -> Result<PipelineReport> {
    if n == 0 || n > 8 {
        return Err(Error::SizeCap { qubits: n, cap: 8 });
    }
    pipeline("equality", n, &equality_circuit(n)?, Split::new(n, n))
}

/// Index function: Alice holds `2^k` array bits, Bob a `k`-bit index (most
/// significant bit first); the output is the indexed array bit. Built from
/// the controlled multiplexer with its control fixed to 1 and target `|0⟩`.
pub fn index_circuit(k: usize) -> Result<LayeredCircuit> {
    let (mux, layout) = controlled_multiplexer(k)?;
    let size = 1usize << k;
    let base = size + k;
    let mut map = vec![0; mux.num_qubits()];
    for (i, &q) in layout.array.iter().enumerate() {
        map[q] = i;
    }
    for (j, &q) in layout.index.iter().enumerate() {
        map[q] = size + j;
    }
    map[layout.control] = base;
    map[layout.target] = base + 1;
    for (j, &q) in layout.ancillas.iter().enumerate() {
        map[q] = base + 2 + j;
    }
    let mut out = LayeredCircuit::new(base, 2 + layout.ancillas.len(), base + 1)?;
    out.push(Gate::Clifford(CliffordGate::X(base)))?;
    for g in mux.gates() {
        out.push(g.relabel(&|q| map[q]))?;
    }
    Ok(out)
}

pub fn index_pipeline(k: usize) -> Result<PipelineReport> {
    if k == 0 || k > 3 {
        return Err(Error::SizeCap {
            qubits: 1 << k,
            cap: 8,
        });
    }
    pipeline("index", 1 << k, &index_circuit(k)?, Split::new(1 << k, k))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplexerRow {
    pub k: usize,
    pub magic_count: usize,
    /// `2 g(k-1) + 4`.
    pub recursion_bound: usize,
    pub holds: bool,
}

/// Toffoli counts `g(1..=k)` of the controlled multiplexer, each row checked
/// against the recursion `g(k) ≤ 2 g(k-1) + 4` (with `g(0) = 1`, a single
/// controlled swap) and against the built circuit.
pub fn multiplexer_table(k: usize) -> Result<Vec<MultiplexerRow>> {
    (1..=k)
        .map(|j| {
            let built = controlled_multiplexer(j)?.0.magic_count();
            let g = multiplexer_magic_count(j);
            let recursion_bound = 2 * multiplexer_magic_count(j - 1) + 4;
            Ok(MultiplexerRow {
                k: j,
                magic_count: built,
                recursion_bound,
                holds: built == g && built <= recursion_bound,
            })
        })
        .collect()
}
