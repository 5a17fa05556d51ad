use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::transform::{GadgetCounts, PsmProtocol, PsmStep};
use super::JointLayout;
use crate::boolfun::Var;
use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::pauli::CliffordGate;
use crate::pdt::BoundCheck;
use crate::statevector::{index_to_bits, StateVector};

/// Largest `|r|` audited by exact enumeration.
pub const EXACT_MAX_TRANSCRIPT: usize = 20;

/// One execution: the outcome bits, Alice's measured bit and the referee's
/// output `s ⊕ decoder(r)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsmRun {
    pub r: Vec<bool>,
    pub s: bool,
    pub output: bool,
}

fn inner(a: &StateVector, b: &StateVector) -> Complex64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(u, v)| u.conj() * v)
        .sum()
}

impl PsmProtocol {
    fn joint(&self) -> JointLayout {
        self.spec.layout()
    }

    fn apply(&self, state: &mut StateVector, g: &CliffordGate) -> Result<()> {
        let l = self.joint();
        if let Gate::Clifford(c) = Gate::Clifford(*g).relabel(&|q| l.referee_qubit(q)) {
            state.apply_clifford(&c)?;
        }
        Ok(())
    }

    fn pauli(&self, state: &mut StateVector, q: usize, x: bool, z: bool) -> Result<()> {
        if z {
            self.apply(state, &CliffordGate::Z(q))?;
        }
        if x {
            self.apply(state, &CliffordGate::X(q))?;
        }
        Ok(())
    }

    fn t(&self, state: &mut StateVector, q: usize, dagger: bool) -> Result<()> {
        let q = self.joint().referee_qubit(q);
        let gate = if dagger { Gate::Tdg(q) } else { Gate::T(q) };
        state.apply_gate(&gate, self.spec.referee.matrices())
    }

    fn step(&self, state: &mut StateVector, step: &PsmStep, r: &[bool]) -> Result<()> {
        let at = |v: Var| match v {
            Var::Outcome(k) => r[k as usize],
            _ => unreachable!("gadgets read only outcome bits"),
        };
        let qubit_of = |c: &CliffordGate| c.qubits()[0];
        match step {
            PsmStep::Teleported { qubit, s, t } => self.pauli(state, *qubit, at(*s), at(*t)),
            PsmStep::Clifford(c) => self.apply(state, c),
            PsmStep::T { qubit, dagger } => self.t(state, *qubit, *dagger),
            PsmStep::LocalCorrection {
                correction,
                condition,
            } => {
                if condition.evaluate(&at) {
                    self.apply(state, correction)?;
                }
                Ok(())
            }
            PsmStep::XorGadget {
                correction,
                alice_part,
                bob_part,
                vars: [s1, t1, s2, t2],
            } => {
                let q = qubit_of(correction);
                if alice_part.evaluate(&at) {
                    self.apply(state, correction)?;
                }
                self.pauli(state, q, at(*s1), at(*t1))?;
                if bob_part.evaluate(&at) {
                    self.apply(state, correction)?;
                }
                self.pauli(state, q, at(*s2), at(*t2))
            }
            PsmStep::GhGadget { correction, gadget } => {
                let q = qubit_of(correction);
                let (hops, first, corrected) = gadget.path_at(&at)?;
                for (i, (s, t)) in hops.iter().enumerate() {
                    if i == first && corrected {
                        self.apply(state, correction)?;
                    }
                    self.pauli(state, q, at(*s), at(*t))?;
                }
                if corrected && first == hops.len() {
                    self.apply(state, correction)?;
                }
                Ok(())
            }
        }
    }

    fn check_r(&self, r: &[bool]) -> Result<()> {
        if r.len() != self.transcript_len() {
            return Err(Error::DimensionMismatch {
                expected: self.transcript_len(),
                got: r.len(),
            });
        }
        Ok(())
    }

    /// Alice's joint state just before her final measurement, given `r`.
    pub fn final_state(&self, x: &[bool], y: &[bool], r: &[bool]) -> Result<StateVector> {
        self.check_r(r)?;
        let mut state = self.spec.prepared_state(x, y)?;
        for step in &self.steps {
            self.step(&mut state, step, r)?;
        }
        Ok(state)
    }

    /// `Pr[s = 1 | r]`.
    pub fn conditional_prob_one(&self, x: &[bool], y: &[bool], r: &[bool]) -> Result<f64> {
        let state = self.final_state(x, y, r)?;
        Ok(state.prob_one(self.joint().referee_qubit(self.spec.referee.output())))
    }

    /// `Pr[referee outputs v | r]`.
    pub fn conditional_output(&self, x: &[bool], y: &[bool], r: &[bool], v: bool) -> Result<f64> {
        let p1 = self.conditional_prob_one(x, y, r)?;
        Ok(if v ^ self.decode(r) { p1 } else { 1.0 - p1 })
    }

    /// One seeded execution. The outcome bits are uniform and independent of
    /// everything else, so they are drawn up front.
    pub fn run_transcript(&self, x: &[bool], y: &[bool], seed: u64) -> Result<PsmRun> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r: Vec<bool> = (0..self.transcript_len()).map(|_| rng.gen()).collect();
        let p1 = self.conditional_prob_one(x, y, &r)?;
        let s = rng.gen::<f64>() < p1;
        let output = s ^ self.decode(&r);
        Ok(PsmRun { r, s, output })
    }

    /// Largest `1 - |⟨F(r) ψ_ideal | ψ⟩|` over all steps, where `ψ_ideal`
    /// is the referee's uncorrected state and `F(r)` the symbolic frame.
    /// States between a `T` and its last correction are skipped.
    pub fn frame_deviation(&self, x: &[bool], y: &[bool], r: &[bool]) -> Result<f64> {
        self.check_r(r)?;
        let assign = |v: Var| match v {
            Var::Outcome(k) => r[k as usize],
            _ => false,
        };
        let mut actual = self.spec.prepared_state(x, y)?;
        let mut ideal = actual.clone();
        let mut worst: f64 = 0.0;
        for (i, (step, frame)) in self.steps.iter().zip(&self.frames).enumerate() {
            self.step(&mut actual, step, r)?;
            let pending = matches!(self.steps.get(i + 1), Some(PsmStep::GhGadget { .. }));
            match step {
                PsmStep::Clifford(c) => self.apply(&mut ideal, c)?,
                PsmStep::T { qubit, dagger } => {
                    self.t(&mut ideal, *qubit, *dagger)?;
                    if !frame.x[*qubit].is_zero() {
                        continue;
                    }
                }
                _ if pending => continue,
                _ => {}
            }
            let pauli = frame.evaluate(&assign);
            let mut expected = ideal.clone();
            for q in 0..pauli.num_qubits() {
                self.pauli(&mut expected, q, pauli.x_bits()[q], pauli.z_bits()[q])?;
            }
            worst = worst.max(1.0 - inner(&expected, &actual).norm());
        }
        Ok(worst)
    }

    /// Exact transcript distribution: entry `2·r + s` holds `Pr[r, s]`.
    pub fn transcript_distribution(&self, x: &[bool], y: &[bool]) -> Result<Vec<f64>> {
        let n = self.transcript_len();
        if n > EXACT_MAX_TRANSCRIPT {
            return Err(Error::SizeCap {
                qubits: n,
                cap: EXACT_MAX_TRANSCRIPT,
            });
        }
        let weight = 0.5f64.powi(n as i32);
        let probs: Vec<[f64; 2]> = (0..1usize << n)
            .into_par_iter()
            .map(|idx| {
                let p1 = self.conditional_prob_one(x, y, &index_to_bits(idx, n))?;
                Ok([weight * (1.0 - p1), weight * p1])
            })
            .collect::<Result<_>>()?;
        Ok(probs.into_iter().flatten().collect())
    }

    /// Exact distribution of the simulator `Sim(v)`: uniform `r`, then
    /// `s = v ⊕ decoder(r)`.
    pub fn simulator_distribution(&self, v: bool) -> Result<Vec<f64>> {
        let n = self.transcript_len();
        if n > EXACT_MAX_TRANSCRIPT {
            return Err(Error::SizeCap {
                qubits: n,
                cap: EXACT_MAX_TRANSCRIPT,
            });
        }
        let weight = 0.5f64.powi(n as i32);
        let mut out = vec![0.0; 2 << n];
        for idx in 0..1usize << n {
            let s = v ^ self.decode(&index_to_bits(idx, n));
            out[2 * idx + s as usize] = weight;
        }
        Ok(out)
    }
}

/// `Σ |p - q|`.
pub fn l1_distance(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditMethod {
    Exact,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuditOptions {
    pub samples: usize,
    pub seed: u64,
    pub exact_max_bits: usize,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self {
            samples: 2000,
            seed: 0,
            exact_max_bits: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputPrivacy {
    pub x: Vec<bool>,
    pub y: Vec<bool>,
    pub f: bool,
    pub accept_probability: f64,
    /// Error of the classical protocol against `f`.
    pub epsilon_measured: f64,
    /// `Σ |transcript - Sim(f)|`.
    pub l1_distance: f64,
    pub slack: f64,
    /// `l1_distance ≤ 2 · epsilon_measured + slack`.
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrivacyReport {
    pub method: AuditMethod,
    pub samples: usize,
    pub inputs: Vec<InputPrivacy>,
    pub transcript_bits: usize,
    pub bits_sent: usize,
    pub epr_pairs: usize,
    pub t_depth: usize,
    pub logical_qubits: usize,
    pub decoder_affine: bool,
    pub gadgets: GadgetCounts,
    pub size_bound: BoundCheck,
    /// Largest L1 distance between transcripts of inputs with equal `f`
    /// (exact audits only).
    pub same_value_l1: Option<f64>,
}

impl PrivacyReport {
    pub fn passed(&self) -> bool {
        self.inputs.iter().all(|i| i.within_bound)
    }
}

fn all_inputs(n_x: usize, n_y: usize) -> Vec<(Vec<bool>, Vec<bool>)> {
    (0..1usize << (n_x + n_y))
        .map(|idx| {
            let bits = index_to_bits(idx, n_x + n_y);
            (bits[..n_x].to_vec(), bits[n_x..].to_vec())
        })
        .collect()
}

/// Compares every input's transcript with `Sim(f(x, y))`, exactly when
/// `|r| ≤ exact_max_bits` and by Monte Carlo otherwise. The Monte Carlo
/// estimator samples `r` and uses the exact conditional law of `s` given `r`.
pub fn audit_privacy(protocol: &PsmProtocol, options: AuditOptions) -> Result<PrivacyReport> {
    let l = protocol.spec.layout();
    let inputs = all_inputs(l.n_x, l.n_y);
    let exact = protocol.transcript_len() <= options.exact_max_bits.min(EXACT_MAX_TRANSCRIPT);
    let mut rows = Vec::new();
    let mut dists: Vec<(bool, Vec<f64>)> = Vec::new();
    let mut root = ChaCha8Rng::seed_from_u64(options.seed);
    for (x, y) in inputs {
        let accept = protocol.spec.accept_probability(&x, &y)?;
        let f = crate::pdt::determinize(accept)?;
        let row = if exact {
            let dist = protocol.transcript_distribution(&x, &y)?;
            let sim = protocol.simulator_distribution(f)?;
            let l1 = l1_distance(&dist, &sim);
            let epsilon = dist
                .chunks(2)
                .enumerate()
                .map(|(idx, p)| {
                    p[(!f ^ protocol.decode(&index_to_bits(idx, protocol.transcript_len())))
                        as usize]
                })
                .sum::<f64>();
            dists.push((f, dist));
            InputPrivacy {
                x,
                y,
                f,
                accept_probability: accept,
                epsilon_measured: epsilon,
                l1_distance: l1,
                slack: 1e-9,
                within_bound: l1 <= 2.0 * epsilon + 1e-9,
            }
        } else {
            let seeds: Vec<u64> = (0..options.samples).map(|_| root.next_u64()).collect();
            let samples: Vec<(f64, f64)> = seeds
                .par_iter()
                .map(|&seed| {
                    let run = protocol.run_transcript(&x, &y, seed)?;
                    let correct = protocol.conditional_output(&x, &y, &run.r, f)?;
                    Ok((2.0 * (1.0 - correct), (run.output != f) as u8 as f64))
                })
                .collect::<Result<_>>()?;
            let n = samples.len().max(1) as f64;
            let l1 = samples.iter().map(|s| s.0).sum::<f64>() / n;
            let epsilon = samples.iter().map(|s| s.1).sum::<f64>() / n;
            let diffs: Vec<f64> = samples.iter().map(|s| s.0 - 2.0 * s.1).collect();
            let mean = diffs.iter().sum::<f64>() / n;
            let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
            let slack = 3.0 * (var / n).sqrt() + 1e-9;
            InputPrivacy {
                x,
                y,
                f,
                accept_probability: accept,
                epsilon_measured: epsilon,
                l1_distance: l1,
                slack,
                within_bound: l1 <= 2.0 * epsilon + slack,
            }
        };
        rows.push(row);
    }
    let same_value_l1 = exact.then(|| {
        let mut worst: f64 = 0.0;
        for (i, (fi, di)) in dists.iter().enumerate() {
            for (fj, dj) in &dists[i + 1..] {
                if fi == fj {
                    worst = worst.max(l1_distance(di, dj));
                }
            }
        }
        worst
    });
    Ok(PrivacyReport {
        method: if exact {
            AuditMethod::Exact
        } else {
            AuditMethod::MonteCarlo
        },
        samples: if exact { 0 } else { options.samples },
        inputs: rows,
        transcript_bits: protocol.transcript_len(),
        bits_sent: protocol.bits_sent(),
        epr_pairs: protocol.epr_pairs(),
        t_depth: protocol.t_depth(),
        logical_qubits: protocol.spec.logical_qubits(),
        decoder_affine: protocol.decoder_is_affine(),
        gadgets: protocol.gadget_counts().clone(),
        size_bound: protocol.size_bound(),
        same_value_l1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psm::{transform, GadgetBackend, QSmpSpec, TransformOptions};

    const DEPTH_TWO: &str = "[alice]\ninputs 1\nadvice 1\noutput 0\ncnot 0 1\nh 1\n\
                             [bob]\ninputs 1\nadvice 2\noutput 0\ncnot 0 1\nh 2\n\
                             [referee]\ninputs 3\nadvice 1\noutput 3\n\
                             t 1\ntdg 2\ncnot 0 1\ncnot 2 3\nh 1\nh 2\nt 1\nt 2\nt 3\ncnot 1 3\ncnot 2 3\nh 3\n";

    #[test]
    fn lazy_run_matches_oracle_and_frames() {
        let spec = QSmpSpec::parse(DEPTH_TWO).unwrap();
        for backend in [GadgetBackend::Auto, GadgetBackend::GardenHose] {
            let p = transform(&spec, TransformOptions { backend }).unwrap();
            let n = p.transcript_len();
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            for (x, y) in all_inputs(1, 1) {
                let accept = spec.accept_probability(&x, &y).unwrap();
                let samples = 300;
                let mut mean = 0.0;
                for _ in 0..samples {
                    let r: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
                    assert!(p.frame_deviation(&x, &y, &r).unwrap() < 1e-9);
                    mean += p.conditional_output(&x, &y, &r, true).unwrap() / samples as f64;
                }
                assert!(
                    (mean - accept).abs() < 1e-9,
                    "{backend:?}: {mean} vs {accept}"
                );
            }
        }
    }
}
