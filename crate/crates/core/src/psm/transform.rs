use serde::Serialize;

use super::gadgets::{xor_gadget_frame, GhGadget};
use super::QSmpSpec;
use crate::boolfun::{BoolFun, FrameForm, Var};
use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::gardenhose::{
    brute_force_gh, gh_from_anf, GardenHoseProtocol, SEARCH_MAX_BITS, SEARCH_MAX_PIPES,
};
use crate::pauli::{CliffordGate, SymbolicPauliFrame};
use crate::pdt::{BoundCheck, Party};

/// Largest referee T-depth accepted by [`transform`].
pub const MAX_T_DEPTH: usize = 2;
/// Largest `m + a` accepted by [`transform`].
pub const MAX_LOGICAL_QUBITS: usize = 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum GadgetBackend {
    /// XOR gadget when the condition splits. Otherwise an XOR gadget for the
    /// single-party monomials and a garden hose for the mixed ones.
    #[default]
    Auto,
    /// Garden-hose gadget for every condition that involves Bob.
    GardenHose,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TransformOptions {
    pub backend: GadgetBackend,
}

/// One instruction of Alice's simulation. Qubits are referee qubits.
#[derive(Clone, Debug, PartialEq)]
pub enum PsmStep {
    /// Bob's teleportation of a message qubit leaves `X^s Z^t` on it.
    Teleported {
        qubit: usize,
        s: Var,
        t: Var,
    },
    Clifford(CliffordGate),
    T {
        qubit: usize,
        dagger: bool,
    },
    /// Alice applies `correction` when the condition (over her bits) is 1.
    LocalCorrection {
        correction: CliffordGate,
        condition: FrameForm,
    },
    XorGadget {
        correction: CliffordGate,
        alice_part: FrameForm,
        bob_part: FrameForm,
        vars: [Var; 4],
    },
    GhGadget {
        correction: CliffordGate,
        gadget: Box<GhGadget>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GadgetCounts {
    pub local: usize,
    pub xor: usize,
    pub garden_hose: usize,
    pub garden_hose_pipes: usize,
}

/// The classical protocol: Alice's instructions, the owner of every outcome
/// bit `r_k` (as `Var::Outcome(k)`), and the referee's decoder.
#[derive(Clone, Debug, PartialEq)]
pub struct PsmProtocol {
    pub(crate) spec: QSmpSpec,
    pub(crate) steps: Vec<PsmStep>,
    /// Frame after each step.
    pub(crate) frames: Vec<SymbolicPauliFrame>,
    owners: Vec<Party>,
    decoder: FrameForm,
    epr_consumed: usize,
    counts: GadgetCounts,
}

struct Builder {
    owners: Vec<Party>,
    frame: SymbolicPauliFrame,
    steps: Vec<PsmStep>,
    frames: Vec<SymbolicPauliFrame>,
    epr: usize,
    counts: GadgetCounts,
    options: TransformOptions,
}

impl Builder {
    fn fresh(&mut self, party: Party) -> Var {
        self.owners.push(party);
        Var::Outcome(self.owners.len() as u32 - 1)
    }

    fn owner(&self, v: Var) -> Party {
        match v {
            Var::Outcome(k) => self.owners[k as usize],
            Var::Alice(_) => Party::Alice,
            Var::Bob(_) => Party::Bob,
        }
    }

    fn push(&mut self, step: PsmStep) {
        self.steps.push(step);
        self.frames.push(self.frame.clone());
    }

    /// Splits `c` into Alice's and Bob's parts, structurally or from its table.
    fn xor_split(&self, c: &FrameForm) -> Result<Option<(FrameForm, FrameForm)>> {
        let is_alice = |v| self.owner(v) == Party::Alice;
        if let Some(parts) = c.split(is_alice) {
            return Ok(Some(parts));
        }
        let f = c.to_boolfun()?;
        let (alice, bob): (Vec<Var>, Vec<Var>) = f.vars().iter().partition(|&&v| is_alice(v));
        let at = |a: usize, b: usize| {
            f.evaluate(&|v| match alice.iter().position(|&w| w == v) {
                Some(i) => a >> i & 1 == 1,
                None => b >> bob.iter().position(|&w| w == v).expect("variable of f") & 1 == 1,
            })
        };
        let f00 = at(0, 0);
        for a in 0..1usize << alice.len() {
            for b in 0..1usize << bob.len() {
                if at(a, b) ^ at(a, 0) ^ at(0, b) ^ f00 {
                    return Ok(None);
                }
            }
        }
        let index = |vars: &[Var], look: &dyn Fn(Var) -> bool| {
            vars.iter()
                .enumerate()
                .fold(0, |acc, (i, &v)| acc | (look(v) as usize) << i)
        };
        let a_part = BoolFun::from_fn(alice.clone(), |look| at(index(&alice, look), 0))?;
        let b_part = BoolFun::from_fn(bob.clone(), |look| at(0, index(&bob, look)) ^ f00)?;
        Ok(Some((a_part.into(), b_part.into())))
    }

    fn gh_gadget(&mut self, c: &FrameForm) -> Result<GhGadget> {
        let f = c.to_boolfun()?.reduce();
        let (alice_vars, bob_vars): (Vec<Var>, Vec<Var>) = f
            .vars()
            .iter()
            .partition(|&&v| self.owner(v) == Party::Alice);
        let table: Vec<Vec<bool>> = (0..1usize << alice_vars.len())
            .map(|xa| {
                (0..1usize << bob_vars.len())
                    .map(|xb| {
                        f.evaluate(&|v| match alice_vars.iter().position(|&w| w == v) {
                            Some(i) => xa >> i & 1 == 1,
                            None => {
                                xb >> bob_vars
                                    .iter()
                                    .position(|&w| w == v)
                                    .expect("variable of f")
                                    & 1
                                    == 1
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        let searched = if alice_vars.len() <= SEARCH_MAX_BITS && bob_vars.len() <= SEARCH_MAX_BITS {
            brute_force_gh(&table, SEARCH_MAX_PIPES)?
        } else {
            None
        };
        let protocol: GardenHoseProtocol = match searched {
            Some(p) => p,
            None => gh_from_anf(&table)?,
        };
        let s = protocol.pipes();
        let alice_slots = (0..s)
            .map(|_| (self.fresh(Party::Alice), self.fresh(Party::Alice)))
            .collect();
        let bob_slots = (0..s)
            .map(|_| (self.fresh(Party::Bob), self.fresh(Party::Bob)))
            .collect();
        Ok(GhGadget {
            protocol,
            alice_vars,
            bob_vars,
            alice_slots,
            bob_slots,
        })
    }

    fn correct(&mut self, q: usize, correction: CliffordGate) -> Result<()> {
        let mut c = self.frame.x[q].clone();
        c.normalize();
        if c.is_zero() || (c.vars().len() <= 20 && c.to_boolfun()?.is_zero()) {
            return Ok(());
        }
        if c.vars().into_iter().all(|v| self.owner(v) == Party::Alice) {
            self.push(PsmStep::LocalCorrection {
                correction,
                condition: c,
            });
            self.counts.local += 1;
            return Ok(());
        }
        let split = match self.options.backend {
            GadgetBackend::Auto => self.xor_split(&c)?,
            GadgetBackend::GardenHose => None,
        };
        if let Some((alice_part, bob_part)) = split {
            self.xor_gadget(q, correction, alice_part, bob_part);
            return Ok(());
        }
        let mut u = c;
        if self.options.backend == GadgetBackend::Auto {
            let (mixed, separable) = self.separate(&u)?;
            if !separable.is_zero() {
                // P^{u ⊕ v} = P^u P^v Z^{uv}: the XOR gadget removes P^v, and
                // moving P^u past its X^S leaves Z^{uS}.
                let (alice_part, bob_part) = self
                    .xor_split(&separable)?
                    .expect("monomials of one party split");
                let s = self.xor_gadget(q, correction, alice_part, bob_part);
                let extra = mixed.and(&separable.xor(&s))?;
                self.frame.z[q].xor_assign(&extra);
                self.frame.z[q].normalize();
                *self.frames.last_mut().expect("gadget step") = self.frame.clone();
            }
            u = mixed;
        }
        let (g, h) = (self.frame.x[q].clone(), self.frame.z[q].clone());
        let gadget = self.gh_gadget(&u)?;
        let (gx, hz) = gadget.frame(&g, &h)?;
        self.frame.x[q] = gx;
        self.frame.z[q] = hz;
        self.epr += gadget.epr_pairs();
        self.counts.garden_hose += 1;
        self.counts.garden_hose_pipes += gadget.protocol.pipes();
        self.push(PsmStep::GhGadget {
            correction,
            gadget: Box::new(gadget),
        });
        Ok(())
    }

    /// Applies `Q^{a ⊕ b}` with the XOR gadget; returns `s1 ⊕ s2`, the `X`
    /// exponent it adds.
    fn xor_gadget(
        &mut self,
        q: usize,
        correction: CliffordGate,
        alice_part: FrameForm,
        bob_part: FrameForm,
    ) -> FrameForm {
        let vars = [
            self.fresh(Party::Alice),
            self.fresh(Party::Alice),
            self.fresh(Party::Bob),
            self.fresh(Party::Bob),
        ];
        let (g, h) = (self.frame.x[q].clone(), self.frame.z[q].clone());
        let (gx, hz) =
            xor_gadget_frame(&g, &h, &alice_part, &bob_part, vars).expect("linear frame update");
        self.frame.x[q] = gx;
        self.frame.z[q] = hz;
        self.epr += 2;
        self.counts.xor += 1;
        self.push(PsmStep::XorGadget {
            correction,
            alice_part,
            bob_part,
            vars,
        });
        FrameForm::var(vars[0]).xor(&FrameForm::var(vars[2]))
    }

    /// `c = mixed ⊕ separable`, where `mixed` collects the monomials of the
    /// algebraic normal form that contain both players' bits.
    fn separate(&self, c: &FrameForm) -> Result<(FrameForm, FrameForm)> {
        let f = c.to_boolfun()?;
        let vars = f.vars().to_vec();
        let alice_mask = vars
            .iter()
            .enumerate()
            .filter(|(_, &v)| self.owner(v) == Party::Alice)
            .fold(0usize, |m, (j, _)| m | 1 << j);
        let anf = f.anf();
        let part = |want_mixed: bool| -> Result<FrameForm> {
            let monomials: Vec<usize> = (0..anf.len())
                .filter(|&m| anf[m])
                .filter(|&m| (m & alice_mask != 0 && m & !alice_mask != 0) == want_mixed)
                .collect();
            let table = BoolFun::from_fn(vars.clone(), |look| {
                let idx = vars
                    .iter()
                    .enumerate()
                    .fold(0usize, |acc, (j, &v)| acc | (look(v) as usize) << j);
                monomials.iter().filter(|&&m| idx & m == m).count() % 2 == 1
            })?;
            let mut form: FrameForm = table.reduce().into();
            form.normalize();
            Ok(form)
        };
        Ok((part(true)?, part(false)?))
    }
}

/// Compiles a Q‖* protocol with a Clifford+T referee of T-depth at most 2
/// into a classical PSM protocol.
pub fn transform(spec: &QSmpSpec, options: TransformOptions) -> Result<PsmProtocol> {
    let referee = &spec.referee;
    let logical = spec.logical_qubits();
    if logical > MAX_LOGICAL_QUBITS {
        return Err(Error::SizeCap {
            qubits: logical,
            cap: MAX_LOGICAL_QUBITS,
        });
    }
    let depth = referee.t_depth();
    if depth > MAX_T_DEPTH {
        return Err(Error::Unsupported(format!(
            "referee T-depth {depth} exceeds {MAX_T_DEPTH}"
        )));
    }
    let output = referee.output();
    for g in referee.gates() {
        match g {
            Gate::Clifford(_) | Gate::T(_) | Gate::Tdg(_) => {}
            Gate::Measure(ref qs) if qs.as_slice() == [output] => {}
            other => {
                return Err(Error::Unsupported(format!(
                    "referee gate {other:?} is not Clifford+T"
                )))
            }
        }
    }
    let mut b = Builder {
        owners: Vec::new(),
        frame: SymbolicPauliFrame::new(logical),
        steps: Vec::new(),
        frames: Vec::new(),
        epr: 0,
        counts: GadgetCounts::default(),
        options,
    };
    let l = spec.layout();
    for j in 0..l.m_b {
        let qubit = l.m_a + j;
        let (s, t) = (b.fresh(Party::Bob), b.fresh(Party::Bob));
        b.frame.x[qubit] = FrameForm::var(s);
        b.frame.z[qubit] = FrameForm::var(t);
        b.epr += 1;
        b.push(PsmStep::Teleported { qubit, s, t });
    }
    for g in referee.gates() {
        match g {
            Gate::Clifford(c) => {
                b.frame.apply_clifford(&c)?;
                b.push(PsmStep::Clifford(c));
            }
            Gate::T(q) => {
                b.push(PsmStep::T {
                    qubit: q,
                    dagger: false,
                });
                b.correct(q, CliffordGate::Sdg(q))?;
            }
            Gate::Tdg(q) => {
                b.push(PsmStep::T {
                    qubit: q,
                    dagger: true,
                });
                b.correct(q, CliffordGate::S(q))?;
            }
            _ => {}
        }
    }
    let mut decoder = b.frame.x[output].clone();
    decoder.normalize();
    Ok(PsmProtocol {
        spec: spec.clone(),
        steps: b.steps,
        frames: b.frames,
        owners: b.owners,
        decoder,
        epr_consumed: b.epr,
        counts: b.counts,
    })
}

impl PsmProtocol {
    pub fn spec(&self) -> &QSmpSpec {
        &self.spec
    }

    pub fn steps(&self) -> &[PsmStep] {
        &self.steps
    }

    /// Number of outcome bits `|r|`.
    pub fn transcript_len(&self) -> usize {
        self.owners.len()
    }

    pub fn owners(&self) -> &[Party] {
        &self.owners
    }

    /// `|r| + 1`: every outcome bit plus Alice's measured bit.
    pub fn bits_sent(&self) -> usize {
        self.owners.len() + 1
    }

    pub fn alice_bits(&self) -> usize {
        self.owners.iter().filter(|&&p| p == Party::Alice).count() + 1
    }

    pub fn bob_bits(&self) -> usize {
        self.owners.iter().filter(|&&p| p == Party::Bob).count()
    }

    /// EPR pairs of the original protocol plus those consumed by
    /// teleportation and gadgets.
    pub fn epr_pairs(&self) -> usize {
        self.spec.epr.len() + self.epr_consumed
    }

    pub fn gadget_counts(&self) -> &GadgetCounts {
        &self.counts
    }

    pub fn decoder(&self) -> &FrameForm {
        &self.decoder
    }

    pub fn decoder_is_affine(&self) -> bool {
        self.decoder.is_affine()
    }

    pub fn decode(&self, r: &[bool]) -> bool {
        self.decoder.evaluate(&|v| match v {
            Var::Outcome(k) => r[k as usize],
            _ => unreachable!("the decoder reads only outcome bits"),
        })
    }

    pub fn t_depth(&self) -> usize {
        self.spec.referee.t_depth()
    }

    /// Transcript size against `C · (68 (m + a))^d` with `C = 2 (m + a) + 1`.
    pub fn size_bound(&self) -> BoundCheck {
        let ma = self.spec.logical_qubits();
        let bound = (2 * ma + 1).saturating_mul((68 * ma).saturating_pow(self.t_depth() as u32));
        BoundCheck::at_most("psm_bits_sent", self.bits_sent(), bound)
    }
}
