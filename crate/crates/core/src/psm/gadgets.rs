//! Non-local `P` corrections.
//!
//! After Alice applies `T` to a qubit whose frame is `X^g Z^h`, the qubit
//! carries an extra `P^g`. The gadgets here apply `Q^c` with `Q = P†` and
//! `c = g` spread over both players' outcome bits, using only pre-shared EPR
//! pairs and Bell measurements, and return the updated frame.

use serde::Serialize;

use crate::boolfun::{BoolFun, FrameForm, Var, MAX_VARS};
use crate::error::{Error, Result};
use crate::gardenhose::GardenHoseProtocol;
use crate::pdt::Party;

/// Frame after the XOR gadget for `c = a ⊕ b`.
///
/// Alice applies `Q^a` and teleports the qubit to Bob (outcomes `s1, t1`);
/// Bob applies `Q^b` and teleports it back (outcomes `s2, t2`). Two EPR pairs.
pub fn xor_gadget_frame(
    g: &FrameForm,
    h: &FrameForm,
    a: &FrameForm,
    b: &FrameForm,
    [s1, t1, s2, t2]: [Var; 4],
) -> Result<(FrameForm, FrameForm)> {
    let mut gx = g.clone();
    gx.xor_assign(&FrameForm::var(s1));
    gx.xor_assign(&FrameForm::var(s2));
    let mut hz = h.clone();
    hz.xor_assign(&FrameForm::var(t1));
    hz.xor_assign(&FrameForm::var(t2));
    hz.xor_assign(&FrameForm::var(s1).and(b)?);
    hz.xor_assign(&a.and(b)?);
    Ok((gx, hz))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Hop {
    pub party: Party,
    pub slot: usize,
}

/// The qubit's route through the doubled garden-hose network.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GhRoute {
    pub hops: Vec<Hop>,
    /// Hops taken before the qubit reaches an open end of the first copy.
    pub first_copy_hops: usize,
    /// Whether it spilled on Bob's side, where `Q` is applied.
    pub corrected: bool,
}

/// Garden-hose gadget for an arbitrary condition `c(α, β)` over Alice's bits
/// `α` and Bob's bits `β`.
///
/// Every pipe is an EPR pair and the network is laid out twice. Alice
/// teleports the qubit into her tap pipe; each player Bell-measures the pipe
/// ends their matching connects, so the qubit follows the garden-hose path.
/// Bob applies `Q` at every open end of the first copy, then both players
/// Bell-measure each open end of the first copy with the same end of the
/// second copy. The second copy walks the path backwards and delivers the
/// qubit to Alice's end of the second tap pipe. Each player performs exactly
/// `s` Bell measurements whatever the inputs.
///
/// Slot order. Alice: the tap measurement (qubit with her first-copy tap end)
/// when the tap is connected, her links in the first copy, the same links in
/// the second copy, then her open first-copy ends by increasing pipe. Bob: his
/// links in the first copy, in the second copy, then his open ends.
#[derive(Clone, Debug, PartialEq)]
pub struct GhGadget {
    pub protocol: GardenHoseProtocol,
    pub alice_vars: Vec<Var>,
    pub bob_vars: Vec<Var>,
    /// `(s, t)` outcome variables of each player's Bell-measurement slots.
    pub alice_slots: Vec<(Var, Var)>,
    pub bob_slots: Vec<(Var, Var)>,
}

fn partner(links: &[(usize, usize)], p: usize) -> Option<(usize, usize)> {
    links.iter().enumerate().find_map(|(i, &(a, b))| match p {
        _ if p == a => Some((i, b)),
        _ if p == b => Some((i, a)),
        _ => None,
    })
}

fn open_rank(links: &[(usize, usize)], tap: Option<usize>, p: usize) -> usize {
    (0..p)
        .filter(|&e| Some(e) != tap && partner(links, e).is_none())
        .count()
}

impl GhGadget {
    pub fn epr_pairs(&self) -> usize {
        2 * self.protocol.pipes()
    }

    pub fn bell_measurements(&self) -> usize {
        2 * self.protocol.pipes()
    }

    /// Route for Alice's input index `xa` and Bob's `xb`.
    pub fn route(&self, xa: usize, xb: usize) -> Result<GhRoute> {
        let alice = &self.protocol.alice_strategy()[xa];
        let bob = &self.protocol.bob_strategy()[xb];
        let Some(tap) = alice.tap else {
            return Ok(GhRoute {
                hops: Vec::new(),
                first_copy_hops: 0,
                corrected: false,
            });
        };
        let (la, lb) = (alice.links.len(), bob.links.len());
        let mut hops = vec![Hop {
            party: Party::Alice,
            slot: 0,
        }];
        let mut first: Vec<(Party, usize)> = Vec::new();
        let mut at_bob = tap;
        let cross;
        loop {
            if first.len() > 2 * self.protocol.pipes() {
                return Err(Error::GardenHose("route does not terminate".into()));
            }
            let Some((li, u)) = partner(&bob.links, at_bob) else {
                cross = Hop {
                    party: Party::Bob,
                    slot: 2 * lb + open_rank(&bob.links, None, at_bob),
                };
                break;
            };
            first.push((Party::Bob, li));
            let Some((lj, v)) = partner(&alice.links, u) else {
                cross = Hop {
                    party: Party::Alice,
                    slot: 1 + 2 * la + open_rank(&alice.links, Some(tap), u),
                };
                break;
            };
            first.push((Party::Alice, lj));
            at_bob = v;
        }
        let slot = |(party, li): (Party, usize), copy: usize| match party {
            Party::Alice => Hop {
                party,
                slot: 1 + copy * la + li,
            },
            Party::Bob => Hop {
                party,
                slot: copy * lb + li,
            },
        };
        hops.extend(first.iter().map(|&l| slot(l, 0)));
        let first_copy_hops = hops.len();
        hops.push(cross);
        hops.extend(first.iter().rev().map(|&l| slot(l, 1)));
        Ok(GhRoute {
            hops,
            first_copy_hops,
            corrected: cross.party == Party::Bob,
        })
    }

    fn indices(&self, assign: &impl Fn(Var) -> bool) -> (usize, usize) {
        let index = |vars: &[Var]| {
            vars.iter()
                .enumerate()
                .fold(0, |acc, (i, &v)| acc | (assign(v) as usize) << i)
        };
        (index(&self.alice_vars), index(&self.bob_vars))
    }

    pub fn route_at(&self, assign: &impl Fn(Var) -> bool) -> Result<GhRoute> {
        let (xa, xb) = self.indices(assign);
        self.route(xa, xb)
    }

    fn slot_vars(&self, hop: Hop) -> (Var, Var) {
        match hop.party {
            Party::Alice => self.alice_slots[hop.slot],
            Party::Bob => self.bob_slots[hop.slot],
        }
    }

    /// Frame after the gadget: `g ⊕ Σ_path s`, `h ⊕ Σ_path t ⊕ c · Σ_first s`,
    /// with each sum gated by a table over the condition's bits.
    pub fn frame(&self, g: &FrameForm, h: &FrameForm) -> Result<(FrameForm, FrameForm)> {
        let cond: Vec<Var> = self
            .alice_vars
            .iter()
            .chain(&self.bob_vars)
            .copied()
            .collect();
        if cond.len() + 1 > MAX_VARS {
            return Err(Error::TooManyVariables(cond.len() + 1));
        }
        let (na, nb) = (self.alice_vars.len(), self.bob_vars.len());
        let slots: Vec<Hop> = (0..self.alice_slots.len())
            .map(|slot| Hop {
                party: Party::Alice,
                slot,
            })
            .chain((0..self.bob_slots.len()).map(|slot| Hop {
                party: Party::Bob,
                slot,
            }))
            .collect();
        let mut on_path = vec![vec![false; 1 << cond.len()]; slots.len()];
        let mut corrected_first = on_path.clone();
        for xa in 0..1usize << na {
            for xb in 0..1usize << nb {
                let route = self.route(xa, xb)?;
                let row = xa | xb << na;
                for (i, hop) in route.hops.iter().enumerate() {
                    let k = slots.iter().position(|s| s == hop).expect("slot exists");
                    on_path[k][row] = true;
                    corrected_first[k][row] = route.corrected && i < route.first_copy_hops;
                }
            }
        }
        let gated = |table: &[bool], v: Var| -> Result<FrameForm> {
            let mut vars = cond.clone();
            vars.push(v);
            let mut full = table.to_vec();
            full.extend(table.iter().copied());
            for b in &mut full[..table.len()] {
                *b = false;
            }
            Ok(BoolFun::new(vars, full)?.into())
        };
        let (mut gx, mut hz) = (g.clone(), h.clone());
        for (k, &hop) in slots.iter().enumerate() {
            let (s, t) = self.slot_vars(hop);
            gx.xor_assign(&gated(&on_path[k], s)?);
            hz.xor_assign(&gated(&on_path[k], t)?);
            hz.xor_assign(&gated(&corrected_first[k], s)?);
        }
        Ok((gx, hz))
    }

    /// Outcome variables on the route, in order, and whether `Q` is applied
    /// after the first `first_copy_hops` of them.
    pub fn path_at(&self, assign: &impl Fn(Var) -> bool) -> Result<(Vec<(Var, Var)>, usize, bool)> {
        let route = self.route_at(assign)?;
        let vars = route.hops.iter().map(|&h| self.slot_vars(h)).collect();
        Ok((vars, route.first_copy_hops, route.corrected))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gardenhose::{brute_force_gh, xor_compose};

    fn gadget(protocol: GardenHoseProtocol) -> GhGadget {
        let s = protocol.pipes() as u32;
        let alice_vars = (0..protocol.alice_bits() as u32).map(Var::Alice).collect();
        let bob_vars = (0..protocol.bob_bits() as u32).map(Var::Bob).collect();
        GhGadget {
            alice_slots: (0..s)
                .map(|k| (Var::Outcome(4 * k), Var::Outcome(4 * k + 1)))
                .collect(),
            bob_slots: (0..s)
                .map(|k| (Var::Outcome(4 * k + 2), Var::Outcome(4 * k + 3)))
                .collect(),
            protocol,
            alice_vars,
            bob_vars,
        }
    }

    #[test]
    fn routes_agree_with_garden_hose_output() {
        let and = vec![vec![false, false], vec![false, true]];
        let base = brute_force_gh(&and, 4).unwrap().unwrap();
        let composed = xor_compose(&[base.clone(), base], true).unwrap();
        for p in [composed] {
            let gadget = gadget(p.clone());
            for xa in 0..1 << p.alice_bits() {
                for xb in 0..1 << p.bob_bits() {
                    let route = gadget.route(xa, xb).unwrap();
                    assert_eq!(route.corrected, p.evaluate(xa, xb).unwrap().output);
                    let mut seen = std::collections::HashSet::new();
                    assert!(route.hops.iter().all(|h| seen.insert(*h)));
                    assert!(route.hops.iter().all(|h| h.slot < p.pipes()));
                }
            }
        }
    }

    #[test]
    fn xor_frame_has_cross_term() {
        let v = |k| Var::Outcome(k);
        let (g, h) = xor_gadget_frame(
            &FrameForm::zero(),
            &FrameForm::zero(),
            &FrameForm::var(Var::Alice(0)),
            &FrameForm::var(Var::Bob(0)),
            [v(0), v(1), v(2), v(3)],
        )
        .unwrap();
        assert!(g.is_affine());
        assert!(!h.is_affine());
    }
}
