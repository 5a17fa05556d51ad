//! The garden-hose model.
//!
//! `s` pipes run between Alice and Bob. For her input Alice chooses a partial
//! matching of her pipe ends plus the tap, Bob one of his pipe ends. Water
//! enters at the tap and spills out of the first open end; spilling on
//! Alice's side means output 0, on Bob's side output 1. Pipes are numbered
//! from 1 in JSON and renderings and from 0 in the API.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AliceMatching {
    /// Pipe whose Alice end is connected to the tap.
    pub tap: Option<usize>,
    pub links: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BobMatching {
    pub links: Vec<(usize, usize)>,
}

fn partner_table(
    links: &[(usize, usize)],
    pipes: usize,
    extra: Option<usize>,
) -> Result<Vec<Option<usize>>> {
    let mut partner = vec![None; pipes];
    let mut used = vec![false; pipes];
    let ends = links.iter().flat_map(|&(a, b)| [a, b]).chain(extra);
    for e in ends {
        if e >= pipes {
            return Err(Error::GardenHose(format!(
                "pipe {} does not exist ({pipes} pipes)",
                e + 1
            )));
        }
        if used[e] {
            return Err(Error::GardenHose(format!("pipe end {} used twice", e + 1)));
        }
        used[e] = true;
    }
    for &(a, b) in links {
        partner[a] = Some(b);
        partner[b] = Some(a);
    }
    Ok(partner)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Tap,
    Alice(usize),
    Bob(usize),
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Tap => write!(f, "T"),
            Endpoint::Alice(p) => write!(f, "A{}", p + 1),
            Endpoint::Bob(p) => write!(f, "B{}", p + 1),
        }
    }
}

impl Serialize for Endpoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GhEvaluation {
    pub output: bool,
    pub path: Vec<Endpoint>,
}

impl GhEvaluation {
    /// `T -> A1 ~ B1 -> B2 ~ A2 -> spills at Alice`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, e) in self.path.iter().enumerate() {
            if i > 0 {
                let same_side = matches!(
                    (self.path[i - 1], e),
                    (Endpoint::Alice(_) | Endpoint::Tap, Endpoint::Alice(_))
                        | (Endpoint::Bob(_), Endpoint::Bob(_))
                );
                out.push_str(if same_side { " -> " } else { " ~ " });
            }
            out.push_str(&e.to_string());
        }
        if self.path.is_empty() {
            out.push('T');
        }
        out.push_str(if self.output {
            " -> spills at Bob"
        } else {
            " -> spills at Alice"
        });
        out
    }
}

/// Strategies stored explicitly per input; input index bit `i` is input bit `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GardenHoseProtocol {
    pipes: usize,
    alice_bits: usize,
    bob_bits: usize,
    alice: Vec<AliceMatching>,
    bob: Vec<BobMatching>,
}

impl GardenHoseProtocol {
    pub fn new(
        pipes: usize,
        alice_bits: usize,
        bob_bits: usize,
        alice: Vec<AliceMatching>,
        bob: Vec<BobMatching>,
    ) -> Result<Self> {
        if alice.len() != 1 << alice_bits || bob.len() != 1 << bob_bits {
            return Err(Error::GardenHose(
                "strategy tables must cover every input".into(),
            ));
        }
        for m in &alice {
            partner_table(&m.links, pipes, m.tap)?;
        }
        for m in &bob {
            partner_table(&m.links, pipes, None)?;
        }
        Ok(Self {
            pipes,
            alice_bits,
            bob_bits,
            alice,
            bob,
        })
    }

    /// Builds the strategy tables from functions of the input bits.
    pub fn from_fns(
        pipes: usize,
        alice_bits: usize,
        bob_bits: usize,
        alice: impl Fn(&[bool]) -> AliceMatching,
        bob: impl Fn(&[bool]) -> BobMatching,
    ) -> Result<Self> {
        let bits =
            |idx: usize, n: usize| -> Vec<bool> { (0..n).map(|i| idx >> i & 1 == 1).collect() };
        let a = (0..1 << alice_bits)
            .map(|i| alice(&bits(i, alice_bits)))
            .collect();
        let b = (0..1 << bob_bits)
            .map(|j| bob(&bits(j, bob_bits)))
            .collect();
        Self::new(pipes, alice_bits, bob_bits, a, b)
    }

    /// Zero pipes, output `value` (1 needs a single pipe left open at Bob).
    pub fn constant(alice_bits: usize, bob_bits: usize, value: bool) -> Self {
        let tap = value.then_some(0);
        Self::from_fns(
            value as usize,
            alice_bits,
            bob_bits,
            |_| AliceMatching { tap, links: vec![] },
            |_| BobMatching::default(),
        )
        .expect("valid constant protocol")
    }

    pub fn pipes(&self) -> usize {
        self.pipes
    }

    pub fn alice_bits(&self) -> usize {
        self.alice_bits
    }

    pub fn bob_bits(&self) -> usize {
        self.bob_bits
    }

    pub fn alice_strategy(&self) -> &[AliceMatching] {
        &self.alice
    }

    pub fn bob_strategy(&self) -> &[BobMatching] {
        &self.bob
    }

    pub fn evaluate(&self, x: usize, y: usize) -> Result<GhEvaluation> {
        let a = self
            .alice
            .get(x)
            .ok_or_else(|| Error::GardenHose(format!("no Alice strategy for input {x}")))?;
        let b = self
            .bob
            .get(y)
            .ok_or_else(|| Error::GardenHose(format!("no Bob strategy for input {y}")))?;
        Ok(walk(self.pipes, a, b))
    }

    pub fn evaluate_bits(&self, x: &[bool], y: &[bool]) -> Result<GhEvaluation> {
        let idx = |b: &[bool]| {
            b.iter()
                .enumerate()
                .fold(0, |acc, (i, &v)| acc | ((v as usize) << i))
        };
        self.evaluate(idx(x), idx(y))
    }

    /// Output table indexed `[x][y]`.
    pub fn truth_table(&self) -> Vec<Vec<bool>> {
        (0..self.alice.len())
            .map(|x| {
                (0..self.bob.len())
                    .map(|y| walk(self.pipes, &self.alice[x], &self.bob[y]).output)
                    .collect()
            })
            .collect()
    }

    pub fn computes(&self, f: &[Vec<bool>]) -> bool {
        self.truth_table() == f
    }

    pub fn to_json(&self) -> Value {
        let key = |idx: usize, n: usize| -> String {
            (0..n)
                .map(|i| if idx >> i & 1 == 1 { '1' } else { '0' })
                .collect()
        };
        let ends = |links: &[(usize, usize)], side: fn(usize) -> Endpoint| -> Vec<Value> {
            links
                .iter()
                .map(|&(a, b)| json!([side(a).to_string(), side(b).to_string()]))
                .collect()
        };
        let alice: serde_json::Map<String, Value> = self
            .alice
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let mut list = Vec::new();
                if let Some(t) = m.tap {
                    list.push(json!(["T", Endpoint::Alice(t).to_string()]));
                }
                list.extend(ends(&m.links, Endpoint::Alice));
                (key(i, self.alice_bits), Value::Array(list))
            })
            .collect();
        let bob: serde_json::Map<String, Value> = self
            .bob
            .iter()
            .enumerate()
            .map(|(j, m)| {
                (
                    key(j, self.bob_bits),
                    Value::Array(ends(&m.links, Endpoint::Bob)),
                )
            })
            .collect();
        json!({ "pipes": self.pipes, "alice": alice, "bob": bob })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |m: &str| Error::GardenHose(format!("protocol JSON: {m}"));
        let pipes = value["pipes"]
            .as_u64()
            .ok_or_else(|| bad("missing `pipes`"))? as usize;
        let parse_end = |s: &Value| -> Result<Endpoint> {
            let s = s.as_str().ok_or_else(|| bad("pipe ends must be strings"))?;
            if s == "T" {
                return Ok(Endpoint::Tap);
            }
            let (side, num) = s.split_at(1);
            let p: usize = num
                .parse()
                .map_err(|_| bad(&format!("bad pipe end `{s}`")))?;
            if p == 0 {
                return Err(bad("pipes are numbered from 1"));
            }
            match side {
                "A" => Ok(Endpoint::Alice(p - 1)),
                "B" => Ok(Endpoint::Bob(p - 1)),
                _ => Err(bad(&format!("bad pipe end `{s}`"))),
            }
        };
        let table = |v: &Value| -> Result<(usize, Vec<(String, Vec<(Endpoint, Endpoint)>)>)> {
            let map = v
                .as_object()
                .ok_or_else(|| bad("strategies must be objects"))?;
            let mut rows = Vec::new();
            let mut width = None;
            for (k, links) in map {
                if *width.get_or_insert(k.len()) != k.len() {
                    return Err(bad("input keys of different lengths"));
                }
                let links = links
                    .as_array()
                    .ok_or_else(|| bad("links must be arrays"))?
                    .iter()
                    .map(|pair| match pair.as_array().map(Vec::as_slice) {
                        Some([a, b]) => Ok((parse_end(a)?, parse_end(b)?)),
                        _ => Err(bad("each link is a pair of ends")),
                    })
                    .collect::<Result<_>>()?;
                rows.push((k.clone(), links));
            }
            Ok((width.unwrap_or(0), rows))
        };
        let index = |k: &str| -> Result<usize> {
            k.chars().enumerate().try_fold(0, |acc, (i, ch)| match ch {
                '0' => Ok(acc),
                '1' => Ok(acc | (1 << i)),
                _ => Err(bad(&format!("bad input key `{k}`"))),
            })
        };
        let (na, arows) = table(&value["alice"])?;
        let (nb, brows) = table(&value["bob"])?;
        let mut alice = vec![None; 1 << na];
        for (k, links) in arows {
            let mut m = AliceMatching::default();
            for (a, b) in links {
                match (a, b) {
                    (Endpoint::Tap, Endpoint::Alice(p)) | (Endpoint::Alice(p), Endpoint::Tap) => {
                        m.tap = Some(p)
                    }
                    (Endpoint::Alice(p), Endpoint::Alice(q)) => m.links.push((p, q)),
                    _ => return Err(bad("Alice links join Alice ends or the tap")),
                }
            }
            alice[index(&k)?] = Some(m);
        }
        let mut bob = vec![None; 1 << nb];
        for (k, links) in brows {
            let mut m = BobMatching::default();
            for (a, b) in links {
                match (a, b) {
                    (Endpoint::Bob(p), Endpoint::Bob(q)) => m.links.push((p, q)),
                    _ => return Err(bad("Bob links join Bob ends")),
                }
            }
            bob[index(&k)?] = Some(m);
        }
        fn complete<T>(v: Vec<Option<T>>) -> Option<Vec<T>> {
            v.into_iter().collect()
        }
        let alice = complete(alice).ok_or_else(|| bad("missing Alice input"))?;
        let bob = complete(bob).ok_or_else(|| bad("missing Bob input"))?;
        Self::new(pipes, na, nb, alice, bob)
    }
}

fn walk(pipes: usize, a: &AliceMatching, b: &BobMatching) -> GhEvaluation {
    let alice = partner_table(&a.links, pipes, a.tap).expect("validated");
    let bob = partner_table(&b.links, pipes, None).expect("validated");
    let Some(mut pipe) = a.tap else {
        return GhEvaluation {
            output: false,
            path: vec![],
        };
    };
    let mut path = vec![Endpoint::Tap, Endpoint::Alice(pipe)];
    // each pipe is traversed at most once, so 2·pipes + 1 steps suffice
    for _ in 0..=pipes {
        path.push(Endpoint::Bob(pipe));
        let Some(next) = bob[pipe] else {
            return GhEvaluation { output: true, path };
        };
        path.push(Endpoint::Bob(next));
        path.push(Endpoint::Alice(next));
        let Some(after) = alice[next] else {
            return GhEvaluation {
                output: false,
                path,
            };
        };
        path.push(Endpoint::Alice(after));
        pipe = after;
    }
    unreachable!("water path longer than the number of pipes")
}

/// Alice-side node in the composition graph: a real pipe end, the tap, or
/// a rail port shared between consecutive components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    Tap,
    End(usize),
    Port(usize, bool),
}

/// Protocol for `f₁ ⊕ … ⊕ f_m ⊕ c` with `4·Σ sᵢ + 1` pipes.
///
/// Water reaches each component on one of two rails carrying the running
/// parity. Each component is laid out four times: copies 1 and 4 run the
/// component forward from rail 0 and rail 1; copies 2 and 3 run it backwards
/// from where the forward run spilled to the component's tap end, which then
/// feeds rail 0 and rail 1 of the next component. A forward run spilling at
/// Alice keeps the parity (copy 1 → copy 2, copy 4 → copy 3); spilling at Bob
/// flips it (copy 1 → copy 3, copy 4 → copy 2). After the last component
/// rail 0 stays open at Alice and rail 1 enters the extra pipe, open at Bob.
pub fn xor_compose(protocols: &[GardenHoseProtocol], c: bool) -> Result<GardenHoseProtocol> {
    let Some(first) = protocols.first() else {
        return Ok(GardenHoseProtocol::constant(0, 0, c));
    };
    let (na, nb) = (first.alice_bits, first.bob_bits);
    if protocols
        .iter()
        .any(|p| p.alice_bits != na || p.bob_bits != nb)
    {
        return Err(Error::GardenHose(
            "components have different input spaces".into(),
        ));
    }
    let offsets: Vec<usize> = protocols
        .iter()
        .scan(0, |acc, p| {
            let o = *acc;
            *acc += 4 * p.pipes;
            Some(o)
        })
        .collect();
    let extra = 4 * protocols.iter().map(|p| p.pipes).sum::<usize>();
    let pipes = extra + 1;
    let m = protocols.len();
    let copy = |i: usize, k: usize, p: usize| offsets[i] + k * protocols[i].pipes + p;

    let alice_for = |x: usize| -> AliceMatching {
        let mut edges: Vec<(Node, Node)> = vec![(Node::Tap, Node::Port(0, c))];
        for (i, proto) in protocols.iter().enumerate() {
            let s = &proto.alice[x];
            let (in0, in1) = (Node::Port(i, false), Node::Port(i, true));
            let (out0, out1) = (Node::Port(i + 1, false), Node::Port(i + 1, true));
            let Some(t) = s.tap else {
                edges.push((in0, out0));
                edges.push((in1, out1));
                continue;
            };
            edges.push((in0, Node::End(copy(i, 0, t))));
            edges.push((in1, Node::End(copy(i, 3, t))));
            edges.push((Node::End(copy(i, 1, t)), out0));
            edges.push((Node::End(copy(i, 2, t)), out1));
            let partner = partner_table(&s.links, proto.pipes, s.tap).expect("validated");
            for k in 0..4 {
                for &(a, b) in &s.links {
                    edges.push((Node::End(copy(i, k, a)), Node::End(copy(i, k, b))));
                }
            }
            for e in (0..proto.pipes).filter(|&e| partner[e].is_none() && Some(e) != s.tap) {
                edges.push((Node::End(copy(i, 0, e)), Node::End(copy(i, 1, e))));
                edges.push((Node::End(copy(i, 3, e)), Node::End(copy(i, 2, e))));
            }
        }
        edges.push((Node::Port(m, true), Node::End(extra)));
        contract(&edges)
    };
    let bob_for = |y: usize| -> BobMatching {
        let mut links = Vec::new();
        for (i, proto) in protocols.iter().enumerate() {
            let s = &proto.bob[y];
            for k in 0..4 {
                links.extend(s.links.iter().map(|&(a, b)| (copy(i, k, a), copy(i, k, b))));
            }
            let partner = partner_table(&s.links, proto.pipes, None).expect("validated");
            for e in (0..proto.pipes).filter(|&e| partner[e].is_none()) {
                links.push((copy(i, 0, e), copy(i, 2, e)));
                links.push((copy(i, 3, e), copy(i, 1, e)));
            }
        }
        BobMatching { links }
    };
    let alice = (0..1 << na).map(alice_for).collect();
    let bob = (0..1 << nb).map(bob_for).collect();
    GardenHoseProtocol::new(pipes, na, nb, alice, bob)
}

/// Resolves chains through rail ports into direct Alice-side links.
fn contract(edges: &[(Node, Node)]) -> AliceMatching {
    let mut adj: BTreeMap<Node, Vec<Node>> = BTreeMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut matching = AliceMatching::default();
    for (&start, nbrs) in &adj {
        if matches!(start, Node::Port(..)) {
            continue;
        }
        let [first] = nbrs.as_slice() else {
            debug_assert!(nbrs.is_empty(), "real ends have degree ≤ 1");
            continue;
        };
        let (mut prev, mut cur) = (start, *first);
        while let Node::Port(..) = cur {
            let Some(&next) = adj[&cur].iter().find(|&&n| n != prev) else {
                break;
            };
            (prev, cur) = (cur, next);
        }
        match (start, cur) {
            (Node::Tap, Node::End(p)) => matching.tap = Some(p),
            (Node::End(a), Node::End(b)) if a < b => matching.links.push((a, b)),
            _ => {}
        }
    }
    matching
}

fn alice_matchings(pipes: usize) -> Vec<AliceMatching> {
    // node `pipes` stands for the tap
    partial_matchings(pipes + 1)
        .into_iter()
        .map(|links| {
            let mut m = AliceMatching::default();
            for (a, b) in links {
                if b == pipes {
                    m.tap = Some(a);
                } else {
                    m.links.push((a, b));
                }
            }
            m
        })
        .collect()
}

fn partial_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(free: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&first, rest)) = free.split_first() else {
            out.push(acc.clone());
            return;
        };
        go(rest, acc, out);
        for (i, &other) in rest.iter().enumerate() {
            let remaining: Vec<usize> = rest
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &v)| v)
                .collect();
            acc.push((first, other));
            go(&remaining, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(&(0..n).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
    out
}

pub const SEARCH_MAX_BITS: usize = 2;
pub const SEARCH_MAX_PIPES: usize = 4;

/// Smallest protocol computing `f` (`f[x][y]`), searching pipe counts
/// `0..=max_pipes`. Among minimal protocols the first in enumeration order
/// wins: Bob strategy tuples lexicographically, then per `x` the first
/// Alice matching that works.
pub fn brute_force_gh(f: &[Vec<bool>], max_pipes: usize) -> Result<Option<GardenHoseProtocol>> {
    let rows = f.len();
    let cols = f.first().map_or(0, Vec::len);
    if !rows.is_power_of_two() || !cols.is_power_of_two() || f.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidArgument(
            "truth table must be 2^a × 2^b".into(),
        ));
    }
    let (na, nb) = (
        rows.trailing_zeros() as usize,
        cols.trailing_zeros() as usize,
    );
    if na > SEARCH_MAX_BITS || nb > SEARCH_MAX_BITS || max_pipes > SEARCH_MAX_PIPES {
        return Err(Error::SearchCap(format!(
            "{na}+{nb} input bits with {max_pipes} pipes (caps: {SEARCH_MAX_BITS} bits per side, {SEARCH_MAX_PIPES} pipes)"
        )));
    }
    for s in 0..=max_pipes {
        let am = alice_matchings(s);
        let bm: Vec<BobMatching> = partial_matchings(s)
            .into_iter()
            .map(|links| BobMatching { links })
            .collect();
        let tuples = bm.len().pow(cols as u32);
        let found = (0..tuples).into_par_iter().find_map_first(|t| {
            let bob: Vec<BobMatching> = (0..cols)
                .map(|y| bm[t / bm.len().pow(y as u32) % bm.len()].clone())
                .collect();
            let alice: Option<Vec<AliceMatching>> = (0..rows)
                .map(|x| {
                    am.iter()
                        .find(|a| (0..cols).all(|y| walk(s, a, &bob[y]).output == f[x][y]))
                        .cloned()
                })
                .collect();
            alice.map(|alice| GardenHoseProtocol {
                pipes: s,
                alice_bits: na,
                bob_bits: nb,
                alice,
                bob,
            })
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Constructive protocol for any `f` from its algebraic normal form in Bob's
/// bits: `f(x, y) = ⊕_T α_T(x) · Π_{j∈T} y_j`. Each nonzero term is a 1-pipe
/// (`T = ∅`) or 2-pipe protocol, and the terms are XOR-composed.
pub fn gh_from_anf(f: &[Vec<bool>]) -> Result<GardenHoseProtocol> {
    let rows = f.len();
    let cols = f.first().map_or(0, Vec::len);
    if !rows.is_power_of_two() || !cols.is_power_of_two() || f.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidArgument(
            "truth table must be 2^a × 2^b".into(),
        ));
    }
    let (na, nb) = (
        rows.trailing_zeros() as usize,
        cols.trailing_zeros() as usize,
    );
    // Möbius transform over y for every x
    let coeffs: Vec<Vec<bool>> = f
        .iter()
        .map(|row| {
            let mut c = row.clone();
            for j in 0..nb {
                for t in 0..cols {
                    if t >> j & 1 == 1 {
                        c[t] ^= c[t ^ (1 << j)];
                    }
                }
            }
            c
        })
        .collect();
    let mut parts = Vec::new();
    for t in 0..cols {
        if coeffs.iter().all(|c| !c[t]) {
            continue;
        }
        let alpha: Vec<bool> = coeffs.iter().map(|c| c[t]).collect();
        let alice: Vec<AliceMatching> = alpha
            .iter()
            .map(|&a| AliceMatching {
                tap: a.then_some(0),
                links: vec![],
            })
            .collect();
        let (pipes, bob): (usize, Vec<BobMatching>) = if t == 0 {
            (1, vec![BobMatching::default(); cols])
        } else {
            let bob = (0..cols)
                .map(|y| BobMatching {
                    links: if y & t == t { vec![] } else { vec![(0, 1)] },
                })
                .collect();
            (2, bob)
        };
        parts.push(GardenHoseProtocol::new(pipes, na, nb, alice, bob)?);
    }
    if parts.is_empty() {
        return Ok(GardenHoseProtocol::constant(na, nb, false));
    }
    xor_compose(&parts, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(na: usize, nb: usize, f: impl Fn(usize, usize) -> bool) -> Vec<Vec<bool>> {
        (0..1 << na)
            .map(|x| (0..1 << nb).map(|y| f(x, y)).collect())
            .collect()
    }

    fn f_x() -> GardenHoseProtocol {
        GardenHoseProtocol::from_fns(
            1,
            1,
            1,
            |x| AliceMatching {
                tap: x[0].then_some(0),
                links: vec![],
            },
            |_| BobMatching::default(),
        )
        .unwrap()
    }

    fn f_y() -> GardenHoseProtocol {
        GardenHoseProtocol::from_fns(
            2,
            1,
            1,
            |_| AliceMatching {
                tap: Some(0),
                links: vec![],
            },
            |y| BobMatching {
                links: if y[0] { vec![] } else { vec![(0, 1)] },
            },
        )
        .unwrap()
    }

    #[test]
    fn constant_zero_has_empty_path() {
        let p = GardenHoseProtocol::constant(1, 1, false);
        let e = p.evaluate(0, 1).unwrap();
        assert_eq!((e.output, e.path.len()), (false, 0));
    }

    #[test]
    fn projections() {
        assert!(f_x().computes(&table(1, 1, |x, _| x == 1)));
        assert!(f_y().computes(&table(1, 1, |_, y| y == 1)));
        let e = f_y().evaluate(0, 0).unwrap();
        assert_eq!(e.render(), "T -> A1 ~ B1 -> B2 ~ A2 -> spills at Alice");
    }

    #[test]
    fn compose_x_xor_y() {
        let p = xor_compose(&[f_x(), f_y()], false).unwrap();
        assert_eq!(p.pipes(), 13);
        assert!(p.computes(&table(1, 1, |x, y| (x ^ y) == 1)));
        let q = xor_compose(&[f_x(), f_y()], true).unwrap();
        assert!(q.computes(&table(1, 1, |x, y| (x ^ y) == 0)));
    }

    #[test]
    fn search_finds_minimal_protocols() {
        assert_eq!(
            brute_force_gh(&table(1, 1, |_, _| false), 4)
                .unwrap()
                .unwrap()
                .pipes(),
            0
        );
        assert_eq!(
            brute_force_gh(&table(1, 1, |x, _| x == 1), 4)
                .unwrap()
                .unwrap()
                .pipes(),
            1
        );
        let xor = brute_force_gh(&table(1, 1, |x, y| (x ^ y) == 1), 4)
            .unwrap()
            .unwrap();
        assert_eq!(xor.pipes(), 3);
        assert!(brute_force_gh(&table(3, 1, |_, _| false), 4).is_err());
    }

    #[test]
    fn anf_construction_is_correct() {
        let f = table(2, 2, |x, y| ((x & y) == 3) ^ (x == 1) ^ (y == 2));
        assert!(gh_from_anf(&f).unwrap().computes(&f));
    }

    #[test]
    fn json_round_trip() {
        let p = xor_compose(&[f_x(), f_y()], true).unwrap();
        assert_eq!(GardenHoseProtocol::from_json(&p.to_json()).unwrap(), p);
    }
}
