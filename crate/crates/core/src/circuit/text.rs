use std::collections::BTreeMap;
use std::fmt::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Gate, Layer, LayeredCircuit};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::pauli::CliffordGate;

#[derive(Default, Serialize, Deserialize)]
struct Companion {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    matrices: BTreeMap<String, Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    advice_state: Option<Vec<[f64; 2]>>,
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_qubit(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected qubit index, found `{tok}`")))
}

fn parse_gate(words: &[&str], line: usize) -> Result<Gate> {
    let op = words[0];
    let args = &words[1..];
    let qubits = || {
        args.iter()
            .map(|t| parse_qubit(t, line))
            .collect::<Result<Vec<_>>>()
    };
    let arity = |n: usize, what: &str| -> Result<Vec<usize>> {
        if args.len() < n {
            return Err(syntax(line, format!("`{op}` is missing its {what}")));
        }
        if args.len() > n {
            return Err(syntax(
                line,
                format!("`{op}` takes {n} qubit(s), got {}", args.len()),
            ));
        }
        qubits()
    };
    let one = |f: fn(usize) -> CliffordGate| -> Result<Gate> {
        Ok(Gate::Clifford(f(arity(1, "qubit")?[0])))
    };
    let two = |f: fn(usize, usize) -> CliffordGate, what: &str| -> Result<Gate> {
        let q = arity(2, what)?;
        Ok(Gate::Clifford(f(q[0], q[1])))
    };
    match op {
        "h" => one(CliffordGate::H),
        "s" => one(CliffordGate::S),
        "sdg" => one(CliffordGate::Sdg),
        "x" => one(CliffordGate::X),
        "y" => one(CliffordGate::Y),
        "z" => one(CliffordGate::Z),
        "cnot" => two(CliffordGate::Cnot, "target"),
        "cz" => two(CliffordGate::Cz, "second qubit"),
        "swap" => two(CliffordGate::Swap, "second qubit"),
        "t" => Ok(Gate::T(arity(1, "qubit")?[0])),
        "tdg" => Ok(Gate::Tdg(arity(1, "qubit")?[0])),
        "toffoli" => {
            if args.len() < 2 {
                return Err(syntax(
                    line,
                    "`toffoli` needs at least one control and a target",
                ));
            }
            let mut q = qubits()?;
            let target = q.pop().expect("nonempty");
            Ok(Gate::Toffoli {
                controls: q,
                target,
            })
        }
        "magic" => {
            let Some((name, rest)) = args.split_first() else {
                return Err(syntax(line, "`magic` is missing its matrix name"));
            };
            if rest.is_empty() {
                return Err(syntax(line, "`magic` is missing its qubits"));
            }
            let qubits = rest
                .iter()
                .map(|t| parse_qubit(t, line))
                .collect::<Result<_>>()?;
            Ok(Gate::Magic {
                name: name.to_string(),
                qubits,
            })
        }
        "measure" => {
            if args.is_empty() {
                return Err(syntax(line, "`measure` is missing its qubits"));
            }
            Ok(Gate::Measure(qubits()?))
        }
        "postselect" => {
            if args.is_empty() {
                return Err(syntax(line, "`postselect` is missing `q=v` pairs"));
            }
            let pairs = args
                .iter()
                .map(|t| {
                    let (q, v) = t
                        .split_once('=')
                        .ok_or_else(|| syntax(line, format!("expected `q=v`, found `{t}`")))?;
                    let v = match v {
                        "0" => false,
                        "1" => true,
                        _ => {
                            return Err(syntax(
                                line,
                                format!("post-selected value must be 0 or 1, found `{v}`"),
                            ))
                        }
                    };
                    Ok((parse_qubit(q, line)?, v))
                })
                .collect::<Result<_>>()?;
            Ok(Gate::PostSelect(pairs))
        }
        other => Err(syntax(line, format!("unknown gate `{other}`"))),
    }
}

pub(super) fn parse(text: &str) -> Result<LayeredCircuit> {
    let mut inputs = None;
    let mut advice = 0usize;
    let mut output = None;
    let mut gates = Vec::new();
    let mut json = String::new();
    let mut json_start = None;
    let mut in_json = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if in_json {
            if raw.trim() == "end json" {
                in_json = false;
            } else {
                json.push_str(raw);
                json.push('\n');
            }
            continue;
        }
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let header_value = || -> Result<usize> {
            match words.as_slice() {
                [_, v] => v
                    .parse()
                    .map_err(|_| syntax(line, format!("bad number `{v}`"))),
                _ => Err(syntax(
                    line,
                    format!("`{}` takes exactly one number", words[0]),
                )),
            }
        };
        match words[0] {
            "inputs" => inputs = Some(header_value()?),
            "advice" => advice = header_value()?,
            "output" => output = Some(header_value()?),
            "begin" if words.get(1) == Some(&"json") => {
                in_json = true;
                json_start = Some(line);
            }
            _ => gates.push((line, parse_gate(&words, line)?)),
        }
    }
    if in_json {
        return Err(syntax(
            json_start.unwrap_or(0),
            "`begin json` without `end json`",
        ));
    }
    let inputs = inputs.ok_or_else(|| syntax(1, "missing `inputs` header"))?;
    let output = output.ok_or_else(|| syntax(1, "missing `output` header"))?;
    let mut circuit = LayeredCircuit::new(inputs, advice, output)?;
    if let Some(start) = json_start {
        let companion: Companion = serde_json::from_str(&json)
            .map_err(|e| syntax(start + e.line(), format!("companion JSON: {e}")))?;
        for (name, rows) in companion.matrices {
            let dim = rows.len();
            if rows.iter().any(|r| r.len() != dim) {
                return Err(syntax(start, format!("matrix `{name}` is not square")));
            }
            let m = CMatrix::from_fn(dim, dim, |i, j| {
                Complex64::new(rows[i][j][0], rows[i][j][1])
            });
            circuit.add_matrix(&name, m)?;
        }
        if let Some(state) = companion.advice_state {
            circuit.set_advice_state(state.iter().map(|a| Complex64::new(a[0], a[1])).collect())?;
        }
    }
    for (line, gate) in gates {
        circuit.push(gate).map_err(|e| match e {
            Error::InvalidCircuit(message) => syntax(line, message),
            other => other,
        })?;
    }
    Ok(circuit)
}

fn gate_line(g: &Gate) -> String {
    let join = |qs: &[usize]| {
        qs.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    match g {
        Gate::Clifford(c) => {
            let name = match c {
                CliffordGate::H(_) => "h",
                CliffordGate::S(_) => "s",
                CliffordGate::Sdg(_) => "sdg",
                CliffordGate::X(_) => "x",
                CliffordGate::Y(_) => "y",
                CliffordGate::Z(_) => "z",
                CliffordGate::Cnot(..) => "cnot",
                CliffordGate::Cz(..) => "cz",
                CliffordGate::Swap(..) => "swap",
            };
            format!("{name} {}", join(&c.qubits()))
        }
        Gate::T(q) => format!("t {q}"),
        Gate::Tdg(q) => format!("tdg {q}"),
        Gate::Toffoli { .. } => format!("toffoli {}", join(&g.qubits())),
        Gate::Magic { name, qubits } => format!("magic {name} {}", join(qubits)),
        Gate::Measure(qs) => format!("measure {}", join(qs)),
        Gate::PostSelect(pairs) => {
            let parts: Vec<String> = pairs
                .iter()
                .map(|(q, v)| format!("{q}={}", *v as u8))
                .collect();
            format!("postselect {}", parts.join(" "))
        }
    }
}

pub(super) fn format(c: &LayeredCircuit) -> String {
    let mut out = String::new();
    writeln!(out, "inputs {}", c.num_inputs).unwrap();
    writeln!(out, "advice {}", c.num_advice).unwrap();
    writeln!(out, "output {}", c.output).unwrap();
    for layer in &c.layers {
        match layer {
            Layer::Clifford(gs) => {
                for g in gs {
                    writeln!(out, "{}", gate_line(&Gate::Clifford(*g))).unwrap();
                }
            }
            Layer::Event(e) => writeln!(out, "{}", gate_line(e)).unwrap(),
        }
    }
    if !c.matrices.is_empty() || c.advice_state.is_some() {
        let companion = Companion {
            matrices: c
                .matrices
                .iter()
                .map(|(name, m)| {
                    let rows = (0..m.nrows())
                        .map(|i| {
                            (0..m.ncols())
                                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                                .collect()
                        })
                        .collect();
                    (name.clone(), rows)
                })
                .collect(),
            advice_state: c
                .advice_state
                .as_ref()
                .map(|s| s.iter().map(|a| [a.re, a.im]).collect()),
        };
        writeln!(out, "begin json").unwrap();
        writeln!(
            out,
            "{}",
            serde_json::to_string(&companion).expect("plain data")
        )
        .unwrap();
        writeln!(out, "end json").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layering_of_t_between_hadamards() {
        let c = LayeredCircuit::parse("inputs 1\noutput 0\nh 0\nt 0\nh 0\n").unwrap();
        assert_eq!(c.layers().len(), 3);
        assert!(matches!(c.layers()[1], Layer::Event(Gate::T(0))));
    }

    #[test]
    fn missing_target_is_reported_with_line() {
        let err = LayeredCircuit::parse("inputs 2\noutput 0\ncnot 0\n").unwrap_err();
        match err {
            Error::Syntax { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("target"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn round_trip_with_companion_block() {
        let text = "inputs 1\nadvice 1\noutput 0\n# comment\nh 0\nmagic u 1 0\nmeasure 0\npostselect 1=0\n\
                    begin json\n{\"matrices\":{\"u\":[[[0,0],[1,0],[0,0],[0,0]],[[1,0],[0,0],[0,0],[0,0]],\
                    [[0,0],[0,0],[0.6,0.8],[0,0]],[[0,0],[0,0],[0,0],[0.1,-0.99498743710662]]]},\
                    \"advice_state\":[[0.6,0],[0,0.8]]}\nend json\n";
        let c = LayeredCircuit::parse(text).unwrap_or_else(|e| panic!("{e}"));
        let again = LayeredCircuit::parse(&c.to_text()).unwrap();
        assert_eq!(c, again);
        assert_eq!(c.to_text(), again.to_text());
    }
}
