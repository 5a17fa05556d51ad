use std::fmt::Write;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use magicomm::circuit::LayeredCircuit;
use magicomm::gardenhose::{brute_force_gh, gh_from_anf, xor_compose, GardenHoseProtocol};
use magicomm::pdt::{
    compile, verify_classical, verify_exhaustive, BoundCheck, CompileOptions, CompiledPdt,
    ParityQuery, Split, VerifyReport,
};
use magicomm::problems::{self, DENSE_VERIFY_MAX_QUBITS};
use magicomm::psm::{
    audit_privacy, transform, AuditOptions, GadgetBackend, PsmProtocol, QSmpSpec, TransformOptions,
};
use magicomm::statevector;

use crate::{
    Backend, Case, CircuitArgs, Cli, Command, Failure, GhCommand, GhFunction, Inputs, Outcome,
    ProblemCommand, PsmCommand,
};

type Result<T> = std::result::Result<T, Failure>;

pub fn dispatch(cli: &Cli, inputs: &mut Inputs) -> Result<Outcome> {
    let seed = cli.seed;
    match &cli.command {
        Command::CompilePdt(args) => compile_pdt(args, inputs),
        Command::Verify {
            circuit,
            exhaustive,
            seeds,
        } => verify(circuit, *exhaustive, *seeds, seed, inputs),
        Command::Gh(GhCommand::Eval { protocol, x, y }) => gh_eval(protocol, x, y, inputs),
        Command::Gh(GhCommand::Compose {
            protocol,
            complement,
        }) => gh_compose(protocol, *complement, inputs),
        Command::Gh(GhCommand::Search {
            function,
            n,
            max_pipes,
        }) => gh_search(*function, *n, *max_pipes),
        Command::Psm(PsmCommand::Run {
            spec,
            x,
            y,
            backend,
        }) => psm_run(spec, x, y, *backend, seed, inputs),
        Command::Psm(PsmCommand::Audit {
            spec,
            seeds,
            exact_max_bits,
            backend,
        }) => psm_audit(spec, *seeds, *exact_max_bits, *backend, seed, inputs),
        Command::Problems(p) => problem(p, seed),
    }
}

fn outcome(
    results: Value,
    bound_checks: Vec<BoundCheck>,
    seeds: Vec<u64>,
    passed: bool,
    text: String,
) -> Outcome {
    Outcome {
        results,
        bound_checks,
        seeds,
        passed,
        text,
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn parse_bits(s: &str, expected: usize, name: &str) -> Result<Vec<bool>> {
    let bits = s
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Failure::Usage(format!("--{name}: `{other}` is not a bit"))),
        })
        .collect::<Result<Vec<_>>>()?;
    if bits.len() != expected {
        return Err(Failure::Usage(format!(
            "--{name} needs {expected} bits, got {}",
            bits.len()
        )));
    }
    Ok(bits)
}

fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn parse_split(split: &Option<String>, inputs: usize) -> Result<Split> {
    let Some(s) = split else {
        return Ok(Split::halves(inputs));
    };
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b] = parts.as_slice() else {
        return Err(Failure::Usage(format!("--split expects `a,b`, got `{s}`")));
    };
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| Failure::Usage(format!("--split: bad count `{t}`")))
    };
    let split = Split::new(num(a)?, num(b)?);
    split.check(inputs)?;
    Ok(split)
}

fn load_circuit(args: &CircuitArgs, inputs: &mut Inputs) -> Result<(LayeredCircuit, Split)> {
    let text = inputs.read(&args.circuit)?;
    let circuit = LayeredCircuit::parse(&text)?;
    let split = parse_split(&args.split, circuit.num_inputs())?;
    Ok((circuit, split))
}

fn render_query(q: &ParityQuery) -> String {
    let mut terms: Vec<String> = Vec::new();
    terms.extend(
        q.alice_mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| format!("x{i}")),
    );
    terms.extend(
        q.bob_mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(j, _)| format!("y{j}")),
    );
    if q.constant || terms.is_empty() {
        terms.push(if q.constant { "1" } else { "0" }.into());
    }
    terms.join(" ⊕ ")
}

fn compile_pdt(args: &CircuitArgs, inputs: &mut Inputs) -> Result<Outcome> {
    let (circuit, split) = load_circuit(args, inputs)?;
    let pdt = compile(
        &circuit,
        split,
        CompileOptions {
            minimize: args.minimize,
        },
    )?;
    let report = pdt.report();
    let mut text = format!(
        "{} magic gates (c_M = {}), depth {}, SMP cost {} bits\n",
        report.magic_count, report.c_m, report.depth, report.smp_cost_bits
    );
    for (i, q) in pdt.queries().iter().enumerate() {
        let _ = writeln!(text, "  p{i} = {}", render_query(q));
    }
    Ok(outcome(
        to_value(&report),
        pdt.bound_checks(),
        vec![],
        true,
        text,
    ))
}

fn sampled_verify(
    pdt: &CompiledPdt,
    circuit: &LayeredCircuit,
    samples: usize,
    seed: u64,
) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = circuit.num_inputs();
    let mut worst: f64 = 0.0;
    let mut mismatches = Vec::new();
    let mut unsupported = 0;
    for _ in 0..samples {
        let bits: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        let (x, y) = pdt.split().divide(&bits);
        let oracle = match statevector::run(circuit, &bits) {
            Ok(r) => Some(r.prob_one()),
            Err(magicomm::Error::ZeroProbabilityPostSelection) => None,
            Err(e) => return Err(e.into()),
        };
        let compiled = match pdt.run(x, y) {
            Ok(r) => Some(r.prob_one),
            Err(magicomm::Error::ZeroProbabilityPostSelection) => None,
            Err(e) => return Err(e.into()),
        };
        let deviation = match (oracle, compiled) {
            (Some(a), Some(b)) => (a - b).abs(),
            (None, None) => {
                unsupported += 1;
                0.0
            }
            _ => f64::INFINITY,
        };
        worst = worst.max(deviation);
        if deviation > 1e-9 {
            mismatches.push(json!({"input": bit_string(&bits), "oracle_prob_one": oracle, "compiled_prob_one": compiled}));
        }
    }
    Ok(json!({
        "inputs_checked": samples,
        "unsupported_inputs": unsupported,
        "max_deviation": worst,
        "mismatches": mismatches,
    }))
}

fn verify(
    args: &CircuitArgs,
    exhaustive: bool,
    samples: usize,
    seed: u64,
    inputs: &mut Inputs,
) -> Result<Outcome> {
    let (circuit, split) = load_circuit(args, inputs)?;
    let pdt = compile(
        &circuit,
        split,
        CompileOptions {
            minimize: args.minimize,
        },
    )?;
    let (mut results, oracle, seeds) = if exhaustive {
        let report: VerifyReport =
            if circuit.is_basis_preserving() && circuit.num_qubits() > DENSE_VERIFY_MAX_QUBITS {
                verify_classical(&pdt)?
            } else {
                verify_exhaustive(&pdt)?
            };
        let oracle =
            if circuit.is_basis_preserving() && circuit.num_qubits() > DENSE_VERIFY_MAX_QUBITS {
                "classical"
            } else {
                "statevector"
            };
        (to_value(&report), oracle, vec![])
    } else {
        (
            sampled_verify(&pdt, &circuit, samples, seed)?,
            "statevector",
            vec![seed],
        )
    };
    let passed = results["mismatches"]
        .as_array()
        .is_some_and(|m| m.is_empty());
    results["oracle"] = json!(oracle);
    results["exhaustive"] = json!(exhaustive);
    results["passed"] = json!(passed);
    let text = format!(
        "{} inputs checked against the {oracle} oracle, max deviation {:.3e}: {}\n",
        results["inputs_checked"],
        results["max_deviation"].as_f64().unwrap_or(f64::INFINITY),
        if passed { "ok" } else { "MISMATCH" }
    );
    Ok(outcome(results, pdt.bound_checks(), seeds, passed, text))
}

fn load_protocol(path: &PathBuf, inputs: &mut Inputs) -> Result<GardenHoseProtocol> {
    let text = inputs.read(path)?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: line {}: {e}", path.display(), e.line())))?;
    GardenHoseProtocol::from_json(&value)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// One line per strategy: `alice 01: T-A1 A2-A3`.
fn render_protocol(p: &GardenHoseProtocol) -> String {
    let json = p.to_json();
    let mut out = format!("{} pipes\n", p.pipes());
    for side in ["alice", "bob"] {
        for (input, pairs) in json[side].as_object().expect("strategy map") {
            let links: Vec<String> = pairs
                .as_array()
                .expect("pairs")
                .iter()
                .map(|pair| {
                    format!(
                        "{}-{}",
                        pair[0].as_str().unwrap_or("?"),
                        pair[1].as_str().unwrap_or("?")
                    )
                })
                .collect();
            let shown = if input.is_empty() {
                "-"
            } else {
                input.as_str()
            };
            let links = if links.is_empty() {
                "(no pipes)".to_string()
            } else {
                links.join(" ")
            };
            let _ = writeln!(out, "  {side:<5} {shown}: {links}");
        }
    }
    out
}

fn gh_eval(path: &PathBuf, x: &str, y: &str, inputs: &mut Inputs) -> Result<Outcome> {
    let p = load_protocol(path, inputs)?;
    let xb = parse_bits(x, p.alice_bits(), "x")?;
    let yb = parse_bits(y, p.bob_bits(), "y")?;
    let e = p.evaluate_bits(&xb, &yb)?;
    let results = json!({
        "pipes": p.pipes(),
        "x": x,
        "y": y,
        "output": e.output,
        "path": e.path,
        "rendered": e.render(),
    });
    let text = format!(
        "{}{}\noutput {}\n",
        render_protocol(&p),
        e.render(),
        e.output as u8
    );
    Ok(outcome(results, vec![], vec![], true, text))
}

fn gh_compose(paths: &[PathBuf], complement: bool, inputs: &mut Inputs) -> Result<Outcome> {
    let parts = paths
        .iter()
        .map(|p| load_protocol(p, inputs))
        .collect::<Result<Vec<_>>>()?;
    let composed = xor_compose(&parts, complement)?;
    let sum: usize = parts.iter().map(GardenHoseProtocol::pipes).sum();
    let expected: Vec<Vec<bool>> = {
        let tables: Vec<_> = parts.iter().map(GardenHoseProtocol::truth_table).collect();
        (0..1usize << composed.alice_bits())
            .map(|x| {
                (0..1usize << composed.bob_bits())
                    .map(|y| tables.iter().fold(complement, |acc, t| acc ^ t[x][y]))
                    .collect()
            })
            .collect()
    };
    let correct = composed.computes(&expected);
    let results = json!({
        "components": parts.len(),
        "component_pipes": parts.iter().map(GardenHoseProtocol::pipes).collect::<Vec<_>>(),
        "correct": correct,
        "protocol": composed.to_json(),
    });
    let checks = vec![BoundCheck::at_most(
        "composed_pipes",
        composed.pipes(),
        4 * sum + 1,
    )];
    let text = format!(
        "{}exhaustively correct: {correct}\n",
        render_protocol(&composed)
    );
    Ok(outcome(results, checks, vec![], correct, text))
}

fn gh_table(function: GhFunction, n: usize) -> Vec<Vec<bool>> {
    let f = |x: usize, y: usize| -> bool {
        let full = (1usize << n) - 1;
        match function {
            GhFunction::And => x == full && y == full,
            GhFunction::Or => x != 0 || y != 0,
            GhFunction::Xor => (x.count_ones() + y.count_ones()) % 2 == 1,
            GhFunction::Equality => x == y,
            GhFunction::InnerProduct => (x & y).count_ones() % 2 == 1,
            GhFunction::Majority => (x.count_ones() + y.count_ones()) as usize > n,
        }
    };
    (0..1 << n)
        .map(|x| (0..1 << n).map(|y| f(x, y)).collect())
        .collect()
}

fn gh_search(function: GhFunction, n: usize, max_pipes: usize) -> Result<Outcome> {
    let table = gh_table(function, n);
    let found = brute_force_gh(&table, max_pipes)?;
    let upper = gh_from_anf(&table)?;
    let results = json!({
        "function": format!("{function:?}").to_lowercase(),
        "n": n,
        "max_pipes": max_pipes,
        "found": found.is_some(),
        "minimal_pipes": found.as_ref().map(GardenHoseProtocol::pipes),
        "protocol": found.as_ref().map(GardenHoseProtocol::to_json),
        "anf_construction_pipes": upper.pipes(),
    });
    let text = match &found {
        Some(p) => format!("minimal protocol:\n{}", render_protocol(p)),
        None => format!(
            "no protocol with at most {max_pipes} pipes; the ANF construction uses {}\n",
            upper.pipes()
        ),
    };
    Ok(outcome(results, vec![], vec![], found.is_some(), text))
}

fn load_spec(
    path: &PathBuf,
    backend: Backend,
    inputs: &mut Inputs,
) -> Result<(QSmpSpec, PsmProtocol)> {
    let text = inputs.read(path)?;
    let spec = QSmpSpec::parse(&text)?;
    let backend = match backend {
        Backend::Auto => GadgetBackend::Auto,
        Backend::GardenHose => GadgetBackend::GardenHose,
    };
    let protocol = transform(&spec, TransformOptions { backend })?;
    Ok((spec, protocol))
}

fn protocol_summary(p: &PsmProtocol) -> Value {
    json!({
        "transcript_bits": p.transcript_len(),
        "bits_sent": p.bits_sent(),
        "alice_bits": p.alice_bits(),
        "bob_bits": p.bob_bits(),
        "epr_pairs": p.epr_pairs(),
        "t_depth": p.t_depth(),
        "logical_qubits": p.spec().logical_qubits(),
        "decoder_affine": p.decoder_is_affine(),
        "gadgets": p.gadget_counts(),
    })
}

fn psm_run(
    path: &PathBuf,
    x: &str,
    y: &str,
    backend: Backend,
    seed: u64,
    inputs: &mut Inputs,
) -> Result<Outcome> {
    let (spec, p) = load_spec(path, backend, inputs)?;
    let l = spec.layout();
    let xb = parse_bits(x, l.n_x, "x")?;
    let yb = parse_bits(y, l.n_y, "y")?;
    let run = p.run_transcript(&xb, &yb, seed)?;
    let accept = spec.accept_probability(&xb, &yb)?;
    let mut results = protocol_summary(&p);
    results["r"] = json!(bit_string(&run.r));
    results["s"] = json!(run.s);
    results["output"] = json!(run.output);
    results["accept_probability"] = json!(accept);
    let text = format!(
        "transcript {} | s = {}\noutput {} (original protocol accepts with probability {accept:.6})\n{} bits sent, {} EPR pairs\n",
        bit_string(&run.r),
        run.s as u8,
        run.output as u8,
        p.bits_sent(),
        p.epr_pairs()
    );
    Ok(outcome(
        results,
        vec![p.size_bound()],
        vec![seed],
        true,
        text,
    ))
}

fn psm_audit(
    path: &PathBuf,
    samples: usize,
    exact_max_bits: usize,
    backend: Backend,
    seed: u64,
    inputs: &mut Inputs,
) -> Result<Outcome> {
    let (_, p) = load_spec(path, backend, inputs)?;
    let report = audit_privacy(
        &p,
        AuditOptions {
            samples,
            seed,
            exact_max_bits,
        },
    )?;
    let within_68 = report.size_bound.holds;
    let rows: Vec<Value> = report
        .inputs
        .iter()
        .map(|row| {
            json!({
                "input": format!("{}|{}", bit_string(&row.x), bit_string(&row.y)),
                "f": row.f,
                "accept_probability": row.accept_probability,
                "tv_distance": row.l1_distance / 2.0,
                "l1_distance": row.l1_distance,
                "epsilon_measured": row.epsilon_measured,
                "slack": row.slack,
                "within_bound": row.within_bound,
                "bits_sent": report.bits_sent,
                "epr_pairs": report.epr_pairs,
                "within_68_bound": within_68,
            })
        })
        .collect();
    let mut results = protocol_summary(&p);
    results["method"] = to_value(&report.method);
    results["samples"] = json!(report.samples);
    results["same_value_l1"] = json!(report.same_value_l1);
    results["inputs"] = Value::Array(rows);
    let mut checks = vec![report.size_bound.clone()];
    let mut text = format!(
        "{:?} audit, {} bits sent, {} EPR pairs, T-depth {}\n",
        report.method, report.bits_sent, report.epr_pairs, report.t_depth
    );
    for row in &report.inputs {
        let input = format!("{}|{}", bit_string(&row.x), bit_string(&row.y));
        let _ = writeln!(
            text,
            "  {input}: f = {}, L1 {:.4} vs 2ε {:.4} + {:.4} {}",
            row.f as u8,
            row.l1_distance,
            2.0 * row.epsilon_measured,
            row.slack,
            if row.within_bound { "ok" } else { "EXCEEDED" }
        );
        checks.push(BoundCheck {
            name: format!("privacy_l1[{input}]"),
            value: row.l1_distance,
            bound: 2.0 * row.epsilon_measured + row.slack,
            holds: row.within_bound,
        });
    }
    Ok(outcome(results, checks, vec![seed], report.passed(), text))
}

fn pipeline_outcome(report: problems::PipelineReport) -> Outcome {
    let text = format!(
        "{} (size {}): {} magic gates, depth {}, SMP cost {} bits; {} inputs vs {} oracle: {}\n",
        report.problem,
        report.size,
        report.magic_count,
        report.pdt_depth,
        report.smp_cost,
        report.inputs_checked,
        report.oracle,
        if report.verified { "ok" } else { "MISMATCH" }
    );
    outcome(
        to_value(&report),
        report.bound_checks.clone(),
        vec![],
        report.verified,
        text,
    )
}

fn problem(cmd: &ProblemCommand, seed: u64) -> Result<Outcome> {
    match *cmd {
        ProblemCommand::Abcd { n, case } => {
            let high = case == Case::High;
            let report = problems::abcd_report(n, high, seed)?;
            let inst = if high {
                problems::AbcdInstance::random_high(n, seed)?
            } else {
                problems::AbcdInstance::random_low(n, seed)?
            };
            let spec = problems::abcd_qsmp_spec(&inst)?;
            let mut results = to_value(&report);
            let mut checks = vec![report.threshold.clone()];
            match transform(&spec, TransformOptions::default()) {
                Ok(p) => {
                    checks.push(p.size_bound());
                    results["psm"] = protocol_summary(&p);
                }
                Err(e) => results["psm"] = json!({"unavailable": e.to_string()}),
            }
            let text = format!(
                "ABCD n = {n} ({:?} promise): Tr(ABCD) = {:.4} + {:.4}i, accept {:.6}\n",
                report.promise, report.trace_re, report.trace_im, report.accept_probability
            );
            Ok(outcome(results, checks, vec![seed], true, text))
        }
        ProblemCommand::Forrelation { n, alpha } => {
            let inst = problems::ForrelationInstance::random(n, seed);
            let value = inst.value()?;
            let class = inst.classify(alpha)?;
            let results = json!({"n": n, "alpha": alpha, "forr": value, "class": class, "x": inst.x, "y": inst.y});
            let text = format!("forr = {value:.6} ({class:?} at α = {alpha})\n");
            Ok(outcome(results, vec![], vec![seed], true, text))
        }
        ProblemCommand::Equality { n } => Ok(pipeline_outcome(problems::equality_pipeline(n)?)),
        ProblemCommand::Index { k } => Ok(pipeline_outcome(problems::index_pipeline(k)?)),
        ProblemCommand::Multiplexer { k } => {
            let rows = problems::multiplexer_table(k)?;
            let checks: Vec<BoundCheck> = rows
                .iter()
                .map(|r| {
                    BoundCheck::at_most(
                        &format!("multiplexer_g({})", r.k),
                        r.magic_count,
                        r.recursion_bound,
                    )
                })
                .collect();
            let mut text = String::new();
            for r in &rows {
                let _ = writeln!(
                    text,
                    "  g({}) = {:>4}  ≤ 2·g({}) + 4 = {}",
                    r.k,
                    r.magic_count,
                    r.k - 1,
                    r.recursion_bound
                );
            }
            let passed = rows.iter().all(|r| r.holds);
            Ok(outcome(json!({"rows": rows}), checks, vec![], passed, text))
        }
    }
}
