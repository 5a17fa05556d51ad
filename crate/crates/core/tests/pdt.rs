mod common;

use magicomm::circuit::{controlled_multiplexer, equality_circuit, Gate, LayeredCircuit};
use magicomm::pdt::*;
use magicomm::statevector::{self, index_to_bits, run_adaptive, StateVector};
use magicomm::Error;

use common::*;

fn fixtures() -> Vec<(String, LayeredCircuit, Split)> {
    let mut out: Vec<_> = (1..=3)
        .map(|n| {
            (
                format!("equality_{n}"),
                equality_circuit(n).unwrap(),
                Split::new(n, n),
            )
        })
        .collect();
    for seed in 0..50 {
        out.push((
            format!("clifford_t_{seed}"),
            random_clifford_t(seed),
            Split::new(2, 1),
        ));
    }
    out
}

#[test]
fn smp_cost_and_depth_within_bounds() {
    for (name, c, split) in fixtures() {
        let pdt = compile(&c, split, CompileOptions::default()).unwrap();
        let k = pdt.magic_count();
        assert!(
            pdt.smp_cost() <= 4 * pdt.c_m() * k + 2,
            "{name}: cost {}",
            pdt.smp_cost()
        );
        if c.is_t_only() {
            assert!(
                pdt.depth() <= c.t_count() + 1,
                "{name}: depth {}",
                pdt.depth()
            );
        }
        assert!(pdt.bound_checks().iter().all(|b| b.holds), "{name}");
    }
}

#[test]
fn pdt_matches_statevector_on_every_input() {
    for (name, c, split) in fixtures() {
        let pdt = compile(&c, split, CompileOptions::default()).unwrap();
        let report = verify_exhaustive(&pdt).unwrap();
        assert!(
            report.passed() && report.max_deviation < 1e-9,
            "{name}: {report:?}"
        );
        let minimized = compile(&c, split, CompileOptions { minimize: true }).unwrap();
        assert!(minimized.depth() <= pdt.depth());
        assert!(
            verify_exhaustive(&minimized).unwrap().passed(),
            "{name} minimized"
        );
    }
}

#[test]
fn smp_messages_reproduce_deterministic_outputs() {
    for (name, c, split) in fixtures() {
        let pdt = compile(&c, split, CompileOptions::default()).unwrap();
        let smp = pdt.smp();
        for idx in 0..1usize << c.num_inputs() {
            let bits = index_to_bits(idx, c.num_inputs());
            let (x, y) = split.divide(&bits);
            let p1 = statevector::run(&c, &bits).unwrap().prob_one();
            let Ok(expected) = determinize(p1) else {
                continue;
            };
            let (a, b) = (smp.alice_message(x), smp.bob_message(y));
            assert_eq!(a.len() + b.len(), smp.cost_bits());
            assert_eq!(smp.referee(&a, &b).unwrap(), expected, "{name} on {bits:?}");
        }
    }
}

#[test]
fn equality_circuit_computes_equality() {
    for n in 1..=3 {
        let c = equality_circuit(n).unwrap();
        for idx in 0..1usize << (2 * n) {
            let p1 = statevector::run(&c, &index_to_bits(idx, 2 * n))
                .unwrap()
                .prob_one();
            let equal = idx & ((1 << n) - 1) == idx >> n;
            assert!((p1 - equal as u8 as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn mixed_fixture_success_is_three_quarters() {
    let rpdt = compile_mixed(
        &mixed_fixture(),
        Split::new(2, 2),
        CompileOptions::default(),
    )
    .unwrap();
    let report = rpdt.report(|x, y| x == y).unwrap();
    assert_eq!(report.len(), 16);
    for r in report {
        assert!((r.success - 0.75).abs() < 1e-9, "{r:?}");
    }
    assert!(rpdt.smp_cost() <= 4 * rpdt.c_m() * rpdt.magic_count() + 2);
    assert!(rpdt.bound_checks().iter().all(|b| b.holds));
}

#[test]
fn injection_protocol_costs_three_bits_and_matches_oracle() {
    let c = injection_fixture();
    assert_eq!(adaptive_worst_case_bits(&c), 3);
    assert!(adaptive_bound_checks(&c).iter().all(|b| b.holds));
    let split = Split::new(1, 1);
    for idx in 0..4 {
        let bits = index_to_bits(idx, 2);
        let oracle = run_adaptive(&c, &bits).unwrap().prob(1);
        let (exact, worst) =
            adaptive_protocol_distribution(&c, split, &bits[..1], &bits[1..]).unwrap();
        assert!((exact.prob(1) - oracle).abs() < 1e-9);
        assert!(worst <= 3);
        let runs = 10_000;
        let ones: usize = (0..runs)
            .map(|seed| {
                let (t, out) =
                    run_adaptive_protocol(&c, split, &bits[..1], &bits[1..], seed as u64).unwrap();
                assert!(t.cost() <= 3);
                out as usize
            })
            .sum();
        assert!(
            (ones as f64 / runs as f64 - oracle).abs() < 0.02,
            "input {bits:?}"
        );
    }
}

#[test]
fn injection_applies_t_in_the_hadamard_basis() {
    let c = injection_fixture();
    let p = (std::f64::consts::PI / 8.0).sin().powi(2);
    for idx in 0..4 {
        let bits = index_to_bits(idx, 2);
        let expected = if bits[0] ^ bits[1] { 1.0 - p } else { p };
        assert!((run_adaptive(&c, &bits).unwrap().prob(1) - expected).abs() < 1e-12);
    }
}

#[test]
fn postselection_adds_two_queries_per_qubit() {
    let base = compile(
        &postselect_fixture(0),
        Split::new(1, 1),
        CompileOptions::default(),
    )
    .unwrap();
    for k in 1..=3 {
        let c = postselect_fixture(k);
        let pdt = compile(&c, Split::new(1, 1), CompileOptions::default()).unwrap();
        assert_eq!(pdt.depth(), base.depth() + 2 * k, "k = {k}");
        let report = verify_exhaustive(&pdt).unwrap();
        assert!(report.passed() && report.max_deviation < 1e-9);
        assert_eq!(report.unsupported_inputs, 0);
        for idx in 0..4 {
            let bits = index_to_bits(idx, 2);
            let out = pdt.run(&bits[..1], &bits[1..]).unwrap();
            let expected = bits[0] ^ bits[1] ^ (k % 2 == 1);
            assert!((out.prob_one - expected as u8 as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn impossible_postselection_is_reported() {
    let mut c = LayeredCircuit::new(1, 1, 0).unwrap();
    c.push(Gate::PostSelect(vec![(1, true)])).unwrap();
    assert!(matches!(
        statevector::run(&c, &[false]),
        Err(Error::ZeroProbabilityPostSelection)
    ));
    let pdt = compile(&c, Split::new(1, 0), CompileOptions::default()).unwrap();
    let report = verify_exhaustive(&pdt).unwrap();
    assert!(report.passed());
    assert_eq!(report.unsupported_inputs, 2);
}

/// The controlled multiplexer swaps `array[index]` with the target when the
/// control is set and restores its ancillas.
fn multiplexer_image(k: usize, bits: &[bool]) -> Vec<bool> {
    let layout = controlled_multiplexer(k).unwrap().1;
    let mut out = bits.to_vec();
    if bits[layout.control] {
        let i = layout
            .index
            .iter()
            .fold(0, |acc, &q| acc << 1 | bits[q] as usize);
        out.swap(layout.array[i], layout.target);
    }
    out
}

#[test]
fn multiplexer_is_the_controlled_swap_permutation() {
    for k in 1..=3 {
        let (c, layout) = controlled_multiplexer(k).unwrap();
        let n = layout.num_inputs();
        for idx in 0..1usize << n {
            let bits = index_to_bits(idx, n);
            let mut full = bits.clone();
            full.extend(std::iter::repeat_n(false, 2 * k));
            let image = c.apply_classical(&full).unwrap().unwrap();
            let mut expected = multiplexer_image(k, &bits);
            expected.extend(std::iter::repeat_n(false, 2 * k));
            assert_eq!(image, expected, "k = {k}, input {idx}");
        }
    }
}

#[test]
fn multiplexer_statevector_agrees_for_small_k() {
    for k in 1..=2 {
        let (c, layout) = controlled_multiplexer(k).unwrap();
        let n = layout.num_inputs();
        for idx in 0..1usize << n {
            let bits = index_to_bits(idx, n);
            let mut st = StateVector::initial(&c, &bits).unwrap();
            st.apply_unitary_circuit(&c).unwrap();
            let expected = multiplexer_image(k, &bits);
            let target = expected
                .iter()
                .enumerate()
                .fold(0, |acc, (q, &b)| acc | (b as usize) << q);
            assert!(
                (st.amplitudes()[target].norm() - 1.0).abs() < 1e-9,
                "k = {k}, input {idx}"
            );
        }
    }
}

#[test]
fn multiplexer_recursion_holds() {
    let counts: Vec<usize> = (1..=4)
        .map(|k| controlled_multiplexer(k).unwrap().0.magic_count())
        .collect();
    for w in counts.windows(2) {
        assert!(w[1] <= 2 * w[0] + 4, "{counts:?}");
    }
    assert!(magicomm::problems::multiplexer_table(3)
        .unwrap()
        .iter()
        .all(|r| r.holds));
}
