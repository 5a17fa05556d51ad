mod common;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use common::*;
use magicomm::pauli::{CliffordGate, PauliString};

fn config() -> Config {
    Config {
        cases: 200,
        rng_seed: RngSeed::Fixed(0x6d61_6769),
        failure_persistence: None,
        ..Config::default()
    }
}

fn gates(n: usize) -> impl Strategy<Value = Vec<CliffordGate>> {
    prop::collection::vec((any::<u8>(), 0..n, 0..n), 0..24).prop_map(move |v| {
        v.into_iter()
            .map(|(k, a, b)| clifford_from_code(k, a, b, n))
            .collect()
    })
}

fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
    (
        prop::collection::vec(any::<bool>(), n),
        prop::collection::vec(any::<bool>(), n),
        0u8..4,
    )
        .prop_map(|(x, z, r)| PauliString::from_xz(x, z, r).unwrap())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn tableau_tracks_dense_conjugation(
        (gs, p, q) in (1usize..=4).prop_flat_map(|n| (gates(n), pauli(n), pauli(n)))
    ) {
        let n = p.num_qubits();
        if let Err(e) = tableau_invariants(n, &gs, &p, &q) {
            prop_assert!(false, "{}", e);
        }
    }

    #[test]
    fn symbolic_frame_commutes_with_conjugation(
        gs in gates(4),
        masks in prop::collection::vec((0u8..32, 0u8..32), 4),
        assign in 0u8..16,
    ) {
        if let Err(e) = frame_commutes(4, &gs, &masks, assign) {
            prop_assert!(false, "{}", e);
        }
    }

    #[test]
    fn garden_hose_paths_terminate(pipes in 1usize..=6, seed in any::<u64>()) {
        if let Err(e) = gh_terminates(&random_gh(pipes, seed)) {
            prop_assert!(false, "{}", e);
        }
    }
}

#[test]
fn transcript_bits_pass_chi_square() {
    for (name, spec) in d0_specs() {
        for (k, chi) in bell_chi_square(&spec, 4000, 11).into_iter().enumerate() {
            assert!(chi < CHI_SQUARE_1E6, "{name}: bit {k} has chi-square {chi}");
        }
    }
    let spec = magicomm::psm::QSmpSpec::parse(DEPTH_TWO_SPEC).unwrap();
    for (k, chi) in bell_chi_square(&spec, 4000, 12).into_iter().enumerate() {
        assert!(
            chi < CHI_SQUARE_1E6,
            "depth two: bit {k} has chi-square {chi}"
        );
    }
}
