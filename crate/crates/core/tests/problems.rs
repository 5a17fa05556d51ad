mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use magicomm::linalg::unitarity_deviation;
use magicomm::problems::*;

use common::naive_forr;

#[test]
fn forr_matches_naive_double_sum() {
    for n in [4usize, 8, 16, 32] {
        for seed in 0..100 {
            let inst = ForrelationInstance::random(n, seed);
            let fast = forr(&inst.x).unwrap();
            assert!(
                (fast - naive_forr(&inst.x)).abs() < 1e-12,
                "n = {n}, seed {seed}"
            );
            let xy: Vec<i8> = inst.x.iter().zip(&inst.y).map(|(a, b)| a * b).collect();
            assert!((inst.value().unwrap() - naive_forr(&xy)).abs() < 1e-12);
        }
    }
}

#[test]
fn forr_of_all_ones_is_a_quarter() {
    assert!((forr(&[1; 8]).unwrap() - 0.25).abs() < 1e-12);
    assert!((naive_forr(&[1; 8]) - 0.25).abs() < 1e-12);
}

#[test]
fn forr_rejects_bad_inputs() {
    assert!(forr(&[1, 1, 1]).is_err());
    assert!(forr(&[1, 0, 1, 1]).is_err());
}

#[test]
fn forrelation_classes_follow_alpha() {
    let ones = ForrelationInstance {
        x: vec![1; 8],
        y: vec![1; 8],
    };
    assert_eq!(ones.classify(0.25).unwrap(), ForrelationClass::Forrelated);
    assert_eq!(
        ones.classify(0.4).unwrap(),
        ForrelationClass::OutsidePromise
    );
    assert_eq!(ones.classify(0.6).unwrap(), ForrelationClass::Uncorrelated);
    let mut flipped = ones.clone();
    flipped.y[4..].iter_mut().for_each(|v| *v = -1);
    assert_eq!(
        flipped.classify(DEFAULT_ALPHA).unwrap(),
        ForrelationClass::Uncorrelated
    );
}

fn direct_trace(inst: &AbcdInstance) -> f64 {
    (&inst.a * &inst.b * &inst.c * &inst.d).trace().re
}

#[test]
fn abcd_thresholds_hold_on_random_instances() {
    for n in [2, 4] {
        for seed in 0..20 {
            let high = AbcdInstance::random_high(n, seed).unwrap();
            assert_eq!(high.promise, Promise::High);
            let p = abcd_accept_probability(&high).unwrap();
            assert!(p >= 0.95, "n = {n}, seed {seed}: high accept {p}");
            assert!((p - (0.5 + direct_trace(&high) / (2.0 * n as f64))).abs() < 1e-9);

            let low = AbcdInstance::random_low(n, seed).unwrap();
            assert_eq!(low.promise, Promise::Low);
            let p = abcd_accept_probability(&low).unwrap();
            assert!(p <= 0.55, "n = {n}, seed {seed}: low accept {p}");
            assert!((p - (0.5 + direct_trace(&low) / (2.0 * n as f64))).abs() < 1e-9);
        }
    }
}

#[test]
fn abcd_accept_decreases_with_the_phase_spread() {
    let mut last = f64::INFINITY;
    for step in 0..8 {
        let t = step as f64 * 0.4;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let inst = AbcdInstance::with_phases(2, &[t, -t], &mut rng).unwrap();
        let p = abcd_accept_probability(&inst).unwrap();
        assert!((p - (0.5 + t.cos() / 2.0)).abs() < 1e-9);
        assert!(p <= last + 1e-12);
        last = p;
    }
}

#[test]
fn haar_samples_are_unitary_and_seeded() {
    let mut a = ChaCha8Rng::seed_from_u64(1);
    let mut b = ChaCha8Rng::seed_from_u64(1);
    let u = haar_unitary(4, &mut a);
    assert!(unitarity_deviation(&u) < 1e-12);
    assert_eq!(u, haar_unitary(4, &mut b));
}

#[test]
fn abcd_rejects_non_unitary_and_oversized_inputs() {
    let mut inst = AbcdInstance::identity(2).unwrap();
    inst.a[(0, 0)] *= 2.0;
    assert!(AbcdInstance::new(
        inst.a.clone(),
        inst.b.clone(),
        inst.c.clone(),
        inst.d.clone()
    )
    .is_err());
    let big = AbcdInstance::identity(8).unwrap();
    assert!(abcd_qsmp_spec(&big).is_err());
}

#[test]
fn abcd_reports_check_thresholds() {
    let high = abcd_report(2, true, 3).unwrap();
    assert!(high.threshold.holds && high.accept_probability >= 0.95);
    let low = abcd_report(4, false, 3).unwrap();
    assert!(low.threshold.holds && low.trace_re.abs() < 1e-9);
}

#[test]
fn pipelines_verify_against_oracles() {
    for n in 1..=4 {
        let r = equality_pipeline(n).unwrap();
        assert!(
            r.verified && r.bound_checks.iter().all(|b| b.holds),
            "{r:?}"
        );
        assert_eq!(r.inputs_checked, 1 << (2 * n));
    }
    for k in 1..=3 {
        let r = index_pipeline(k).unwrap();
        assert!(
            r.verified && r.bound_checks.iter().all(|b| b.holds),
            "{r:?}"
        );
        assert_eq!(r.inputs_checked, 1 << ((1 << k) + k));
    }
    assert!(equality_pipeline(9).is_err());
    assert!(index_pipeline(4).is_err());
}

#[test]
fn index_circuit_reads_the_addressed_bit() {
    for k in 1..=2 {
        let c = index_circuit(k).unwrap();
        let size = 1 << k;
        for idx in 0..1usize << (size + k) {
            let bits = magicomm::statevector::index_to_bits(idx, size + k);
            let i = bits[size..].iter().fold(0, |acc, &b| acc << 1 | b as usize);
            let p1 = magicomm::statevector::run(&c, &bits).unwrap().prob_one();
            assert!((p1 - bits[i] as u8 as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn multiplexer_table_rows() {
    let rows = multiplexer_table(3).unwrap();
    assert_eq!(
        rows.iter().map(|r| r.magic_count).collect::<Vec<_>>(),
        vec![6, 16, 36]
    );
    assert!(rows.iter().all(|r| r.holds));
}
