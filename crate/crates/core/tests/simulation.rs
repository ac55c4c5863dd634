use qftqkd_core::adversary::EveStrategy;
use qftqkd_core::analytics::exact::{compartment_outcome, exact_mean_detection};
use qftqkd_core::analytics::{aggregate_detection, BMode, EveTouchSet, Statistic};
use qftqkd_core::montecarlo::{estimate_detection, BPolicy};
use qftqkd_core::oracle::compartment_oracle;
use qftqkd_core::protocols::{Backend, Protocol, ProtocolParams};
use qftqkd_core::schemes::{build_scheme, SchemeKind, VerificationScheme};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIG5: [SchemeKind; 5] = [
    SchemeKind::QftRandom,
    SchemeKind::PairCompartment,
    SchemeKind::PairFlat,
    SchemeKind::TripleCompartment,
    SchemeKind::TripleFlat,
];

fn scheme(kind: SchemeKind, k: usize) -> VerificationScheme {
    build_scheme(kind, k, &mut ChaCha8Rng::seed_from_u64(11)).unwrap()
}

#[test]
fn two_pass_simulation_matches_exact_model() {
    for kind in FIG5 {
        for k in 1..=3 {
            let s = scheme(kind, k);
            let eve = EveTouchSet::key_wires(&s);
            let expected = exact_mean_detection(&s, &eve).unwrap();
            let params = ProtocolParams::new(s);
            let est =
                estimate_detection(Protocol::TwoPass, &params, &EveStrategy::scheme_aware(), &BPolicy::Random, 20_000, 5)
                    .unwrap();
            assert!(
                est.agrees_with(expected),
                "{kind} k={k}: simulated {} vs exact {expected}",
                est.mean
            );
        }
    }
}

#[test]
fn full_intercept_qft_random_halves_each_verification_qubit() {
    for k in [1, 2, 4] {
        let s = scheme(SchemeKind::QftRandom, k);
        let eve = EveTouchSet::all(s.total_qubits());
        let analytic = aggregate_detection(&s, &eve, Statistic::Mean, BMode::Exhaustive).unwrap();
        let closed = 1.0 - 0.5f64.powi(k as i32);
        assert!((analytic.probability - closed).abs() < 1e-12);
        let params = ProtocolParams::new(s);
        let est = estimate_detection(Protocol::TwoPass, &params, &EveStrategy::full(), &BPolicy::Random, 20_000, 6).unwrap();
        assert!(est.agrees_with(closed), "k={k}: {}", est.mean);
    }
}

#[test]
fn backends_give_same_detection_rate() {
    let s = scheme(SchemeKind::TripleFlat, 2);
    let rate = |backend| {
        let params = ProtocolParams::new(s.clone()).with_backend(backend);
        estimate_detection(Protocol::TwoPass, &params, &EveStrategy::scheme_aware(), &BPolicy::Random, 20_000, 8).unwrap()
    };
    let dense = rate(Backend::Dense);
    let eq = rate(Backend::Equatorial);
    let sigma = (dense.standard_error.powi(2) + eq.standard_error.powi(2)).sqrt();
    assert!((dense.mean - eq.mean).abs() <= 3.0 * sigma + 1e-3);
}

#[test]
fn three_pass_detection_matches_two_pass_model() {
    let s = scheme(SchemeKind::PairFlat, 2);
    let eve = EveTouchSet::key_wires(&s);
    let expected = exact_mean_detection(&s, &eve).unwrap();
    let params = ProtocolParams::new(s);
    let est =
        estimate_detection(Protocol::ThreePass, &params, &EveStrategy::scheme_aware(), &BPolicy::Random, 20_000, 12)
            .unwrap();
    assert!(est.agrees_with(expected), "{} vs {expected}", est.mean);
}

#[test]
fn oracle_agrees_with_exact_model_on_random_compartments() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..40 {
        let n = rng.gen_range(1..=6);
        let b: Vec<u8> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
        let touched: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
        let ver: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let oracle = compartment_oracle(&b, &touched, &ver).unwrap();
        let exact = compartment_outcome(&b, &touched, &ver).unwrap();
        assert!((oracle.survival - exact.survival).abs() < 1e-9);
    }
}

#[test]
fn bb84_partial_intercept() {
    let s = build_scheme(SchemeKind::Bb84Random, 4, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
    let touched: Vec<usize> = s.verification_indices().into_iter().take(2).chain(s.key_positions()).collect();
    let params = ProtocolParams::new(s);
    let est = estimate_detection(Protocol::Bb84, &params, &EveStrategy::subset(touched), &BPolicy::Random, 20_000, 3)
        .unwrap();
    assert!(est.agrees_with(1.0 - 0.75f64.powi(2)), "{}", est.mean);
}
