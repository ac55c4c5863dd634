//! Detection probability under the circuit's actual joint outcome distribution.
//!
//! Outcomes are generated position by position as in the semiclassical
//! inverse QFT: a measured position is a fair coin, an untouched one reads
//! correctly with `cos²(θ_e/2)` for the rotation left by the outcomes that
//! actually occurred earlier. Unlike [`super::AnalyticEngine`], nothing is
//! assumed independent, so this agrees with simulation.

use super::{cumulative_phase_error, prob_correct_given_phase_error, EveTouchSet, MAX_ENUMERATION_QUBITS};
use crate::error::{Error, Result};
use crate::schemes::VerificationScheme;

/// Joint statistics of one compartment.
#[derive(Debug, Clone, PartialEq)]
pub struct CompartmentOutcome {
    /// Probability every verification position reads correctly.
    pub survival: f64,
    /// Marginal probability that each position reads correctly.
    pub marginals: Vec<f64>,
}

/// Exact joint statistics for one compartment given local intended bits,
/// touch flags, and which positions are verification positions.
pub fn compartment_outcome(intended: &[u8], touched: &[bool], verification: &[bool]) -> Result<CompartmentOutcome> {
    let n = intended.len();
    if touched.len() != n || verification.len() != n {
        return Err(Error::Size("compartment vectors differ in length".into()));
    }
    if n > MAX_ENUMERATION_QUBITS {
        return Err(Error::Capacity {
            what: "compartment width",
            size: n,
            limit: MAX_ENUMERATION_QUBITS,
        });
    }
    let mut out = CompartmentOutcome {
        survival: 0.0,
        marginals: vec![0.0; n],
    };
    let mut outcome = Vec::with_capacity(n);
    walk(intended, touched, verification, &mut outcome, 1.0, &mut out)?;
    Ok(out)
}

fn walk(
    intended: &[u8],
    touched: &[bool],
    verification: &[bool],
    outcome: &mut Vec<u8>,
    weight: f64,
    out: &mut CompartmentOutcome,
) -> Result<()> {
    let t = outcome.len();
    if t == intended.len() {
        let all_ok = (0..t).all(|i| !verification[i] || outcome[i] == intended[i]);
        if all_ok {
            out.survival += weight;
        }
        for i in 0..t {
            if outcome[i] == intended[i] {
                out.marginals[i] += weight;
            }
        }
        return Ok(());
    }
    let correct = if touched[t] {
        0.5
    } else {
        prob_correct_given_phase_error(cumulative_phase_error(t, outcome, intended)?)
    };
    for (bit, p) in [(intended[t], correct), (1 - intended[t], 1.0 - correct)] {
        if p > 0.0 {
            outcome.push(bit);
            walk(intended, touched, verification, outcome, weight * p, out)?;
            outcome.pop();
        }
    }
    Ok(())
}

/// Probability that at least one verification qubit reads wrong, with
/// compartments independent of one another.
pub fn exact_detection_probability(scheme: &VerificationScheme, intended: &[u8], eve: &EveTouchSet) -> Result<f64> {
    if intended.len() != scheme.total_qubits() {
        return Err(Error::Size(format!(
            "{} intended bits for {} qubits",
            intended.len(),
            scheme.total_qubits()
        )));
    }
    eve.validate(scheme.total_qubits())?;
    let mut survival = 1.0;
    for wires in scheme.compartments() {
        let b: Vec<u8> = wires.iter().map(|&w| intended[w]).collect();
        let touched: Vec<bool> = wires.iter().map(|&w| eve.contains(w)).collect();
        let verification: Vec<bool> = wires.iter().map(|&w| scheme.is_verification(w)).collect();
        survival *= compartment_outcome(&b, &touched, &verification)?.survival;
    }
    Ok(1.0 - survival)
}

/// Mean of [`exact_detection_probability`] over every key assignment.
pub fn exact_mean_detection(scheme: &VerificationScheme, eve: &EveTouchSet) -> Result<f64> {
    let k = scheme.num_key_qubits();
    if k > super::MAX_EXHAUSTIVE_KEY_BITS {
        return Err(Error::Capacity {
            what: "key length for exhaustive enumeration",
            size: k,
            limit: super::MAX_EXHAUSTIVE_KEY_BITS,
        });
    }
    let mut total = 0.0;
    for pattern in 0u64..(1u64 << k) {
        let b = super::intended_outcomes(scheme, &super::bits_of(pattern, k))?;
        total += exact_detection_probability(scheme, &b, eve)?;
    }
    Ok(total / (1u64 << k) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{correctness_profile, detection_probability, Method};
    use crate::schemes::{build_scheme, SchemeKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scheme(kind: SchemeKind, k: usize) -> VerificationScheme {
        build_scheme(kind, k, &mut ChaCha8Rng::seed_from_u64(0)).unwrap()
    }

    #[test]
    fn agrees_with_independent_model_on_pairs() {
        for k in 1..=5 {
            let s = scheme(SchemeKind::PairCompartment, k);
            let eve = EveTouchSet::key_wires(&s);
            let b = crate::analytics::intended_outcomes(&s, &vec![1; k]).unwrap();
            let exact = exact_detection_probability(&s, &b, &eve).unwrap();
            assert!((exact - detection_probability(&s, &b, &eve).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn single_touch_marginals_match_profile() {
        // With only the first position touched, marginals coincide with the
        // independent model for position 1 but not in general beyond.
        let b = [0u8, 0, 0];
        let touched = [true, false, false];
        let exact = compartment_outcome(&b, &touched, &[false, true, true]).unwrap();
        let indep = correctness_profile(&b, &touched, Method::Enumerate).unwrap();
        assert!((exact.marginals[1] - indep[1]).abs() < 1e-12);
        assert!((exact.marginals[1] - 0.75).abs() < 1e-12);
        assert!((exact.marginals[2] - indep[2]).abs() > 1e-3);
    }

    #[test]
    fn correlation_changes_flat_pair_detection() {
        // pair_flat, k = 2, key bits 00: joint outcome of positions 0 and 1 is
        // correlated, which the independent model does not capture.
        let s = scheme(SchemeKind::PairFlat, 2);
        let eve = EveTouchSet::key_wires(&s);
        let b = [0u8, 0, 0, 0];
        let exact = exact_detection_probability(&s, &b, &eve).unwrap();
        let model = detection_probability(&s, &b, &eve).unwrap();
        assert!((exact - model).abs() > 1e-3);
        assert!(exact_mean_detection(&s, &eve).unwrap() > 0.0);
    }

    #[test]
    fn no_eve_never_detects() {
        let s = scheme(SchemeKind::TripleFlat, 3);
        let b = crate::analytics::intended_outcomes(&s, &[1, 0, 1]).unwrap();
        assert_eq!(exact_detection_probability(&s, &b, &EveTouchSet::empty()).unwrap(), 0.0);
    }
}
