//! Empirical detection rates and cross-validation against the analytic engine.
//!
//! Trial `i` draws from stream `i` of the seeded generator, so results do not
//! depend on the number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::{many_copies_attack, EveStrategy};
use crate::analytics::{exact, AnalyticEngine, BMode, DetectionReport, EveTouchSet, Statistic, MAX_EXHAUSTIVE_KEY_BITS};
use crate::error::{Error, Result};
use crate::protocols::{run_protocol, Protocol, ProtocolParams, Transcript};
use crate::schemes::{Verdict, VerificationScheme};
use crate::{rng_for, SimRng};

/// Absolute slack added to the 3σ agreement band.
pub const AGREEMENT_SLACK: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub standard_error: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Estimate {
    pub fn from_count(successes: u64, trials: u64, seed: u64) -> Self {
        let mean = successes as f64 / trials as f64;
        Self {
            mean,
            standard_error: (mean * (1.0 - mean) / trials as f64).sqrt(),
            trials,
            seed,
        }
    }

    /// `|value - mean| <= 3·se + slack`.
    pub fn agrees_with(&self, value: f64) -> bool {
        (value - self.mean).abs() <= 3.0 * self.standard_error + AGREEMENT_SLACK
    }
}

/// Which key Alice sends in each trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BPolicy {
    Fixed(Vec<u8>),
    Random,
}

impl BPolicy {
    fn key(&self) -> Option<&[u8]> {
        match self {
            BPolicy::Fixed(k) => Some(k),
            BPolicy::Random => None,
        }
    }
}

/// Counts trials for which `trial` returns true, in parallel.
pub fn estimate_with<F>(trials: u64, seed: u64, trial: F) -> Result<Estimate>
where
    F: Fn(&mut SimRng) -> Result<bool> + Sync,
{
    if trials == 0 {
        return Err(Error::Value("need at least one trial".into()));
    }
    let hits = (0..trials)
        .into_par_iter()
        .map(|i| trial(&mut rng_for(seed, i)).map(u64::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(Estimate::from_count(hits, trials, seed))
}

/// Fraction of protocol runs whose verification fails.
pub fn estimate_detection(
    protocol: Protocol,
    params: &ProtocolParams,
    eve: &EveStrategy,
    b_policy: &BPolicy,
    trials: u64,
    seed: u64,
) -> Result<Estimate> {
    estimate_with(trials, seed, |rng| {
        let t = run_protocol(protocol, params, eve, b_policy.key(), rng)?;
        Ok(t.verdict == Verdict::Fail)
    })
}

/// The transcripts behind [`estimate_detection`], in trial order.
pub fn simulate_transcripts(
    protocol: Protocol,
    params: &ProtocolParams,
    eve: &EveStrategy,
    b_policy: &BPolicy,
    trials: u64,
    seed: u64,
) -> Result<Vec<Transcript>> {
    (0..trials)
        .into_par_iter()
        .map(|i| run_protocol(protocol, params, eve, b_policy.key(), &mut rng_for(seed, i)))
        .collect()
}

/// Aggregate of repeated many-copies attacks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManyCopiesSummary {
    /// Fraction of attacks in which some copy failed verification.
    pub detected: Estimate,
    /// Attacks where Eve reached a conclusion about the target bit.
    pub inferred: u64,
    /// Of those, attacks where the conclusion was right.
    pub inferred_correct: u64,
}

pub fn many_copies_summary(
    protocol: Protocol,
    params: &ProtocolParams,
    target_wire: usize,
    copies: usize,
    trials: u64,
    seed: u64,
) -> Result<ManyCopiesSummary> {
    if trials == 0 {
        return Err(Error::Value("need at least one trial".into()));
    }
    let (detected, inferred, correct) = (0..trials)
        .into_par_iter()
        .map(|i| {
            let out = many_copies_attack(protocol, params, target_wire, copies, &mut rng_for(seed, i))?;
            Ok((
                u64::from(out.detected),
                u64::from(out.inferred_bit.is_some()),
                u64::from(out.inferred_bit == Some(out.actual_bit)),
            ))
        })
        .try_reduce(|| (0, 0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2)))?;
    Ok(ManyCopiesSummary {
        detected: Estimate::from_count(detected, trials, seed),
        inferred,
        inferred_correct: correct,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub analytic: DetectionReport,
    pub empirical: Estimate,
    /// Same statistic under the exact joint outcome model, when within caps.
    pub exact: Option<f64>,
    /// Key used for the `min` statistic.
    pub key: Option<Vec<u8>>,
    pub agree: bool,
}

/// Compares the analytic engine with two-pass simulation for one scheme and
/// touch set. `mean` draws a fresh key per trial; `min` fixes the key that
/// minimizes the analytic detection probability.
pub fn crossvalidate(
    scheme: &VerificationScheme,
    eve: &EveTouchSet,
    statistic: Statistic,
    trials: u64,
    seed: u64,
) -> Result<CrossValidation> {
    crossvalidate_with(&AnalyticEngine::default(), scheme, eve, statistic, trials, seed)
}

pub fn crossvalidate_with(
    engine: &AnalyticEngine,
    scheme: &VerificationScheme,
    eve: &EveTouchSet,
    statistic: Statistic,
    trials: u64,
    seed: u64,
) -> Result<CrossValidation> {
    eve.validate(scheme.total_qubits())?;
    let k = scheme.num_key_qubits();
    if k > MAX_EXHAUSTIVE_KEY_BITS {
        return Err(Error::Capacity {
            what: "key length for exhaustive enumeration",
            size: k,
            limit: MAX_EXHAUSTIVE_KEY_BITS,
        });
    }
    let params = ProtocolParams::new(scheme.clone()).with_seed(seed);
    let strategy = EveStrategy::subset(eve.iter());
    let (analytic, policy, exact) = match statistic {
        Statistic::Mean => (
            engine.aggregate_detection(scheme, eve, Statistic::Mean, BMode::Exhaustive)?,
            BPolicy::Random,
            exact::exact_mean_detection(scheme, eve).ok(),
        ),
        Statistic::Min => {
            let report = engine.aggregate_detection(scheme, eve, Statistic::Min, BMode::Exhaustive)?;
            let (key, _) = engine.argmin_key(scheme, eve)?;
            let b = crate::analytics::intended_outcomes(scheme, &key)?;
            let exact = exact::exact_detection_probability(scheme, &b, eve).ok();
            (report, BPolicy::Fixed(key), exact)
        }
        Statistic::Single => {
            return Err(Error::Value("crossvalidate takes the mean or min statistic".into()));
        }
    };
    let empirical = estimate_detection(Protocol::TwoPass, &params, &strategy, &policy, trials, seed)?;
    Ok(CrossValidation {
        agree: empirical.agrees_with(analytic.probability),
        key: match policy {
            BPolicy::Fixed(k) => Some(k),
            BPolicy::Random => None,
        },
        analytic,
        empirical,
        exact,
    })
}
