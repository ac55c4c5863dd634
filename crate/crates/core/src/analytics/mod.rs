//! Analytic interference-detection probabilities.
//!
//! For a target qubit at compartment-local position `t`, earlier positions
//! `j < t` whose outcome `a_j` differs from the intended `b_j` leave a
//! residual rotation `(b_j - a_j)·π/2^{t-j}` on the target. The target reads
//! correctly with probability `cos²(θ_e/2)` where `θ_e` is the summed
//! rotation. Averaging over earlier outcomes, each earlier position is taken
//! to be correct with its own marginal probability, independently of the
//! others; qubits Eve measured read correctly with probability one half.
//!
//! Two routes evaluate that same quantity:
//!
//! * [`Method::Enumerate`] sums over all `2^t` earlier outcome vectors
//!   (exponential; capped at [`MAX_ENUMERATION_QUBITS`] per compartment).
//! * [`Method::Factorized`] uses the fact that under independent outcomes the
//!   expected `e^{iθ_e}` is a product of per-position factors, which makes
//!   each target O(t).
//!
//! [`exact`] computes the fully correlated outcome distribution of the
//! circuit instead, for comparison against simulation.

pub mod exact;

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::schemes::VerificationScheme;

/// Largest compartment the enumeration route accepts.
pub const MAX_ENUMERATION_QUBITS: usize = 20;

/// Largest key length for exhaustive enumeration of intended outcomes.
pub const MAX_EXHAUSTIVE_KEY_BITS: usize = 16;

/// Probability that a qubit Eve measured reads its intended value.
pub const TOUCHED_CORRECT: f64 = 0.5;

/// Wires Eve measured.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveTouchSet {
    measured: BTreeSet<usize>,
}

impl EveTouchSet {
    pub fn new<I: IntoIterator<Item = usize>>(wires: I) -> Self {
        Self {
            measured: wires.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn all(p: usize) -> Self {
        Self::new(0..p)
    }

    /// Every non-verification wire of `scheme`.
    pub fn key_wires(scheme: &VerificationScheme) -> Self {
        Self::new(scheme.key_positions())
    }

    pub fn contains(&self, wire: usize) -> bool {
        self.measured.contains(&wire)
    }

    pub fn insert(&mut self, wire: usize) -> bool {
        self.measured.insert(wire)
    }

    pub fn len(&self) -> usize {
        self.measured.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measured.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.measured.iter().copied()
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        match self.measured.iter().next_back() {
            Some(&max) => check_index(max, p, "wires"),
            None => Ok(()),
        }
    }

    /// Touch flags for an ordered wire group, by local position.
    fn local_flags(&self, wires: &[usize]) -> Vec<bool> {
        wires.iter().map(|w| self.contains(*w)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Mean,
    Min,
    Single,
}

impl std::str::FromStr for Statistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(Statistic::Mean),
            "min" => Ok(Statistic::Min),
            "single" => Ok(Statistic::Single),
            other => Err(Error::Value(format!("unknown statistic '{other}'"))),
        }
    }
}

impl std::fmt::Display for Statistic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Statistic::Mean => "mean",
            Statistic::Min => "min",
            Statistic::Single => "single",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub probability: f64,
    pub statistic: Statistic,
    pub b_space_size: u64,
    pub sampled: bool,
    pub trials: u64,
    pub confidence_halfwidth: f64,
}

/// Probability a qubit reads correctly given a residual phase error: `|(1+e^{iθ})/2|²`.
pub fn prob_correct_given_phase_error(theta_e: f64) -> f64 {
    (theta_e / 2.0).cos().powi(2)
}

/// Rotation left on target `t` by an earlier position `j` that read `a_j` instead of `b_j`.
pub fn rotation_effect(t: usize, j: usize, a_j: u8, b_j: u8) -> Result<f64> {
    if j >= t {
        return Err(Error::Index {
            index: j,
            len: t,
            what: "earlier positions",
        });
    }
    Ok((b_j as f64 - a_j as f64) * PI / 2f64.powi((t - j) as i32))
}

/// Summed rotation on target `t` from every earlier position.
pub fn cumulative_phase_error(t: usize, measured: &[u8], intended: &[u8]) -> Result<f64> {
    if measured.len() < t || intended.len() < t {
        return Err(Error::Size(format!(
            "target {t} needs {t} earlier outcomes, got {} measured and {} intended",
            measured.len(),
            intended.len()
        )));
    }
    (0..t).map(|j| rotation_effect(t, j, measured[j], intended[j])).sum()
}

/// Probability that position `t` of a compartment reads its intended bit.
///
/// `intended` and `touched` are indexed by compartment-local position.
/// Uses the enumeration route.
pub fn prob_qubit_correct(t: usize, intended: &[u8], touched: &EveTouchSet) -> Result<f64> {
    check_index(t, intended.len(), "compartment positions")?;
    let flags: Vec<bool> = (0..=t).map(|l| touched.contains(l)).collect();
    let profile = correctness_profile(&intended[..=t], &flags, Method::Enumerate)?;
    Ok(profile[t])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Enumerate,
    Factorized,
}

/// Correctness probability for every position of one compartment, computed
/// front to back so each position reuses the earlier ones.
pub fn correctness_profile(intended: &[u8], touched: &[bool], method: Method) -> Result<Vec<f64>> {
    let n = intended.len();
    if touched.len() != n {
        return Err(Error::Size(format!("{} touch flags for {n} positions", touched.len())));
    }
    if method == Method::Enumerate && n > MAX_ENUMERATION_QUBITS {
        return Err(Error::Capacity {
            what: "compartment width",
            size: n,
            limit: MAX_ENUMERATION_QUBITS,
        });
    }
    let mut profile = Vec::with_capacity(n);
    for (t, &is_touched) in touched.iter().enumerate() {
        let pc = if is_touched {
            TOUCHED_CORRECT
        } else {
            match method {
                Method::Enumerate => enumerate_target(t, intended, &profile),
                Method::Factorized => factorized_target(t, intended, &profile),
            }
        };
        profile.push(pc);
    }
    Ok(profile)
}

fn enumerate_target(t: usize, intended: &[u8], earlier: &[f64]) -> f64 {
    let mut total = 0.0;
    let mut outcome = vec![0u8; t];
    for pattern in 0u64..(1u64 << t) {
        let mut weight = 1.0;
        let mut theta = 0.0;
        for j in 0..t {
            let a = ((pattern >> j) & 1) as u8;
            outcome[j] = a;
            weight *= if a == intended[j] { earlier[j] } else { 1.0 - earlier[j] };
        }
        if weight == 0.0 {
            continue;
        }
        for j in 0..t {
            theta += (intended[j] as f64 - outcome[j] as f64) * PI / 2f64.powi((t - j) as i32);
        }
        total += weight * prob_correct_given_phase_error(theta);
    }
    total
}

fn factorized_target(t: usize, intended: &[u8], earlier: &[f64]) -> f64 {
    // E[e^{iθ}] over independent earlier outcomes; a wrong outcome contributes
    // +π/2^{t-j} when the intended bit is 1 and -π/2^{t-j} when it is 0.
    let mut expectation = Complex64::new(1.0, 0.0);
    for j in 0..t {
        let sign = if intended[j] == 1 { 1.0 } else { -1.0 };
        let wrong = Complex64::from_polar(1.0, sign * PI / 2f64.powi((t - j) as i32));
        expectation *= earlier[j] + (1.0 - earlier[j]) * wrong;
    }
    (1.0 + expectation.re) / 2.0
}

fn check_intended(scheme: &VerificationScheme, intended: &[u8]) -> Result<()> {
    if intended.len() != scheme.total_qubits() {
        return Err(Error::Size(format!(
            "{} intended bits for {} qubits",
            intended.len(),
            scheme.total_qubits()
        )));
    }
    Ok(())
}

/// Intended outcome vector for a key assignment (key bits in key-position order).
pub fn intended_outcomes(scheme: &VerificationScheme, key_bits: &[u8]) -> Result<Vec<u8>> {
    crate::schemes::assemble_message(key_bits, scheme).map(|m| m.bits)
}

/// How to range over intended outcomes when aggregating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

/// Evaluates detection probabilities with a fixed computation route.
#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyticEngine {
    pub method: Method,
}

impl AnalyticEngine {
    pub fn new(method: Method) -> Self {
        Self { method }
    }

    /// Per-compartment probability that every verification qubit reads correctly.
    pub fn compartment_survival(
        &self,
        scheme: &VerificationScheme,
        intended: &[u8],
        eve: &EveTouchSet,
    ) -> Result<Vec<f64>> {
        check_intended(scheme, intended)?;
        eve.validate(scheme.total_qubits())?;
        scheme
            .compartments()
            .iter()
            .map(|wires| {
                let local_b: Vec<u8> = wires.iter().map(|&w| intended[w]).collect();
                let profile = correctness_profile(&local_b, &eve.local_flags(wires), self.method)?;
                Ok(wires
                    .iter()
                    .zip(&profile)
                    .filter(|(w, _)| scheme.is_verification(**w))
                    .map(|(_, pc)| pc)
                    .product())
            })
            .collect()
    }

    /// Probability that at least one verification qubit reads wrong.
    pub fn detection_probability(
        &self,
        scheme: &VerificationScheme,
        intended: &[u8],
        eve: &EveTouchSet,
    ) -> Result<f64> {
        let survival: f64 = self.compartment_survival(scheme, intended, eve)?.iter().product();
        Ok(1.0 - survival)
    }

    /// Detection probability for a key assignment.
    pub fn detection_for_key(&self, scheme: &VerificationScheme, key_bits: &[u8], eve: &EveTouchSet) -> Result<f64> {
        self.detection_probability(scheme, &intended_outcomes(scheme, key_bits)?, eve)
    }

    /// Mean or min of the detection probability over key assignments.
    pub fn aggregate_detection(
        &self,
        scheme: &VerificationScheme,
        eve: &EveTouchSet,
        statistic: Statistic,
        mode: BMode,
    ) -> Result<DetectionReport> {
        let k = scheme.num_key_qubits();
        let values: Vec<f64> = match mode {
            BMode::Exhaustive => {
                if k > MAX_EXHAUSTIVE_KEY_BITS {
                    return Err(Error::Capacity {
                        what: "key length for exhaustive enumeration",
                        size: k,
                        limit: MAX_EXHAUSTIVE_KEY_BITS,
                    });
                }
                (0u64..(1u64 << k))
                    .map(|pattern| self.detection_for_key(scheme, &bits_of(pattern, k), eve))
                    .collect::<Result<_>>()?
            }
            BMode::Sampled { samples, seed } => {
                if samples == 0 {
                    return Err(Error::Value("need at least one sample".into()));
                }
                let mut rng = crate::rng_for(seed, 0);
                (0..samples)
                    .map(|_| {
                        let key: Vec<u8> = (0..k).map(|_| rng.gen_range(0..=1)).collect();
                        self.detection_for_key(scheme, &key, eve)
                    })
                    .collect::<Result<_>>()?
            }
        };
        let sampled = matches!(mode, BMode::Sampled { .. });
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let (probability, halfwidth) = match statistic {
            Statistic::Mean => {
                let halfwidth = if sampled && values.len() > 1 {
                    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
                    1.96 * (var / n).sqrt()
                } else {
                    0.0
                };
                (mean, halfwidth)
            }
            Statistic::Min => (values.iter().copied().fold(f64::INFINITY, f64::min), 0.0),
            Statistic::Single => {
                if values.len() != 1 {
                    return Err(Error::Value(format!(
                        "single statistic over {} intended outcomes",
                        values.len()
                    )));
                }
                (values[0], 0.0)
            }
        };
        Ok(DetectionReport {
            probability: probability.clamp(0.0, 1.0),
            statistic,
            b_space_size: values.len() as u64,
            sampled,
            trials: if sampled { values.len() as u64 } else { 0 },
            confidence_halfwidth: halfwidth,
        })
    }

    /// Key assignment attaining the minimum detection probability (exhaustive).
    pub fn argmin_key(&self, scheme: &VerificationScheme, eve: &EveTouchSet) -> Result<(Vec<u8>, f64)> {
        let k = scheme.num_key_qubits();
        if k > MAX_EXHAUSTIVE_KEY_BITS {
            return Err(Error::Capacity {
                what: "key length for exhaustive enumeration",
                size: k,
                limit: MAX_EXHAUSTIVE_KEY_BITS,
            });
        }
        let mut best = (Vec::new(), f64::INFINITY);
        for pattern in 0u64..(1u64 << k) {
            let key = bits_of(pattern, k);
            let p = self.detection_for_key(scheme, &key, eve)?;
            if p < best.1 {
                best = (key, p);
            }
        }
        Ok(best)
    }
}

/// `detection_probability` with the default enumeration route.
pub fn detection_probability(scheme: &VerificationScheme, intended: &[u8], eve: &EveTouchSet) -> Result<f64> {
    AnalyticEngine::default().detection_probability(scheme, intended, eve)
}

/// `aggregate_detection` with the default enumeration route.
pub fn aggregate_detection(
    scheme: &VerificationScheme,
    eve: &EveTouchSet,
    statistic: Statistic,
    mode: BMode,
) -> Result<DetectionReport> {
    AnalyticEngine::default().aggregate_detection(scheme, eve, statistic, mode)
}

/// BB84 baseline: each measured verification qubit is caught with probability 1/4.
pub fn bb84_detection_probability(verification: &[usize], eve: &EveTouchSet) -> f64 {
    let caught = verification.iter().filter(|&&v| eve.contains(v)).count();
    1.0 - 0.75f64.powi(caught as i32)
}

pub(crate) fn bits_of(pattern: u64, width: usize) -> Vec<u8> {
    (0..width).map(|i| ((pattern >> i) & 1) as u8).collect()
}
