//! Verification schemes: where the verification qubits sit, what they should
//! read, and how the register is split into independently QFT-encoded
//! compartments.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One verification qubit and the bit it is intended to read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationBit {
    pub index: usize,
    pub bit: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationScheme {
    total_qubits: usize,
    verification: Vec<VerificationBit>,
    compartments: Vec<Vec<usize>>,
    public: bool,
}

/// Wire format for scheme files; converted through validation on load.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeFile {
    total_qubits: usize,
    verification: Vec<VerificationBit>,
    compartments: Vec<Vec<usize>>,
    public: bool,
}

impl<'de> Deserialize<'de> for VerificationScheme {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = SchemeFile::deserialize(deserializer)?;
        VerificationScheme::new(raw.total_qubits, raw.verification, raw.compartments, raw.public)
            .map_err(serde::de::Error::custom)
    }
}

impl VerificationScheme {
    pub fn new(
        total_qubits: usize,
        mut verification: Vec<VerificationBit>,
        compartments: Vec<Vec<usize>>,
        public: bool,
    ) -> Result<Self> {
        if total_qubits == 0 {
            return Err(Error::Scheme("scheme needs at least one qubit".into()));
        }
        verification.sort_by_key(|v| v.index);
        for pair in verification.windows(2) {
            if pair[0].index == pair[1].index {
                return Err(Error::Scheme(format!("verification index {} repeated", pair[0].index)));
            }
        }
        for v in &verification {
            if v.index >= total_qubits {
                return Err(Error::Scheme(format!(
                    "verification index {} outside {total_qubits} qubits",
                    v.index
                )));
            }
            if v.bit > 1 {
                return Err(Error::Scheme(format!("intended bit {} is not 0 or 1", v.bit)));
            }
        }
        let mut covered = vec![false; total_qubits];
        for group in &compartments {
            if group.is_empty() {
                return Err(Error::Scheme("empty compartment".into()));
            }
            for &w in group {
                if w >= total_qubits {
                    return Err(Error::Scheme(format!("compartment wire {w} outside {total_qubits} qubits")));
                }
                if std::mem::replace(&mut covered[w], true) {
                    return Err(Error::Scheme(format!("wire {w} in more than one compartment")));
                }
            }
        }
        if let Some(missing) = covered.iter().position(|c| !c) {
            return Err(Error::Scheme(format!("wire {missing} is in no compartment")));
        }
        Ok(Self {
            total_qubits,
            verification,
            compartments,
            public,
        })
    }

    /// Single-compartment scheme over `0..total_qubits`.
    pub fn flat(total_qubits: usize, verification: Vec<VerificationBit>, public: bool) -> Result<Self> {
        Self::new(total_qubits, verification, vec![(0..total_qubits).collect()], public)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Scheme(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scheme serializes")
    }

    pub fn total_qubits(&self) -> usize {
        self.total_qubits
    }

    /// Verification bits sorted by index.
    pub fn verification(&self) -> &[VerificationBit] {
        &self.verification
    }

    pub fn verification_indices(&self) -> Vec<usize> {
        self.verification.iter().map(|v| v.index).collect()
    }

    pub fn compartments(&self) -> &[Vec<usize>] {
        &self.compartments
    }

    pub fn is_public(&self) -> bool {
        self.public
    }

    pub fn is_verification(&self, wire: usize) -> bool {
        self.intended_bit(wire).is_some()
    }

    pub fn intended_bit(&self, wire: usize) -> Option<u8> {
        self.verification
            .binary_search_by_key(&wire, |v| v.index)
            .ok()
            .map(|i| self.verification[i].bit)
    }

    /// Wires not used for verification, ascending.
    pub fn key_positions(&self) -> Vec<usize> {
        (0..self.total_qubits).filter(|&w| !self.is_verification(w)).collect()
    }

    pub fn num_key_qubits(&self) -> usize {
        self.total_qubits - self.verification.len()
    }

    /// Largest compartment width.
    pub fn max_compartment(&self) -> usize {
        self.compartments.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// The built-in layouts, in the order (a)–(f) of the reference figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Bb84Random,
    QftRandom,
    PairCompartment,
    PairFlat,
    TripleCompartment,
    TripleFlat,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 6] = [
        SchemeKind::Bb84Random,
        SchemeKind::QftRandom,
        SchemeKind::PairCompartment,
        SchemeKind::PairFlat,
        SchemeKind::TripleCompartment,
        SchemeKind::TripleFlat,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::Bb84Random => "bb84_random",
            SchemeKind::QftRandom => "qft_random",
            SchemeKind::PairCompartment => "pair_compartment",
            SchemeKind::PairFlat => "pair_flat",
            SchemeKind::TripleCompartment => "triple_compartment",
            SchemeKind::TripleFlat => "triple_flat",
        }
    }

    /// Verification qubits per key qubit for the interleaved kinds.
    fn interleave(self) -> Option<usize> {
        match self {
            SchemeKind::PairCompartment | SchemeKind::PairFlat => Some(1),
            SchemeKind::TripleCompartment | SchemeKind::TripleFlat => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Scheme(format!("unknown scheme kind '{s}'")))
    }
}

/// Builds one of the built-in layouts for `num_key_qubits` key qubits.
///
/// Interleaved kinds put `1` (pair) or `2` (triple) zero-intended
/// verification qubits after each key qubit. Random kinds use `p = 2k` with
/// `k` verification qubits at uniformly drawn positions and uniformly drawn
/// intended bits; the rng is untouched for the deterministic kinds.
pub fn build_scheme<R: Rng + ?Sized>(kind: SchemeKind, num_key_qubits: usize, rng: &mut R) -> Result<VerificationScheme> {
    if num_key_qubits == 0 {
        return Err(Error::Scheme("need at least one key qubit".into()));
    }
    if let Some(per_key) = kind.interleave() {
        let group = per_key + 1;
        let p = group * num_key_qubits;
        let verification = (0..p)
            .filter(|w| w % group != 0)
            .map(|index| VerificationBit { index, bit: 0 })
            .collect();
        let compartments = match kind {
            SchemeKind::PairCompartment | SchemeKind::TripleCompartment => {
                (0..num_key_qubits).map(|g| (g * group..(g + 1) * group).collect()).collect()
            }
            _ => vec![(0..p).collect()],
        };
        return VerificationScheme::new(p, verification, compartments, true);
    }
    let p = 2 * num_key_qubits;
    let verification = sample(rng, p, num_key_qubits)
        .into_iter()
        .map(|index| VerificationBit {
            index,
            bit: rng.gen_range(0..=1),
        })
        .collect();
    VerificationScheme::flat(p, verification, false)
}

/// A full register's worth of bits, with the key subsequence split out.
///
/// `value` has bit `t` equal to `bits[t]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub p: usize,
    pub bits: Vec<u8>,
    pub key_bits: Vec<u8>,
    pub value: u64,
}

impl Message {
    /// Wraps raw per-wire bits, reading the key subsequence from `scheme`.
    pub fn from_bits(bits: Vec<u8>, scheme: &VerificationScheme) -> Result<Self> {
        if bits.len() != scheme.total_qubits() {
            return Err(Error::Size(format!(
                "{} bits for a {}-qubit scheme",
                bits.len(),
                scheme.total_qubits()
            )));
        }
        if bits.len() > 64 {
            return Err(Error::Size(format!("{} bits do not fit a 64-bit value", bits.len())));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Value(format!("bit value {b}")));
        }
        let key_bits = scheme.key_positions().iter().map(|&w| bits[w]).collect();
        let value = bits.iter().enumerate().map(|(t, &b)| (b as u64) << t).sum();
        Ok(Self {
            p: bits.len(),
            bits,
            key_bits,
            value,
        })
    }

    /// Integer value of the bits on an ordered wire group (bit `l` from `wires[l]`).
    pub fn value_on(&self, wires: &[usize]) -> u64 {
        wires.iter().enumerate().map(|(l, &w)| (self.bits[w] as u64) << l).sum()
    }
}

/// Interleaves key bits with the scheme's intended verification bits.
pub fn assemble_message(key_bits: &[u8], scheme: &VerificationScheme) -> Result<Message> {
    if key_bits.len() != scheme.num_key_qubits() {
        return Err(Error::Size(format!(
            "{} key bits for {} key positions",
            key_bits.len(),
            scheme.num_key_qubits()
        )));
    }
    let mut key = key_bits.iter();
    let bits = (0..scheme.total_qubits())
        .map(|w| match scheme.intended_bit(w) {
            Some(b) => b,
            None => *key.next().expect("length checked"),
        })
        .collect();
    Message::from_bits(bits, scheme)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    pub key: Vec<u8>,
    pub verification_observed: Vec<u8>,
    pub verdict: Verdict,
    pub mismatches: usize,
}

/// Splits a measured message into key and verification bits and checks the
/// verification bits against the scheme. Passes iff the Hamming distance is
/// at most `mismatch_limit`.
pub fn extract_key(measured: &Message, scheme: &VerificationScheme, mismatch_limit: usize) -> Result<Extraction> {
    if measured.p != scheme.total_qubits() || measured.bits.len() != measured.p {
        return Err(Error::Size(format!(
            "measured message of {} qubits for a {}-qubit scheme",
            measured.p,
            scheme.total_qubits()
        )));
    }
    let verification_observed: Vec<u8> = scheme.verification().iter().map(|v| measured.bits[v.index]).collect();
    let mismatches = scheme
        .verification()
        .iter()
        .zip(&verification_observed)
        .filter(|(v, &obs)| v.bit != obs)
        .count();
    let key = scheme.key_positions().iter().map(|&w| measured.bits[w]).collect();
    Ok(Extraction {
        key,
        verification_observed,
        verdict: if mismatches <= mismatch_limit { Verdict::Pass } else { Verdict::Fail },
        mismatches,
    })
}
