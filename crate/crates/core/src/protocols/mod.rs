//! Protocol runs: BB84, two-pass QFT key distribution, and three-pass
//! QFT message encryption.
//!
//! Every run returns a [`Transcript`]. The QFT protocols can execute on the
//! dense simulator or the product-state register; see [`Backend`].

pub mod bb84;
mod qft;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{BasisModel, EveStrategy};
use crate::error::{Error, Result};
use crate::schemes::{Message, Verdict, VerificationScheme};
use crate::statevector::MAX_QUBITS;

pub(crate) use qft::run_qft_with_channel;

/// Registers up to this size run densely under [`Backend::Auto`].
pub const AUTO_DENSE_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    Bb84,
    TwoPass,
    ThreePass,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [Protocol::Bb84, Protocol::TwoPass, Protocol::ThreePass];

    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::Bb84 => "bb84",
            Protocol::TwoPass => "two_pass",
            Protocol::ThreePass => "three_pass",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.as_str() == s || p.as_str().replace('_', "-") == s)
            .ok_or_else(|| Error::Value(format!("unknown protocol '{s}'")))
    }
}

/// Simulation backend for the QFT protocols.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Dense,
    /// Product-state register; exact here because every wire stays on the
    /// equator until decoding. Cannot take computational-basis measurements.
    Equatorial,
    /// Dense up to [`AUTO_DENSE_LIMIT`] qubits or when Eve needs Z
    /// measurements, equatorial otherwise.
    #[default]
    Auto,
}

impl Backend {
    pub fn resolve(self, num_qubits: usize, model: BasisModel) -> Backend {
        match self {
            Backend::Auto if num_qubits <= AUTO_DENSE_LIMIT || model == BasisModel::RandomZx => Backend::Dense,
            Backend::Auto => Backend::Equatorial,
            other => other,
        }
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Backend::Dense),
            "equatorial" => Ok(Backend::Equatorial),
            "auto" => Ok(Backend::Auto),
            _ => Err(Error::Value(format!("unknown backend '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolParams {
    pub scheme: VerificationScheme,
    pub mismatch_limit: usize,
    pub seed: u64,
    pub backend: Backend,
}

impl ProtocolParams {
    pub fn new(scheme: VerificationScheme) -> Self {
        Self {
            scheme,
            mismatch_limit: 0,
            seed: 0,
            backend: Backend::Auto,
        }
    }

    pub fn with_mismatch_limit(mut self, limit: usize) -> Self {
        self.mismatch_limit = limit;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub(crate) fn check_dense_capacity(&self) -> Result<()> {
        let p = self.scheme.total_qubits();
        if p > MAX_QUBITS {
            return Err(Error::Capacity {
                what: "statevector qubits",
                size: p,
                limit: MAX_QUBITS,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        if rng.gen_bool(0.5) {
            Basis::Z
        } else {
            Basis::X
        }
    }
}

/// One BB84 transmission attempt on one wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisRecord {
    pub wire: usize,
    pub send: Basis,
    pub measure: Basis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub protocol: Protocol,
    pub intended_message: Message,
    pub measured_message: Message,
    pub verdict: Verdict,
    /// `(wire, bit)` for every measurement Eve made.
    pub eve_observations: Vec<(usize, u8)>,
    /// Verification passed and Bob's key equals Alice's.
    pub key_agreed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bases: Option<Vec<BasisRecord>>,
}

pub fn random_key<R: Rng + ?Sized>(scheme: &VerificationScheme, rng: &mut R) -> Vec<u8> {
    (0..scheme.num_key_qubits()).map(|_| rng.gen_range(0..=1)).collect()
}

/// Two-pass QKD with a uniformly random key.
pub fn run_two_pass_qkd<R: Rng + ?Sized>(params: &ProtocolParams, eve: &EveStrategy, rng: &mut R) -> Result<Transcript> {
    qft::run(Protocol::TwoPass, params, eve, None, rng)
}

/// Two-pass QKD sending `key`.
pub fn run_two_pass_with_key<R: Rng + ?Sized>(
    params: &ProtocolParams,
    eve: &EveStrategy,
    key: &[u8],
    rng: &mut R,
) -> Result<Transcript> {
    qft::run(Protocol::TwoPass, params, eve, Some(key), rng)
}

/// Three-pass encryption of a uniformly random plaintext.
pub fn run_three_pass_encryption<R: Rng + ?Sized>(
    params: &ProtocolParams,
    eve: &EveStrategy,
    rng: &mut R,
) -> Result<Transcript> {
    qft::run(Protocol::ThreePass, params, eve, None, rng)
}

/// Three-pass encryption of `plaintext` (the non-verification bits).
pub fn run_three_pass_with_message<R: Rng + ?Sized>(
    params: &ProtocolParams,
    eve: &EveStrategy,
    plaintext: &[u8],
    rng: &mut R,
) -> Result<Transcript> {
    qft::run(Protocol::ThreePass, params, eve, Some(plaintext), rng)
}

pub fn run_bb84<R: Rng + ?Sized>(params: &ProtocolParams, eve: &EveStrategy, rng: &mut R) -> Result<Transcript> {
    bb84::run(params, eve, None, rng)
}

/// Runs `protocol`, with a fixed key if given.
pub fn run_protocol<R: Rng + ?Sized>(
    protocol: Protocol,
    params: &ProtocolParams,
    eve: &EveStrategy,
    key: Option<&[u8]>,
    rng: &mut R,
) -> Result<Transcript> {
    match protocol {
        Protocol::Bb84 => bb84::run(params, eve, key, rng),
        Protocol::TwoPass | Protocol::ThreePass => qft::run(protocol, params, eve, key, rng),
    }
}
