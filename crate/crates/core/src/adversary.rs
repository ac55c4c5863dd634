//! Eavesdropper strategies.
//!
//! An [`EveStrategy`] is a descriptor; binding it to a scheme and protocol
//! yields an [`Eve`], which acts as the quantum channel between the parties.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analytics::EveTouchSet;
use crate::error::{check_index, Error, Result};
use crate::protocols::{self, bb84, Basis, Protocol, ProtocolParams, Transcript};
use crate::schemes::{assemble_message, Verdict, VerificationScheme};
use crate::statevector::Register;

/// A quantum channel pass. The honest channel leaves the register alone.
pub trait Channel {
    fn transmit<Q: Register, R: Rng + ?Sized>(&mut self, pass: u8, register: &mut Q, rng: &mut R) -> Result<()>;

    /// `(wire, bit)` for every measurement made on this channel.
    fn observations(&self) -> Vec<(usize, u8)> {
        Vec::new()
    }
}

pub struct HonestChannel;

impl Channel for HonestChannel {
    fn transmit<Q: Register, R: Rng + ?Sized>(&mut self, _pass: u8, _register: &mut Q, _rng: &mut R) -> Result<()> {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EveKind {
    None,
    Full,
    Subset(Vec<usize>),
    /// Measures every key wire and leaves verification wires alone.
    SchemeAware,
    ManyCopies { copies: usize, indices: Vec<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisModel {
    /// Undo a uniformly random phase, measure in the X basis, and resend
    /// `H|bit>`. The resent phase is independent of the original.
    XBasisWithRandomUnscramble,
    /// As above, but the guessed phase is re-applied before resending, so the
    /// resent state stays correlated with the original.
    XBasisRestoredFrame,
    /// Z or X with equal probability.
    RandomZx,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EveStrategy {
    pub kind: EveKind,
    /// `None` picks the protocol's default model.
    pub basis_model: Option<BasisModel>,
    /// `None` picks the protocol's default pass.
    pub passes: Option<BTreeSet<u8>>,
}

impl EveStrategy {
    pub fn new(kind: EveKind) -> Self {
        Self {
            kind,
            basis_model: None,
            passes: None,
        }
    }

    pub fn none() -> Self {
        Self::new(EveKind::None)
    }

    pub fn full() -> Self {
        Self::new(EveKind::Full)
    }

    pub fn subset<I: IntoIterator<Item = usize>>(wires: I) -> Self {
        Self::new(EveKind::Subset(wires.into_iter().collect()))
    }

    pub fn scheme_aware() -> Self {
        Self::new(EveKind::SchemeAware)
    }

    pub fn with_passes<I: IntoIterator<Item = u8>>(mut self, passes: I) -> Self {
        self.passes = Some(passes.into_iter().collect());
        self
    }

    pub fn with_basis_model(mut self, model: BasisModel) -> Self {
        self.basis_model = Some(model);
        self
    }

    /// Wires this strategy measures under `scheme`.
    pub fn targets(&self, scheme: &VerificationScheme) -> Result<Vec<usize>> {
        let p = scheme.total_qubits();
        let wires: Vec<usize> = match &self.kind {
            EveKind::None => Vec::new(),
            EveKind::Full => (0..p).collect(),
            EveKind::Subset(indices) | EveKind::ManyCopies { indices, .. } => {
                let set: BTreeSet<usize> = indices.iter().copied().collect();
                set.into_iter().collect()
            }
            EveKind::SchemeAware => scheme.key_positions(),
        };
        for &w in &wires {
            check_index(w, p, "wires")?;
        }
        if let EveKind::ManyCopies { copies, .. } = self.kind {
            if copies == 0 {
                return Err(Error::Value("many-copies strategy needs at least one copy".into()));
            }
        }
        Ok(wires)
    }

    pub fn touch_set(&self, scheme: &VerificationScheme) -> Result<EveTouchSet> {
        Ok(EveTouchSet::new(self.targets(scheme)?))
    }

    pub fn effective_basis_model(&self, protocol: Protocol) -> BasisModel {
        self.basis_model.unwrap_or(match protocol {
            Protocol::Bb84 => BasisModel::RandomZx,
            Protocol::TwoPass | Protocol::ThreePass => BasisModel::XBasisWithRandomUnscramble,
        })
    }

    /// Default taps: BB84's single pass, and pass 2 of the QFT protocols.
    pub fn effective_passes(&self, protocol: Protocol) -> BTreeSet<u8> {
        self.passes.clone().unwrap_or_else(|| match protocol {
            Protocol::Bb84 => BTreeSet::from([1]),
            Protocol::TwoPass | Protocol::ThreePass => BTreeSet::from([2]),
        })
    }

    /// Binds the strategy to a scheme and protocol.
    pub fn bind(&self, scheme: &VerificationScheme, protocol: Protocol) -> Result<Eve> {
        let passes = self.effective_passes(protocol);
        let max_pass = match protocol {
            Protocol::Bb84 => 1,
            Protocol::TwoPass => 2,
            Protocol::ThreePass => 3,
        };
        if let Some(&bad) = passes.iter().find(|&&p| p == 0 || p > max_pass) {
            return Err(Error::Value(format!("{protocol} has no pass {bad}")));
        }
        Ok(Eve {
            targets: self.targets(scheme)?,
            basis_model: self.effective_basis_model(protocol),
            passes,
            observations: Vec::new(),
        })
    }
}

/// JSON form: `{"kind": "...", "indices": [...], "copies": n, "passes": [...]}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDescriptor {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copies: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passes: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_model: Option<BasisModel>,
}

impl TryFrom<StrategyDescriptor> for EveStrategy {
    type Error = Error;

    fn try_from(d: StrategyDescriptor) -> Result<Self> {
        let kind = match d.kind.as_str() {
            "none" => EveKind::None,
            "full" => EveKind::Full,
            "scheme_aware" | "keys" => EveKind::SchemeAware,
            "subset" => EveKind::Subset(
                d.indices
                    .ok_or_else(|| Error::Value("subset strategy needs indices".into()))?,
            ),
            "many_copies" => EveKind::ManyCopies {
                copies: d.copies.ok_or_else(|| Error::Value("many_copies needs copies".into()))?,
                indices: d.indices.unwrap_or_default(),
            },
            other => return Err(Error::Value(format!("unknown eve kind '{other}'"))),
        };
        Ok(EveStrategy {
            kind,
            basis_model: d.basis_model,
            passes: d.passes.map(|p| p.into_iter().collect()),
        })
    }
}

impl From<&EveStrategy> for StrategyDescriptor {
    fn from(s: &EveStrategy) -> Self {
        let (kind, indices, copies) = match &s.kind {
            EveKind::None => ("none", None, None),
            EveKind::Full => ("full", None, None),
            EveKind::Subset(i) => ("subset", Some(i.clone()), None),
            EveKind::SchemeAware => ("scheme_aware", None, None),
            EveKind::ManyCopies { copies, indices } => ("many_copies", Some(indices.clone()), Some(*copies)),
        };
        StrategyDescriptor {
            kind: kind.into(),
            indices,
            copies,
            passes: s.passes.as_ref().map(|p| p.iter().copied().collect()),
            basis_model: s.basis_model,
        }
    }
}

/// A bound eavesdropper: fixed target wires, basis model and tapped passes.
#[derive(Debug, Clone)]
pub struct Eve {
    targets: Vec<usize>,
    basis_model: BasisModel,
    passes: BTreeSet<u8>,
    observations: Vec<(usize, u8)>,
}

impl Eve {
    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn taps(&self, pass: u8) -> bool {
        !self.targets.is_empty() && self.passes.contains(&pass)
    }

    /// Every (wire, bit) Eve has observed so far.
    pub fn observations(&self) -> &[(usize, u8)] {
        &self.observations
    }

    pub fn into_observations(self) -> Vec<(usize, u8)> {
        self.observations
    }

    /// Measure-and-resend on every target wire if `pass` is tapped.
    /// Returns the observations from this pass.
    pub fn intercept<Q: Register, R: Rng + ?Sized>(
        &mut self,
        register: &mut Q,
        pass: u8,
        rng: &mut R,
    ) -> Result<Vec<(usize, u8)>> {
        if !self.taps(pass) {
            return Ok(Vec::new());
        }
        let mut seen = Vec::with_capacity(self.targets.len());
        for &wire in &self.targets {
            let bit = measure_wire(self.basis_model, register, wire, rng)?;
            seen.push((wire, bit));
        }
        self.observations.extend_from_slice(&seen);
        Ok(seen)
    }

    /// Intercepts a register that carries only logical wire `wire`, held at
    /// `register_wire`. `None` if the wire or pass is not targeted.
    pub fn intercept_wire<Q: Register, R: Rng + ?Sized>(
        &mut self,
        register: &mut Q,
        register_wire: usize,
        wire: usize,
        pass: u8,
        rng: &mut R,
    ) -> Result<Option<u8>> {
        if !self.taps(pass) || self.targets.binary_search(&wire).is_err() {
            return Ok(None);
        }
        let bit = measure_wire(self.basis_model, register, register_wire, rng)?;
        self.observations.push((wire, bit));
        Ok(Some(bit))
    }
}

impl Channel for Eve {
    fn transmit<Q: Register, R: Rng + ?Sized>(&mut self, pass: u8, register: &mut Q, rng: &mut R) -> Result<()> {
        self.intercept(register, pass, rng).map(|_| ())
    }

    fn observations(&self) -> Vec<(usize, u8)> {
        self.observations.clone()
    }
}

/// One intercept-resend of a single wire under `model`.
pub fn measure_wire<Q: Register, R: Rng + ?Sized>(
    model: BasisModel,
    register: &mut Q,
    wire: usize,
    rng: &mut R,
) -> Result<u8> {
    match model {
        BasisModel::XBasisWithRandomUnscramble => {
            let guess = rng.gen_range(0.0..TAU);
            let bit = register.measure_equatorial(wire, guess, rng)?;
            register.apply_phase(wire, -guess)?;
            Ok(bit)
        }
        BasisModel::XBasisRestoredFrame => {
            let guess = rng.gen_range(0.0..TAU);
            register.measure_equatorial(wire, guess, rng)
        }
        BasisModel::RandomZx => {
            if rng.gen_bool(0.5) {
                register.measure_computational(wire, rng)
            } else {
                register.measure_equatorial(wire, 0.0, rng)
            }
        }
    }
}

/// Result of a many-copies attack.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyCopiesOutcome {
    /// Eve's conclusion about the target bit, `None` if she cannot decide.
    pub inferred_bit: Option<u8>,
    /// The bit Alice actually sent on the target wire.
    pub actual_bit: u8,
    /// Any copy failed verification.
    pub detected: bool,
    /// Number of copies that failed verification.
    pub failed_copies: usize,
    pub transcripts: Vec<Transcript>,
}

/// Basis Eve uses on copy `index` of `copies`: the first half in Z, the rest
/// in X (for four copies: Z, Z, X, X).
pub fn copy_basis(index: usize, copies: usize) -> Basis {
    if index < copies.div_ceil(2) {
        Basis::Z
    } else {
        Basis::X
    }
}

/// Eve's inference: the basis whose outcomes never disagree is taken to be
/// Alice's, and its common value the bit. Undecided when both or neither
/// basis is consistent.
pub fn infer_from_copies(observed: &[(Basis, u8)]) -> Option<u8> {
    let consistent = |basis: Basis| {
        let mut vals = observed.iter().filter(|(b, _)| *b == basis).map(|(_, v)| *v);
        let first = vals.next()?;
        vals.all(|v| v == first).then_some(first)
    };
    match (consistent(Basis::Z), consistent(Basis::X)) {
        (Some(v), None) | (None, Some(v)) => Some(v),
        _ => None,
    }
}

/// Many-copies attack: the same message is sent `copies` times and Eve
/// measures only `target_wire`, once per copy.
///
/// For BB84 Alice reuses her bits and bases across copies and Eve alternates
/// Z and X measurements. For the QFT protocols Alice reuses her key while the
/// scrambling phases are fresh per copy, so no fixed basis helps Eve: she
/// draws a random unscramble per copy, offset by 0 or π/2 in the same pattern.
pub fn many_copies_attack<R: Rng + ?Sized>(
    protocol: Protocol,
    params: &ProtocolParams,
    target_wire: usize,
    copies: usize,
    rng: &mut R,
) -> Result<ManyCopiesOutcome> {
    let scheme = &params.scheme;
    check_index(target_wire, scheme.total_qubits(), "wires")?;
    if copies < 2 {
        return Err(Error::Value("many-copies attack needs at least two copies".into()));
    }
    let key: Vec<u8> = (0..scheme.num_key_qubits()).map(|_| rng.gen_range(0..=1)).collect();
    let message = assemble_message(&key, scheme)?;
    let actual_bit = message.bits[target_wire];

    let mut observed = Vec::with_capacity(copies);
    let mut transcripts = Vec::with_capacity(copies);
    match protocol {
        Protocol::Bb84 => {
            let alice_bases: Vec<Basis> = (0..scheme.total_qubits()).map(|_| Basis::random(rng)).collect();
            for i in 0..copies {
                let basis = copy_basis(i, copies);
                let (transcript, eve_bit) =
                    bb84::transmit_copy(params, &message, &alice_bases, Some((target_wire, basis)), rng)?;
                observed.push((basis, eve_bit.expect("target wire measured")));
                transcripts.push(transcript);
            }
        }
        Protocol::TwoPass | Protocol::ThreePass => {
            for i in 0..copies {
                let basis = copy_basis(i, copies);
                let offset = match basis {
                    Basis::Z => 0.0,
                    Basis::X => FRAC_PI_2,
                };
                let phase = (offset + rng.gen_range(0.0..TAU)) % TAU;
                let mut eve = FixedBasisTap {
                    wire: target_wire,
                    phase,
                    observed: None,
                };
                let transcript = protocols::run_qft_with_channel(protocol, params, Some(&key), &mut eve, rng)?;
                observed.push((basis, eve.observed.expect("target wire measured")));
                transcripts.push(transcript);
            }
        }
    }
    let failed_copies = transcripts.iter().filter(|t| t.verdict == Verdict::Fail).count();
    Ok(ManyCopiesOutcome {
        inferred_bit: infer_from_copies(&observed),
        actual_bit,
        detected: failed_copies > 0,
        failed_copies,
        transcripts,
    })
}

/// Measures one wire on pass 2 in a fixed equatorial basis and resends `H|bit>`.
struct FixedBasisTap {
    wire: usize,
    phase: f64,
    observed: Option<u8>,
}

impl Channel for FixedBasisTap {
    fn transmit<Q: Register, R: Rng + ?Sized>(&mut self, pass: u8, register: &mut Q, rng: &mut R) -> Result<()> {
        if pass == 2 {
            self.observed = Some(register.measure_equatorial(self.wire, self.phase, rng)?);
            register.apply_phase(self.wire, -self.phase)?;
        }
        Ok(())
    }

    fn observations(&self) -> Vec<(usize, u8)> {
        self.observed.map(|b| vec![(self.wire, b)]).unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::Backend;
    use crate::schemes::{build_scheme, SchemeKind, VerificationBit};
    use crate::statevector::{EquatorialRegister, PhaseVector, Sign, Statevector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scheme(kind: SchemeKind, k: usize) -> VerificationScheme {
        build_scheme(kind, k, &mut ChaCha8Rng::seed_from_u64(0)).unwrap()
    }

    #[test]
    fn none_strategy_leaves_state_exactly() {
        let s = scheme(SchemeKind::PairFlat, 2);
        let mut eve = EveStrategy::none().bind(&s, Protocol::TwoPass).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut st = Statevector::plus(4).unwrap();
        st.apply_scramble(&PhaseVector::random(4, &mut rng), Sign::Plus).unwrap();
        let before = st.clone();
        assert!(eve.intercept(&mut st, 2, &mut rng).unwrap().is_empty());
        assert_eq!(st, before);
    }

    #[test]
    fn untapped_pass_is_identity() {
        let s = scheme(SchemeKind::PairFlat, 2);
        let mut eve = EveStrategy::full().bind(&s, Protocol::TwoPass).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut st = Statevector::plus(4).unwrap();
        let before = st.clone();
        assert!(eve.intercept(&mut st, 1, &mut rng).unwrap().is_empty());
        assert_eq!(st, before);
        assert_eq!(eve.intercept(&mut st, 2, &mut rng).unwrap().len(), 4);
        assert!((st.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn targets_resolve_per_kind() {
        let s = scheme(SchemeKind::TripleFlat, 2);
        assert_eq!(EveStrategy::scheme_aware().targets(&s).unwrap(), vec![0, 3]);
        assert_eq!(EveStrategy::full().targets(&s).unwrap().len(), 6);
        assert_eq!(EveStrategy::subset([4, 1, 4]).targets(&s).unwrap(), vec![1, 4]);
        assert!(EveStrategy::subset([6]).targets(&s).is_err());
        assert!(EveStrategy::full().with_passes([3]).bind(&s, Protocol::TwoPass).is_err());
        assert!(EveStrategy::full().with_passes([3]).bind(&s, Protocol::ThreePass).is_ok());
    }

    #[test]
    fn descriptor_json() {
        let d: StrategyDescriptor =
            serde_json::from_str(r#"{"kind": "subset", "indices": [0, 2], "passes": [2]}"#).unwrap();
        let s = EveStrategy::try_from(d.clone()).unwrap();
        assert_eq!(s.kind, EveKind::Subset(vec![0, 2]));
        assert_eq!(StrategyDescriptor::from(&s), d);
        let m: StrategyDescriptor = serde_json::from_str(r#"{"kind": "many_copies", "copies": 4, "indices": [0]}"#).unwrap();
        assert!(matches!(EveStrategy::try_from(m).unwrap().kind, EveKind::ManyCopies { copies: 4, .. }));
        assert!(serde_json::from_str::<StrategyDescriptor>(r#"{"kind": "full", "x": 1}"#).is_err());
        let bad = StrategyDescriptor {
            kind: "subset".into(),
            ..Default::default()
        };
        assert!(EveStrategy::try_from(bad).is_err());
    }

    #[test]
    fn equatorial_intercept_correctness_is_half() {
        // Full intercept of pass 2, decoded: each verification qubit reads
        // correctly about half the time.
        let s = scheme(SchemeKind::QftRandom, 3);
        let n = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut correct = vec![0u32; s.verification().len()];
        let message = assemble_message(&[1, 0, 1], &s).unwrap();
        for _ in 0..n {
            let theta = PhaseVector::random(6, &mut rng);
            let mut reg = EquatorialRegister::plus_state(6).unwrap();
            reg.apply_scramble(&theta, Sign::Plus).unwrap();
            reg.apply_encode_on(&s.compartments()[0], message.value).unwrap();
            let mut eve = EveStrategy::full().bind(&s, Protocol::TwoPass).unwrap();
            eve.intercept(&mut reg, 2, &mut rng).unwrap();
            reg.apply_scramble(&theta, Sign::Minus).unwrap();
            let bits = reg.decode_and_measure(s.compartments(), &mut rng).unwrap();
            for (i, v) in s.verification().iter().enumerate() {
                correct[i] += u32::from(bits[v.index] == v.bit);
            }
        }
        let sigma = (0.25 / n as f64).sqrt();
        for c in correct {
            assert!((c as f64 / n as f64 - 0.5).abs() <= 3.0 * sigma);
        }
    }

    #[test]
    fn restored_frame_resend_stays_correlated() {
        // Rotating the resent qubit back leaves first-position correctness at
        // 3/4 instead of 1/2.
        let s = scheme(SchemeKind::PairCompartment, 1);
        let params = ProtocolParams::new(s).with_backend(Backend::Equatorial);
        let eve = EveStrategy::subset([0]).with_basis_model(BasisModel::XBasisRestoredFrame);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let n = 20_000;
        let correct = (0..n)
            .filter(|_| {
                let t = protocols::run_two_pass_qkd(&params, &eve, &mut rng).unwrap();
                t.measured_message.bits[0] == t.intended_message.bits[0]
            })
            .count();
        let sigma = (0.75 * 0.25 / n as f64).sqrt();
        assert!((correct as f64 / n as f64 - 0.75).abs() <= 3.0 * sigma);
    }

    #[test]
    fn eve_bits_on_pass_two_are_unbiased() {
        let s = scheme(SchemeKind::PairFlat, 2);
        let n = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut ones = [0u32; 4];
        let message = assemble_message(&[1, 1], &s).unwrap();
        for _ in 0..n {
            let theta = PhaseVector::random(4, &mut rng);
            let mut reg = Statevector::plus(4).unwrap();
            reg.apply_scramble(&theta, Sign::Plus).unwrap();
            reg.apply_encode(message.value).unwrap();
            let mut eve = EveStrategy::full().bind(&s, Protocol::TwoPass).unwrap();
            for (w, b) in eve.intercept(&mut reg, 2, &mut rng).unwrap() {
                ones[w] += b as u32;
            }
            assert!((reg.norm_sqr() - 1.0).abs() < 1e-9);
        }
        let sigma = (0.25 / n as f64).sqrt();
        for o in ones {
            assert!((o as f64 / n as f64 - 0.5).abs() <= 3.0 * sigma);
        }
    }

    #[test]
    fn copy_basis_pattern_and_inference() {
        let pattern: Vec<Basis> = (0..4).map(|i| copy_basis(i, 4)).collect();
        assert_eq!(pattern, vec![Basis::Z, Basis::Z, Basis::X, Basis::X]);
        // the worked four-copy example: Z gives 1,1 and X gives 1,0
        let seen = [(Basis::Z, 1), (Basis::Z, 1), (Basis::X, 1), (Basis::X, 0)];
        assert_eq!(infer_from_copies(&seen), Some(1));
        let ambiguous = [(Basis::Z, 0), (Basis::Z, 0), (Basis::X, 1), (Basis::X, 1)];
        assert_eq!(infer_from_copies(&ambiguous), None);
    }

    #[test]
    fn many_copies_bb84_never_detected() {
        let s = VerificationScheme::flat(2, vec![VerificationBit { index: 1, bit: 0 }], false).unwrap();
        let params = ProtocolParams::new(s);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let out = many_copies_attack(Protocol::Bb84, &params, 0, 4, &mut rng).unwrap();
            assert!(!out.detected);
            if let Some(bit) = out.inferred_bit {
                assert_eq!(bit, out.actual_bit);
            }
            assert_eq!(out.transcripts.len(), 4);
        }
        assert!(many_copies_attack(Protocol::Bb84, &params, 0, 1, &mut rng).is_err());
        assert!(many_copies_attack(Protocol::Bb84, &params, 2, 4, &mut rng).is_err());
    }

    #[test]
    fn many_copies_two_pass_detects() {
        let s = scheme(SchemeKind::PairCompartment, 1);
        let params = ProtocolParams::new(s).with_backend(Backend::Dense);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 2_000;
        let detected = (0..n)
            .filter(|_| many_copies_attack(Protocol::TwoPass, &params, 0, 4, &mut rng).unwrap().detected)
            .count();
        let expected = 1.0 - 0.75f64.powi(4);
        let sigma = (expected * (1.0 - expected) / n as f64).sqrt();
        assert!((detected as f64 / n as f64 - expected).abs() <= 3.0 * sigma);
    }
}
