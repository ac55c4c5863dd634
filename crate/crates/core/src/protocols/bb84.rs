//! BB84 over the same verification layouts, one qubit per message position.

use rand::Rng;

use super::{random_key, Basis, BasisRecord, Protocol, ProtocolParams, Transcript};
use crate::adversary::EveStrategy;
use crate::error::Result;
use crate::schemes::{assemble_message, Message, Verdict};
use crate::statevector::{Register, Statevector};

fn prepare(bit: u8, basis: Basis) -> Result<Statevector> {
    let mut q = Statevector::basis(1, bit as u64)?;
    if basis == Basis::X {
        q.apply_hadamard(0)?;
    }
    Ok(q)
}

fn measure<R: Rng + ?Sized>(mut q: Statevector, basis: Basis, rng: &mut R) -> Result<u8> {
    if basis == Basis::X {
        q.apply_hadamard(0)?;
    }
    q.measure_qubit(0, rng)
}

fn measure_in<R: Rng + ?Sized>(q: &mut Statevector, basis: Basis, rng: &mut R) -> Result<u8> {
    match basis {
        Basis::Z => q.measure_computational(0, rng),
        Basis::X => q.measure_equatorial(0, 0.0, rng),
    }
}

/// Sends every position, retransmitting until Alice's and Bob's bases agree,
/// so the sifted string covers the whole message.
pub(super) fn run<R: Rng + ?Sized>(
    params: &ProtocolParams,
    strategy: &EveStrategy,
    key: Option<&[u8]>,
    rng: &mut R,
) -> Result<Transcript> {
    let scheme = &params.scheme;
    let mut eve = strategy.bind(scheme, Protocol::Bb84)?;
    let key = key.map_or_else(|| random_key(scheme, rng), <[u8]>::to_vec);
    let message = assemble_message(&key, scheme)?;
    let mut received = vec![0u8; scheme.total_qubits()];
    let mut bases = Vec::new();
    for (wire, &bit) in message.bits.iter().enumerate() {
        loop {
            let send = Basis::random(rng);
            let mut q = prepare(bit, send)?;
            eve.intercept_wire(&mut q, 0, wire, 1, rng)?;
            let bob = Basis::random(rng);
            let got = measure(q, bob, rng)?;
            bases.push(BasisRecord {
                wire,
                send,
                measure: bob,
            });
            if send == bob {
                received[wire] = got;
                break;
            }
        }
    }
    let measured = Message::from_bits(received, scheme)?;
    let extraction = crate::schemes::extract_key(&measured, scheme, params.mismatch_limit)?;
    Ok(Transcript {
        protocol: Protocol::Bb84,
        key_agreed: extraction.verdict == Verdict::Pass && extraction.key == message.key_bits,
        intended_message: message,
        measured_message: measured,
        verdict: extraction.verdict,
        eve_observations: eve.into_observations(),
        bases: Some(bases),
    })
}

/// One copy of a repeated transmission: Alice's bases are fixed, Bob picks
/// fresh bases, and each position is sent once. Only positions where the
/// bases agree are sifted; the verdict counts mismatches among sifted
/// verification positions.
///
/// `tap` makes Eve measure one wire in a fixed basis; her bit is returned.
pub fn transmit_copy<R: Rng + ?Sized>(
    params: &ProtocolParams,
    message: &Message,
    alice_bases: &[Basis],
    tap: Option<(usize, Basis)>,
    rng: &mut R,
) -> Result<(Transcript, Option<u8>)> {
    let scheme = &params.scheme;
    let mut received = vec![0u8; message.p];
    let mut bases = Vec::with_capacity(message.p);
    let mut eve_bit = None;
    for (wire, (&bit, &send)) in message.bits.iter().zip(alice_bases).enumerate() {
        let mut q = prepare(bit, send)?;
        if let Some((target, basis)) = tap {
            if target == wire {
                eve_bit = Some(measure_in(&mut q, basis, rng)?);
            }
        }
        let bob = Basis::random(rng);
        received[wire] = measure(q, bob, rng)?;
        bases.push(BasisRecord {
            wire,
            send,
            measure: bob,
        });
    }
    let sifted = |w: usize| bases[w].send == bases[w].measure;
    let mismatches = scheme
        .verification()
        .iter()
        .filter(|v| sifted(v.index) && received[v.index] != v.bit)
        .count();
    let key_ok = scheme
        .key_positions()
        .into_iter()
        .filter(|&w| sifted(w))
        .all(|w| received[w] == message.bits[w]);
    let verdict = if mismatches <= params.mismatch_limit {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let transcript = Transcript {
        protocol: Protocol::Bb84,
        intended_message: message.clone(),
        measured_message: Message::from_bits(received, scheme)?,
        verdict,
        eve_observations: eve_bit.map(|b| vec![(tap.expect("tap set").0, b)]).unwrap_or_default(),
        key_agreed: verdict == Verdict::Pass && key_ok,
        bases: Some(bases),
    };
    Ok((transcript, eve_bit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{bb84_detection_probability, EveTouchSet};
    use crate::protocols::run_bb84;
    use crate::schemes::{build_scheme, SchemeKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn honest_bb84_agrees() {
        let s = build_scheme(SchemeKind::Bb84Random, 4, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        let params = ProtocolParams::new(s);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let t = run_bb84(&params, &EveStrategy::none(), &mut rng).unwrap();
            assert!(t.key_agreed);
            let bases = t.bases.unwrap();
            for w in 0..8 {
                let last = bases.iter().rev().find(|b| b.wire == w).unwrap();
                assert_eq!(last.send, last.measure);
            }
        }
    }

    #[test]
    fn full_intercept_detection_matches_quarter_per_qubit() {
        let s = build_scheme(SchemeKind::Bb84Random, 2, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        let params = ProtocolParams::new(s.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 20_000;
        let fails = (0..n)
            .filter(|_| run_bb84(&params, &EveStrategy::full(), &mut rng).unwrap().verdict == Verdict::Fail)
            .count();
        let expected = bb84_detection_probability(&s.verification_indices(), &EveTouchSet::all(4));
        assert!((expected - (1.0 - 0.75f64.powi(2))).abs() < 1e-12);
        let sigma = (expected * (1.0 - expected) / n as f64).sqrt();
        assert!((fails as f64 / n as f64 - expected).abs() <= 3.0 * sigma);
    }

    #[test]
    fn copy_in_alice_basis_reads_her_bit() {
        let s = build_scheme(SchemeKind::Bb84Random, 1, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        let params = ProtocolParams::new(s.clone());
        let message = assemble_message(&[1], &s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for basis in [Basis::Z, Basis::X] {
            let bases = vec![basis; 2];
            for _ in 0..50 {
                let (t, bit) = transmit_copy(&params, &message, &bases, Some((0, basis)), &mut rng).unwrap();
                assert_eq!(bit, Some(message.bits[0]));
                assert_eq!(t.verdict, Verdict::Pass);
            }
        }
    }
}
