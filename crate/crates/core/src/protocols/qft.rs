use rand::Rng;

use super::{random_key, Backend, Protocol, ProtocolParams, Transcript};
use crate::adversary::{BasisModel, Channel, EveStrategy};
use crate::error::{Error, Result};
use crate::schemes::{assemble_message, extract_key, Message, Verdict};
use crate::statevector::{EquatorialRegister, PhaseVector, Register, Sign, Statevector};

pub(super) fn run<R: Rng + ?Sized>(
    protocol: Protocol,
    params: &ProtocolParams,
    strategy: &EveStrategy,
    key: Option<&[u8]>,
    rng: &mut R,
) -> Result<Transcript> {
    let mut eve = strategy.bind(&params.scheme, protocol)?;
    let model = strategy.effective_basis_model(protocol);
    let backend = params.backend.resolve(params.scheme.total_qubits(), model);
    if backend == Backend::Equatorial && model == BasisModel::RandomZx && !eve.targets().is_empty() {
        return Err(Error::Unsupported(
            "computational-basis interception needs the dense backend".into(),
        ));
    }
    run_on_backend(backend, protocol, params, key, &mut eve, rng)
}

/// Runs a QFT protocol with an arbitrary channel.
pub(crate) fn run_qft_with_channel<C: Channel, R: Rng + ?Sized>(
    protocol: Protocol,
    params: &ProtocolParams,
    key: Option<&[u8]>,
    channel: &mut C,
    rng: &mut R,
) -> Result<Transcript> {
    let backend = params
        .backend
        .resolve(params.scheme.total_qubits(), BasisModel::XBasisWithRandomUnscramble);
    run_on_backend(backend, protocol, params, key, channel, rng)
}

fn run_on_backend<C: Channel, R: Rng + ?Sized>(
    backend: Backend,
    protocol: Protocol,
    params: &ProtocolParams,
    key: Option<&[u8]>,
    channel: &mut C,
    rng: &mut R,
) -> Result<Transcript> {
    match backend {
        Backend::Equatorial => execute::<EquatorialRegister, C, R>(protocol, params, key, channel, rng),
        _ => {
            params.check_dense_capacity()?;
            execute::<Statevector, C, R>(protocol, params, key, channel, rng)
        }
    }
}

fn execute<Q: Register, C: Channel, R: Rng + ?Sized>(
    protocol: Protocol,
    params: &ProtocolParams,
    key: Option<&[u8]>,
    channel: &mut C,
    rng: &mut R,
) -> Result<Transcript> {
    let scheme = &params.scheme;
    let p = scheme.total_qubits();
    let measured = match protocol {
        Protocol::TwoPass => {
            // Bob scrambles |+>^p and sends it; Alice encodes and returns it.
            let theta = PhaseVector::random(p, rng);
            let mut reg = Q::plus_state(p)?;
            reg.apply_scramble(&theta, Sign::Plus)?;
            channel.transmit(1, &mut reg, rng)?;
            let key = key.map_or_else(|| random_key(scheme, rng), <[u8]>::to_vec);
            let message = assemble_message(&key, scheme)?;
            encode(&mut reg, &message, scheme.compartments())?;
            channel.transmit(2, &mut reg, rng)?;
            reg.apply_scramble(&theta, Sign::Minus)?;
            (message, reg.decode_and_measure(scheme.compartments(), rng)?)
        }
        Protocol::ThreePass => {
            // Alice encodes and locks, Bob adds his lock, Alice removes hers,
            // Bob removes his and decodes.
            let plaintext = key.map_or_else(|| random_key(scheme, rng), <[u8]>::to_vec);
            let message = assemble_message(&plaintext, scheme)?;
            let theta = PhaseVector::random(p, rng);
            let phi = PhaseVector::random(p, rng);
            let mut reg = Q::plus_state(p)?;
            encode(&mut reg, &message, scheme.compartments())?;
            reg.apply_scramble(&theta, Sign::Plus)?;
            channel.transmit(1, &mut reg, rng)?;
            reg.apply_scramble(&phi, Sign::Plus)?;
            channel.transmit(2, &mut reg, rng)?;
            reg.apply_scramble(&theta, Sign::Minus)?;
            channel.transmit(3, &mut reg, rng)?;
            reg.apply_scramble(&phi, Sign::Minus)?;
            (message, reg.decode_and_measure(scheme.compartments(), rng)?)
        }
        Protocol::Bb84 => return Err(Error::Value("bb84 is not a QFT protocol".into())),
    };
    let (intended, bits) = measured;
    let measured = Message::from_bits(bits, scheme)?;
    let extraction = extract_key(&measured, scheme, params.mismatch_limit)?;
    Ok(Transcript {
        protocol,
        key_agreed: extraction.verdict == Verdict::Pass && extraction.key == intended.key_bits,
        intended_message: intended,
        measured_message: measured,
        verdict: extraction.verdict,
        eve_observations: channel.observations(),
        bases: None,
    })
}

fn encode<Q: Register>(reg: &mut Q, message: &Message, compartments: &[Vec<usize>]) -> Result<()> {
    for wires in compartments {
        reg.apply_encode_on(wires, message.value_on(wires))?;
    }
    Ok(())
}
