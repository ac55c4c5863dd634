use rand::Rng;

use super::{encode_phase, PhaseVector, Sign, Statevector};
use crate::error::{Error, Result};

/// Operations a protocol run needs from a quantum register.
///
/// Implemented by the dense [`Statevector`] and by the product-state
/// [`super::EquatorialRegister`], which is exact for the protocols here
/// because every pre-decoding operation keeps each wire on the equator.
pub trait Register: Sized {
    fn plus_state(num_qubits: usize) -> Result<Self>;

    fn num_qubits(&self) -> usize;

    fn apply_phase(&mut self, wire: usize, angle: f64) -> Result<()>;

    fn apply_scramble(&mut self, phases: &PhaseVector, sign: Sign) -> Result<()> {
        if phases.len() != self.num_qubits() {
            return Err(Error::Size(format!(
                "{} phases for {} wires",
                phases.len(),
                self.num_qubits()
            )));
        }
        for (wire, angle) in phases.angles().iter().enumerate() {
            self.apply_phase(wire, sign.factor() * angle)?;
        }
        Ok(())
    }

    fn apply_encode_on(&mut self, wires: &[usize], value: u64) -> Result<()> {
        if value >> wires.len() != 0 {
            return Err(Error::Value(format!(
                "message {value} does not fit in {} qubits",
                wires.len()
            )));
        }
        for (position, &wire) in wires.iter().enumerate() {
            self.apply_phase(wire, encode_phase(value, position))?;
        }
        Ok(())
    }

    /// Intercept-resend in the equatorial basis `{(|0> ± e^{iφ}|1>)/√2}`.
    ///
    /// Returns 0 for the `+` outcome; the wire is left in the observed basis state.
    fn measure_equatorial<R: Rng + ?Sized>(&mut self, wire: usize, basis_phase: f64, rng: &mut R) -> Result<u8>;

    /// Intercept-resend in the computational basis.
    fn measure_computational<R: Rng + ?Sized>(&mut self, wire: usize, rng: &mut R) -> Result<u8>;

    /// Inverse QFT on each compartment, then a full measurement.
    /// Returns one bit per wire.
    fn decode_and_measure<R: Rng + ?Sized>(self, compartments: &[Vec<usize>], rng: &mut R) -> Result<Vec<u8>>;
}

impl Register for Statevector {
    fn plus_state(num_qubits: usize) -> Result<Self> {
        Statevector::plus(num_qubits)
    }

    fn num_qubits(&self) -> usize {
        Statevector::num_qubits(self)
    }

    fn apply_phase(&mut self, wire: usize, angle: f64) -> Result<()> {
        Statevector::apply_phase(self, wire, angle)
    }

    fn apply_encode_on(&mut self, wires: &[usize], value: u64) -> Result<()> {
        Statevector::apply_encode_on(self, wires, value)
    }

    fn measure_equatorial<R: Rng + ?Sized>(&mut self, wire: usize, basis_phase: f64, rng: &mut R) -> Result<u8> {
        self.apply_phase(wire, -basis_phase)?;
        self.apply_hadamard(wire)?;
        let bit = self.measure_qubit(wire, rng)?;
        self.apply_hadamard(wire)?;
        self.apply_phase(wire, basis_phase)?;
        Ok(bit)
    }

    fn measure_computational<R: Rng + ?Sized>(&mut self, wire: usize, rng: &mut R) -> Result<u8> {
        self.measure_qubit(wire, rng)
    }

    fn decode_and_measure<R: Rng + ?Sized>(mut self, compartments: &[Vec<usize>], rng: &mut R) -> Result<Vec<u8>> {
        for wires in compartments {
            self.apply_inverse_qft_on(wires)?;
        }
        let value = self.measure_all(rng)?;
        Ok((0..self.num_qubits()).map(|t| ((value >> t) & 1) as u8).collect())
    }
}
