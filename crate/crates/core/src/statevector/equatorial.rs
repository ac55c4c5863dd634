use std::f64::consts::{PI, TAU};

use rand::Rng;

use super::Register;
use crate::error::{check_index, Error, Result};

/// Product of single-qubit equatorial states `(|0> + e^{iα_t}|1>)/√2`.
///
/// Decoding uses the semiclassical inverse QFT: each compartment position is
/// measured in turn and its outcome classically controls the phase
/// corrections on later positions. The outcome distribution is identical to
/// the dense inverse QFT followed by measurement, at O(p²) cost, so it scales
/// to registers the dense simulator cannot hold.
#[derive(Debug, Clone, PartialEq)]
pub struct EquatorialRegister {
    phases: Vec<f64>,
}

/// Widest register accepted; message values are held in a `u64`.
pub const MAX_EQUATORIAL_QUBITS: usize = 48;

impl EquatorialRegister {
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Probability of reading 0 after `H` on a wire with relative phase `phase`.
    fn prob_zero(phase: f64) -> f64 {
        (phase / 2.0).cos().powi(2)
    }
}

impl Register for EquatorialRegister {
    fn plus_state(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_EQUATORIAL_QUBITS {
            return Err(Error::Size(format!(
                "register of {num_qubits} qubits outside 1..={MAX_EQUATORIAL_QUBITS}"
            )));
        }
        Ok(Self {
            phases: vec![0.0; num_qubits],
        })
    }

    fn num_qubits(&self) -> usize {
        self.phases.len()
    }

    fn apply_phase(&mut self, wire: usize, angle: f64) -> Result<()> {
        check_index(wire, self.phases.len(), "wires")?;
        self.phases[wire] = (self.phases[wire] + angle).rem_euclid(TAU);
        Ok(())
    }

    fn measure_equatorial<R: Rng + ?Sized>(&mut self, wire: usize, basis_phase: f64, rng: &mut R) -> Result<u8> {
        check_index(wire, self.phases.len(), "wires")?;
        let p_plus = Self::prob_zero(self.phases[wire] - basis_phase);
        let bit = u8::from(rng.gen::<f64>() < 1.0 - p_plus);
        self.phases[wire] = (basis_phase + PI * bit as f64).rem_euclid(TAU);
        Ok(bit)
    }

    fn measure_computational<R: Rng + ?Sized>(&mut self, _wire: usize, _rng: &mut R) -> Result<u8> {
        Err(Error::Unsupported(
            "computational-basis intercept leaves the equator; use the dense backend".into(),
        ))
    }

    fn decode_and_measure<R: Rng + ?Sized>(self, compartments: &[Vec<usize>], rng: &mut R) -> Result<Vec<u8>> {
        let p = self.phases.len();
        let mut bits = vec![0u8; p];
        for wires in compartments {
            for (l, &wire) in wires.iter().enumerate() {
                check_index(wire, p, "wires")?;
                let correction: f64 = wires[..l]
                    .iter()
                    .enumerate()
                    .filter(|&(_, &w)| bits[w] == 1)
                    .map(|(j, _)| PI / (1u64 << (l - j)) as f64)
                    .sum();
                let p_zero = Self::prob_zero(self.phases[wire] - correction);
                bits[wire] = u8::from(rng.gen::<f64>() < 1.0 - p_zero);
            }
        }
        Ok(bits)
    }
}
