//! Dense statevector simulation restricted to the gates the QFT protocols use.
//!
//! # Layout
//!
//! Wire 0 is the first transmitted qubit. In the amplitude array wire `w`
//! occupies bit `p - 1 - w` of the index, so wire 0 is the slowest-varying
//! index and wire `p - 1` the fastest. For `p = 2` the amplitudes are ordered
//! `|00>, |01>, |10>, |11>` as `|wire0 wire1>`.
//!
//! Measurement outcomes are reported in *message* order instead: bit `t` of
//! an outcome integer is the value read on wire `t`. [`Statevector::basis`]
//! uses the same convention, so `basis(p, m)` measures to `m`.
//!
//! All gate methods mutate in place.

mod equatorial;
mod register;

pub use equatorial::EquatorialRegister;
pub use register::Register;

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};

/// Largest register the dense simulator will allocate (2^24 amplitudes).
pub const MAX_QUBITS: usize = 24;

/// Tolerance on the squared norm.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Per-wire phase angles in radians, canonicalized to `[0, 2π)`.
///
/// `angles[t]` is the phase applied to wire `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseVector(Vec<f64>);

impl PhaseVector {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if let Some(bad) = angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::Value(format!("phase angle {bad} is not finite")));
        }
        Ok(Self(angles.into_iter().map(|a| a.rem_euclid(TAU)).collect()))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    /// Uniform angles in `[0, 2π)`, one per wire.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self((0..len).map(|_| rng.gen_range(0.0..TAU)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.0
    }
}

/// Direction of a scramble: apply the phases or undo them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Phase that encoding `value` puts on the wire at local position `position`
/// of a compartment: `π·value / 2^position`.
pub fn encode_phase(value: u64, position: usize) -> f64 {
    // Only the low position+1 bits matter modulo 2π; reduce first to keep the
    // float exact for wide registers.
    let mask = (1u64 << (position + 1)) - 1;
    PI * (value & mask) as f64 / (1u64 << position) as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    fn check_size(num_qubits: usize) -> Result<()> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::Size(format!(
                "register of {num_qubits} qubits outside 1..={MAX_QUBITS}"
            )));
        }
        Ok(())
    }

    /// `|+>^⊗p`.
    pub fn plus(num_qubits: usize) -> Result<Self> {
        Self::check_size(num_qubits)?;
        let dim = 1usize << num_qubits;
        let amp = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(Self {
            num_qubits,
            amplitudes: vec![amp; dim],
        })
    }

    /// Computational basis state whose wire `t` holds bit `t` of `value`.
    pub fn basis(num_qubits: usize, value: u64) -> Result<Self> {
        Self::check_size(num_qubits)?;
        if value >> num_qubits != 0 {
            return Err(Error::Value(format!(
                "basis value {value} does not fit in {num_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[value_to_index(value, num_qubits)] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Builds a state from raw amplitudes in the layout described at module level.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if !dim.is_power_of_two() {
            return Err(Error::Size(format!("{dim} amplitudes is not a power of two")));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        Self::check_size(num_qubits)?;
        let state = Self {
            num_qubits,
            amplitudes,
        };
        state.check_normalized()?;
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_normalized(&self) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::State { norm_sqr });
        }
        Ok(())
    }

    fn wire_mask(&self, wire: usize) -> Result<usize> {
        check_index(wire, self.num_qubits, "wires")?;
        Ok(1 << (self.num_qubits - 1 - wire))
    }

    /// Probability that a full measurement yields `value` (message order).
    pub fn probability_of(&self, value: u64) -> f64 {
        if value >> self.num_qubits != 0 {
            return 0.0;
        }
        self.amplitudes[value_to_index(value, self.num_qubits)].norm_sqr()
    }

    /// Full outcome distribution indexed by message-order value.
    pub fn probabilities(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.amplitudes.len()];
        for (index, amp) in self.amplitudes.iter().enumerate() {
            out[index_to_value(index, self.num_qubits) as usize] = amp.norm_sqr();
        }
        out
    }

    /// Largest elementwise amplitude difference.
    pub fn max_distance(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `Z^angle` on one wire.
    pub fn apply_phase(&mut self, wire: usize, angle: f64) -> Result<()> {
        let mask = self.wire_mask(wire)?;
        if angle == 0.0 {
            return Ok(());
        }
        let phase = Complex64::from_polar(1.0, angle);
        for (index, amp) in self.amplitudes.iter_mut().enumerate() {
            if index & mask != 0 {
                *amp *= phase;
            }
        }
        Ok(())
    }

    pub fn apply_hadamard(&mut self, wire: usize) -> Result<()> {
        let mask = self.wire_mask(wire)?;
        for index in 0..self.amplitudes.len() {
            if index & mask == 0 {
                let a = self.amplitudes[index];
                let b = self.amplitudes[index | mask];
                self.amplitudes[index] = (a + b) * FRAC_1_SQRT_2;
                self.amplitudes[index | mask] = (a - b) * FRAC_1_SQRT_2;
            }
        }
        Ok(())
    }

    /// Phase `e^{i·angle}` on basis states where both wires are 1.
    pub fn apply_controlled_phase(&mut self, control: usize, target: usize, angle: f64) -> Result<()> {
        let both = self.wire_mask(control)? | self.wire_mask(target)?;
        if control == target {
            return Err(Error::Value("controlled phase needs two distinct wires".into()));
        }
        let phase = Complex64::from_polar(1.0, angle);
        for (index, amp) in self.amplitudes.iter_mut().enumerate() {
            if index & both == both {
                *amp *= phase;
            }
        }
        Ok(())
    }

    /// Applies `Z^{sign·θ_t}` to every wire `t`.
    pub fn apply_scramble(&mut self, phases: &PhaseVector, sign: Sign) -> Result<()> {
        if phases.len() != self.num_qubits {
            return Err(Error::Size(format!(
                "{} phases for {} wires",
                phases.len(),
                self.num_qubits
            )));
        }
        for (wire, angle) in phases.angles().iter().enumerate() {
            self.apply_phase(wire, sign.factor() * angle)?;
        }
        Ok(())
    }

    /// Phase-encodes `value` across the whole register: wire `t` gets `Z^{π·value/2^t}`.
    pub fn apply_encode(&mut self, value: u64) -> Result<()> {
        let wires: Vec<usize> = (0..self.num_qubits).collect();
        self.apply_encode_on(&wires, value)
    }

    /// Phase-encodes `value` on an ordered group of wires; `wires[l]` carries bit `l`.
    pub fn apply_encode_on(&mut self, wires: &[usize], value: u64) -> Result<()> {
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

    pub fn apply_inverse_qft(&mut self) -> Result<()> {
        let wires: Vec<usize> = (0..self.num_qubits).collect();
        self.apply_inverse_qft_on(&wires)
    }

    /// Inverse QFT over an ordered wire group, without terminal swaps.
    ///
    /// Position `l` is corrected by controlled phases `-π/2^{l-j}` from every
    /// earlier position `j`, then rotated out of the X basis. Undoes
    /// [`Statevector::apply_encode_on`] on `|+>` inputs exactly.
    pub fn apply_inverse_qft_on(&mut self, wires: &[usize]) -> Result<()> {
        check_distinct(wires, self.num_qubits)?;
        for (l, &target) in wires.iter().enumerate() {
            for (j, &control) in wires[..l].iter().enumerate() {
                self.apply_controlled_phase(control, target, -PI / (1u64 << (l - j)) as f64)?;
            }
            self.apply_hadamard(target)?;
        }
        Ok(())
    }

    /// Adjoint of [`Statevector::apply_inverse_qft_on`].
    pub fn apply_qft_on(&mut self, wires: &[usize]) -> Result<()> {
        check_distinct(wires, self.num_qubits)?;
        for (l, &target) in wires.iter().enumerate().rev() {
            self.apply_hadamard(target)?;
            for (j, &control) in wires[..l].iter().enumerate().rev() {
                self.apply_controlled_phase(control, target, PI / (1u64 << (l - j)) as f64)?;
            }
        }
        Ok(())
    }

    /// Measures every wire and collapses to the observed basis state.
    pub fn measure_all<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<u64> {
        self.check_normalized()?;
        let draw: f64 = rng.gen();
        let mut acc = 0.0;
        let mut chosen = None;
        for (index, amp) in self.amplitudes.iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            acc += p;
            chosen = Some(index);
            if draw < acc {
                break;
            }
        }
        // chosen is always set for a normalized state; the last nonzero index
        // absorbs rounding in the cumulative sum.
        let index = chosen.ok_or(Error::State { norm_sqr: 0.0 })?;
        self.amplitudes.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
        self.amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(index_to_value(index, self.num_qubits))
    }

    /// Computational-basis measurement of one wire; renormalizes the remainder.
    pub fn measure_qubit<R: Rng + ?Sized>(&mut self, wire: usize, rng: &mut R) -> Result<u8> {
        let mask = self.wire_mask(wire)?;
        self.check_normalized()?;
        let p_one: f64 = self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(index, _)| index & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        let bit = u8::from(rng.gen::<f64>() < p_one);
        let kept = if bit == 1 { p_one } else { 1.0 - p_one };
        let scale = kept.sqrt().recip();
        for (index, amp) in self.amplitudes.iter_mut().enumerate() {
            if (index & mask != 0) == (bit == 1) {
                *amp *= scale;
            } else {
                *amp = Complex64::new(0.0, 0.0);
            }
        }
        Ok(bit)
    }
}

fn check_distinct(wires: &[usize], num_qubits: usize) -> Result<()> {
    let mut seen = vec![false; num_qubits];
    for &w in wires {
        check_index(w, num_qubits, "wires")?;
        if std::mem::replace(&mut seen[w], true) {
            return Err(Error::Value(format!("wire {w} listed twice")));
        }
    }
    Ok(())
}

/// Message-order value → amplitude index (bit reversal over `num_qubits` bits).
fn value_to_index(value: u64, num_qubits: usize) -> usize {
    (value.reverse_bits() >> (64 - num_qubits)) as usize
}

fn index_to_value(index: usize, num_qubits: usize) -> u64 {
    (index as u64).reverse_bits() >> (64 - num_qubits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn plus_state_amplitudes() {
        let s = Statevector::plus(1).unwrap();
        assert!(close(s.amplitudes(), &[c(FRAC_1_SQRT_2, 0.0); 2], 1e-15));
        let s = Statevector::plus(2).unwrap();
        assert!(close(s.amplitudes(), &[c(0.5, 0.0); 4], 1e-15));
        let s = Statevector::plus(3).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn register_size_limits() {
        assert!(matches!(Statevector::plus(0), Err(Error::Size(_))));
        assert!(matches!(Statevector::plus(25), Err(Error::Size(_))));
    }

    #[test]
    fn phase_pi_gives_minus_state() {
        let mut s = Statevector::plus(1).unwrap();
        s.apply_phase(0, PI).unwrap();
        assert!(close(s.amplitudes(), &[c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)], 1e-12));
    }

    #[test]
    fn phase_zero_and_inverse_are_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut s = Statevector::plus(3).unwrap();
        s.apply_scramble(&PhaseVector::random(3, &mut rng), Sign::Plus).unwrap();
        let before = s.clone();
        s.apply_phase(1, 0.0).unwrap();
        assert_eq!(s, before);

        let mut p = Statevector::plus(1).unwrap();
        let orig = p.clone();
        p.apply_phase(0, FRAC_PI_2).unwrap();
        p.apply_phase(0, -FRAC_PI_2).unwrap();
        assert!(p.max_distance(&orig) < 1e-12);
    }

    #[test]
    fn phase_rejects_bad_wire() {
        let mut s = Statevector::plus(2).unwrap();
        assert!(matches!(s.apply_phase(2, 1.0), Err(Error::Index { .. })));
        assert!(matches!(s.apply_hadamard(5), Err(Error::Index { .. })));
    }

    #[test]
    fn scramble_layout_matches_tensor_expansion() {
        // (|0> + e^{iπ}|1>) ⊗ (|0> + e^{iπ/2}|1>) / 2, wire 0 slow.
        let mut s = Statevector::plus(2).unwrap();
        let theta = PhaseVector::new(vec![PI, FRAC_PI_2]).unwrap();
        s.apply_scramble(&theta, Sign::Plus).unwrap();
        let expected: Vec<Complex64> = [0.0, FRAC_PI_2, PI, 1.5 * PI]
            .iter()
            .map(|&a| Complex64::from_polar(0.5, a))
            .collect();
        assert!(close(s.amplitudes(), &expected, 1e-12));
    }

    #[test]
    fn scramble_round_trip_and_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let theta = PhaseVector::random(4, &mut rng);
        let orig = Statevector::plus(4).unwrap();
        let mut s = orig.clone();
        s.apply_scramble(&theta, Sign::Plus).unwrap();
        s.apply_scramble(&theta, Sign::Minus).unwrap();
        assert!(s.max_distance(&orig) < 1e-12);

        let mut z = orig.clone();
        z.apply_scramble(&PhaseVector::zeros(4), Sign::Plus).unwrap();
        assert_eq!(z, orig);

        assert!(matches!(
            s.apply_scramble(&PhaseVector::zeros(3), Sign::Plus),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn phase_vector_canonicalizes_and_rejects_nan() {
        let v = PhaseVector::new(vec![-FRAC_PI_2, 3.0 * PI]).unwrap();
        assert!((v.angles()[0] - 1.5 * PI).abs() < 1e-12);
        assert!((v.angles()[1] - PI).abs() < 1e-12);
        assert!(PhaseVector::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn encode_zero_is_identity_and_one_qubit_flip() {
        let mut s = Statevector::plus(3).unwrap();
        let orig = s.clone();
        s.apply_encode(0).unwrap();
        assert!(s.max_distance(&orig) < 1e-15);

        let mut one = Statevector::plus(1).unwrap();
        one.apply_encode(1).unwrap();
        assert!(close(one.amplitudes(), &[c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)], 1e-12));

        assert!(matches!(s.apply_encode(8), Err(Error::Value(_))));
    }

    #[test]
    fn encode_then_inverse_qft_reads_message() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut s = Statevector::plus(3).unwrap();
        s.apply_encode(5).unwrap();
        s.apply_inverse_qft().unwrap();
        assert!((s.probability_of(5) - 1.0).abs() < 1e-9);
        assert_eq!(s.measure_all(&mut rng).unwrap(), 5);

        let mut s = Statevector::plus(2).unwrap();
        s.apply_encode(2).unwrap();
        s.apply_inverse_qft().unwrap();
        assert!((s.probability_of(2) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn inverse_qft_of_plus_is_zero() {
        for p in 1..=6 {
            let mut s = Statevector::plus(p).unwrap();
            s.apply_inverse_qft().unwrap();
            assert!((s.probability_of(0) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn qft_pair_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut s = Statevector::plus(4).unwrap();
        s.apply_scramble(&PhaseVector::random(4, &mut rng), Sign::Plus).unwrap();
        s.apply_hadamard(2).unwrap();
        s.apply_controlled_phase(0, 2, 0.7).unwrap();
        let orig = s.clone();
        let wires = [1, 3, 0, 2];
        s.apply_inverse_qft_on(&wires).unwrap();
        s.apply_qft_on(&wires).unwrap();
        assert!(s.max_distance(&orig) < 1e-9);
    }

    #[test]
    fn hadamard_layout_and_involution() {
        let mut s = Statevector::basis(2, 0).unwrap();
        s.apply_hadamard(1).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!(close(s.amplitudes(), &[c(h, 0.0), c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0)], 1e-15));

        let mut z = Statevector::basis(1, 0).unwrap();
        z.apply_hadamard(0).unwrap();
        assert!(z.max_distance(&Statevector::plus(1).unwrap()) < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut s = Statevector::plus(3).unwrap();
        s.apply_scramble(&PhaseVector::random(3, &mut rng), Sign::Plus).unwrap();
        let orig = s.clone();
        s.apply_hadamard(1).unwrap();
        s.apply_hadamard(1).unwrap();
        assert!(s.max_distance(&orig) < 1e-12);
    }

    #[test]
    fn basis_state_measures_to_itself() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for m in 0..16 {
            let mut s = Statevector::basis(4, m).unwrap();
            assert_eq!(s.measure_all(&mut rng).unwrap(), m);
        }
        // wire 0 holds the least significant bit
        let mut s = Statevector::basis(3, 0b001).unwrap();
        assert_eq!(s.measure_qubit(0, &mut rng).unwrap(), 1);
        assert_eq!(s.measure_qubit(2, &mut rng).unwrap(), 0);
    }

    #[test]
    fn measure_all_frequency_on_plus() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 100_000;
        let ones: u64 = (0..n)
            .map(|_| Statevector::plus(1).unwrap().measure_all(&mut rng).unwrap())
            .sum();
        let freq = ones as f64 / n as f64;
        let sigma = (0.25 / n as f64).sqrt();
        assert!((freq - 0.5).abs() <= 5.0 * sigma, "freq {freq}");
    }

    #[test]
    fn measure_all_is_deterministic_per_seed() {
        let mut s = Statevector::plus(5).unwrap();
        s.apply_hadamard(2).unwrap();
        let a = s.clone().measure_all(&mut ChaCha8Rng::seed_from_u64(77)).unwrap();
        let b = s.clone().measure_all(&mut ChaCha8Rng::seed_from_u64(77)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn measure_rejects_unnormalized_state() {
        let mut s = Statevector {
            num_qubits: 1,
            amplitudes: vec![c(1.0, 0.0), c(1.0, 0.0)],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(s.measure_all(&mut rng), Err(Error::State { .. })));
        assert!(Statevector::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn measure_qubit_collapses_and_renormalizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = Statevector::basis(2, 0b10).unwrap();
        let orig = s.clone();
        assert_eq!(s.measure_qubit(1, &mut rng).unwrap(), 1);
        assert_eq!(s, orig);

        let mut plus = Statevector::plus(1).unwrap();
        plus.apply_hadamard(0).unwrap();
        assert_eq!(plus.measure_qubit(0, &mut rng).unwrap(), 0);

        let mut s = Statevector::plus(3).unwrap();
        let bit = s.measure_qubit(1, &mut rng).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        let wire1 = |v: u64| (v >> 1) & 1;
        for v in 0..8u64 {
            if wire1(v) != bit as u64 {
                assert_eq!(s.probability_of(v), 0.0);
            }
        }
    }

    #[test]
    fn x_basis_marginal_of_encoded_wire_matches_reduced_state() {
        // Wire 0 of Enc(m)|+++> carries phase π·m; after H its 2x2 reduced
        // state gives P(1) = sin²(π·m/2).
        let n = 20_000;
        for m in 0..8u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(m);
            let expected_one = ((PI * m as f64) / 2.0).sin().powi(2);
            let mut ones = 0;
            for _ in 0..n {
                let mut s = Statevector::plus(3).unwrap();
                s.apply_encode(m).unwrap();
                s.apply_hadamard(0).unwrap();
                ones += s.measure_qubit(0, &mut rng).unwrap() as u32;
            }
            assert!((ones as f64 / n as f64 - expected_one).abs() < 1e-9 + 0.02);
        }
        // wire 1 of m=1 carries phase π/2, an unbiased X-basis outcome
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut ones = 0;
        for _ in 0..n {
            let mut s = Statevector::plus(3).unwrap();
            s.apply_encode(1).unwrap();
            s.apply_hadamard(1).unwrap();
            ones += s.measure_qubit(1, &mut rng).unwrap() as u32;
        }
        let freq = ones as f64 / n as f64;
        assert!((freq - 0.5).abs() < 3.0 * (0.25 / n as f64).sqrt());
    }

    #[test]
    fn encode_phase_reduces_high_bits() {
        assert!((encode_phase(5, 0) - PI).abs() < 1e-15);
        assert!((encode_phase(5, 1) - PI / 2.0).abs() < 1e-15);
        assert!((encode_phase(5, 2) - 5.0 * PI / 4.0).abs() < 1e-15);
    }
}
