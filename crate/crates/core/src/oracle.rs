//! Brute-force density-matrix reference for a single compartment.
//!
//! The encoded state is built with [`Statevector`], every touched wire passes
//! through Eve's intercept-resend channel averaged over a grid of guessed
//! phases, and the inverse QFT is applied as an explicit unitary whose columns
//! come from the simulator. Only meant for small compartments.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::analytics::exact::CompartmentOutcome;
use crate::error::{Error, Result};
use crate::statevector::Statevector;

/// Largest compartment the oracle accepts.
pub const MAX_ORACLE_QUBITS: usize = 8;

/// Guessed phases per touched wire.
pub const PHASE_GRID: usize = 64;

type Matrix = Vec<Complex64>;

/// Outcome statistics after Eve measures the `touched` positions of a
/// compartment carrying `intended` (bit `l` on position `l`).
pub fn compartment_oracle(intended: &[u8], touched: &[bool], verification: &[bool]) -> Result<CompartmentOutcome> {
    let n = intended.len();
    if touched.len() != n || verification.len() != n {
        return Err(Error::Size("compartment vectors differ in length".into()));
    }
    if n == 0 || n > MAX_ORACLE_QUBITS {
        return Err(Error::Capacity {
            what: "oracle compartment width",
            size: n,
            limit: MAX_ORACLE_QUBITS,
        });
    }
    let dim = 1usize << n;
    let value: u64 = intended.iter().enumerate().map(|(l, &b)| (b as u64) << l).sum();
    let mut psi = Statevector::plus(n)?;
    psi.apply_encode(value)?;
    let amps = psi.amplitudes();
    let mut rho: Matrix = (0..dim * dim)
        .map(|ij| amps[ij / dim] * amps[ij % dim].conj())
        .collect();

    let kraus = intercept_kraus();
    for wire in (0..n).filter(|&w| touched[w]) {
        let mask = 1usize << (n - 1 - wire);
        let mut next = vec![Complex64::new(0.0, 0.0); dim * dim];
        for k in &kraus {
            let applied = conjugate_single(&rho, dim, mask, k);
            for (acc, v) in next.iter_mut().zip(applied) {
                *acc += v;
            }
        }
        rho = next;
    }

    let u = inverse_qft_unitary(n)?;
    let mut marginals = vec![0.0; n];
    let mut survival = 0.0;
    for out in 0..dim {
        // (U rho U†)[out][out]
        let mut p = Complex64::new(0.0, 0.0);
        for i in 0..dim {
            let ui = u[out * dim + i];
            if ui == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..dim {
                p += ui * rho[i * dim + j] * u[out * dim + j].conj();
            }
        }
        let p = p.re;
        let bit = |w: usize| ((out >> (n - 1 - w)) & 1) as u8;
        for (w, m) in marginals.iter_mut().enumerate() {
            if bit(w) == intended[w] {
                *m += p;
            }
        }
        if (0..n).all(|w| !verification[w] || bit(w) == intended[w]) {
            survival += p;
        }
    }
    Ok(CompartmentOutcome { survival, marginals })
}

/// Kraus operators of Eve's channel: measure in the basis at a guessed phase,
/// resend `H|bit>`, averaged over a uniform phase grid.
fn intercept_kraus() -> Vec<[Complex64; 4]> {
    let weight = (1.0 / PHASE_GRID as f64).sqrt();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(2 * PHASE_GRID);
    for g in 0..PHASE_GRID {
        let phi = TAU * (g as f64 + 0.5) / PHASE_GRID as f64;
        for e in 0..2u8 {
            let sign = if e == 0 { 1.0 } else { -1.0 };
            // <m| = (<0| + e^{-i(φ+πe)} <1|)/√2 ; |r> = (|0> + sign |1>)/√2
            let m1 = Complex64::from_polar(h, -(phi + PI * e as f64));
            let m0 = Complex64::new(h, 0.0);
            let r0 = h * weight;
            let r1 = sign * h * weight;
            out.push([m0 * r0, m1 * r0, m0 * r1, m1 * r1]);
        }
    }
    out
}

/// `K rho K†` with `K` acting on the wire selected by `mask`.
fn conjugate_single(rho: &Matrix, dim: usize, mask: usize, k: &[Complex64; 4]) -> Matrix {
    let apply = |row_bit: usize, col_bit: usize| k[2 * row_bit + col_bit];
    let mut left = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        let bi = usize::from(i & mask != 0);
        for src in [i & !mask, i | mask] {
            let bs = usize::from(src & mask != 0);
            let c = apply(bi, bs);
            for j in 0..dim {
                left[i * dim + j] += c * rho[src * dim + j];
            }
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for j in 0..dim {
        let bj = usize::from(j & mask != 0);
        for src in [j & !mask, j | mask] {
            let bs = usize::from(src & mask != 0);
            let c = apply(bj, bs).conj();
            for i in 0..dim {
                out[i * dim + j] += left[i * dim + src] * c;
            }
        }
    }
    out
}

fn inverse_qft_unitary(n: usize) -> Result<Matrix> {
    let dim = 1usize << n;
    let mut u = vec![Complex64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[col] = Complex64::new(1.0, 0.0);
        let mut sv = Statevector::from_amplitudes(amps)?;
        sv.apply_inverse_qft()?;
        for (row, a) in sv.amplitudes().iter().enumerate() {
            u[row * dim + col] = *a;
        }
    }
    Ok(u)
}
