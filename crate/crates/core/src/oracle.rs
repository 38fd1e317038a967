//! Exhaustive-search inference and closed-form QPSK error probabilities used to
//! validate the receiver and the Monte Carlo harness.

use std::fmt::Write as _;

use num_complex::Complex64;
use statrs::function::erf::erfc;

use crate::linalg::CMatrix;
use crate::spa::Marginals;
use crate::{Error, Result};

/// Largest candidate count the exhaustive routines will enumerate.
pub const MAX_CANDIDATES: u128 = 1 << 24;

fn candidate_count(alphabet_len: usize, n: usize) -> Result<usize> {
    let count = (alphabet_len as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > MAX_CANDIDATES {
        return Err(Error::SearchSpaceTooLarge(count));
    }
    Ok(count as usize)
}

fn check_dims(y: &[Complex64], coeffs: &CMatrix) -> Result<()> {
    if y.len() != coeffs.rows() {
        return Err(Error::DimensionMismatch(format!(
            "received vector has {} samples, matrix has {} rows",
            y.len(),
            coeffs.rows()
        )));
    }
    Ok(())
}

/// Calls `f(digits, energy)` for every assignment, where `energy = ‖y − C d‖²`.
fn for_each_candidate(
    y: &[Complex64],
    coeffs: &CMatrix,
    alphabet: &[f64],
    mut f: impl FnMut(&[usize], f64),
) -> Result<()> {
    check_dims(y, coeffs)?;
    let n = coeffs.cols();
    let count = candidate_count(alphabet.len(), n)?;
    let columns: Vec<Vec<Complex64>> = (0..n).map(|c| coeffs.column(c)).collect();
    let mut digits = vec![0usize; n];
    let mut residual = vec![Complex64::new(0.0, 0.0); y.len()];
    for _ in 0..count {
        residual.copy_from_slice(y);
        for (col, &d) in columns.iter().zip(&digits) {
            let a = alphabet[d];
            for (r, c) in residual.iter_mut().zip(col) {
                *r -= c * a;
            }
        }
        let energy = residual.iter().map(|r| r.norm_sqr()).sum();
        f(&digits, energy);
        for d in digits.iter_mut() {
            *d += 1;
            if *d < alphabet.len() {
                break;
            }
            *d = 0;
        }
    }
    Ok(())
}

/// Alphabet indices minimizing `‖y − C d‖²`; the first minimizer in enumeration
/// order wins ties.
pub fn exhaustive_map(y: &[Complex64], coeffs: &CMatrix, alphabet: &[f64]) -> Result<Vec<usize>> {
    let mut best = vec![0; coeffs.cols()];
    let mut best_energy = f64::INFINITY;
    for_each_candidate(y, coeffs, alphabet, |digits, energy| {
        if energy < best_energy {
            best_energy = energy;
            best.copy_from_slice(digits);
        }
    })?;
    Ok(best)
}

/// `p(d_j = a) ∝ Σ_{d: d_j = a} exp(−‖y − C d‖²)`.
pub fn exact_marginals(y: &[Complex64], coeffs: &CMatrix, alphabet: &[f64]) -> Result<Marginals> {
    let n = coeffs.cols();
    let a_len = alphabet.len();
    let mut energies = Vec::new();
    let mut assignments = Vec::new();
    for_each_candidate(y, coeffs, alphabet, |digits, energy| {
        energies.push(energy);
        assignments.extend_from_slice(digits);
    })?;
    let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let mut rows = vec![vec![0.0; a_len]; n];
    for (energy, digits) in energies.iter().zip(assignments.chunks(n.max(1))) {
        let w = (min - energy).exp();
        for (row, &d) in rows.iter_mut().zip(digits) {
            row[d] += w;
        }
    }
    for row in &mut rows {
        let sum: f64 = row.iter().sum();
        row.iter_mut().for_each(|v| *v /= sum);
    }
    Ok(Marginals::from_rows(rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoryChannel {
    AwgnQpsk,
    RayleighQpsk,
}

impl TheoryChannel {
    pub fn as_str(&self) -> &'static str {
        match self {
            TheoryChannel::AwgnQpsk => "awgn",
            TheoryChannel::RayleighQpsk => "rayleigh",
        }
    }
}

/// Gaussian tail probability.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Bit error probability of Gray-coded QPSK.
pub fn theoretical_ber(channel: TheoryChannel, ebn0_db: f64) -> f64 {
    let gamma = 10f64.powf(ebn0_db / 10.0);
    match channel {
        TheoryChannel::AwgnQpsk => q_function((2.0 * gamma).sqrt()),
        TheoryChannel::RayleighQpsk => 0.5 * (1.0 - (gamma / (1.0 + gamma)).sqrt()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoryCurve {
    pub channel: TheoryChannel,
    pub points: Vec<(f64, f64)>,
}

pub fn theory_curve(channel: TheoryChannel, ebn0_db: &[f64]) -> TheoryCurve {
    TheoryCurve {
        channel,
        points: ebn0_db
            .iter()
            .map(|&e| (e, theoretical_ber(channel, e)))
            .collect(),
    }
}

pub const THEORY_CSV_HEADER: &str = "channel,ebn0_db,pb";

impl TheoryCurve {
    /// CSV rows without header.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for (e, pb) in &self.points {
            let _ = writeln!(out, "{},{},{:e}", self.channel.as_str(), e, pb);
        }
        out
    }
}
