//! Channel realizations, equivalent matrices and noisy reception.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::linalg::CMatrix;
use crate::waveform::{ModulationMatrix, TransmitSignal, WaveformParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Awgn,
    FlatRayleigh,
    Dispersive,
}

impl ChannelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChannelKind::Awgn => "awgn",
            ChannelKind::FlatRayleigh => "rayleigh",
            ChannelKind::Dispersive => "dispersive",
        }
    }
}

impl std::fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "awgn" => Ok(ChannelKind::Awgn),
            "rayleigh" => Ok(ChannelKind::FlatRayleigh),
            "dispersive" => Ok(ChannelKind::Dispersive),
            other => Err(Error::Config(format!("unknown channel kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    impulse_response: Vec<Complex64>,
    matrix: CMatrix,
    noise_variance: f64,
    kind: ChannelKind,
}

impl ChannelRealization {
    pub fn impulse_response(&self) -> &[Complex64] {
        &self.impulse_response
    }

    /// Linear-convolution Toeplitz matrix `H`.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Total complex noise variance per sample.
    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn with_noise_variance(mut self, sigma2: f64) -> Result<Self> {
        if sigma2 < 0.0 || sigma2.is_nan() {
            return Err(Error::NegativeNoiseVariance(sigma2));
        }
        self.noise_variance = sigma2;
        Ok(self)
    }

    pub fn with_kind(mut self, kind: ChannelKind) -> Self {
        self.kind = kind;
        self
    }
}

/// `(n_cols + len(h) - 1) x n_cols` convolution matrix with `H[i][c] = h[i - c]`.
///
/// The kind is inferred: `[1]` is AWGN, any other single tap flat fading, longer
/// responses dispersive. Noise variance starts at zero.
pub fn toeplitz_from_impulse(h: &[Complex64], n_cols: usize) -> Result<ChannelRealization> {
    if h.is_empty() {
        return Err(Error::EmptyImpulseResponse);
    }
    if n_cols == 0 {
        return Err(Error::DimensionMismatch("channel needs at least one column".into()));
    }
    let rows = n_cols + h.len() - 1;
    let matrix = CMatrix::from_fn(rows, n_cols, |i, c| {
        if i >= c && i - c < h.len() {
            h[i - c]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let kind = match h {
        [t] if *t == Complex64::new(1.0, 0.0) => ChannelKind::Awgn,
        [_] => ChannelKind::FlatRayleigh,
        _ => ChannelKind::Dispersive,
    };
    Ok(ChannelRealization {
        impulse_response: h.to_vec(),
        matrix,
        noise_variance: 0.0,
        kind,
    })
}

/// Identity channel over `n` samples.
pub fn awgn(n: usize) -> ChannelRealization {
    toeplitz_from_impulse(&[Complex64::new(1.0, 0.0)], n).expect("non-empty impulse response")
}

/// One block-fading tap with `E[|h0|^2] = 1`, applied over `n` samples.
pub fn draw_flat_rayleigh<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ChannelRealization {
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid std dev");
    let tap = Complex64::new(normal.sample(rng), normal.sample(rng));
    toeplitz_from_impulse(&[tap], n)
        .expect("non-empty impulse response")
        .with_kind(ChannelKind::FlatRayleigh)
}

/// `H A_I` and `H A_Q`; a plain GFDM matrix passed twice yields `Ψ = H A` in both slots.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalentMatrix {
    psi_i: CMatrix,
    psi_q: CMatrix,
}

impl EquivalentMatrix {
    pub fn psi_i(&self) -> &CMatrix {
        &self.psi_i
    }

    pub fn psi_q(&self) -> &CMatrix {
        &self.psi_q
    }

    pub fn rows(&self) -> usize {
        self.psi_i.rows()
    }

    pub fn cols(&self) -> usize {
        self.psi_i.cols()
    }
}

pub fn equivalent_matrices(
    h: &CMatrix,
    a_i: &ModulationMatrix,
    a_q: &ModulationMatrix,
) -> Result<EquivalentMatrix> {
    Ok(EquivalentMatrix {
        psi_i: h.matmul(a_i.matrix())?,
        psi_q: h.matmul(a_q.matrix())?,
    })
}

/// Received vector `y = H x + w`, with the noise-free per-component parts kept
/// for simulation diagnostics and the genie-separated receiver mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedSignal {
    samples: Vec<Complex64>,
    clean_i: Vec<Complex64>,
    clean_q: Vec<Complex64>,
    noise: Vec<Complex64>,
}

impl ReceivedSignal {
    /// Received vector with no component decomposition available.
    pub fn from_samples(samples: Vec<Complex64>) -> Self {
        let zeros = vec![Complex64::new(0.0, 0.0); samples.len()];
        Self {
            noise: zeros.clone(),
            clean_i: zeros.clone(),
            clean_q: zeros,
            samples,
        }
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// `H x_I`
    pub fn clean_i(&self) -> &[Complex64] {
        &self.clean_i
    }

    /// `H x_Q`
    pub fn clean_q(&self) -> &[Complex64] {
        &self.clean_q
    }

    pub fn noise(&self) -> &[Complex64] {
        &self.noise
    }

    /// `H x_I + w`
    pub fn genie_i(&self) -> Vec<Complex64> {
        self.clean_i.iter().zip(&self.noise).map(|(a, b)| a + b).collect()
    }

    /// `H x_Q + w`
    pub fn genie_q(&self) -> Vec<Complex64> {
        self.clean_q.iter().zip(&self.noise).map(|(a, b)| a + b).collect()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Circularly-symmetric complex Gaussian noise with total variance `sigma2`.
pub fn complex_noise<R: Rng + ?Sized>(rng: &mut R, len: usize, sigma2: f64) -> Result<Vec<Complex64>> {
    if sigma2 < 0.0 || sigma2.is_nan() {
        return Err(Error::NegativeNoiseVariance(sigma2));
    }
    if sigma2 == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); len]);
    }
    let normal = Normal::new(0.0, (sigma2 / 2.0).sqrt()).expect("finite std dev");
    Ok((0..len)
        .map(|_| Complex64::new(normal.sample(rng), normal.sample(rng)))
        .collect())
}

pub fn apply_channel<R: Rng + ?Sized>(
    x: &TransmitSignal,
    ch: &ChannelRealization,
    rng: &mut R,
) -> Result<ReceivedSignal> {
    let h = ch.matrix();
    let clean_i = h.mul_vec(x.in_phase())?;
    let clean_q = h.mul_vec(x.quadrature())?;
    let noise = complex_noise(rng, h.rows(), ch.noise_variance())?;
    let samples = clean_i
        .iter()
        .zip(&clean_q)
        .zip(&noise)
        .map(|((a, b), w)| a + b + w)
        .collect();
    Ok(ReceivedSignal {
        samples,
        clean_i,
        clean_q,
        noise,
    })
}

/// Per-sample noise variance for a target Eb/N0, with unit symbol energy.
pub fn ebn0_to_sigma2(ebn0_db: f64, params: &WaveformParams) -> f64 {
    let es = 1.0;
    es / (params.bits_per_symbol() as f64 * 10f64.powf(ebn0_db / 10.0))
}
