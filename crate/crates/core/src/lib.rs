//! Linear GFDM modem with an iterative sum-product receiver.
//!
//! The crate is split along the signal chain:
//!
//! * [`waveform`] builds prototype filters, modulation matrices and QAM frames.
//! * [`channel`] produces Toeplitz channel matrices, equivalent matrices and noisy
//!   received vectors.
//! * [`spa`] builds the factor graph of an equivalent matrix and runs the
//!   sum-product algorithm with MAP decisions, plus complexity accounting.
//! * [`oracle`] holds brute-force exact inference and closed-form BER curves.
//! * [`harness`] runs Monte Carlo BER points and sweeps and writes CSV output.

pub mod channel;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod oracle;
pub mod rng;
pub mod spa;
pub mod waveform;

pub use error::{Error, Result};
pub use num_complex::Complex64;
