//! Discrete Wigner distributions, short-time Fourier transforms,
//! instantaneous-frequency estimation and cone-decay diagnostics for
//! uniformly sampled complex signals.
//!
//! Frequencies are in cycles per unit time and all Fourier transforms use the
//! `exp(-2 pi i t xi)` kernel.

pub mod cone;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod fourier;
pub mod instfreq;
pub mod io;
pub mod oracles;
pub mod signal;
pub mod transforms;
pub mod verify;

pub use error::{Result, TfError};
pub use fourier::{dft, Direction};
pub use signal::{
    gen_bandlimited, gen_chirp, gen_gaussian, gen_random, gen_tone, ChirpParams, GaussianParams, Grid,
    Signal,
};
pub use transforms::{
    cross_wigner, stft, wigner, Boundary, MatrixValues, TimeFrequencyMatrix, ValueKind, Window,
};

pub use num_complex::Complex64;
