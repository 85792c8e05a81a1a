//! Quadratic and linear time-frequency transforms and their reductions.

pub mod matrix;
pub mod stft;
pub mod wigner;

pub use matrix::{
    first_freq_moment, marginal_freq, marginal_time, slice_time, total_energy, MatrixValues,
    TimeFrequencyMatrix, ValueKind,
};
pub use stft::{stft, Window, WindowKind};
pub use wigner::{
    cross_wigner, lag_grid, lag_products, modulate_translate, wigner, wigner_column_shift, Boundary,
    REALNESS_TOLERANCE,
};
