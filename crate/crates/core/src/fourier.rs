//! Grid-aware discrete Fourier transforms.
//!
//! The forward transform approximates `F(xi) = int f(t) exp(-2 pi i t xi) dt`
//! by `dt * sum_k f_k exp(-2 pi i t_k xi_j)` on the centred bin frequencies
//! `xi_j = (j - floor(n/2)) / (n dt)`. The inverse uses the `1 / (n dt)` bin
//! weight, so `inverse(forward(f)) == f` up to rounding.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Result, TfError};
use crate::signal::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Ascending, zero-centred bin frequencies for `n` samples at spacing `dt`.
pub fn freq_axis(n: usize, dt: f64) -> Vec<f64> {
    let half = (n / 2) as i64;
    let scale = 1.0 / (n as f64 * dt);
    (0..n as i64).map(|j| (j - half) as f64 * scale).collect()
}

/// A planned DFT on a fixed grid. Cheap to share across threads.
pub struct Dft {
    grid: Grid,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    // exp(-2 pi i t0 xi_j)
    phase: Vec<Complex64>,
}

impl std::fmt::Debug for Dft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dft").field("grid", &self.grid).finish()
    }
}

impl Dft {
    pub fn new(grid: Grid) -> Self {
        let n = grid.n;
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let half = (n / 2) as i64;
        let phase = match grid.integer_origin() {
            Some(k0) => (0..n as i64)
                .map(|j| {
                    let r = (k0 * (j - half)).rem_euclid(n as i64);
                    Complex64::cis(-2.0 * PI * r as f64 / n as f64)
                })
                .collect(),
            None => freq_axis(n, grid.dt)
                .iter()
                .map(|xi| Complex64::cis(-2.0 * PI * grid.t0 * xi))
                .collect(),
        };
        Self { grid, fwd, inv, phase }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn freq_axis(&self) -> Vec<f64> {
        freq_axis(self.grid.n, self.grid.dt)
    }

    #[inline]
    fn fft_index(&self, j: usize) -> usize {
        let n = self.grid.n;
        (j + n - n / 2) % n
    }

    pub fn forward(&self, input: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(input)?;
        let mut buf = input.to_vec();
        self.fwd.process(&mut buf);
        let dt = self.grid.dt;
        Ok((0..self.grid.n).map(|j| dt * self.phase[j] * buf[self.fft_index(j)]).collect())
    }

    pub fn inverse(&self, input: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(input)?;
        let n = self.grid.n;
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (j, z) in input.iter().enumerate() {
            buf[self.fft_index(j)] = z * self.phase[j].conj();
        }
        self.inv.process(&mut buf);
        let dxi = 1.0 / (n as f64 * self.grid.dt);
        Ok(buf.into_iter().map(|z| z * dxi).collect())
    }

    pub fn apply(&self, input: &[Complex64], direction: Direction) -> Result<Vec<Complex64>> {
        match direction {
            Direction::Forward => self.forward(input),
            Direction::Inverse => self.inverse(input),
        }
    }

    fn check_len(&self, input: &[Complex64]) -> Result<()> {
        if input.len() != self.grid.n {
            return Err(TfError::InvalidInput(format!(
                "DFT input has {} samples, grid expects {}",
                input.len(),
                self.grid.n
            )));
        }
        Ok(())
    }
}

/// One-shot grid DFT. For repeated transforms of one length build a [`Dft`].
pub fn dft(input: &[Complex64], grid: &Grid, direction: Direction) -> Result<Vec<Complex64>> {
    Dft::new(*grid).apply(input, direction)
}

/// Band-limited 2x interpolation: zero-pads the spectrum to `2n` bins and
/// transforms back, so `out[2k] == input[k]` up to rounding. The Nyquist bin
/// of an even-length input is split evenly between `+/-` Nyquist.
pub fn upsample2(input: &[Complex64]) -> Vec<Complex64> {
    let n = input.len();
    if n == 0 {
        return Vec::new();
    }
    let mut planner = FftPlanner::new();
    let mut spec = input.to_vec();
    planner.plan_fft_forward(n).process(&mut spec);

    let m = 2 * n;
    let mut padded = vec![Complex64::new(0.0, 0.0); m];
    let half = n / 2;
    if n % 2 == 0 {
        padded[..half].copy_from_slice(&spec[..half]);
        padded[half] = spec[half] * 0.5;
        padded[m - half] = spec[half] * 0.5;
        padded[m - half + 1..].copy_from_slice(&spec[half + 1..]);
    } else {
        padded[..=half].copy_from_slice(&spec[..=half]);
        padded[m - half..].copy_from_slice(&spec[half + 1..]);
    }
    planner.plan_fft_inverse(m).process(&mut padded);
    let scale = 1.0 / n as f64;
    padded.into_iter().map(|z| z * scale).collect()
}

/// Signed FFT-order frequency of bin `i` in cycles per sample-spacing unit;
/// the Nyquist bin of an even length maps to zero.
fn fft_order_freq(i: usize, n: usize, dt: f64) -> f64 {
    let scale = 1.0 / (n as f64 * dt);
    if n % 2 == 0 && i == n / 2 {
        0.0
    } else if i <= n / 2 {
        i as f64 * scale
    } else {
        (i as f64 - n as f64) * scale
    }
}

/// Spectral derivative `d/dt` of the trigonometric interpolant of `input`
/// sampled at spacing `dt`: multiply each bin by `2 pi i xi` and invert.
pub fn spectral_derivative(input: &[Complex64], dt: f64) -> Vec<Complex64> {
    let n = input.len();
    if n == 0 {
        return Vec::new();
    }
    let mut planner = FftPlanner::new();
    let mut spec = input.to_vec();
    planner.plan_fft_forward(n).process(&mut spec);
    for (i, z) in spec.iter_mut().enumerate() {
        *z *= Complex64::new(0.0, 2.0 * PI * fft_order_freq(i, n, dt));
    }
    planner.plan_fft_inverse(n).process(&mut spec);
    let scale = 1.0 / n as f64;
    spec.into_iter().map(|z| z * scale).collect()
}

/// Second-order central differences with one-sided ends.
pub fn central_difference(input: &[Complex64], dt: f64) -> Vec<Complex64> {
    let n = input.len();
    match n {
        0 => Vec::new(),
        1 => vec![Complex64::new(0.0, 0.0)],
        _ => (0..n)
            .map(|k| {
                if k == 0 {
                    (input[1] - input[0]) / dt
                } else if k == n - 1 {
                    (input[n - 1] - input[n - 2]) / dt
                } else {
                    (input[k + 1] - input[k - 1]) / (2.0 * dt)
                }
            })
            .collect(),
    }
}
