//! Windows and the short-time Fourier transform
//! `V_w f(x, xi) = int f(y) conj(w(y - x)) exp(-2 pi i y xi) dy`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TfError};
use crate::exec;
use crate::fourier::Dft;
use crate::signal::{Grid, Signal};
use crate::transforms::matrix::{MatrixValues, TimeFrequencyMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WindowKind {
    /// `exp(-pi a t^2)`
    Gaussian { a: f64 },
    Custom,
}

/// Window samples at offsets `(i - center) * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    samples: Vec<Complex64>,
    center: usize,
    dt: f64,
    kind: WindowKind,
}

/// Gaussian windows are cut where they fall below this fraction of the peak.
const GAUSSIAN_CUTOFF: f64 = 1e-20;

impl Window {
    /// Gaussian `exp(-pi a t^2)` sampled at spacing `dt`, truncated below
    /// `1e-20` and to at most `max_len` samples (odd, symmetric).
    pub fn gaussian(a: f64, dt: f64, max_len: usize) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(TfError::InvalidParams(format!("Gaussian window needs a > 0, got {a}")));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(TfError::InvalidParams(format!("window spacing must be > 0, got {dt}")));
        }
        if max_len == 0 {
            return Err(TfError::InvalidParams("window length limit must be positive".into()));
        }
        let reach = (-GAUSSIAN_CUTOFF.ln() / (PI * a)).sqrt();
        let half = ((reach / dt).ceil() as usize).min((max_len - 1) / 2);
        let samples = (0..=2 * half)
            .map(|i| {
                let t = (i as f64 - half as f64) * dt;
                Complex64::new((-PI * a * t * t).exp(), 0.0)
            })
            .collect();
        Ok(Self { samples, center: half, dt, kind: WindowKind::Gaussian { a } })
    }

    pub fn custom(samples: Vec<Complex64>, center: usize, dt: f64) -> Result<Self> {
        if samples.is_empty() || center >= samples.len() {
            return Err(TfError::InvalidParams("window center must index a sample".into()));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(TfError::InvalidParams(format!("window spacing must be > 0, got {dt}")));
        }
        if samples.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(TfError::InvalidParams("window has non-finite samples".into()));
        }
        let w = Self { samples, center, dt, kind: WindowKind::Custom };
        if w.norm_sqr() == 0.0 {
            return Err(TfError::InvalidParams("window is identically zero".into()));
        }
        Ok(w)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    pub fn support(&self) -> usize {
        self.samples.len()
    }

    /// `dt * sum |w|^2`
    pub fn norm_sqr(&self) -> f64 {
        self.dt * self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// Value at integer offset `d` samples from the centre; zero off-support.
    #[inline]
    pub fn at(&self, d: i64) -> Complex64 {
        let i = d + self.center as i64;
        if (0..self.samples.len() as i64).contains(&i) {
            self.samples[i as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// The window placed on a signal grid with its centre at `t = 0`.
    /// Needs a grid on which `t = 0` is a sample position.
    pub fn to_signal(&self, grid: Grid) -> Result<Signal> {
        check_spacing(self, &grid)?;
        let k0 = grid.integer_origin().ok_or_else(|| {
            TfError::GridMismatch(format!("t = 0 is not a sample of grid {grid:?}"))
        })?;
        let samples = (0..grid.n as i64).map(|k| self.at(k + k0)).collect();
        Signal::new(grid, samples)
    }
}

fn check_spacing(w: &Window, grid: &Grid) -> Result<()> {
    if (w.dt - grid.dt).abs() > 1e-12 * grid.dt {
        return Err(TfError::GridMismatch(format!(
            "window spacing {} differs from signal spacing {}",
            w.dt, grid.dt
        )));
    }
    Ok(())
}

/// STFT on every signal time `x = t_k` and on `n * freq_oversample`
/// frequency bins over `[-1/(2 dt), 1/(2 dt))`; the signal is zero outside
/// its record.
pub fn stft(f: &Signal, w: &Window, freq_oversample: usize) -> Result<TimeFrequencyMatrix> {
    let grid = *f.grid();
    check_spacing(w, &grid)?;
    if freq_oversample == 0 {
        return Err(TfError::InvalidParams("frequency oversampling must be >= 1".into()));
    }
    if w.support() > grid.n {
        return Err(TfError::InvalidParams(format!(
            "window support {} exceeds signal length {}",
            w.support(),
            grid.n
        )));
    }
    if w.norm_sqr() == 0.0 {
        return Err(TfError::InvalidParams("window is identically zero".into()));
    }
    let n = grid.n;
    let len = n * freq_oversample;
    let dft = Dft::new(Grid::general(grid.t0, grid.dt, len)?);
    let x = f.samples();
    let rows = exec::map_indexed(n, |k| {
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        let lo = (k as i64 - w.center as i64).max(0) as usize;
        let hi = ((k as i64 - w.center as i64 + w.support() as i64).max(0) as usize).min(n);
        for m in lo..hi {
            buf[m] = x[m] * w.at(m as i64 - k as i64).conj();
        }
        dft.forward(&buf).expect("buffer length matches padded grid")
    });
    TimeFrequencyMatrix::new(
        grid.times(),
        dft.freq_axis(),
        MatrixValues::Complex(rows.into_iter().flatten().collect()),
    )
}
