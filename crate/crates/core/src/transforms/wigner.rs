//! Discrete Wigner and cross-Wigner distributions.
//!
//! Half-sample arguments `f(t +/- tau/2)` come from a 2x band-limited
//! interpolation `f2` of the record. For time index `k` and lag `m` in
//! `[-n, n)` the lag product is `r_k[m] = f2[2k + m] * conj(g2[2k - m])`,
//! i.e. lag `tau = m dt`, and the row `W(t_k, .)` is the grid DFT of `r_k`
//! over the lag axis `tau_m = m dt`. The output has `n` time rows and `2n`
//! frequency columns spanning `[-1/(2 dt), 1/(2 dt))`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TfError};
use crate::exec;
use crate::fourier::{self, Dft};
use crate::signal::{ensure_same_grid, Grid, Signal};
use crate::transforms::matrix::{MatrixValues, TimeFrequencyMatrix};

/// How the record is extended beyond its ends when forming lag products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Zero outside the record.
    #[default]
    Zero,
    /// Circular indexing; makes whole-bin shift covariance exact.
    Periodized,
}

impl std::str::FromStr for Boundary {
    type Err = TfError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(Boundary::Zero),
            "periodized" => Ok(Boundary::Periodized),
            other => Err(TfError::InvalidParams(format!(
                "unknown boundary mode {other:?} (expected zero or periodized)"
            ))),
        }
    }
}

/// Imaginary residue allowed in an auto-Wigner row, relative to the peak.
pub const REALNESS_TOLERANCE: f64 = 1e-10;

/// Lag axis `tau_m = m dt`, `m = -n .. n-1`, on which Wigner rows are transformed.
pub fn lag_grid(grid: &Grid) -> Grid {
    Grid { t0: -(grid.n as f64) * grid.dt, dt: grid.dt, n: 2 * grid.n }
}

fn check_signal(f: &Signal) -> Result<()> {
    let n = f.grid().n;
    if n % 2 != 0 {
        return Err(TfError::Unsupported(format!("Wigner needs an even sample count, got {n}")));
    }
    if f.samples().iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(TfError::InvalidInput("signal has non-finite samples".into()));
    }
    Ok(())
}

fn lag_row(f2: &[Complex64], g2: &[Complex64], k: usize, boundary: Boundary) -> Vec<Complex64> {
    let len = f2.len() as i64;
    let n = len / 2;
    let centre = 2 * k as i64;
    (-n..n)
        .map(|m| {
            let (p, q) = (centre + m, centre - m);
            match boundary {
                Boundary::Zero => {
                    if (0..len).contains(&p) && (0..len).contains(&q) {
                        f2[p as usize] * g2[q as usize].conj()
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                }
                Boundary::Periodized => {
                    f2[p.rem_euclid(len) as usize] * g2[q.rem_euclid(len) as usize].conj()
                }
            }
        })
        .collect()
}

/// Lag products `r_k[m] = f2[2k + m] conj(g2[2k - m])` for `m = -n .. n-1`,
/// the discrete form of `f(t + tau/2) conj(g(t - tau/2))` at `t = t_k`.
pub fn lag_products(f: &Signal, g: &Signal, k: usize, boundary: Boundary) -> Result<Vec<Complex64>> {
    check_signal(f)?;
    check_signal(g)?;
    ensure_same_grid(f.grid(), g.grid())?;
    if k >= f.len() {
        return Err(TfError::IndexOutOfRange { index: k, len: f.len() });
    }
    let f2 = fourier::upsample2(f.samples());
    let g2 = fourier::upsample2(g.samples());
    Ok(lag_row(&f2, &g2, k, boundary))
}

fn raw_rows(f: &Signal, g: &Signal, boundary: Boundary) -> Vec<Vec<Complex64>> {
    let f2 = fourier::upsample2(f.samples());
    let g2 = if std::ptr::eq(f, g) { f2.clone() } else { fourier::upsample2(g.samples()) };
    let dft = Dft::new(lag_grid(f.grid()));
    exec::map_indexed(f.len(), |k| {
        dft.forward(&lag_row(&f2, &g2, k, boundary)).expect("lag row length matches lag grid")
    })
}

fn axes(grid: &Grid) -> (Vec<f64>, Vec<f64>) {
    (grid.times(), fourier::freq_axis(2 * grid.n, grid.dt))
}

/// Auto-Wigner distribution `W_f`. Errors if the raw rows carry an imaginary
/// part above `REALNESS_TOLERANCE` times the peak.
pub fn wigner(f: &Signal, boundary: Boundary) -> Result<TimeFrequencyMatrix> {
    check_signal(f)?;
    let rows = raw_rows(f, f, boundary);
    let (mut peak, mut residue) = (0.0f64, 0.0f64);
    for z in rows.iter().flatten() {
        peak = peak.max(z.re.abs());
        residue = residue.max(z.im.abs());
    }
    if residue > REALNESS_TOLERANCE * peak {
        return Err(TfError::RealnessViolation { residue, peak });
    }
    let values = rows.into_iter().flatten().map(|z| z.re).collect();
    let (t, xi) = axes(f.grid());
    TimeFrequencyMatrix::new(t, xi, MatrixValues::Real(values))
}

/// Cross-Wigner distribution `W_{f,g}`; complex in general.
pub fn cross_wigner(f: &Signal, g: &Signal, boundary: Boundary) -> Result<TimeFrequencyMatrix> {
    check_signal(f)?;
    check_signal(g)?;
    ensure_same_grid(f.grid(), g.grid())?;
    let values = raw_rows(f, g, boundary).into_iter().flatten().collect();
    let (t, xi) = axes(f.grid());
    TimeFrequencyMatrix::new(t, xi, MatrixValues::Complex(values))
}

/// Circularly delays `f` by `shift_samples` and modulates it by `mod_bins`
/// DFT bins of the signal grid (`mod_bins / (n dt)` cycles per second).
///
/// In periodized mode the Wigner matrix of the result is the input's matrix
/// rolled by `shift_samples` rows and `2 * mod_bins` columns (the Wigner
/// frequency grid is twice as fine as the signal's DFT grid).
pub fn modulate_translate(f: &Signal, shift_samples: i64, mod_bins: i64) -> Result<Signal> {
    let n = f.len() as i64;
    let src = f.samples();
    let samples = (0..n)
        .map(|k| {
            let from = (k - shift_samples).rem_euclid(n) as usize;
            let turns = (mod_bins * k).rem_euclid(n);
            src[from] * Complex64::cis(2.0 * PI * turns as f64 / n as f64)
        })
        .collect();
    Signal::new(*f.grid(), samples)
}

/// Column shift produced by [`modulate_translate`] with `mod_bins`.
pub fn wigner_column_shift(mod_bins: i64) -> i64 {
    2 * mod_bins
}
