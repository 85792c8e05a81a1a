//! Instantaneous frequency `(2 pi)^-1 d/dt arg f(t)` by two routes: the phase
//! gradient `(u v' - v u') / (2 pi (u^2 + v^2))` for `f = u + i v`, and the
//! normalized first frequency moment of each Wigner row.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TfError};
use crate::exec;
use crate::fourier::{central_difference, spectral_derivative};
use crate::signal::Signal;
use crate::transforms::{first_freq_moment, wigner, Boundary, TimeFrequencyMatrix};

/// Default validity threshold, relative to the largest `|f|^2` (phase
/// gradient) or the largest moment denominator.
pub const DEFAULT_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    PhaseGradient,
    Moment,
}

impl Estimator {
    pub fn tag(&self) -> &'static str {
        match self {
            Estimator::PhaseGradient => "phase_gradient",
            Estimator::Moment => "moment",
        }
    }
}

/// How `f'` is obtained for the phase gradient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Derivative {
    /// Exact for band-limited records.
    #[default]
    Spectral,
    /// Second-order central differences, for inputs that are not band-limited.
    CentralDifference,
}

/// Per-sample IF estimate. Invalid samples hold NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct IFTrack {
    pub time_axis: Vec<f64>,
    pub values: Vec<f64>,
    pub valid: Vec<bool>,
    pub threshold: f64,
    pub estimator: Estimator,
}

impl IFTrack {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn n_valid(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }

    /// `(min, max)` over valid samples, `None` when nothing is valid.
    pub fn range(&self) -> Option<(f64, f64)> {
        self.values
            .iter()
            .zip(&self.valid)
            .filter(|(_, &ok)| ok)
            .fold(None, |acc, (&v, _)| match acc {
                None => Some((v, v)),
                Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
            })
    }
}

fn check_threshold(threshold: f64) -> Result<()> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(TfError::InvalidParams(format!("threshold must lie in (0, 1), got {threshold}")));
    }
    Ok(())
}

fn masked_track(
    time_axis: Vec<f64>,
    raw: Vec<f64>,
    weight: &[f64],
    threshold: f64,
    estimator: Estimator,
) -> IFTrack {
    let peak = weight.iter().cloned().fold(0.0, f64::max);
    let valid: Vec<bool> =
        weight.iter().zip(&raw).map(|(&w, v)| peak > 0.0 && w >= threshold * peak && v.is_finite()).collect();
    let values = raw.into_iter().zip(&valid).map(|(v, &ok)| if ok { v } else { f64::NAN }).collect();
    IFTrack { time_axis, values, valid, threshold, estimator }
}

/// Phase-gradient IF with the default threshold and spectral derivative.
pub fn if_phase_gradient(f: &Signal) -> Result<IFTrack> {
    if_phase_gradient_with(f, DEFAULT_THRESHOLD, Derivative::Spectral)
}

pub fn if_phase_gradient_with(f: &Signal, threshold: f64, derivative: Derivative) -> Result<IFTrack> {
    check_threshold(threshold)?;
    let dt = f.grid().dt;
    let x = f.samples();
    let dx = match derivative {
        Derivative::Spectral => spectral_derivative(x, dt),
        Derivative::CentralDifference => central_difference(x, dt),
    };
    let power: Vec<f64> = x.iter().map(|z| z.norm_sqr()).collect();
    let raw = exec::map_indexed(x.len(), |k| {
        let (u, v) = (x[k].re, x[k].im);
        let (du, dv) = (dx[k].re, dx[k].im);
        (u * dv - v * du) / (2.0 * PI * power[k])
    });
    Ok(masked_track(f.grid().times(), raw, &power, threshold, Estimator::PhaseGradient))
}

/// Moment IF: `sum xi W / sum W` per Wigner row, valid where the row
/// integral reaches `threshold` times its maximum.
pub fn if_moment(f: &Signal, threshold: f64, boundary: Boundary) -> Result<IFTrack> {
    let w = wigner(f, boundary)?;
    if_moment_from_wigner(&w, threshold)
}

pub fn if_moment_from_wigner(w: &TimeFrequencyMatrix, threshold: f64) -> Result<IFTrack> {
    check_threshold(threshold)?;
    let mut raw = Vec::with_capacity(w.rows());
    let mut den = Vec::with_capacity(w.rows());
    for k in 0..w.rows() {
        let (num, d) = first_freq_moment(w, k)?;
        raw.push(if d != 0.0 { num / d } else { f64::NAN });
        den.push(d);
    }
    Ok(masked_track(w.time_axis().to_vec(), raw, &den, threshold, Estimator::Moment))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IfComparison {
    pub max_abs_err: f64,
    pub rms_err: f64,
    pub n_compared: usize,
}

/// Error statistics over samples valid in both tracks.
pub fn compare_if(a: &IFTrack, b: &IFTrack) -> Result<IfComparison> {
    let same_axis = a.time_axis.len() == b.time_axis.len()
        && a.time_axis.iter().zip(&b.time_axis).all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1e-300));
    if !same_axis {
        return Err(TfError::GridMismatch("IF tracks have different time axes".into()));
    }
    let mut max_abs_err = 0.0f64;
    let mut sq = 0.0;
    let mut n_compared = 0;
    for k in 0..a.len() {
        if a.valid[k] && b.valid[k] {
            let e = (a.values[k] - b.values[k]).abs();
            max_abs_err = max_abs_err.max(e);
            sq += e * e;
            n_compared += 1;
        }
    }
    let rms_err = if n_compared > 0 { (sq / n_compared as f64).sqrt() } else { 0.0 };
    Ok(IfComparison { max_abs_err, rms_err, n_compared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{gen_chirp, gen_gaussian, gen_tone, ChirpParams, GaussianParams, Grid};
    use num_complex::Complex64;

    #[test]
    fn tone_phase_gradient_is_constant() {
        let g = Grid::new(0.0, 10.0 / 512.0, 512).unwrap();
        let f = gen_tone(g, 0.3, Complex64::new(1.0, 0.0)).unwrap();
        let t = if_phase_gradient(&f).unwrap();
        assert_eq!(t.n_valid(), 512);
        for v in &t.values {
            assert!((v - 0.3).abs() < 1e-9, "{v}");
        }
    }

    #[test]
    fn tone_moment_periodized() {
        let g = Grid::new(0.0, 10.0 / 512.0, 512).unwrap();
        let f = gen_tone(g, 0.3, Complex64::new(0.0, 2.0)).unwrap();
        let t = if_moment(&f, DEFAULT_THRESHOLD, Boundary::Periodized).unwrap();
        for v in &t.values {
            assert!((v - 0.3).abs() < 1e-9, "{v}");
        }
    }

    #[test]
    fn gaussian_with_imaginary_a() {
        let g = Grid::centered(1.0 / 32.0, 512).unwrap();
        let p = GaussianParams::new(Complex64::new(1.0, 1.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        let f = gen_gaussian(g, p).unwrap();
        let t = if_phase_gradient(&f).unwrap();
        assert!(t.n_valid() > 60);
        for k in 0..t.len() {
            if t.valid[k] {
                assert!((t.values[k] + t.time_axis[k]).abs() < 1e-8, "t = {}", t.time_axis[k]);
            }
        }
    }

    #[test]
    fn chirp_phase_gradient_is_linear() {
        let g = Grid::centered(1.0 / 64.0, 1024).unwrap();
        let env = GaussianParams::real(0.2).unwrap();
        let f = gen_chirp(g, ChirpParams::new(2.0).unwrap(), Some(env)).unwrap();
        let t = if_phase_gradient(&f).unwrap();
        for k in 0..t.len() {
            if t.valid[k] {
                assert!((t.values[k] - 2.0 * t.time_axis[k]).abs() < 1e-6, "t = {} err = {}", t.time_axis[k], t.values[k] - 2.0 * t.time_axis[k]);
            }
        }
    }

    #[test]
    fn zero_signal_is_all_invalid() {
        let g = Grid::new(0.0, 0.1, 16).unwrap();
        let f = Signal::new(g, vec![Complex64::new(0.0, 0.0); 16]).unwrap();
        let a = if_phase_gradient(&f).unwrap();
        let b = if_moment(&f, DEFAULT_THRESHOLD, Boundary::Zero).unwrap();
        assert_eq!(a.n_valid(), 0);
        assert_eq!(b.n_valid(), 0);
        assert!(a.values.iter().all(|v| v.is_nan()));
        let c = compare_if(&a, &b).unwrap();
        assert_eq!((c.max_abs_err, c.rms_err, c.n_compared), (0.0, 0.0, 0));
    }

    #[test]
    fn identical_tracks_compare_to_zero() {
        let g = Grid::new(0.0, 0.1, 16).unwrap();
        let f = gen_tone(g, 1.0, Complex64::new(1.0, 0.0)).unwrap();
        let a = if_phase_gradient(&f).unwrap();
        let c = compare_if(&a, &a).unwrap();
        assert_eq!((c.max_abs_err, c.rms_err, c.n_compared), (0.0, 0.0, 16));
    }

    #[test]
    fn axis_mismatch_rejected() {
        let f = gen_tone(Grid::new(0.0, 0.1, 16).unwrap(), 1.0, Complex64::new(1.0, 0.0)).unwrap();
        let h = gen_tone(Grid::new(1.0, 0.1, 16).unwrap(), 1.0, Complex64::new(1.0, 0.0)).unwrap();
        let a = if_phase_gradient(&f).unwrap();
        let b = if_phase_gradient(&h).unwrap();
        assert!(compare_if(&a, &b).is_err());
    }

    #[test]
    fn bad_threshold_rejected() {
        let f = gen_tone(Grid::new(0.0, 0.1, 16).unwrap(), 1.0, Complex64::new(1.0, 0.0)).unwrap();
        assert!(if_phase_gradient_with(&f, 0.0, Derivative::Spectral).is_err());
        assert!(if_moment(&f, 1.0, Boundary::Zero).is_err());
    }
}
