//! Reference results: closed forms and literal O(n^2) sums.
//!
//! Everything here is deliberately plain single-threaded code that shares no
//! FFT path with the transforms it checks.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, TfError};
use crate::signal::{ensure_same_grid, GaussianParams, Grid, Signal};
use crate::transforms::{
    stft, wigner, Boundary, MatrixValues, TimeFrequencyMatrix, Window, WindowKind,
};

/// Largest signal length the direct-sum oracles accept.
pub const DIRECT_MAX_N: usize = 256;

/// A closed-form reference matrix and the formula it evaluates.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub values: TimeFrequencyMatrix,
    pub description: &'static str,
}

fn guard(n: usize, max: usize) -> Result<()> {
    if n > max {
        return Err(TfError::SizeGuard { n, max });
    }
    Ok(())
}

fn centred_freq(j: usize, n: usize, dt: f64) -> f64 {
    (j as f64 - (n / 2) as f64) / (n as f64 * dt)
}

/// `F[j] = dt * sum_k v[k] exp(-2 pi i t_k xi_j)` by direct summation.
pub fn oracle_direct_dft(v: &[Complex64], grid: &Grid) -> Result<Vec<Complex64>> {
    guard(v.len(), 2 * DIRECT_MAX_N)?;
    if v.len() != grid.n {
        return Err(TfError::InvalidInput("vector length differs from grid".into()));
    }
    Ok((0..grid.n)
        .map(|j| {
            let xi = centred_freq(j, grid.n, grid.dt);
            v.iter()
                .enumerate()
                .map(|(k, z)| z * Complex64::cis(-2.0 * PI * grid.time(k) * xi))
                .sum::<Complex64>()
                * grid.dt
        })
        .collect())
}

/// Trigonometric interpolation at half-sample spacing, summed directly.
fn direct_upsample2(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    let coeffs: Vec<Complex64> = (0..n)
        .map(|i| {
            x.iter()
                .enumerate()
                .map(|(k, z)| z * Complex64::cis(-2.0 * PI * (i * k) as f64 / n as f64))
                .sum()
        })
        .collect();
    (0..2 * n)
        .map(|p| {
            let pos = p as f64 / 2.0;
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, c) in coeffs.iter().enumerate() {
                let basis = if 2 * i == n {
                    // Nyquist term shared between +/- n/2.
                    Complex64::new((PI * pos).cos(), 0.0)
                } else {
                    let freq = if 2 * i < n { i as f64 } else { i as f64 - n as f64 };
                    Complex64::cis(2.0 * PI * freq * pos / n as f64)
                };
                acc += c * basis;
            }
            acc / n as f64
        })
        .collect()
}

fn direct_cross_wigner_values(f: &Signal, g: &Signal, boundary: Boundary) -> Result<Vec<Complex64>> {
    ensure_same_grid(f.grid(), g.grid())?;
    let grid = f.grid();
    let n = grid.n;
    guard(n, DIRECT_MAX_N)?;
    if n % 2 != 0 {
        return Err(TfError::Unsupported("Wigner needs an even sample count".into()));
    }
    let f2 = direct_upsample2(f.samples());
    let g2 = direct_upsample2(g.samples());
    let len = 2 * n as i64;
    let fetch = |v: &[Complex64], p: i64| -> Complex64 {
        match boundary {
            Boundary::Zero if p < 0 || p >= len => Complex64::new(0.0, 0.0),
            Boundary::Zero => v[p as usize],
            Boundary::Periodized => v[p.rem_euclid(len) as usize],
        }
    };
    let mut out = Vec::with_capacity(n * 2 * n);
    for k in 0..n as i64 {
        let lags: Vec<(f64, Complex64)> = (-(n as i64)..n as i64)
            .map(|m| (m as f64 * grid.dt, fetch(&f2, 2 * k + m) * fetch(&g2, 2 * k - m).conj()))
            .collect();
        for j in 0..2 * n {
            let xi = centred_freq(j, 2 * n, grid.dt);
            let s: Complex64 =
                lags.iter().map(|(tau, r)| r * Complex64::cis(-2.0 * PI * tau * xi)).sum();
            out.push(s * grid.dt);
        }
    }
    Ok(out)
}

fn wigner_axes(grid: &Grid) -> (Vec<f64>, Vec<f64>) {
    (grid.times(), (0..2 * grid.n).map(|j| centred_freq(j, 2 * grid.n, grid.dt)).collect())
}

/// Literal lag sum for the auto-Wigner distribution (real part kept).
pub fn oracle_direct_wigner(f: &Signal, boundary: Boundary) -> Result<TimeFrequencyMatrix> {
    let raw = direct_cross_wigner_values(f, f, boundary)?;
    let (t, xi) = wigner_axes(f.grid());
    TimeFrequencyMatrix::new(t, xi, MatrixValues::Real(raw.into_iter().map(|z| z.re).collect()))
}

/// Literal lag sum for the cross-Wigner distribution.
pub fn oracle_direct_cross_wigner(f: &Signal, g: &Signal, boundary: Boundary) -> Result<TimeFrequencyMatrix> {
    let raw = direct_cross_wigner_values(f, g, boundary)?;
    let (t, xi) = wigner_axes(f.grid());
    TimeFrequencyMatrix::new(t, xi, MatrixValues::Complex(raw))
}

/// Literal STFT sum `dt * sum_m f[m] conj(w(t_m - t_k)) exp(-2 pi i t_m xi_j)`.
pub fn oracle_direct_stft(f: &Signal, w: &Window, freq_oversample: usize) -> Result<TimeFrequencyMatrix> {
    let grid = f.grid();
    guard(grid.n, DIRECT_MAX_N)?;
    if freq_oversample == 0 {
        return Err(TfError::InvalidParams("frequency oversampling must be >= 1".into()));
    }
    let cols = grid.n * freq_oversample;
    let mut out = Vec::with_capacity(grid.n * cols);
    for k in 0..grid.n {
        for j in 0..cols {
            let xi = centred_freq(j, cols, grid.dt);
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, z) in f.samples().iter().enumerate() {
                let wv = w.at(m as i64 - k as i64);
                acc += z * wv.conj() * Complex64::cis(-2.0 * PI * grid.time(m) * xi);
            }
            out.push(acc * grid.dt);
        }
    }
    TimeFrequencyMatrix::new(
        grid.times(),
        (0..cols).map(|j| centred_freq(j, cols, grid.dt)).collect(),
        MatrixValues::Complex(out),
    )
}

/// Multiplicative constant of the generalized-Gaussian Wigner closed form,
/// fixed so that the double integral equals `||f||^2`:
/// `C = ||f||^2 / (int exp(-2 pi (Re a t^2 - 2 Re b t)) dt * int exp(-2 pi u^2 / Re a) du)`.
pub fn gaussian_wigner_constant(params: &GaussianParams) -> Result<f64> {
    params.validate()?;
    let ra = params.a.re;
    let rb = params.b.re;
    let time_integral = (1.0 / (2.0 * ra)).sqrt() * (2.0 * PI * rb * rb / ra).exp();
    let freq_integral = (ra / 2.0).sqrt();
    Ok(params.l2_norm_sqr() / (time_integral * freq_integral))
}

/// Closed-form Wigner distribution of `exp(-pi a t^2 + 2 pi b t + c)`:
/// `C exp(-2 pi (Re a t^2 - 2 Re b t)) exp(-2 pi (xi + Im a t - Im b)^2 / Re a)`.
pub fn oracle_gaussian_wigner(params: &GaussianParams, times: &[f64], freqs: &[f64]) -> Result<OracleResult> {
    let cst = gaussian_wigner_constant(params)?;
    let (ra, ia) = (params.a.re, params.a.im);
    let (rb, ib) = (params.b.re, params.b.im);
    let mut values = Vec::with_capacity(times.len() * freqs.len());
    for &t in times {
        let time_part = (-2.0 * PI * (ra * t * t - 2.0 * rb * t)).exp();
        for &xi in freqs {
            let u = xi + ia * t - ib;
            values.push(cst * time_part * (-2.0 * PI * u * u / ra).exp());
        }
    }
    Ok(OracleResult {
        values: TimeFrequencyMatrix::new(times.to_vec(), freqs.to_vec(), MatrixValues::Real(values))?,
        description: "C exp(-2pi(Re a t^2 - 2 Re b t)) exp(-2pi (xi + Im a t - Im b)^2 / Re a)",
    })
}

/// Wigner ridge of the chirp `exp(pi i rate t^2)`: `xi*(t) = rate t`.
pub fn oracle_chirp_ridge(rate: f64, times: &[f64]) -> Vec<f64> {
    times.iter().map(|t| rate * t).collect()
}

/// Peak-normalized `|V_w f|` for `f = exp(2 pi i eta0 t^2)` and the window
/// `exp(-2 pi t^2)` (`window_a = 2`):
/// `exp(-2 pi / (1 + eta0^2) (eta0 x - eta / 2)^2)`.
pub fn oracle_chirp_stft_mag(eta0: f64, window_a: f64, xs: &[f64], etas: &[f64]) -> Result<OracleResult> {
    if window_a != 2.0 {
        return Err(TfError::Unsupported(format!(
            "closed-form chirp STFT is only known for window a = 2, got {window_a}"
        )));
    }
    let k = 2.0 * PI / (1.0 + eta0 * eta0);
    let mut values: Vec<f64> = Vec::with_capacity(xs.len() * etas.len());
    for &x in xs {
        for &eta in etas {
            let d = eta0 * x - 0.5 * eta;
            values.push((-k * d * d).exp());
        }
    }
    let peak = values.iter().cloned().fold(0.0, f64::max);
    if peak > 0.0 {
        for v in &mut values {
            *v /= peak;
        }
    }
    Ok(OracleResult {
        values: TimeFrequencyMatrix::new(xs.to_vec(), etas.to_vec(), MatrixValues::Real(values))?,
        description: "exp(-2pi/(1+eta0^2) (eta0 x - eta/2)^2), peak-normalized",
    })
}

/// Entries below this fraction of the peak are ignored by
/// [`oracle_wigner_window_identity`].
pub const WINDOW_IDENTITY_FLOOR: f64 = 1e-9;

/// Checks `F[W_f W_w](eta, x) = V_w f(-x/2, eta/2) conj(V_w f(x/2, -eta/2))`,
/// where `F` is the 2-D Fourier transform with `eta` dual to time and `x`
/// dual to frequency.
///
/// The left side is a direct separable 2-D DFT of the product of the two
/// Wigner matrices; its dual grid has `eta` spacing `1/(n dt)` and `x`
/// spacing `dt`. Only `x` values that are even multiples of `dt` map onto
/// STFT sample times, and `eta / 2` lands on the 2x-oversampled STFT
/// frequency grid. The grid must be centred (`t0 = -(n/2) dt`).
///
/// Returns `max |lhs - rhs| / peak` over entries where either side exceeds
/// `WINDOW_IDENTITY_FLOOR * peak`, `peak = max |rhs|`; zero when both sides
/// vanish.
pub fn oracle_wigner_window_identity(f: &Signal, w: &Window) -> Result<f64> {
    let grid = *f.grid();
    let n = grid.n;
    if grid.integer_origin() != Some(-((n / 2) as i64)) {
        return Err(TfError::GridMismatch(format!(
            "window identity needs a centred grid (t0 = -(n/2) dt), got t0 = {}",
            grid.t0
        )));
    }
    if !matches!(w.kind(), WindowKind::Gaussian { .. }) {
        return Err(TfError::Unsupported("window identity check expects a Gaussian window".into()));
    }
    let phi = w.to_signal(grid)?;
    let wf = wigner(f, Boundary::Zero)?;
    let ww = wigner(&phi, Boundary::Zero)?;
    let product: Vec<f64> = wf
        .real_values()?
        .iter()
        .zip(ww.real_values()?)
        .map(|(a, b)| a * b)
        .collect();
    let cols = 2 * n;
    let dt = grid.dt;
    let dxi = 1.0 / (cols as f64 * dt);
    let xis: Vec<f64> = (0..cols).map(|j| centred_freq(j, cols, dt)).collect();

    // Even x indices only: x_q = 2 s dt, s in [-n/2, n/2).
    let xs: Vec<(i64, f64)> = (-((n / 2) as i64)..(n / 2) as i64).map(|s| (s, 2.0 * s as f64 * dt)).collect();
    // Inner transform over frequency for each time row.
    let mut partial = vec![Complex64::new(0.0, 0.0); n * xs.len()];
    for k in 0..n {
        let row = &product[k * cols..(k + 1) * cols];
        for (qi, &(_, x)) in xs.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (val, xi) in row.iter().zip(&xis) {
                acc += *val * Complex64::cis(-2.0 * PI * x * xi);
            }
            partial[k * xs.len() + qi] = acc * dxi;
        }
    }

    let v = stft(f, w, 2)?;
    let vv = v.complex_values()?;
    let vcols = v.cols();
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for p in 0..n {
        let eta = centred_freq(p, n, dt);
        let pi = p as i64 - (n / 2) as i64;
        for (qi, &(s, _)) in xs.iter().enumerate() {
            // Time index of -x/2 = -s dt and of x/2 = s dt.
            let k_minus = (n / 2) as i64 - s;
            let k_plus = (n / 2) as i64 + s;
            if !(0..n as i64).contains(&k_minus) || !(0..n as i64).contains(&k_plus) {
                continue;
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += partial[k * xs.len() + qi] * Complex64::cis(-2.0 * PI * eta * grid.time(k));
            }
            lhs.push(acc * dt);
            // +eta/2 and -eta/2 on the 2n-bin STFT axis.
            let j_plus = (pi + n as i64) as usize;
            let j_minus = (n as i64 - pi) as usize;
            if j_minus >= vcols {
                lhs.pop();
                continue;
            }
            let a = vv[k_minus as usize * vcols + j_plus];
            let b = vv[k_plus as usize * vcols + j_minus];
            rhs.push(a * b.conj());
        }
    }
    let peak = rhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        let lhs_peak = lhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        return Ok(if lhs_peak == 0.0 { 0.0 } else { f64::INFINITY });
    }
    let floor = WINDOW_IDENTITY_FLOOR * peak;
    Ok(lhs
        .iter()
        .zip(&rhs)
        .filter(|(l, r)| l.norm() >= floor || r.norm() >= floor)
        .map(|(l, r)| (l - r).norm() / peak)
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{gen_gaussian, gen_random};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn size_guard() {
        let g = Grid::new(0.0, 1.0, 258).unwrap();
        let f = Signal::new(g, vec![c(0.0, 0.0); 258]).unwrap();
        assert!(matches!(oracle_direct_wigner(&f, Boundary::Zero), Err(TfError::SizeGuard { .. })));
    }

    #[test]
    fn zero_input_zero_output() {
        let g = Grid::new(0.0, 0.5, 8).unwrap();
        let f = Signal::new(g, vec![c(0.0, 0.0); 8]).unwrap();
        let w = oracle_direct_wigner(&f, Boundary::Zero).unwrap();
        assert!(w.real_values().unwrap().iter().all(|&x| x == 0.0));
        let win = Window::gaussian(1.0, 0.5, 7).unwrap();
        let s = oracle_direct_stft(&f, &win, 1).unwrap();
        assert!(s.complex_values().unwrap().iter().all(|z| z.norm() == 0.0));
        assert!(oracle_direct_dft(&[c(0.0, 0.0); 8], &g).unwrap().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn direct_upsample_reproduces_samples() {
        let g = Grid::new(0.0, 1.0, 16).unwrap();
        let f = gen_random(g, 8).unwrap();
        let up = direct_upsample2(f.samples());
        for k in 0..16 {
            assert!((up[2 * k] - f.samples()[k]).norm() < 1e-13);
        }
    }

    #[test]
    fn gaussian_constant_matches_tau_integral() {
        // Evaluating the tau integral directly gives C = sqrt(2 / Re a) exp(2 Re c).
        for (a, b, cc) in [
            (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)),
            (c(2.0, 1.0), c(0.3, 0.5), c(0.1, 0.7)),
            (c(0.5, -3.0), c(-1.0, 0.2), c(-0.4, 0.0)),
        ] {
            let p = GaussianParams::new(a, b, cc).unwrap();
            let expect = (2.0 / a.re).sqrt() * (2.0 * cc.re).exp();
            assert!((gaussian_wigner_constant(&p).unwrap() - expect).abs() < 1e-13 * expect);
        }
    }

    #[test]
    fn gaussian_constant_by_quadrature() {
        // Independent numeric check: trapezoid quadrature of the tau integral at t = 0, xi = 0.
        let p = GaussianParams::new(c(1.5, 0.7), c(0.2, -0.3), c(0.25, 0.0)).unwrap();
        let h = 1e-3;
        let mut acc = 0.0;
        for i in -20_000..=20_000 {
            let tau = i as f64 * h;
            let z = p.eval(tau / 2.0) * p.eval(-tau / 2.0).conj();
            acc += z.re * h;
        }
        let closed = oracle_gaussian_wigner(&p, &[0.0, 1.0], &[0.0, 1.0]).unwrap();
        let v = closed.values.real_values().unwrap()[0];
        assert!((acc - v).abs() < 1e-10 * v, "{acc} vs {v}");
    }

    #[test]
    fn unit_gaussian_closed_form() {
        let p = GaussianParams::real(1.0).unwrap().unit_norm();
        let ts = [-0.5, 0.0, 0.5];
        let xs = [-1.0, 0.0, 1.0];
        let o = oracle_gaussian_wigner(&p, &ts, &xs).unwrap();
        let v = o.values.real_values().unwrap();
        for (i, t) in ts.iter().enumerate() {
            for (j, xi) in xs.iter().enumerate() {
                let expect = 2.0 * (-2.0 * PI * (t * t + xi * xi)).exp();
                assert!((v[i * 3 + j] - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn gaussian_closed_form_ridges() {
        let ts: Vec<f64> = (-8..=8).map(|k| k as f64 * 0.25).collect();
        let xs: Vec<f64> = (-400..=400).map(|j| j as f64 * 0.01).collect();
        let argmax = |m: &TimeFrequencyMatrix, i: usize| {
            let row = m.real_row(i).unwrap();
            let j = (0..row.len()).max_by(|&a, &b| row[a].total_cmp(&row[b])).unwrap();
            m.freq_axis()[j]
        };
        let tilted = GaussianParams::new(c(1.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        let o = oracle_gaussian_wigner(&tilted, &ts, &xs).unwrap();
        for (i, t) in ts.iter().enumerate() {
            assert!((argmax(&o.values, i) + t).abs() < 1e-9);
        }
        let shifted = GaussianParams::new(c(1.0, 0.0), c(0.0, 0.5), c(0.0, 0.0)).unwrap();
        let o = oracle_gaussian_wigner(&shifted, &ts, &xs).unwrap();
        for i in 0..ts.len() {
            assert!((argmax(&o.values, i) - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn chirp_ridge_values() {
        assert_eq!(oracle_chirp_ridge(0.0, &[1.0, 2.0]), vec![0.0, 0.0]);
        assert_eq!(oracle_chirp_ridge(2.0, &[0.25]), vec![0.5]);
        assert_eq!(oracle_chirp_ridge(-1.0, &[1.0]), vec![-1.0]);
    }

    #[test]
    fn chirp_stft_closed_form() {
        let xs = [-1.0, 0.0, 1.0];
        let etas = [-2.0, 0.0, 2.0];
        let o = oracle_chirp_stft_mag(1.0, 2.0, &xs, &etas).unwrap();
        let v = o.values.real_values().unwrap();
        // Ridge eta = 2 x is maximal.
        assert_eq!(v[0], 1.0);
        assert_eq!(v[4], 1.0);
        assert_eq!(v[8], 1.0);
        // (x, eta) = (1, 0): exp(-pi).
        assert!((v[7] - (-PI).exp()).abs() < 1e-15);
        let flat = oracle_chirp_stft_mag(0.0, 2.0, &xs, &etas).unwrap();
        let f = flat.values.real_values().unwrap();
        for j in 0..3 {
            assert_eq!(f[j], f[3 + j]);
            assert_eq!(f[j], f[6 + j]);
        }
        assert!(oracle_chirp_stft_mag(1.0, 1.0, &xs, &etas).is_err());
    }

    #[test]
    fn window_identity_zero_signal() {
        let g = Grid::centered(0.125, 32).unwrap();
        let f = Signal::new(g, vec![c(0.0, 0.0); 32]).unwrap();
        let w = Window::gaussian(1.0, 0.125, 31).unwrap();
        assert_eq!(oracle_wigner_window_identity(&f, &w).unwrap(), 0.0);
    }

    #[test]
    fn window_identity_needs_centred_grid() {
        let g = Grid::new(0.0, 0.125, 32).unwrap();
        let f = gen_gaussian(g, GaussianParams::real(1.0).unwrap()).unwrap();
        let w = Window::gaussian(1.0, 0.125, 31).unwrap();
        assert!(matches!(oracle_wigner_window_identity(&f, &w), Err(TfError::GridMismatch(_))));
    }
}
