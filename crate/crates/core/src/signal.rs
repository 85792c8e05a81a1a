//! Sampled signals and the deterministic generators used as fixtures.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TfError};
use crate::fourier::{self, Direction};

/// Uniform time grid `t_k = t0 + k * dt`, `0 <= k < n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub t0: f64,
    pub dt: f64,
    pub n: usize,
}

impl Grid {
    /// Builds a grid for signals. `n` must be even and at least 2.
    pub fn new(t0: f64, dt: f64, n: usize) -> Result<Self> {
        let grid = Self::general(t0, dt, n)?;
        if n < 2 || n % 2 != 0 {
            return Err(TfError::InvalidParams(format!(
                "signal grids need an even sample count >= 2, got {n}"
            )));
        }
        Ok(grid)
    }

    /// Grid centred on `t = 0`: `t0 = -(n/2) dt`.
    pub fn centered(dt: f64, n: usize) -> Result<Self> {
        Self::new(-((n / 2) as f64) * dt, dt, n)
    }

    /// Grid without the even-length constraint, for lag axes and padded DFTs.
    pub fn general(t0: f64, dt: f64, n: usize) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(TfError::InvalidParams(format!("dt must be finite and > 0, got {dt}")));
        }
        if !t0.is_finite() {
            return Err(TfError::InvalidParams(format!("t0 must be finite, got {t0}")));
        }
        if n == 0 {
            return Err(TfError::InvalidParams("grid needs at least one sample".into()));
        }
        Ok(Self { t0, dt, n })
    }

    #[inline]
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.time(k)).collect()
    }

    /// Record duration `n * dt`.
    pub fn duration(&self) -> f64 {
        self.n as f64 * self.dt
    }

    /// Nyquist frequency `1 / (2 dt)`.
    pub fn nyquist(&self) -> f64 {
        0.5 / self.dt
    }

    /// `t0 / dt` when it is an integer (to 1e-9), which lets phase factors be
    /// reduced exactly in integer arithmetic.
    pub(crate) fn integer_origin(&self) -> Option<i64> {
        let q = self.t0 / self.dt;
        let r = q.round();
        ((q - r).abs() <= 1e-9 && r.abs() < 1e15).then_some(r as i64)
    }
}

/// A uniformly sampled complex signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    grid: Grid,
    samples: Vec<Complex64>,
}

impl Signal {
    pub fn new(grid: Grid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.n {
            return Err(TfError::InvalidInput(format!(
                "sample count {} does not match grid n = {}",
                samples.len(),
                grid.n
            )));
        }
        if let Some(k) = samples.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(TfError::InvalidInput(format!("sample {k} is not finite")));
        }
        Ok(Self { grid, samples })
    }

    /// Samples `f(t_k)` for every grid time.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let samples = (0..grid.n).map(|k| f(grid.time(k))).collect();
        Self::new(grid, samples)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Riemann-sum energy `dt * sum |f_k|^2`.
    pub fn energy(&self) -> f64 {
        self.grid.dt * self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// Energy-weighted mean time `sum t |f|^2 / sum |f|^2`; the record
    /// midpoint for the zero signal.
    pub fn temporal_centroid(&self) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (k, z) in self.samples.iter().enumerate() {
            let w = z.norm_sqr();
            num += self.grid.time(k) * w;
            den += w;
        }
        if den > 0.0 {
            num / den
        } else {
            self.grid.time(0) + 0.5 * (self.grid.n - 1) as f64 * self.grid.dt
        }
    }

    /// Pointwise product on a shared grid.
    pub fn multiply(&self, other: &Signal) -> Result<Signal> {
        ensure_same_grid(&self.grid, &other.grid)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).collect();
        Signal::new(self.grid, samples)
    }

    pub fn scale(&self, factor: Complex64) -> Result<Signal> {
        Signal::new(self.grid, self.samples.iter().map(|z| z * factor).collect())
    }

    pub fn add(&self, other: &Signal) -> Result<Signal> {
        ensure_same_grid(&self.grid, &other.grid)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect();
        Signal::new(self.grid, samples)
    }
}

pub(crate) fn ensure_same_grid(a: &Grid, b: &Grid) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(TfError::GridMismatch(format!("{a:?} vs {b:?}")))
    }
}

/// Generalized Gaussian `exp(-pi a t^2 + 2 pi b t + c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl GaussianParams {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Result<Self> {
        let p = Self { a, b, c };
        p.validate()?;
        Ok(p)
    }

    /// Real Gaussian `exp(-pi a t^2)`.
    pub fn real(a: f64) -> Result<Self> {
        Self::new(Complex64::new(a, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.a, self.b, self.c].iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(TfError::InvalidParams("Gaussian parameters must be finite".into()));
        }
        if self.a.re <= 0.0 {
            return Err(TfError::InvalidParams(format!(
                "Gaussian needs Re a > 0, got a = {}",
                self.a
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn eval(&self, t: f64) -> Complex64 {
        (-PI * self.a * t * t + 2.0 * PI * self.b * t + self.c).exp()
    }

    /// Closed-form `||f||^2` over the real line.
    pub fn l2_norm_sqr(&self) -> f64 {
        let ra = self.a.re;
        let rb = self.b.re;
        (2.0 * self.c.re).exp() * (1.0 / (2.0 * ra)).sqrt() * (2.0 * PI * rb * rb / ra).exp()
    }

    /// Returns a copy with `c` chosen so that `||f||_2 = 1`.
    pub fn unit_norm(mut self) -> Self {
        self.c = Complex64::new(self.c.re - 0.5 * self.l2_norm_sqr().ln(), self.c.im);
        self
    }
}

/// Linear chirp `exp(pi i rate t^2) = exp(2 pi i eta0 t^2)` with `rate = 2 eta0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChirpParams {
    pub rate: f64,
}

impl ChirpParams {
    pub fn new(rate: f64) -> Result<Self> {
        if !rate.is_finite() {
            return Err(TfError::InvalidParams(format!("chirp rate must be finite, got {rate}")));
        }
        Ok(Self { rate })
    }

    pub fn from_eta0(eta0: f64) -> Result<Self> {
        Self::new(2.0 * eta0)
    }

    pub fn eta0(&self) -> f64 {
        self.rate / 2.0
    }
}

/// Complex tone `amplitude * exp(2 pi i xi0 t)`.
pub fn gen_tone(grid: Grid, xi0: f64, amplitude: Complex64) -> Result<Signal> {
    if amplitude == Complex64::new(0.0, 0.0) {
        return Err(TfError::InvalidParams("tone amplitude must be nonzero".into()));
    }
    if !xi0.is_finite() {
        return Err(TfError::InvalidParams(format!("tone frequency must be finite, got {xi0}")));
    }
    Signal::from_fn(grid, |t| amplitude * Complex64::cis(2.0 * PI * xi0 * t))
}

pub fn gen_gaussian(grid: Grid, params: GaussianParams) -> Result<Signal> {
    params.validate()?;
    Signal::from_fn(grid, |t| params.eval(t))
}

/// `exp(pi i rate t^2) h(t)` where `h` is the optional Gaussian envelope.
pub fn gen_chirp(grid: Grid, params: ChirpParams, envelope: Option<GaussianParams>) -> Result<Signal> {
    if let Some(env) = &envelope {
        env.validate()?;
    }
    let rate = params.rate;
    Signal::from_fn(grid, |t| {
        let carrier = Complex64::cis(PI * rate * t * t);
        match &envelope {
            Some(env) => carrier * env.eval(t),
            // Same product as gen_tone, so signed zeros agree at rate 0.
            None => Complex64::new(1.0, 0.0) * carrier,
        }
    })
}

const PACKETS: usize = 3;

/// Spectrum synthesized by [`gen_bandlimited`], on the centred DFT bins of
/// `grid`. Out-of-band bins are exactly zero.
pub fn bandlimited_spectrum(grid: Grid, band: [f64; 2], seed: u64) -> Result<Vec<Complex64>> {
    let [lo, hi] = band;
    let nyq = grid.nyquist();
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(TfError::InvalidParams(format!("band [{lo}, {hi}] must satisfy lo < hi")));
    }
    if lo < -nyq || hi > nyq {
        return Err(TfError::InvalidParams(format!(
            "band [{lo}, {hi}] outside Nyquist range [{}, {nyq}]",
            -nyq
        )));
    }
    if hi - lo > nyq {
        return Err(TfError::InvalidParams(format!(
            "band width {} exceeds half the Nyquist range ({nyq})",
            hi - lo
        )));
    }
    let freqs = fourier::freq_axis(grid.n, grid.dt);
    // The -Nyquist bin is never populated: it has no unambiguous sign.
    let in_band: Vec<bool> =
        freqs.iter().enumerate().map(|(j, &xi)| j > 0 && xi >= lo && xi <= hi).collect();
    if !in_band.iter().any(|&b| b) {
        return Err(TfError::InvalidParams(format!(
            "band [{lo}, {hi}] contains no DFT bin of the grid"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centre = 0.5 * (lo + hi);
    let sigma = 0.5 * (hi - lo) / 7.0;
    let mid = grid.t0 + 0.5 * grid.duration();
    let spread = grid.duration() / 16.0;
    let packets: Vec<(Complex64, f64)> = (0..PACKETS)
        .map(|_| {
            let mag: f64 = rng.gen_range(0.5..1.0);
            let phase: f64 = rng.gen_range(0.0..2.0 * PI);
            let delay = mid + rng.gen_range(-spread..spread);
            (Complex64::from_polar(mag, phase), delay)
        })
        .collect();

    let mut spectrum: Vec<Complex64> = freqs
        .iter()
        .zip(&in_band)
        .map(|(&xi, &inside)| {
            if !inside {
                return Complex64::new(0.0, 0.0);
            }
            let taper = (-(xi - centre).powi(2) / (2.0 * sigma * sigma)).exp();
            let sum: Complex64 =
                packets.iter().map(|(amp, tau)| amp * Complex64::cis(-2.0 * PI * xi * tau)).sum();
            taper * sum
        })
        .collect();

    let dxi = 1.0 / grid.duration();
    let energy: f64 = spectrum.iter().map(|z| z.norm_sqr()).sum::<f64>() * dxi;
    if energy <= 0.0 || !energy.is_finite() {
        return Err(TfError::InvalidParams(format!("band [{lo}, {hi}] produced a zero spectrum")));
    }
    let norm = energy.sqrt();
    for z in &mut spectrum {
        *z /= norm;
    }
    Ok(spectrum)
}

/// Unit-energy pseudo-random signal whose spectrum lives on the DFT bins in
/// `band`. Built as a few Gaussian wave packets near the record centre so the
/// result also decays in time. Same seed, same bits.
pub fn gen_bandlimited(grid: Grid, band: [f64; 2], seed: u64) -> Result<Signal> {
    let spectrum = bandlimited_spectrum(grid, band, seed)?;
    let samples = fourier::dft(&spectrum, &grid, Direction::Inverse)?;
    Signal::new(grid, samples)
}

/// Seeded i.i.d. complex samples with standard normal-ish parts; handy for
/// algebraic identities that hold for arbitrary sequences.
pub fn gen_random(grid: Grid, seed: u64) -> Result<Signal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..grid.n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    Signal::new(grid, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_rejects_odd_and_bad_spacing() {
        assert!(Grid::new(0.0, 1.0, 3).is_err());
        assert!(Grid::new(0.0, 0.0, 4).is_err());
        assert!(Grid::new(0.0, -1.0, 4).is_err());
        assert!(Grid::new(0.0, 1.0, 0).is_err());
        assert!(Grid::new(f64::NAN, 1.0, 4).is_err());
        let g = Grid::new(1.5, 0.25, 4).unwrap();
        assert_eq!(g.times(), vec![1.5, 1.75, 2.0, 2.25]);
    }

    #[test]
    fn tone_small_cases() {
        let g = Grid::new(0.0, 1.0, 4).unwrap();
        let s = gen_tone(g, 0.0, c(1.0, 0.0)).unwrap();
        assert!(s.samples().iter().all(|&z| z == c(1.0, 0.0)));

        let g = Grid::new(0.0, 1.0, 2).unwrap();
        let s = gen_tone(g, 0.5, c(1.0, 0.0)).unwrap();
        assert_eq!(s.samples()[0], c(1.0, 0.0));
        assert!((s.samples()[1] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn tone_rejects_zero_amplitude() {
        let g = Grid::new(0.0, 1.0, 4).unwrap();
        assert!(matches!(gen_tone(g, 1.0, c(0.0, 0.0)), Err(TfError::InvalidParams(_))));
    }

    #[test]
    fn tone_matches_direct_evaluation() {
        let g = Grid::new(0.0, 1.0 / 64.0, 512).unwrap();
        let s = gen_tone(g, 3.0, c(1.0, 0.0)).unwrap();
        for (k, z) in s.samples().iter().enumerate() {
            let t = k as f64 / 64.0;
            let arg = 2.0 * PI * 3.0 * t;
            let expect = c(arg.cos(), arg.sin());
            assert!((z - expect).norm() <= 4.0 * f64::EPSILON, "k = {k}");
        }
    }

    #[test]
    fn gaussian_values() {
        let g = Grid::new(0.0, 1.0, 2).unwrap();
        let s = gen_gaussian(g, GaussianParams::real(1.0).unwrap()).unwrap();
        assert_eq!(s.samples()[0], c(1.0, 0.0));
        assert!((s.samples()[1].re - (-PI).exp()).abs() < 1e-16);
        assert!(GaussianParams::real(0.0).is_err());
        assert!(GaussianParams::new(c(-1.0, 2.0), c(0.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn complex_gaussian_matches_scalar_oracle() {
        let g = Grid::centered(1.0 / 16.0, 256).unwrap();
        let p = GaussianParams::new(c(1.0, 1.0), c(0.0, 0.5), c(0.0, 0.0)).unwrap();
        let s = gen_gaussian(g, p).unwrap();
        for (k, z) in s.samples().iter().enumerate() {
            let t = g.time(k);
            // exp(-pi (1+i) t^2 + 2 pi (0.5 i) t), split by hand.
            let modulus = (-PI * t * t).exp();
            let phase = -PI * t * t + PI * t;
            let expect = c(modulus * phase.cos(), modulus * phase.sin());
            assert!((z - expect).norm() <= 1e-14, "k = {k}");
        }
    }

    #[test]
    fn unit_norm_gaussian() {
        let p = GaussianParams::new(c(2.0, 1.0), c(0.3, 0.5), c(0.7, 0.0)).unwrap().unit_norm();
        assert!((p.l2_norm_sqr() - 1.0).abs() < 1e-14);
        let g = Grid::centered(1.0 / 32.0, 512).unwrap();
        let s = gen_gaussian(g, p).unwrap();
        assert!((s.energy() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chirp_cases() {
        let g = Grid::new(0.0, 0.5, 4).unwrap();
        let flat = gen_chirp(g, ChirpParams::new(0.0).unwrap(), None).unwrap();
        let tone = gen_tone(g, 0.0, c(1.0, 0.0)).unwrap();
        assert_eq!(flat, tone);

        let p = ChirpParams::from_eta0(1.0).unwrap();
        assert_eq!(p.rate, 2.0);
        let s = gen_chirp(g, p, None).unwrap();
        // t = 1 is index 2.
        assert!((s.samples()[2] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(ChirpParams::new(f64::INFINITY).is_err());
    }

    #[test]
    fn enveloped_chirp_matches_direct_evaluation() {
        let g = Grid::centered(1.0 / 32.0, 512).unwrap();
        let env = GaussianParams::real(1.0).unwrap();
        let s = gen_chirp(g, ChirpParams::new(2.0).unwrap(), Some(env)).unwrap();
        for (k, z) in s.samples().iter().enumerate() {
            let t = g.time(k);
            let m = (-PI * t * t).exp();
            let expect = c(m * (2.0 * PI * t * t).cos(), m * (2.0 * PI * t * t).sin());
            assert!((z - expect).norm() <= 1e-15, "k = {k}");
        }
    }

    #[test]
    fn bandlimited_single_bin_is_a_tone() {
        let g = Grid::new(0.0, 0.125, 64).unwrap();
        // Bin spacing 1/8; the band [0.9, 1.1] holds only xi = 1.
        let s = gen_bandlimited(g, [0.9, 1.1], 3).unwrap();
        let ratio = s.samples()[0];
        for (k, z) in s.samples().iter().enumerate() {
            let expect = ratio * Complex64::cis(2.0 * PI * g.time(k));
            assert!((z - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn bandlimited_rejects_bad_bands() {
        let g = Grid::new(0.0, 0.125, 64).unwrap();
        assert!(gen_bandlimited(g, [0.01, 0.1], 1).is_err()); // no bin inside
        assert!(gen_bandlimited(g, [-5.0, 1.0], 1).is_err()); // beyond Nyquist
        assert!(gen_bandlimited(g, [1.0, 1.0], 1).is_err());
        assert!(gen_bandlimited(g, [-3.0, 3.0], 1).is_err()); // wider than half range
    }

    #[test]
    fn bandlimited_spectrum_zero_out_of_band() {
        let g = Grid::new(0.0, 1.0 / 32.0, 512).unwrap();
        let s = gen_bandlimited(g, [-2.0, 2.0], 7).unwrap();
        let spec = fourier::dft(s.samples(), &g, Direction::Forward).unwrap();
        let freqs = fourier::freq_axis(g.n, g.dt);
        let peak = spec.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (xi, z) in freqs.iter().zip(&spec) {
            if *xi < -2.0 || *xi > 2.0 {
                assert!(z.norm() <= 1e-13 * peak, "xi = {xi}: {}", z.norm());
            }
        }
        let exact = bandlimited_spectrum(g, [-2.0, 2.0], 7).unwrap();
        for (xi, z) in freqs.iter().zip(&exact) {
            if *xi < -2.0 || *xi > 2.0 {
                assert_eq!(*z, Complex64::new(0.0, 0.0));
            }
        }
        assert!((s.energy() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bandlimited_is_deterministic() {
        let g = Grid::new(0.0, 1.0 / 32.0, 256).unwrap();
        let a = gen_bandlimited(g, [-2.0, 2.0], 11).unwrap();
        let b = gen_bandlimited(g, [-2.0, 2.0], 11).unwrap();
        let c2 = gen_bandlimited(g, [-2.0, 2.0], 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c2);
    }

    #[test]
    fn signal_rejects_non_finite_and_length_mismatch() {
        let g = Grid::new(0.0, 1.0, 2).unwrap();
        assert!(Signal::new(g, vec![c(1.0, 0.0)]).is_err());
        assert!(Signal::new(g, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]).is_err());
    }
}
