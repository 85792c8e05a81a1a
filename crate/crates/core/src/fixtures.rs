//! Standard self-generated test signals shared by `verify`, the benches and
//! the integration tests. Every fixture is a pure function of its arguments.

use num_complex::Complex64;

use crate::error::Result;
use crate::signal::{
    gen_bandlimited, gen_chirp, gen_gaussian, gen_tone, ChirpParams, GaussianParams, Grid, Signal,
};
use crate::transforms::Window;

/// n = 256, dt = 1/16 on [-8, 8): Nyquist 8.
pub fn grid_256() -> Grid {
    Grid::new(-8.0, 1.0 / 16.0, 256).expect("valid grid")
}

/// n = 512, dt = 1/32 on [-8, 8): Nyquist 16.
pub fn grid_512() -> Grid {
    Grid::new(-8.0, 1.0 / 32.0, 512).expect("valid grid")
}

/// Band-limited signal on [`grid_256`] with spectrum in [-2, 2], i.e. a
/// quarter of the Nyquist range on each side.
pub fn bandlimited_256(seed: u64) -> Signal {
    gen_bandlimited(grid_256(), [-2.0, 2.0], seed).expect("valid band")
}

/// Signal with a Gaussian envelope: `exp(-pi 0.5 t^2 + 2 pi i t)` times the
/// chirp `exp(pi i t^2)`, on [`grid_512`].
pub fn gaussian_envelope_512() -> Signal {
    let env = GaussianParams::new(c(0.5, 0.0), c(0.0, 1.0), c(0.0, 0.0)).expect("Re a > 0");
    gen_chirp(grid_512(), ChirpParams::new(1.0).expect("finite"), Some(env)).expect("valid chirp")
}

/// Band-limited signal on [`grid_512`] with spectrum in [-4, 4].
pub fn bandlimited_512(seed: u64) -> Signal {
    gen_bandlimited(grid_512(), [-4.0, 4.0], seed).expect("valid band")
}

/// Chirp `exp(pi i 0.25 t^2)` times a band-limited signal in [-2, 2].
pub fn chirp_times_bandlimited_512(seed: u64) -> Signal {
    let h = gen_bandlimited(grid_512(), [-2.0, 2.0], seed).expect("valid band");
    let chirp = gen_chirp(grid_512(), ChirpParams::new(0.25).expect("finite"), None).expect("valid chirp");
    chirp.multiply(&h).expect("same grid")
}

/// Tone at 0.3 cycles/s on a record of length 10 s (n = 512), so the tone
/// completes exactly 3 periods.
pub fn tone_03() -> Signal {
    let g = Grid::new(0.0, 10.0 / 512.0, 512).expect("valid grid");
    gen_tone(g, 0.3, c(1.0, 0.0)).expect("nonzero amplitude")
}

/// Tone on a whole DFT bin of [`grid_256`] (16 bins = 1 cycle/s).
pub fn tone_256() -> Signal {
    gen_tone(grid_256(), 1.0, c(1.0, 0.0)).expect("nonzero amplitude")
}

/// Chirp of the given rate under the Gaussian envelope `exp(-pi 0.1 t^2)` on
/// [`grid_512`] centred at 0.
pub fn enveloped_chirp_512(rate: f64) -> Signal {
    let g = Grid::centered(1.0 / 32.0, 512).expect("valid grid");
    let env = GaussianParams::real(0.1).expect("Re a > 0");
    gen_chirp(g, ChirpParams::new(rate).expect("finite"), Some(env)).expect("valid chirp")
}

/// Grid for the chirp shear law: n = 256, dt = 1/16 centred, where the shear
/// `rate = 1` moves by exactly two Wigner bins per time step.
pub fn shear_grid() -> Grid {
    Grid::centered(1.0 / 16.0, 256).expect("valid grid")
}

/// Centred grid used for Gaussian closed forms (n = 256, dt = 1/16).
pub fn gaussian_grid() -> Grid {
    Grid::centered(1.0 / 16.0, 256).expect("valid grid")
}

/// Gaussian envelope times two tones at -/+ 1.5 cycles/s; its Wigner
/// distribution has a strongly negative cross term.
pub fn two_tone_256() -> Signal {
    let g = gaussian_grid();
    let env = gen_gaussian(g, GaussianParams::real(0.5).expect("Re a > 0")).expect("valid");
    let lo = gen_tone(g, -1.5, c(1.0, 0.0)).expect("nonzero");
    let hi = gen_tone(g, 1.5, c(1.0, 0.0)).expect("nonzero");
    env.multiply(&lo.add(&hi).expect("same grid")).expect("same grid")
}

/// Centred grid for the STFT/Wigner window identity (n = 128).
pub fn window_identity_grid() -> Grid {
    Grid::centered(0.09, 128).expect("valid grid")
}

pub fn window_identity_window() -> Window {
    Window::gaussian(1.0, 0.09, 127).expect("valid window")
}

/// Grid for cone diagnostics: n = 2048, dt = 1/45 centred, so the time
/// half-extent (22.76) and the Nyquist frequency (22.5) nearly match.
pub fn cone_grid() -> Grid {
    Grid::centered(1.0 / 45.0, 2048).expect("valid grid")
}

/// The pure chirp `exp(2 pi i eta0 t^2)` on [`cone_grid`].
pub fn cone_chirp(eta0: f64) -> Result<Signal> {
    gen_chirp(cone_grid(), ChirpParams::from_eta0(eta0)?, None)
}

/// Gaussian window `exp(-pi a t^2)` on the cone grid spacing.
pub fn cone_window(a: f64) -> Result<Window> {
    Window::gaussian(a, cone_grid().dt, cone_grid().n - 1)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
