//! One-shot numerical verification of the time-frequency identities on
//! self-generated fixtures.
//!
//! Each identity yields one record: the worst deviation over its fixtures,
//! the tolerance it is held to, and whether it passed. A record passes when
//! `max_deviation <= tolerance`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cone::{classify_vcon, ConeDecayReport};
use crate::error::{Result, TfError};
use crate::exec;
use crate::fixtures;
use crate::fourier::{dft, Direction};
use crate::instfreq::{compare_if, if_moment_from_wigner, if_phase_gradient, DEFAULT_THRESHOLD};
use crate::oracles::{
    oracle_direct_cross_wigner, oracle_direct_dft, oracle_direct_stft, oracle_direct_wigner,
    oracle_gaussian_wigner, oracle_wigner_window_identity,
};
use crate::signal::{gen_bandlimited, gen_chirp, gen_gaussian, gen_random, ChirpParams, GaussianParams, Grid, Signal};
use crate::transforms::{
    cross_wigner, first_freq_moment, lag_grid, lag_products, marginal_freq, marginal_time, modulate_translate,
    slice_time, stft, total_energy, wigner, wigner_column_shift, Boundary, MatrixValues, TimeFrequencyMatrix,
    Window,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub name: String,
    pub paper_anchor: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Set when the check could not be computed.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub records: Vec<IdentityRecord>,
    pub all_pass: bool,
    pub perturb: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyOptions {
    /// Identity names (or name prefixes before `_`) to run; empty runs all.
    pub only: Vec<String>,
    /// Adds `perturb * peak * j / cols` to column `j` of every Wigner matrix
    /// the checks compute. A negative control: any nonzero value should make
    /// the Wigner-based identities fail.
    pub perturb: f64,
}

struct Identity {
    name: &'static str,
    anchor: &'static str,
    tolerance: f64,
    run: fn(&Ctx) -> Result<f64>,
}

const IDENTITIES: &[Identity] = &[
    Identity {
        name: "marginals",
        anchor: "int W_f(t,xi) dxi = |f(t)|^2 ; int W_f(t,xi) dt = |F f(xi)|^2",
        tolerance: 1e-6,
        run: check_marginals,
    },
    Identity {
        name: "energy",
        anchor: "iint W_f(t,xi) dt dxi = ||f||^2",
        tolerance: 1e-6,
        run: check_energy,
    },
    Identity {
        name: "covariance",
        anchor: "W_{M_eta T_x f} = T_{(x,eta)} W_f",
        tolerance: 1e-12,
        run: check_covariance,
    },
    Identity {
        name: "if_moment",
        anchor: "int xi W_f(t,xi) dxi / int W_f(t,xi) dxi = (2pi)^-1 d/dt arg f(t)  [error / IF range]",
        tolerance: 1e-3,
        run: check_if_moment,
    },
    Identity {
        name: "if_moment_tone",
        anchor: "f = exp(2pi i xi0 t): moment IF = phase IF = xi0  [absolute]",
        tolerance: 1e-8,
        run: check_if_moment_tone,
    },
    Identity {
        name: "chirp_ridge",
        anchor: "W_f = delta_0(xi - A t) for f = exp(pi i A t^2)  [argmax offset in bins]",
        tolerance: 1.0,
        run: check_chirp_ridge,
    },
    Identity {
        name: "chirp_ridge_moment",
        anchor: "moment IF of exp(pi i A t^2) h(t) = A t  [error / IF range]",
        tolerance: 0.02,
        run: check_chirp_ridge_moment,
    },
    Identity {
        name: "chirp_shear",
        anchor: "W_{exp(pi i A t^2) f}(t,xi) = W_f(t, xi - A t)",
        tolerance: 1e-10,
        run: check_chirp_shear,
    },
    Identity {
        name: "gaussian_closed_form",
        anchor: "W_f = C exp(-2pi(Re a t^2 - 2 Re b t)) exp(-2pi (xi + Im a t - Im b)^2 / Re a)",
        tolerance: 1e-4,
        run: check_gaussian_closed_form,
    },
    Identity {
        name: "hudson_gaussian",
        anchor: "W_f >= 0 for generalized Gaussians  [-min / max]",
        tolerance: 1e-8,
        run: check_hudson_gaussian,
    },
    Identity {
        name: "hudson_two_tone",
        anchor: "W_f takes negative values unless f is a generalized Gaussian  [min / max]",
        tolerance: -0.05,
        run: check_hudson_two_tone,
    },
    Identity {
        name: "window_identity",
        anchor: "F(W_f W_phi)(eta, x) = V_phi f(-x/2, eta/2) conj(V_phi f(x/2, -eta/2))",
        tolerance: 1e-5,
        run: check_window_identity,
    },
    Identity {
        name: "cone_slope",
        anchor: "V_phi f decays rapidly in |eta| > B|x| iff B >= 2|eta0| for f = exp(2pi i eta0 t^2)  [relative error]",
        tolerance: 0.15,
        run: check_cone_slope,
    },
    Identity {
        name: "restriction",
        anchor: "F(f (x) conj f o kappa(t, .)) = W_f(t, .)",
        tolerance: 1e-12,
        run: check_restriction,
    },
    Identity {
        name: "oracle_equivalence",
        anchor: "FFT transforms = direct O(n^2) sums",
        tolerance: 1e-12,
        run: check_oracle_equivalence,
    },
];

/// Names of all identities, in report order.
pub fn identity_names() -> Vec<&'static str> {
    IDENTITIES.iter().map(|i| i.name).collect()
}

fn selected(name: &str, only: &[String]) -> bool {
    only.is_empty()
        || only.iter().any(|o| name == o || name.strip_prefix(o.as_str()).is_some_and(|rest| rest.starts_with('_')))
}

pub fn run_verify(opts: &VerifyOptions) -> Result<VerificationReport> {
    for o in &opts.only {
        if !IDENTITIES.iter().any(|i| selected(i.name, std::slice::from_ref(o))) {
            return Err(TfError::InvalidParams(format!(
                "unknown identity {o:?}; known: {}",
                identity_names().join(", ")
            )));
        }
    }
    if !opts.perturb.is_finite() {
        return Err(TfError::InvalidParams("perturbation must be finite".into()));
    }
    let ctx = Ctx { perturb: opts.perturb };
    let chosen: Vec<&Identity> = IDENTITIES.iter().filter(|i| selected(i.name, &opts.only)).collect();
    let records = exec::map_slice(&chosen, |id| {
        let (max_deviation, error) = match (id.run)(&ctx) {
            Ok(d) => (d, None),
            Err(e) => (f64::INFINITY, Some(e.to_string())),
        };
        IdentityRecord {
            name: id.name.to_string(),
            paper_anchor: id.anchor.to_string(),
            max_deviation,
            tolerance: id.tolerance,
            pass: error.is_none() && max_deviation <= id.tolerance,
            error,
        }
    });
    let all_pass = records.iter().all(|r| r.pass);
    Ok(VerificationReport { records, all_pass, perturb: opts.perturb })
}

/// Fixed-width text table of a report.
pub fn render_table(report: &VerificationReport) -> String {
    let mut out = format!("{:<22} {:>12} {:>10}  {:<4}  {}\n", "identity", "deviation", "tolerance", "ok", "anchor");
    for r in &report.records {
        out.push_str(&format!(
            "{:<22} {:>12.3e} {:>10.1e}  {:<4}  {}\n",
            r.name,
            r.max_deviation,
            r.tolerance,
            if r.pass { "PASS" } else { "FAIL" },
            r.paper_anchor
        ));
        if let Some(e) = &r.error {
            out.push_str(&format!("{:<22} error: {e}\n", ""));
        }
    }
    out.push_str(if report.all_pass { "all identities pass\n" } else { "some identities FAIL\n" });
    out
}

struct Ctx {
    perturb: f64,
}

impl Ctx {
    fn wigner(&self, f: &Signal, boundary: Boundary) -> Result<TimeFrequencyMatrix> {
        let w = wigner(f, boundary)?;
        if self.perturb == 0.0 {
            return Ok(w);
        }
        let bump = self.perturb * w.peak_abs();
        let cols = w.cols();
        let mut v = w.real_values()?.to_vec();
        for (i, x) in v.iter_mut().enumerate() {
            *x += bump * (i % cols) as f64 / cols as f64;
        }
        TimeFrequencyMatrix::new(w.time_axis().to_vec(), w.freq_axis().to_vec(), MatrixValues::Real(v))
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn rel_linf(a: &[f64], b: &[f64]) -> f64 {
    let diff = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    let scale = max_abs(b);
    if scale == 0.0 {
        if diff == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        diff / scale
    }
}

fn rel_linf_c(a: &[Complex64], b: &[Complex64]) -> f64 {
    let diff = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
    let scale = b.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if scale == 0.0 {
        if diff == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        diff / scale
    }
}

fn matrix_rel(a: &TimeFrequencyMatrix, b: &TimeFrequencyMatrix) -> Result<f64> {
    match (a.values(), b.values()) {
        (MatrixValues::Real(x), MatrixValues::Real(y)) => Ok(rel_linf(x, y)),
        (MatrixValues::Complex(x), MatrixValues::Complex(y)) => Ok(rel_linf_c(x, y)),
        _ => Err(TfError::WrongValueKind("matching value kinds")),
    }
}

fn check_marginals(ctx: &Ctx) -> Result<f64> {
    let mut worst = 0.0f64;
    for seed in 0..10 {
        let f = fixtures::bandlimited_256(seed);
        let w = ctx.wigner(&f, Boundary::Zero)?;
        let power: Vec<f64> = f.samples().iter().map(|z| z.norm_sqr()).collect();
        worst = worst.max(rel_linf(&marginal_freq(&w)?, &power));
        // Even Wigner columns sit on the signal's DFT bins.
        let spectrum: Vec<f64> =
            dft(f.samples(), f.grid(), Direction::Forward)?.iter().map(|z| z.norm_sqr()).collect();
        let mt = marginal_time(&w)?;
        let on_bins: Vec<f64> = (0..spectrum.len()).map(|j| mt[2 * j]).collect();
        worst = worst.max(rel_linf(&on_bins, &spectrum));
    }
    Ok(worst)
}

fn check_energy(ctx: &Ctx) -> Result<f64> {
    let mut worst = 0.0f64;
    for seed in 0..10 {
        let f = fixtures::bandlimited_256(seed);
        let e = f.energy();
        worst = worst.max((total_energy(&ctx.wigner(&f, Boundary::Zero)?)? - e).abs() / e);
    }
    let g = GaussianParams::real(1.0)?.unit_norm();
    let f = gen_gaussian(fixtures::gaussian_grid(), g)?;
    worst = worst.max((total_energy(&ctx.wigner(&f, Boundary::Zero)?)? - 1.0).abs());
    Ok(worst)
}

fn check_covariance(ctx: &Ctx) -> Result<f64> {
    let cases = [(fixtures::tone_256(), 16, 8), (fixtures::bandlimited_256(0), 5, -3), (fixtures::bandlimited_256(1), -40, 11)];
    let mut worst = 0.0f64;
    for (f, shift, bins) in cases {
        let w = ctx.wigner(&f, Boundary::Periodized)?;
        let moved = ctx.wigner(&modulate_translate(&f, shift, bins)?, Boundary::Periodized)?;
        let expect = w.rolled(shift, wigner_column_shift(bins));
        worst = worst.max(moved.max_abs_diff(&expect)? / w.peak_abs());
    }
    Ok(worst)
}

/// `max |moment - phase| / (IF range)` over jointly valid samples.
fn if_agreement(ctx: &Ctx, f: &Signal) -> Result<f64> {
    let phase = if_phase_gradient(f)?;
    let moment = if_moment_from_wigner(&ctx.wigner(f, Boundary::Zero)?, DEFAULT_THRESHOLD)?;
    let cmp = compare_if(&phase, &moment)?;
    if cmp.n_compared == 0 {
        return Err(TfError::Degenerate("no jointly valid samples".into()));
    }
    let joint: Vec<f64> =
        (0..phase.len()).filter(|&k| phase.valid[k] && moment.valid[k]).map(|k| phase.values[k]).collect();
    let range = joint.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - joint.iter().cloned().fold(f64::INFINITY, f64::min);
    if range <= 0.0 {
        return Err(TfError::Degenerate("IF has no dynamic range".into()));
    }
    Ok(cmp.max_abs_err / range)
}

fn check_if_moment(ctx: &Ctx) -> Result<f64> {
    let mut worst = if_agreement(ctx, &fixtures::gaussian_envelope_512())?;
    for seed in 0..3 {
        worst = worst.max(if_agreement(ctx, &fixtures::bandlimited_512(seed))?);
        worst = worst.max(if_agreement(ctx, &fixtures::chirp_times_bandlimited_512(seed))?);
    }
    Ok(worst)
}

fn check_if_moment_tone(ctx: &Ctx) -> Result<f64> {
    let f = fixtures::tone_03();
    let phase = if_phase_gradient(&f)?;
    let moment = if_moment_from_wigner(&ctx.wigner(&f, Boundary::Periodized)?, DEFAULT_THRESHOLD)?;
    let cmp = compare_if(&phase, &moment)?;
    if cmp.n_compared == 0 {
        return Err(TfError::Degenerate("no jointly valid samples".into()));
    }
    let to_truth = phase.values.iter().fold(0.0f64, |m, v| m.max((v - 0.3).abs()));
    Ok(cmp.max_abs_err.max(to_truth))
}

const RIDGE_RATE: f64 = 2.0;

fn ridge_rows(f: &Signal) -> Vec<usize> {
    let power: Vec<f64> = f.samples().iter().map(|z| z.norm_sqr()).collect();
    let peak = max_abs(&power);
    (0..power.len()).filter(|&k| power[k] >= DEFAULT_THRESHOLD * peak).collect()
}

fn check_chirp_ridge(ctx: &Ctx) -> Result<f64> {
    let f = fixtures::enveloped_chirp_512(RIDGE_RATE);
    let w = ctx.wigner(&f, Boundary::Zero)?;
    let bin = w.freq_step();
    let mut worst = 0.0f64;
    for k in ridge_rows(&f) {
        let row = w.real_row(k)?;
        let j = (0..row.len()).max_by(|&a, &b| row[a].total_cmp(&row[b])).unwrap_or(0);
        worst = worst.max((w.freq_axis()[j] - RIDGE_RATE * w.time_axis()[k]).abs() / bin);
    }
    Ok(worst)
}

fn check_chirp_ridge_moment(ctx: &Ctx) -> Result<f64> {
    let f = fixtures::enveloped_chirp_512(RIDGE_RATE);
    let w = ctx.wigner(&f, Boundary::Zero)?;
    let rows = ridge_rows(&f);
    let ts: Vec<f64> = rows.iter().map(|&k| w.time_axis()[k]).collect();
    let range = RIDGE_RATE * (ts.last().unwrap_or(&0.0) - ts.first().unwrap_or(&0.0));
    if range <= 0.0 {
        return Err(TfError::Degenerate("no valid ridge rows".into()));
    }
    let mut worst = 0.0f64;
    for (&k, t) in rows.iter().zip(&ts) {
        let (num, den) = first_freq_moment(&w, k)?;
        worst = worst.max((num / den - RIDGE_RATE * t).abs());
    }
    Ok(worst / range)
}

fn check_chirp_shear(ctx: &Ctx) -> Result<f64> {
    let g = fixtures::shear_grid();
    let rate = 1.0;
    let h = gen_gaussian(g, GaussianParams::real(1.0)?)?;
    let f = gen_chirp(g, ChirpParams::new(rate)?, Some(GaussianParams::real(1.0)?))?;
    let wh = ctx.wigner(&h, Boundary::Zero)?;
    let wf = ctx.wigner(&f, Boundary::Zero)?;
    let (cols, bin) = (wh.cols() as i64, wh.freq_step());
    let mut worst = 0.0f64;
    for k in 0..wh.rows() {
        let shift = (rate * wh.time_axis()[k] / bin).round() as i64;
        let (rh, rf) = (wh.real_row(k)?, wf.real_row(k)?);
        for j in 0..cols {
            let src = (j - shift).rem_euclid(cols) as usize;
            worst = worst.max((rf[j as usize] - rh[src]).abs());
        }
    }
    Ok(worst / wh.peak_abs())
}

fn gaussian_cases() -> Vec<GaussianParams> {
    let c = Complex64::new;
    let mut out = Vec::new();
    for a in [c(1.0, 0.0), c(1.0, 1.0), c(2.0, 0.0)] {
        for b in [c(0.0, 0.0), c(0.0, 0.5)] {
            out.push(GaussianParams::new(a, b, c(0.0, 0.0)).expect("Re a > 0"));
        }
    }
    out
}

fn check_gaussian_closed_form(ctx: &Ctx) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in gaussian_cases() {
        let w = ctx.wigner(&gen_gaussian(fixtures::gaussian_grid(), p)?, Boundary::Zero)?;
        let o = oracle_gaussian_wigner(&p, w.time_axis(), w.freq_axis())?;
        worst = worst.max(matrix_rel(&w, &o.values)?);
    }
    Ok(worst)
}

fn min_over_max(w: &TimeFrequencyMatrix) -> Result<f64> {
    let v = w.real_values()?;
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    if max <= 0.0 {
        return Err(TfError::Degenerate("Wigner matrix has no positive entries".into()));
    }
    Ok(min / max)
}

fn check_hudson_gaussian(ctx: &Ctx) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in gaussian_cases() {
        let w = ctx.wigner(&gen_gaussian(fixtures::gaussian_grid(), p)?, Boundary::Zero)?;
        worst = worst.max(-min_over_max(&w)?);
    }
    Ok(worst)
}

fn check_hudson_two_tone(ctx: &Ctx) -> Result<f64> {
    min_over_max(&ctx.wigner(&fixtures::two_tone_256(), Boundary::Zero)?)
}

fn check_window_identity(_ctx: &Ctx) -> Result<f64> {
    let g = fixtures::window_identity_grid();
    let w = fixtures::window_identity_window();
    let mut worst = oracle_wigner_window_identity(&gen_gaussian(g, GaussianParams::real(1.0)?)?, &w)?;
    for seed in 0..3 {
        let f = gen_bandlimited(g, [-1.75, 1.75], seed)?;
        worst = worst.max(oracle_wigner_window_identity(&f, &w)?);
    }
    Ok(worst)
}

/// Slopes in units of `eta0` bracketing the critical value 2.
pub const CONE_SLOPE_FACTORS: [f64; 6] = [0.5, 1.0, 1.5, 2.5, 3.0, 4.0];

/// Cone reports for the chirps `eta0 = 1, 2` with the `a = 2` window.
pub fn cone_chirp_reports() -> Result<Vec<(f64, ConeDecayReport)>> {
    let w = fixtures::cone_window(2.0)?;
    [1.0, 2.0]
        .iter()
        .map(|&eta0| {
            let slopes: Vec<f64> = CONE_SLOPE_FACTORS.iter().map(|s| s * eta0).collect();
            Ok((eta0, classify_vcon(&fixtures::cone_chirp(eta0)?, &w, &slopes)?))
        })
        .collect()
}

fn check_cone_slope(_ctx: &Ctx) -> Result<f64> {
    let mut worst = 0.0f64;
    for (eta0, r) in cone_chirp_reports()? {
        let target = 2.0 * eta0;
        let dev = match r.critical_b_estimate {
            Some(b) if r.monotone => (b - target).abs() / target,
            _ => f64::INFINITY,
        };
        worst = worst.max(dev);
    }
    let gauss = gen_gaussian(fixtures::cone_grid(), GaussianParams::real(1.0)?)?;
    let r = classify_vcon(&gauss, &fixtures::cone_window(2.0)?, &[0.5, 1.0, 2.0, 4.0, 8.0])?;
    if !(r.monotone && r.records.iter().all(|x| x.class.is_rapid())) {
        worst = f64::INFINITY;
    }
    Ok(worst)
}

fn check_restriction(ctx: &Ctx) -> Result<f64> {
    let mut fixtures_list: Vec<Signal> = (0..3).map(fixtures::bandlimited_256).collect();
    fixtures_list.push(fixtures::tone_256());
    fixtures_list.push(gen_gaussian(fixtures::gaussian_grid(), GaussianParams::real(1.0)?)?);
    let mut worst = 0.0f64;
    for f in &fixtures_list {
        let w = ctx.wigner(f, Boundary::Zero)?;
        let lags = lag_grid(f.grid());
        let mut diff = 0.0f64;
        for k in 0..w.rows() {
            let slice = match slice_time(&w, k)? {
                MatrixValues::Real(v) => v,
                MatrixValues::Complex(_) => return Err(TfError::WrongValueKind("real")),
            };
            let direct = dft(&lag_products(f, f, k, Boundary::Zero)?, &lags, Direction::Forward)?;
            for (a, b) in slice.iter().zip(&direct) {
                diff = diff.max((a - b.re).abs());
            }
        }
        worst = worst.max(diff / w.peak_abs());
    }
    Ok(worst)
}

fn check_oracle_equivalence(ctx: &Ctx) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [8usize, 16, 32, 64] {
        let grid = Grid::new(-0.3 * n as f64 / 8.0, 0.125, n)?;
        let window = Window::gaussian(1.0, grid.dt, n - 1)?;
        for seed in 0..10u64 {
            let f = gen_random(grid, seed)?;
            let g = gen_random(grid, seed + 1000)?;
            for b in [Boundary::Zero, Boundary::Periodized] {
                worst = worst.max(matrix_rel(&ctx.wigner(&f, b)?, &oracle_direct_wigner(&f, b)?)?);
            }
            worst = worst.max(matrix_rel(
                &cross_wigner(&f, &g, Boundary::Zero)?,
                &oracle_direct_cross_wigner(&f, &g, Boundary::Zero)?,
            )?);
            worst = worst.max(matrix_rel(&stft(&f, &window, 2)?, &oracle_direct_stft(&f, &window, 2)?)?);
            worst = worst.max(rel_linf_c(
                &dft(f.samples(), &grid, Direction::Forward)?,
                &oracle_direct_dft(f.samples(), &grid)?,
            ));
        }
    }
    Ok(worst)
}
