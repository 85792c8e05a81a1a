//! Cone-decay diagnostics: how fast `|V_w f(x, eta)|` falls off inside the
//! cone `|eta| > B |x|` around the frequency axis, and the smallest slope `B`
//! at which that decay becomes rapid.
//!
//! Radii are measured as `<(x, eta)> = sqrt(1 + x^2 + eta^2)` with `x` taken
//! from the temporal centroid of the signal.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TfError};
use crate::exec;
use crate::signal::Signal;
use crate::transforms::{stft, TimeFrequencyMatrix, Window, WindowKind};

/// Exponential rate (per unit radius) at or above which decay counts as rapid.
pub const RATE_MIN: f64 = 0.1;
/// Polynomial orders at or above this count as rapid.
pub const ORDER_MAX: f64 = 12.0;
/// Sups below this fraction of the global peak count as zero.
pub const FLOOR_REL: f64 = 1e-12;
/// Fitted orders below this count as no decay at all.
pub const NON_DECAY_ORDER: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub slope_b: f64,
    pub radius_min: f64,
    pub radius_max: f64,
}

impl ConeSpec {
    pub fn new(slope_b: f64, radius_min: f64, radius_max: f64) -> Result<Self> {
        if !(slope_b.is_finite() && slope_b > 0.0) {
            return Err(TfError::InvalidParams(format!("cone slope must be > 0, got {slope_b}")));
        }
        if !(radius_min > 0.0 && radius_min < radius_max && radius_max.is_finite()) {
            return Err(TfError::InvalidParams(format!(
                "need 0 < radius_min < radius_max, got {radius_min} and {radius_max}"
            )));
        }
        Ok(Self { slope_b, radius_min, radius_max })
    }
}

/// Sup of `|V|` per nonempty shell, with the radius where it is attained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeProfile {
    pub shells: Vec<(f64, f64)>,
    pub empty_shells: Vec<usize>,
    /// Largest `|V|` anywhere in the matrix.
    pub peak: f64,
}

/// Shell sups of `|V|` for geometric shells
/// `[r_min q^j, r_min q^(j+1))`, `q = (r_max / r_min)^(1 / n_shells)`,
/// restricted to `|eta| > B |x|` with `x = t - origin`.
pub fn cone_sup_profile(v: &TimeFrequencyMatrix, cone: &ConeSpec, n_shells: usize, origin: f64) -> Result<ConeProfile> {
    if n_shells < 4 {
        return Err(TfError::InvalidParams(format!("need at least 4 shells, got {n_shells}")));
    }
    let cols = v.cols();
    let mag: Vec<f64> = match v.values() {
        crate::transforms::MatrixValues::Real(r) => r.iter().map(|x| x.abs()).collect(),
        crate::transforms::MatrixValues::Complex(c) => c.iter().map(|z| z.norm()).collect(),
    };
    let peak = mag.iter().cloned().fold(0.0, f64::max);
    let log_q = (cone.radius_max / cone.radius_min).ln() / n_shells as f64;
    let mut best: Vec<Option<(f64, f64)>> = vec![None; n_shells];
    for (k, t) in v.time_axis().iter().enumerate() {
        let x = t - origin;
        for (j, &eta) in v.freq_axis().iter().enumerate() {
            if eta.abs() <= cone.slope_b * x.abs() {
                continue;
            }
            let r = (1.0 + x * x + eta * eta).sqrt();
            if r < cone.radius_min || r >= cone.radius_max {
                continue;
            }
            let shell = (((r / cone.radius_min).ln() / log_q) as usize).min(n_shells - 1);
            let m = mag[k * cols + j];
            match best[shell] {
                Some((_, s)) if s >= m => {}
                _ => best[shell] = Some((r, m)),
            }
        }
    }
    let mut shells = Vec::new();
    let mut empty_shells = Vec::new();
    for (j, b) in best.into_iter().enumerate() {
        match b {
            Some(p) => shells.push(p),
            None => empty_shells.push(j),
        }
    }
    if shells.is_empty() {
        return Err(TfError::Degenerate(format!(
            "cone |eta| > {} |x| misses every grid point in the annulus",
            cone.slope_b
        )));
    }
    Ok(ConeProfile { shells, empty_shells, peak })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecayClass {
    Rapid,
    Polynomial { order: f64 },
    NonDecaying,
}

impl DecayClass {
    pub fn is_rapid(&self) -> bool {
        matches!(self, DecayClass::Rapid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Minus the slope of `ln sup` against `ln r`.
    pub poly_order: f64,
    /// Minus the slope of `ln sup` against `r`.
    pub exp_rate: f64,
    /// RMS residual of the model that decided the class.
    pub residual: f64,
    pub class: DecayClass,
}

/// Least-squares line `y = c0 + c1 x`; returns `(c1, rms residual)`.
fn line_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum();
    (slope, (rss / n).sqrt())
}

/// Fits power-law and exponential decay to a shell profile and classifies it.
///
/// A profile whose sups all sit below `FLOOR_REL * peak` (or that contains an
/// exact zero) is rapid. Otherwise the power law wins when it fits better and
/// its order is below `ORDER_MAX`; failing that an exponential rate of at
/// least `RATE_MIN` means rapid.
pub fn fit_decay(profile: &[(f64, f64)], peak: f64) -> Result<DecayFit> {
    if profile.len() < 4 {
        return Err(TfError::Degenerate(format!("need at least 4 usable shells, got {}", profile.len())));
    }
    let floor = FLOOR_REL * peak;
    if profile.iter().all(|&(_, s)| s <= floor) || profile.iter().any(|&(_, s)| s == 0.0) {
        return Ok(DecayFit {
            poly_order: f64::INFINITY,
            exp_rate: f64::INFINITY,
            residual: 0.0,
            class: DecayClass::Rapid,
        });
    }
    let rs: Vec<f64> = profile.iter().map(|p| p.0).collect();
    let log_r: Vec<f64> = rs.iter().map(|r| r.ln()).collect();
    let log_s: Vec<f64> = profile.iter().map(|p| p.1.ln()).collect();
    let (poly_slope, poly_res) = line_fit(&log_r, &log_s);
    let (exp_slope, exp_res) = line_fit(&rs, &log_s);
    let p = -poly_slope;
    let rate = -exp_slope;
    let (class, residual) = if poly_res < exp_res && p < ORDER_MAX {
        if p < NON_DECAY_ORDER {
            (DecayClass::NonDecaying, poly_res)
        } else {
            (DecayClass::Polynomial { order: p }, poly_res)
        }
    } else if rate >= RATE_MIN || p >= ORDER_MAX {
        (DecayClass::Rapid, exp_res)
    } else if p < NON_DECAY_ORDER {
        (DecayClass::NonDecaying, poly_res)
    } else {
        (DecayClass::Polynomial { order: p }, poly_res)
    };
    Ok(DecayFit { poly_order: p, exp_rate: rate, residual, class })
}

/// Settings for [`classify_vcon`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeOptions {
    /// Outer shell radius; `None` means 0.8 of the inscribed half-extent.
    pub radius_max: Option<f64>,
    /// Inner radius as a fraction of the outer one.
    pub radius_min_ratio: f64,
    pub n_shells: usize,
    /// Bisection stops once the bracket is this narrow relative to its top.
    pub refine_rel_width: f64,
}

impl Default for ConeOptions {
    fn default() -> Self {
        Self { radius_max: None, radius_min_ratio: 0.65, n_shells: 8, refine_rel_width: 0.01 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeRecord {
    pub b: f64,
    pub fitted_poly_order: f64,
    pub fitted_exp_rate: f64,
    pub residual: f64,
    pub class: DecayClass,
    pub shells_used: usize,
    pub empty_shells: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub rate_min: f64,
    pub order_max: f64,
    pub floor_rel: f64,
    pub non_decay_order: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub t0: f64,
    pub dt: f64,
    pub n: usize,
    /// Time origin of the `x` coordinate (temporal centroid).
    pub origin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeDecayReport {
    pub records: Vec<SlopeRecord>,
    pub critical_b_estimate: Option<f64>,
    /// Bracket `[lo, hi]` left by the bisection, when there was a flip.
    pub critical_bracket: Option<(f64, f64)>,
    /// False when some slope is rapid but a larger tested slope is not.
    pub monotone: bool,
    pub radius_min: f64,
    pub radius_max: f64,
    pub n_shells: usize,
    pub window: WindowKind,
    pub thresholds: Thresholds,
    pub grid: GridInfo,
}

struct ConeContext {
    magnitude: TimeFrequencyMatrix,
    origin: f64,
    radius_min: f64,
    radius_max: f64,
    n_shells: usize,
}

impl ConeContext {
    fn record(&self, b: f64) -> Result<SlopeRecord> {
        let cone = ConeSpec::new(b, self.radius_min, self.radius_max)?;
        let profile = cone_sup_profile(&self.magnitude, &cone, self.n_shells, self.origin)?;
        let fit = fit_decay(&profile.shells, profile.peak)?;
        Ok(SlopeRecord {
            b,
            fitted_poly_order: fit.poly_order,
            fitted_exp_rate: fit.exp_rate,
            residual: fit.residual,
            class: fit.class,
            shells_used: profile.shells.len(),
            empty_shells: profile.empty_shells,
        })
    }
}

/// Classifies cone decay of `V_w f` at each slope and brackets the first
/// flip to rapid by bisection.
pub fn classify_vcon(f: &Signal, w: &Window, slopes: &[f64]) -> Result<ConeDecayReport> {
    classify_vcon_with(f, w, slopes, &ConeOptions::default())
}

pub fn classify_vcon_with(f: &Signal, w: &Window, slopes: &[f64], opts: &ConeOptions) -> Result<ConeDecayReport> {
    if slopes.len() < 3 {
        return Err(TfError::InvalidParams(format!("need at least 3 slopes, got {}", slopes.len())));
    }
    if slopes.windows(2).any(|p| !(p[0] < p[1])) {
        return Err(TfError::InvalidParams("slopes must be strictly ascending".into()));
    }
    if !(opts.radius_min_ratio > 0.0 && opts.radius_min_ratio < 1.0) {
        return Err(TfError::InvalidParams("radius_min_ratio must lie in (0, 1)".into()));
    }
    if !(opts.refine_rel_width > 0.0 && opts.refine_rel_width <= 0.05) {
        return Err(TfError::InvalidParams("refine_rel_width must lie in (0, 0.05]".into()));
    }
    if f.energy() == 0.0 {
        return Err(TfError::Degenerate("signal is identically zero".into()));
    }
    let grid = *f.grid();
    let origin = f.temporal_centroid();
    let times = grid.times();
    let half_x = (origin - times[0]).min(times[grid.n - 1] - origin);
    let inscribed = half_x.min(grid.nyquist());
    let radius_max = opts.radius_max.unwrap_or(0.8 * inscribed);
    let radius_min = opts.radius_min_ratio * radius_max;
    let ctx = ConeContext {
        magnitude: stft(f, w, 1)?.magnitude(),
        origin,
        radius_min,
        radius_max,
        n_shells: opts.n_shells,
    };

    let records = exec::map_slice(slopes, |&b| ctx.record(b)).into_iter().collect::<Result<Vec<_>>>()?;

    let first_rapid = records.iter().position(|r| r.class.is_rapid());
    let monotone = match first_rapid {
        Some(i) => records[i..].iter().all(|r| r.class.is_rapid()),
        None => true,
    };
    let (critical_b_estimate, critical_bracket) = match first_rapid {
        Some(i) if i > 0 => {
            let (mut lo, mut hi) = (records[i - 1].b, records[i].b);
            while (hi - lo) / hi > opts.refine_rel_width {
                let mid = 0.5 * (lo + hi);
                if ctx.record(mid)?.class.is_rapid() {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            (Some(0.5 * (lo + hi)), Some((lo, hi)))
        }
        _ => (None, None),
    };

    Ok(ConeDecayReport {
        records,
        critical_b_estimate,
        critical_bracket,
        monotone,
        radius_min,
        radius_max,
        n_shells: opts.n_shells,
        window: w.kind(),
        thresholds: Thresholds {
            rate_min: RATE_MIN,
            order_max: ORDER_MAX,
            floor_rel: FLOOR_REL,
            non_decay_order: NON_DECAY_ORDER,
        },
        grid: GridInfo { t0: grid.t0, dt: grid.dt, n: grid.n, origin },
    })
}
