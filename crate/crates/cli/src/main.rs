use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use tfcore::cone::{classify_vcon_with, ConeOptions};
use tfcore::instfreq::{compare_if, if_moment, if_phase_gradient_with, Derivative, DEFAULT_THRESHOLD};
use tfcore::io::{read_signal, with_suffix, write_if_track, write_json, write_matrix, write_signal};
use tfcore::verify::{render_table, run_verify, VerifyOptions};
use tfcore::{
    cross_wigner, gen_bandlimited, gen_chirp, gen_gaussian, gen_random, gen_tone, stft, wigner, Boundary,
    ChirpParams, Complex64, GaussianParams, Grid, Window,
};

#[derive(Parser)]
#[command(name = "tf", version, about = "Wigner distributions, STFTs, instantaneous frequency and cone-decay diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a test signal.
    Gen(GenArgs),
    /// Wigner (or cross-Wigner) distribution of a signal.
    Wigner(WignerArgs),
    /// Short-time Fourier transform with a Gaussian window.
    Stft(StftArgs),
    /// Instantaneous frequency by phase gradient and by Wigner moment.
    If(IfArgs),
    /// Cone-decay classification of the STFT.
    Cone(ConeArgs),
    /// Run the identity verification suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Tone,
    Gaussian,
    Chirp,
    Bandlimited,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Zero,
    Periodized,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Zero => Boundary::Zero,
            BoundaryArg::Periodized => Boundary::Periodized,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DerivativeArg {
    Spectral,
    Central,
}

#[derive(Args)]
struct GenArgs {
    kind: GenKind,
    #[arg(long, default_value_t = 512)]
    n: usize,
    #[arg(long, default_value_t = 1.0 / 32.0)]
    dt: f64,
    /// Grid origin; defaults to a grid centred on t = 0.
    #[arg(long, allow_hyphen_values = true)]
    t0: Option<f64>,
    /// Tone frequency (cycles per second).
    #[arg(long, allow_hyphen_values = true)]
    xi0: Option<f64>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    amp_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    amp_im: f64,
    /// Gaussian `exp(-pi a t^2 + 2 pi b t + c)` coefficients.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    a_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    a_im: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    b_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    b_im: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    c_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    c_im: f64,
    /// Chirp `exp(pi i rate t^2)`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "eta0")]
    rate: Option<f64>,
    /// Chirp `exp(2 pi i eta0 t^2)`.
    #[arg(long, allow_hyphen_values = true)]
    eta0: Option<f64>,
    /// Real Gaussian envelope `exp(-pi a t^2)` for the chirp.
    #[arg(long)]
    envelope_a: Option<f64>,
    #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["LO", "HI"])]
    band: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct WignerArgs {
    #[arg(long)]
    input: PathBuf,
    /// Second signal for the cross-Wigner distribution.
    #[arg(long)]
    with: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Zero)]
    boundary: BoundaryArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct StftArgs {
    #[arg(long)]
    input: PathBuf,
    /// Window `exp(-pi a t^2)`.
    #[arg(long, default_value_t = 2.0)]
    window_a: f64,
    /// Frequency oversampling factor.
    #[arg(long, default_value_t = 1)]
    oversample: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct IfArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Zero)]
    boundary: BoundaryArg,
    #[arg(long, value_enum, default_value_t = DerivativeArg::Spectral)]
    derivative: DerivativeArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ConeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    window_a: f64,
    /// Ascending cone slopes.
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 1.5, 2.5, 3.0, 4.0, 6.0, 8.0])]
    slopes: Vec<f64>,
    #[arg(long, default_value_t = 8)]
    shells: usize,
    /// Outer shell radius; default 0.8 of the inscribed half-extent.
    #[arg(long)]
    radius_max: Option<f64>,
    #[arg(long, default_value_t = 0.65)]
    radius_min_ratio: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only these identities (names or prefixes such as `hudson`).
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Negative control: perturb every Wigner matrix by this relative ramp.
    #[arg(long, default_value_t = 0.0)]
    perturb: f64,
    /// Also write the report to `<stem>.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("TF_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().with_context(|| format!("TF_THREADS must be an integer, got {raw:?}"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn distinct(input: &Path, out: &Path) -> Result<()> {
    if input == out {
        bail!("input and output stems must differ ({})", input.display());
    }
    Ok(())
}

fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Gen(a) => cmd_gen(a).map(|_| true),
        Command::Wigner(a) => cmd_wigner(a).map(|_| true),
        Command::Stft(a) => cmd_stft(a).map(|_| true),
        Command::If(a) => cmd_if(a).map(|_| true),
        Command::Cone(a) => cmd_cone(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let grid = match a.t0 {
        Some(t0) => Grid::new(t0, a.dt, a.n)?,
        None => Grid::centered(a.dt, a.n)?,
    };
    let c = Complex64::new;
    let signal = match a.kind {
        GenKind::Tone => {
            let xi0 = a.xi0.context("tone needs --xi0")?;
            gen_tone(grid, xi0, c(a.amp_re, a.amp_im))?
        }
        GenKind::Gaussian => {
            let p = GaussianParams::new(c(a.a_re, a.a_im), c(a.b_re, a.b_im), c(a.c_re, a.c_im))?;
            gen_gaussian(grid, p)?
        }
        GenKind::Chirp => {
            let params = match (a.rate, a.eta0) {
                (Some(r), _) => ChirpParams::new(r)?,
                (None, Some(e)) => ChirpParams::from_eta0(e)?,
                (None, None) => bail!("chirp needs --rate or --eta0"),
            };
            let envelope = a.envelope_a.map(GaussianParams::real).transpose()?;
            gen_chirp(grid, params, envelope)?
        }
        GenKind::Bandlimited => {
            let band = a.band.context("bandlimited needs --band LO HI")?;
            gen_bandlimited(grid, [band[0], band[1]], a.seed)?
        }
        GenKind::Random => gen_random(grid, a.seed)?,
    };
    write_signal(&a.out, &signal)?;
    Ok(())
}

fn cmd_wigner(a: WignerArgs) -> Result<()> {
    distinct(&a.input, &a.out)?;
    let f = read_signal(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let m = match &a.with {
        Some(other) => {
            distinct(other, &a.out)?;
            let g = read_signal(other).with_context(|| format!("reading {}", other.display()))?;
            cross_wigner(&f, &g, a.boundary.into())?
        }
        None => wigner(&f, a.boundary.into())?,
    };
    write_matrix(&a.out, &m)?;
    Ok(())
}

fn cmd_stft(a: StftArgs) -> Result<()> {
    distinct(&a.input, &a.out)?;
    let f = read_signal(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let w = Window::gaussian(a.window_a, f.grid().dt, f.len() - 1)?;
    write_matrix(&a.out, &stft(&f, &w, a.oversample)?)?;
    Ok(())
}

fn cmd_if(a: IfArgs) -> Result<()> {
    distinct(&a.input, &a.out)?;
    let f = read_signal(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let derivative = match a.derivative {
        DerivativeArg::Spectral => Derivative::Spectral,
        DerivativeArg::Central => Derivative::CentralDifference,
    };
    let phase = if_phase_gradient_with(&f, a.threshold, derivative)?;
    let moment = if_moment(&f, a.threshold, a.boundary.into())?;
    let summary = compare_if(&phase, &moment)?;
    if summary.n_compared == 0 {
        eprintln!("warning: no samples are valid for both estimators");
    }
    write_if_track(&with_suffix(&a.out, ".phase"), &phase)?;
    write_if_track(&with_suffix(&a.out, ".moment"), &moment)?;
    write_json(&with_suffix(&a.out, ".summary.json"), &summary)?;
    println!("{}", serde_json::to_string(&summary)?);
    Ok(())
}

fn cmd_cone(a: ConeArgs) -> Result<()> {
    distinct(&a.input, &a.out)?;
    let f = read_signal(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let w = Window::gaussian(a.window_a, f.grid().dt, f.len() - 1)?;
    let opts = ConeOptions {
        radius_max: a.radius_max,
        radius_min_ratio: a.radius_min_ratio,
        n_shells: a.shells,
        ..ConeOptions::default()
    };
    let report = classify_vcon_with(&f, &w, &a.slopes, &opts)?;
    if !report.monotone {
        eprintln!("warning: cone classes are not monotone in the slope");
    }
    write_json(&with_suffix(&a.out, ".json"), &report)?;
    match report.critical_b_estimate {
        Some(b) => println!("critical slope estimate: {b}"),
        None => println!("critical slope estimate: none"),
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Result<bool> {
    let report = run_verify(&VerifyOptions { only: a.only, perturb: a.perturb })?;
    print!("{}", render_table(&report));
    if let Some(stem) = &a.out {
        write_json(&with_suffix(stem, ".json"), &report)?;
    }
    Ok(report.all_pass)
}
