use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TfError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Real,
    Complex,
}

/// Row-major storage, rows indexed by time and columns by frequency.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixValues {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl MatrixValues {
    pub fn kind(&self) -> ValueKind {
        match self {
            MatrixValues::Real(_) => ValueKind::Real,
            MatrixValues::Complex(_) => ValueKind::Complex,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            MatrixValues::Real(v) => v.len(),
            MatrixValues::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Sampled time-frequency representation (Wigner or STFT output).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeFrequencyMatrix {
    time_axis: Vec<f64>,
    freq_axis: Vec<f64>,
    values: MatrixValues,
}

fn uniform_spacing(axis: &[f64], name: &str) -> Result<Option<f64>> {
    if axis.iter().any(|x| !x.is_finite()) {
        return Err(TfError::InvalidInput(format!("{name} axis has non-finite entries")));
    }
    if axis.len() < 2 {
        return Ok(None);
    }
    let step = (axis[axis.len() - 1] - axis[0]) / (axis.len() - 1) as f64;
    if step <= 0.0 {
        return Err(TfError::InvalidInput(format!("{name} axis must be ascending")));
    }
    let scale = axis[0].abs().max(axis[axis.len() - 1].abs()).max(step);
    for (i, w) in axis.windows(2).enumerate() {
        if ((w[1] - w[0]) - step).abs() > 1e-12 * scale {
            return Err(TfError::InvalidInput(format!(
                "{name} axis not uniformly spaced at index {i}"
            )));
        }
    }
    Ok(Some(step))
}

impl TimeFrequencyMatrix {
    pub fn new(time_axis: Vec<f64>, freq_axis: Vec<f64>, values: MatrixValues) -> Result<Self> {
        if time_axis.is_empty() || freq_axis.is_empty() {
            return Err(TfError::InvalidInput("matrix axes must be non-empty".into()));
        }
        if values.len() != time_axis.len() * freq_axis.len() {
            return Err(TfError::InvalidInput(format!(
                "{} values do not fill a {} x {} matrix",
                values.len(),
                time_axis.len(),
                freq_axis.len()
            )));
        }
        uniform_spacing(&time_axis, "time")?;
        uniform_spacing(&freq_axis, "frequency")?;
        let finite = match &values {
            MatrixValues::Real(v) => v.iter().all(|x| x.is_finite()),
            MatrixValues::Complex(v) => v.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
        };
        if !finite {
            return Err(TfError::InvalidInput("matrix has non-finite entries".into()));
        }
        Ok(Self { time_axis, freq_axis, values })
    }

    pub fn time_axis(&self) -> &[f64] {
        &self.time_axis
    }

    pub fn freq_axis(&self) -> &[f64] {
        &self.freq_axis
    }

    pub fn values(&self) -> &MatrixValues {
        &self.values
    }

    pub fn into_values(self) -> MatrixValues {
        self.values
    }

    pub fn kind(&self) -> ValueKind {
        self.values.kind()
    }

    pub fn rows(&self) -> usize {
        self.time_axis.len()
    }

    pub fn cols(&self) -> usize {
        self.freq_axis.len()
    }

    /// Frequency bin spacing; 1 for a single-column matrix.
    pub fn freq_step(&self) -> f64 {
        uniform_spacing(&self.freq_axis, "frequency").ok().flatten().unwrap_or(1.0)
    }

    /// Time sample spacing; 1 for a single-row matrix.
    pub fn time_step(&self) -> f64 {
        uniform_spacing(&self.time_axis, "time").ok().flatten().unwrap_or(1.0)
    }

    pub fn real_values(&self) -> Result<&[f64]> {
        match &self.values {
            MatrixValues::Real(v) => Ok(v),
            MatrixValues::Complex(_) => Err(TfError::WrongValueKind("complex")),
        }
    }

    pub fn complex_values(&self) -> Result<&[Complex64]> {
        match &self.values {
            MatrixValues::Complex(v) => Ok(v),
            MatrixValues::Real(_) => Err(TfError::InvalidInput("matrix is real-valued".into())),
        }
    }

    fn check_row(&self, k: usize) -> Result<()> {
        if k >= self.rows() {
            return Err(TfError::IndexOutOfRange { index: k, len: self.rows() });
        }
        Ok(())
    }

    pub fn real_row(&self, k: usize) -> Result<&[f64]> {
        self.check_row(k)?;
        let c = self.cols();
        Ok(&self.real_values()?[k * c..(k + 1) * c])
    }

    pub fn complex_row(&self, k: usize) -> Result<&[Complex64]> {
        self.check_row(k)?;
        let c = self.cols();
        Ok(&self.complex_values()?[k * c..(k + 1) * c])
    }

    /// Largest entry magnitude.
    pub fn peak_abs(&self) -> f64 {
        match &self.values {
            MatrixValues::Real(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            MatrixValues::Complex(v) => v.iter().fold(0.0, |m, z| m.max(z.norm())),
        }
    }

    /// Entrywise magnitudes as a real matrix on the same axes.
    pub fn magnitude(&self) -> TimeFrequencyMatrix {
        let values = match &self.values {
            MatrixValues::Real(v) => v.iter().map(|x| x.abs()).collect(),
            MatrixValues::Complex(v) => v.iter().map(|z| z.norm()).collect(),
        };
        TimeFrequencyMatrix {
            time_axis: self.time_axis.clone(),
            freq_axis: self.freq_axis.clone(),
            values: MatrixValues::Real(values),
        }
    }

    /// Circular roll: entry `(k, j)` moves to `(k + dr, j + dc)` modulo shape.
    pub fn rolled(&self, dr: i64, dc: i64) -> TimeFrequencyMatrix {
        let (r, c) = (self.rows() as i64, self.cols() as i64);
        let dest = |k: usize, j: usize| -> usize {
            let kk = (k as i64 + dr).rem_euclid(r) as usize;
            let jj = (j as i64 + dc).rem_euclid(c) as usize;
            kk * c as usize + jj
        };
        let values = match &self.values {
            MatrixValues::Real(v) => {
                let mut out = vec![0.0; v.len()];
                for k in 0..r as usize {
                    for j in 0..c as usize {
                        out[dest(k, j)] = v[k * c as usize + j];
                    }
                }
                MatrixValues::Real(out)
            }
            MatrixValues::Complex(v) => {
                let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
                for k in 0..r as usize {
                    for j in 0..c as usize {
                        out[dest(k, j)] = v[k * c as usize + j];
                    }
                }
                MatrixValues::Complex(out)
            }
        };
        TimeFrequencyMatrix {
            time_axis: self.time_axis.clone(),
            freq_axis: self.freq_axis.clone(),
            values,
        }
    }

    /// Largest absolute entrywise difference; errors on shape or kind mismatch.
    pub fn max_abs_diff(&self, other: &TimeFrequencyMatrix) -> Result<f64> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(TfError::InvalidInput("matrix shapes differ".into()));
        }
        match (&self.values, &other.values) {
            (MatrixValues::Real(a), MatrixValues::Real(b)) => {
                Ok(a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs())))
            }
            (MatrixValues::Complex(a), MatrixValues::Complex(b)) => {
                Ok(a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).norm())))
            }
            _ => Err(TfError::InvalidInput("matrix value kinds differ".into())),
        }
    }
}

/// Row `k` of the matrix, real or complex as stored.
pub fn slice_time(w: &TimeFrequencyMatrix, k: usize) -> Result<MatrixValues> {
    Ok(match w.kind() {
        ValueKind::Real => MatrixValues::Real(w.real_row(k)?.to_vec()),
        ValueKind::Complex => MatrixValues::Complex(w.complex_row(k)?.to_vec()),
    })
}

/// Integral over frequency at each time: `sum_j W[k, j] dxi`.
pub fn marginal_freq(w: &TimeFrequencyMatrix) -> Result<Vec<f64>> {
    let v = w.real_values()?;
    let dxi = w.freq_step();
    Ok(v.chunks(w.cols()).map(|row| row.iter().sum::<f64>() * dxi).collect())
}

/// Integral over time at each frequency: `sum_k W[k, j] dt`.
pub fn marginal_time(w: &TimeFrequencyMatrix) -> Result<Vec<f64>> {
    let v = w.real_values()?;
    let dt = w.time_step();
    let cols = w.cols();
    let mut acc = vec![0.0; cols];
    for row in v.chunks(cols) {
        for (a, x) in acc.iter_mut().zip(row) {
            *a += x;
        }
    }
    Ok(acc.into_iter().map(|a| a * dt).collect())
}

/// Double Riemann sum over the whole matrix.
pub fn total_energy(w: &TimeFrequencyMatrix) -> Result<f64> {
    let per_time = marginal_freq(w)?;
    Ok(per_time.iter().sum::<f64>() * w.time_step())
}

/// `(sum_j xi_j W[k, j] dxi, sum_j W[k, j] dxi)` for time row `k`.
pub fn first_freq_moment(w: &TimeFrequencyMatrix, k: usize) -> Result<(f64, f64)> {
    let row = w.real_row(k)?;
    let dxi = w.freq_step();
    let (num, den) = row
        .iter()
        .zip(w.freq_axis())
        .fold((0.0, 0.0), |(n, d), (x, xi)| (n + xi * x, d + x));
    Ok((num * dxi, den * dxi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_real(rows: usize, cols: usize) -> TimeFrequencyMatrix {
        TimeFrequencyMatrix::new(
            (0..rows).map(|k| k as f64 * 0.5).collect(),
            (0..cols).map(|j| j as f64 - (cols / 2) as f64).collect(),
            MatrixValues::Real(vec![0.0; rows * cols]),
        )
        .unwrap()
    }

    #[test]
    fn validates_shape_and_axes() {
        assert!(TimeFrequencyMatrix::new(vec![0.0], vec![0.0, 1.0], MatrixValues::Real(vec![0.0])).is_err());
        assert!(TimeFrequencyMatrix::new(
            vec![0.0],
            vec![0.0, 1.0, 3.0],
            MatrixValues::Real(vec![0.0; 3])
        )
        .is_err());
        assert!(TimeFrequencyMatrix::new(vec![0.0], vec![1.0, 0.0], MatrixValues::Real(vec![0.0; 2])).is_err());
        assert!(TimeFrequencyMatrix::new(
            vec![0.0],
            vec![0.0, 1.0],
            MatrixValues::Real(vec![0.0, f64::NAN])
        )
        .is_err());
    }

    #[test]
    fn zero_matrix_reductions() {
        let w = zero_real(4, 8);
        assert_eq!(marginal_freq(&w).unwrap(), vec![0.0; 4]);
        assert_eq!(marginal_time(&w).unwrap(), vec![0.0; 8]);
        assert_eq!(total_energy(&w).unwrap(), 0.0);
        assert_eq!(first_freq_moment(&w, 2).unwrap(), (0.0, 0.0));
        assert_eq!(slice_time(&w, 1).unwrap(), MatrixValues::Real(vec![0.0; 8]));
        assert!(matches!(slice_time(&w, 4), Err(TfError::IndexOutOfRange { .. })));
    }

    #[test]
    fn complex_input_rejected_by_real_reductions() {
        let w = TimeFrequencyMatrix::new(
            vec![0.0, 1.0],
            vec![-1.0, 0.0],
            MatrixValues::Complex(vec![Complex64::new(1.0, 0.0); 4]),
        )
        .unwrap();
        assert!(matches!(marginal_freq(&w), Err(TfError::WrongValueKind(_))));
        assert!(marginal_time(&w).is_err());
        assert!(total_energy(&w).is_err());
        assert!(first_freq_moment(&w, 0).is_err());
    }

    #[test]
    fn riemann_weights() {
        let w = TimeFrequencyMatrix::new(
            vec![0.0, 0.5],
            vec![-1.0, 0.0, 1.0],
            MatrixValues::Real(vec![1.0, 2.0, 3.0, 0.0, 1.0, 0.0]),
        )
        .unwrap();
        assert_eq!(marginal_freq(&w).unwrap(), vec![6.0, 1.0]);
        assert_eq!(marginal_time(&w).unwrap(), vec![0.5, 1.5, 1.5]);
        assert_eq!(total_energy(&w).unwrap(), 3.5);
        assert_eq!(first_freq_moment(&w, 0).unwrap(), (2.0, 6.0));
    }

    #[test]
    fn roll_wraps() {
        let w = TimeFrequencyMatrix::new(
            vec![0.0, 1.0],
            vec![0.0, 1.0, 2.0],
            MatrixValues::Real(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]),
        )
        .unwrap();
        let r = w.rolled(1, -1);
        assert_eq!(r.real_values().unwrap(), &[5.0, 6.0, 4.0, 2.0, 3.0, 1.0]);
        assert_eq!(r.rolled(-1, 1), w);
    }
}
