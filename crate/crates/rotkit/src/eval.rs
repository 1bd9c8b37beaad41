//! Accuracy curves, mean average accuracy, summary reports, and the
//! error-versus-nearest-train-distance linear fit.
//!
//! All error magnitudes here are geodesic angles in degrees. The accuracy
//! curve at threshold `x` is the fraction of errors strictly smaller than
//! `x`; mAA(alpha) is the exact normalized area under that step function on
//! `(0, alpha)`, which reduces to `mean(max(0, alpha - e) / alpha)`.

use std::io::Write;

use thiserror::Error;

use crate::datagen::{fmt_f64, median_of_sorted, RotationDataset};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("empty error list")]
    EmptyInput,
    #[error("expected {expected} values (one per test sample), got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Dataset(#[from] crate::datagen::DatasetError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Sorted error magnitudes, evaluable as a cumulative accuracy function.
#[derive(Debug, Clone)]
pub struct AccuracyCurve {
    sorted_errors: Vec<f64>,
}

impl AccuracyCurve {
    pub fn new(errors: &[f64]) -> Result<Self, EvalError> {
        if errors.is_empty() {
            return Err(EvalError::EmptyInput);
        }
        let mut sorted_errors = errors.to_vec();
        sorted_errors.sort_by(|a, b| a.total_cmp(b));
        Ok(Self { sorted_errors })
    }

    /// Fraction of errors strictly smaller than `threshold` degrees.
    pub fn accuracy_at(&self, threshold: f64) -> f64 {
        let below = self.sorted_errors.partition_point(|e| *e < threshold);
        below as f64 / self.sorted_errors.len() as f64
    }

    /// Normalized area under the curve on `(0, alpha)`, integrated exactly
    /// from the step structure.
    pub fn maa(&self, alpha: f64) -> f64 {
        assert!(alpha > 0.0, "mAA cutoff must be positive");
        let n = self.sorted_errors.len() as f64;
        self.sorted_errors
            .iter()
            .map(|e| (alpha - e).max(0.0) / alpha)
            .sum::<f64>()
            / n
    }

    pub fn errors(&self) -> &[f64] {
        &self.sorted_errors
    }

    /// CSV rows `threshold_deg,accuracy` from 0 to `max_deg` inclusive at
    /// the given resolution.
    pub fn to_csv(&self, step_deg: f64, max_deg: f64) -> String {
        assert!(step_deg > 0.0, "curve resolution must be positive");
        let mut out = String::from("threshold_deg,accuracy\n");
        let steps = (max_deg / step_deg).round() as usize;
        for k in 0..=steps {
            let x = k as f64 * step_deg;
            out.push_str(&format!("{x},{}\n", fmt_f64(self.accuracy_at(x))));
        }
        out
    }
}

/// Summary statistics over a test-set error list.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub mean: f64,
    pub median: f64,
    pub maa5: f64,
    pub maa10: f64,
    pub maa20: f64,
    pub curve: AccuracyCurve,
}

/// Mean, median (midpoint convention for even counts), and mAA at the 5, 10
/// and 20 degree cutoffs.
pub fn report(errors: &[f64]) -> Result<EvalReport, EvalError> {
    let curve = AccuracyCurve::new(errors)?;
    let mean = errors.iter().sum::<f64>() / errors.len() as f64;
    let median = median_of_sorted(curve.errors());
    Ok(EvalReport {
        mean,
        median,
        maa5: curve.maa(5.0),
        maa10: curve.maa(10.0),
        maa20: curve.maa(20.0),
        curve,
    })
}

impl EvalReport {
    /// The report as a JSON object. `extra` appends caller fields (the CLI
    /// adds an invalid-prediction count).
    pub fn write_json(&self, w: &mut dyn Write, extra: &[(&str, String)]) -> std::io::Result<()> {
        write!(
            w,
            "{{\"mean\":{},\"median\":{},\"mAA5\":{},\"mAA10\":{},\"mAA20\":{}",
            fmt_f64(self.mean),
            fmt_f64(self.median),
            fmt_f64(self.maa5),
            fmt_f64(self.maa10),
            fmt_f64(self.maa20),
        )?;
        for (key, value) in extra {
            write!(w, ",\"{key}\":{value}")?;
        }
        writeln!(w, "}}")
    }
}

/// Least-squares line through `(distance, error)` pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    /// Degrees of error per degree of nearest-train distance.
    pub slope: f64,
    pub intercept: f64,
}

/// Fit test-set errors against each sample's distance to the nearest
/// training rotation.
pub fn nearest_train_fit(ds: &RotationDataset, errors: &[f64]) -> Result<LinearFit, EvalError> {
    let distances = ds.nearest_train_distances()?;
    least_squares(&distances, errors)
}

/// Ordinary least squares of `y` on `x`.
pub fn least_squares(x: &[f64], y: &[f64]) -> Result<LinearFit, EvalError> {
    if x.len() != y.len() {
        return Err(EvalError::LengthMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        sxx += (xi - mean_x) * (xi - mean_x);
        sxy += (xi - mean_x) * (yi - mean_y);
    }
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    Ok(LinearFit {
        slope,
        intercept: mean_y - slope * mean_x,
    })
}
