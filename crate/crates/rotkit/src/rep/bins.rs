//! Binned-angle classification encodings: one-degree categories with
//! one-hot encoding and weighted-average decoding.
//!
//! Two bin layouts exist: 360 bins for a full-circle Euler angle and 180
//! bins for the axis-angle magnitude. Bin `i` covers `[i, i+1)` degrees with
//! its center at `i + 0.5`. Full-circle decoding takes the circular weighted
//! mean of the bin centers -- a plain mean of bins 0 and 359 would land at
//! 180 degrees, the worst possible answer -- while the bounded axis-angle
//! range uses the ordinary weighted mean.

use crate::rep::RepError;

/// Probability-vector tolerance on `sum(p) = 1`.
const SUM_TOL: f64 = 1e-6;

/// Which angular range the bins tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinRange {
    /// 360 one-degree bins over a full circle; circular decode.
    FullCircle360,
    /// 180 one-degree bins over `[0, 180)` degrees; linear decode.
    HalfCircle180,
}

impl BinRange {
    pub fn n_bins(self) -> usize {
        match self {
            BinRange::FullCircle360 => 360,
            BinRange::HalfCircle180 => 180,
        }
    }

    pub fn span_degrees(self) -> f64 {
        self.n_bins() as f64
    }

    /// Bin index holding `angle` (radians), wrapped into the range.
    pub fn bin_index(self, angle: f64) -> usize {
        let deg = angle.to_degrees().rem_euclid(self.span_degrees());
        // rem_euclid keeps deg < span, so the cast is in range; guard the
        // pathological rounding case at the top edge anyway.
        (deg.floor() as usize).min(self.n_bins() - 1)
    }

    /// Center of bin `i` in radians.
    pub fn center(self, i: usize) -> f64 {
        (i as f64 + 0.5).to_radians()
    }
}

/// A probability vector over angle bins.
#[derive(Debug, Clone, PartialEq)]
pub struct BinDistribution {
    pub probs: Vec<f64>,
    pub range: BinRange,
}

impl BinDistribution {
    pub fn new(probs: Vec<f64>, range: BinRange) -> Self {
        Self { probs, range }
    }

    /// One-hot encoding of `angle` (radians).
    pub fn encode(angle: f64, range: BinRange) -> Self {
        let mut probs = vec![0.0; range.n_bins()];
        probs[range.bin_index(angle)] = 1.0;
        Self { probs, range }
    }

    pub fn validate(&self) -> Result<(), RepError> {
        if self.probs.len() != self.range.n_bins() {
            return Err(RepError::InvalidDistribution {
                reason: format!(
                    "expected {} bins, got {}",
                    self.range.n_bins(),
                    self.probs.len()
                ),
            });
        }
        if let Some(p) = self.probs.iter().find(|p| **p < 0.0) {
            return Err(RepError::InvalidDistribution {
                reason: format!("negative probability {p}"),
            });
        }
        let sum: f64 = self.probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(RepError::InvalidDistribution {
                reason: format!("probabilities sum to {sum}"),
            });
        }
        Ok(())
    }

    /// Weighted-average decode, in radians.
    pub fn decode(&self) -> Result<f64, RepError> {
        self.validate()?;
        Ok(decode_unchecked(&self.probs, self.range))
    }
}

/// Decode without the probability-vector checks; shared with the loss
/// gradients, which perturb the weights off the simplex.
pub(crate) fn decode_unchecked(probs: &[f64], range: BinRange) -> f64 {
    match range {
        BinRange::FullCircle360 => {
            let mut sin_sum = 0.0;
            let mut cos_sum = 0.0;
            for (i, p) in probs.iter().enumerate() {
                let c = range.center(i);
                sin_sum += p * c.sin();
                cos_sum += p * c.cos();
            }
            sin_sum.atan2(cos_sum).rem_euclid(std::f64::consts::TAU)
        }
        BinRange::HalfCircle180 => probs
            .iter()
            .enumerate()
            .map(|(i, p)| p * range.center(i))
            .sum(),
    }
}
