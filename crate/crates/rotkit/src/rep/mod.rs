//! The seven rotation parameterizations and their conversions to and from
//! [`RotationMatrix3`].
//!
//! Each representation lives in its own submodule with typed conversions.
//! [`RepKind`] gives the same machinery a uniform flat-parameter-vector
//! interface, which is what the losses, the fitting harness, the continuity
//! probes, and prediction files all operate on.
//!
//! Typed conversions enforce their invariants strictly (a quaternion must be
//! unit to 1e-6, for example). The flat interface instead treats parameter
//! vectors the way a regressor's raw output would be treated: quaternions and
//! split-form axes are normalized on the way in, and only genuinely
//! degenerate inputs (zero axis, parallel columns, pole hits) are errors.

mod axis_angle;
mod bins;
mod euler;
mod gram_schmidt;
pub(crate) mod jacobian;
mod quaternion;
mod stereo;

pub use axis_angle::{AxisAngle3, AxisAngle4};
pub use bins::{BinDistribution, BinRange};
pub use euler::EulerZYX;
pub use gram_schmidt::GramSchmidt6;
pub use quaternion::UnitQuaternion;
pub use stereo::{project, unproject, Stereo5};

pub(crate) use bins::decode_unchecked;

use crate::so3::RotationMatrix3;
use thiserror::Error;

/// Conversion failures across the representation zoo.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RepError {
    #[error("axis has (near-)zero length but the angle is nonzero")]
    ZeroAxis,
    #[error("quaternion norm {norm} deviates from 1 by more than 1e-6")]
    NotUnit { norm: f64 },
    #[error("column pair is degenerate (zero or parallel); cannot orthonormalize")]
    DegenerateInput,
    #[error("input maps to the stereographic projection pole")]
    PoleSingularity,
    #[error("invalid bin distribution: {reason}")]
    InvalidDistribution { reason: String },
    #[error("expected {expected} parameters for {rep}, got {got}")]
    WrongParamCount {
        rep: RepKind,
        expected: usize,
        got: usize,
    },
}

/// Tag for one of the representations of Table-style model configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepKind {
    /// 3 parameters: Z-Y-X angles in radians.
    Euler,
    /// 3 x 360 bin probabilities, one block per Euler angle.
    EulerBin,
    /// 4 parameters `(r, i, j, k)`.
    Quaternion,
    /// 3 parameters: rotation vector.
    AxisAngle3,
    /// 4 parameters: axis then angle.
    AxisAngle4,
    /// 180 angle-bin probabilities followed by a 3-vector axis.
    AxisAngleBin,
    /// 6 parameters: two column vectors.
    GramSchmidt6,
    /// 5 parameters.
    Stereo5,
}

impl RepKind {
    pub const ALL: [RepKind; 8] = [
        RepKind::Euler,
        RepKind::EulerBin,
        RepKind::Quaternion,
        RepKind::AxisAngle3,
        RepKind::AxisAngle4,
        RepKind::AxisAngleBin,
        RepKind::GramSchmidt6,
        RepKind::Stereo5,
    ];

    /// The six regression representations (everything except the binned ones).
    pub const REGRESSION: [RepKind; 6] = [
        RepKind::Euler,
        RepKind::Quaternion,
        RepKind::AxisAngle3,
        RepKind::AxisAngle4,
        RepKind::GramSchmidt6,
        RepKind::Stereo5,
    ];

    pub fn param_count(self) -> usize {
        match self {
            RepKind::Euler | RepKind::AxisAngle3 => 3,
            RepKind::Quaternion | RepKind::AxisAngle4 => 4,
            RepKind::Stereo5 => 5,
            RepKind::GramSchmidt6 => 6,
            RepKind::EulerBin => 3 * 360,
            RepKind::AxisAngleBin => 180 + 3,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            RepKind::Euler => "euler",
            RepKind::EulerBin => "euler-bin",
            RepKind::Quaternion => "quat",
            RepKind::AxisAngle3 => "aa3",
            RepKind::AxisAngle4 => "aa4",
            RepKind::AxisAngleBin => "aa-bin",
            RepKind::GramSchmidt6 => "gs6",
            RepKind::Stereo5 => "stereo5",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        RepKind::ALL.into_iter().find(|k| k.tag() == tag)
    }

    /// Which parameter slots carry angles (so the CLI can convert degrees to
    /// radians at the boundary). Bin probabilities and unit-vector slots are
    /// dimensionless.
    pub fn angle_scaled_slots(self) -> &'static [usize] {
        match self {
            RepKind::Euler => &[0, 1, 2],
            RepKind::AxisAngle3 => &[0, 1, 2],
            RepKind::AxisAngle4 => &[3],
            _ => &[],
        }
    }
}

impl std::fmt::Display for RepKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Canonical flat parameters of `r` in representation `kind`.
///
/// For the binned kinds this is the one-hot encoding of the canonical
/// angles (plus the unit axis for [`RepKind::AxisAngleBin`]).
pub fn canonical_params(kind: RepKind, r: &RotationMatrix3) -> Vec<f64> {
    match kind {
        RepKind::Euler => {
            let e = EulerZYX::from_matrix(r);
            vec![e.alpha, e.beta, e.gamma]
        }
        RepKind::Quaternion => UnitQuaternion::from_matrix(r).to_array().to_vec(),
        RepKind::AxisAngle3 => AxisAngle3::from_matrix(r).u.to_vec(),
        RepKind::AxisAngle4 => {
            let aa = AxisAngle4::from_matrix(r);
            vec![aa.axis[0], aa.axis[1], aa.axis[2], aa.theta]
        }
        RepKind::GramSchmidt6 => GramSchmidt6::from_matrix(r).to_params().to_vec(),
        RepKind::Stereo5 => Stereo5::from_matrix(r)
            .expect("rotation columns cannot reach the projection pole")
            .u
            .to_vec(),
        RepKind::EulerBin => {
            let e = EulerZYX::from_matrix(r);
            let mut out = Vec::with_capacity(3 * 360);
            for angle in [e.alpha, e.beta, e.gamma] {
                out.extend(BinDistribution::encode(angle, BinRange::FullCircle360).probs);
            }
            out
        }
        RepKind::AxisAngleBin => {
            let aa = AxisAngle4::from_matrix(r);
            let mut out = BinDistribution::encode(aa.theta, BinRange::HalfCircle180).probs;
            out.extend_from_slice(&aa.axis);
            out
        }
    }
}

fn check_len(kind: RepKind, params: &[f64]) -> Result<(), RepError> {
    if params.len() != kind.param_count() {
        return Err(RepError::WrongParamCount {
            rep: kind,
            expected: kind.param_count(),
            got: params.len(),
        });
    }
    Ok(())
}

/// Decode a free parameter vector into a rotation.
///
/// Quaternion parameters are normalized (zero norm is degenerate) and the
/// split-form axis is normalized by its own conversion, mirroring how raw
/// regressor outputs are consumed. Binned kinds decode their weighted
/// averages without requiring an exact probability simplex.
pub fn params_to_matrix(kind: RepKind, params: &[f64]) -> Result<RotationMatrix3, RepError> {
    check_len(kind, params)?;
    match kind {
        RepKind::Euler => Ok(EulerZYX::new(params[0], params[1], params[2]).to_matrix()),
        RepKind::Quaternion => {
            let n = params.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n <= 1e-12 {
                return Err(RepError::NotUnit { norm: n });
            }
            UnitQuaternion::new(params[0] / n, params[1] / n, params[2] / n, params[3] / n)
                .to_matrix()
        }
        RepKind::AxisAngle3 => Ok(AxisAngle3::new([params[0], params[1], params[2]]).to_matrix()),
        RepKind::AxisAngle4 => {
            AxisAngle4::new([params[0], params[1], params[2]], params[3]).to_matrix()
        }
        RepKind::GramSchmidt6 => GramSchmidt6::new(
            [params[0], params[1], params[2]],
            [params[3], params[4], params[5]],
        )
        .to_matrix(),
        RepKind::Stereo5 => {
            Stereo5::new([params[0], params[1], params[2], params[3], params[4]]).to_matrix()
        }
        RepKind::EulerBin => {
            let alpha = decode_unchecked(&params[0..360], BinRange::FullCircle360);
            let beta = decode_unchecked(&params[360..720], BinRange::FullCircle360);
            let gamma = decode_unchecked(&params[720..1080], BinRange::FullCircle360);
            Ok(EulerZYX::new(alpha, beta, gamma).to_matrix())
        }
        RepKind::AxisAngleBin => {
            let theta = decode_unchecked(&params[0..180], BinRange::HalfCircle180);
            AxisAngle4::new([params[180], params[181], params[182]], theta).to_matrix()
        }
    }
}
