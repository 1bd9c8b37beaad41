//! Axis-angle representations: the 3D rotation vector (angle carried by the
//! norm) and the 4D split form (unit axis plus separate angle).
//!
//! Rodrigues' formula converts to a matrix. The inverse recovers the angle
//! from the trace and the axis from the skew part, switching near `theta = 0`
//! to the Taylor limit of `theta / (2 sin theta)` and near `theta = pi` to
//! extraction from `(R + I) / 2`, where the skew part vanishes.

use crate::mat3::{self, Vec3};
use crate::rep::RepError;
use crate::so3::RotationMatrix3;

/// Below this angle the `theta / (2 sin theta)` factor uses its limit 1/2;
/// above `pi` minus this, the axis comes from `(R + I) / 2`.
const ENDPOINT_TOL: f64 = 1e-6;

/// Rotation vector: direction is the axis, norm is the angle in radians.
/// Canonical form has norm in `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAngle3 {
    pub u: Vec3,
}

/// Unit axis plus separate angle in radians; canonical `theta in [0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAngle4 {
    pub axis: Vec3,
    pub theta: f64,
}

/// `sin(theta)/theta` and `(1 - cos(theta))/theta^2` with small-angle series.
pub(crate) fn sinc_pair(theta: f64) -> (f64, f64) {
    if theta.abs() < 1e-4 {
        let t2 = theta * theta;
        (1.0 - t2 / 6.0 + t2 * t2 / 120.0, 0.5 - t2 / 24.0 + t2 * t2 / 720.0)
    } else {
        (theta.sin() / theta, (1.0 - theta.cos()) / (theta * theta))
    }
}

impl AxisAngle3 {
    pub fn new(u: Vec3) -> Self {
        Self { u }
    }

    pub fn angle(&self) -> f64 {
        mat3::norm3(self.u)
    }

    /// Rodrigues' formula in the form `I + f(theta) K + g(theta) K^2` with
    /// `K = skew(u)`, which is smooth through `theta = 0`.
    pub fn to_matrix(&self) -> RotationMatrix3 {
        let theta = self.angle();
        let (f, g) = sinc_pair(theta);
        let k = mat3::skew(self.u);
        let k2 = mat3::mat_mul(&k, &k);
        let m = mat3::mat_add(
            &mat3::MAT3_IDENTITY,
            &mat3::mat_add(&mat3::mat_scale(&k, f), &mat3::mat_scale(&k2, g)),
        );
        RotationMatrix3::new_unchecked(m)
    }

    /// Canonical rotation vector of `r`, with norm in `[0, pi]`.
    pub fn from_matrix(r: &RotationMatrix3) -> Self {
        let theta = ((r.trace() - 1.0) / 2.0).clamp(-1.0, 1.0).acos();
        let d = [
            r.at(2, 1) - r.at(1, 2),
            r.at(0, 2) - r.at(2, 0),
            r.at(1, 0) - r.at(0, 1),
        ];
        if theta < ENDPOINT_TOL {
            return Self::new(mat3::scale3(d, 0.5));
        }
        if theta > std::f64::consts::PI - ENDPOINT_TOL {
            // Near a half turn the skew part of R carries almost no signal;
            // symmetrize first, so that ((R + R^T)/2 + I)/2 ~ u u^T, and read
            // the axis from the column with the largest diagonal entry.
            let b = |i: usize, j: usize| {
                (r.at(i, j) + r.at(j, i)) / 4.0 + if i == j { 0.5 } else { 0.0 }
            };
            let diag = [b(0, 0), b(1, 1), b(2, 2)];
            let k = if diag[0] >= diag[1] && diag[0] >= diag[2] {
                0
            } else if diag[1] >= diag[2] {
                1
            } else {
                2
            };
            let col = [b(0, k), b(1, k), b(2, k)];
            let mut axis = mat3::scale3(col, 1.0 / mat3::norm3(col));
            // The skew differences equal 2 sin(theta) u and still carry the
            // sign for theta < pi; at exactly pi fall back to a fixed
            // canonical orientation.
            if mat3::dot3(axis, d) < 0.0 {
                axis = mat3::scale3(axis, -1.0);
            } else if mat3::norm3(d) == 0.0 {
                let lead = axis.iter().find(|c| c.abs() > 0.0).copied().unwrap_or(1.0);
                if lead < 0.0 {
                    axis = mat3::scale3(axis, -1.0);
                }
            }
            return Self::new(mat3::scale3(axis, theta));
        }
        // u = theta / (2 sin theta) d, but with the sine taken as |d| / 2,
        // its exact value. Computing sin(theta) from the arccos output
        // instead would amplify that output's quantization error by
        // 1 / sin^2(theta) near a half turn.
        Self::new(mat3::scale3(d, theta / mat3::norm3(d)))
    }

    /// Split norm and direction; zero rotation maps to axis `(1, 0, 0)`.
    pub fn to_axis_angle4(&self) -> AxisAngle4 {
        let theta = self.angle();
        if theta <= 1e-12 {
            return AxisAngle4 {
                axis: [1.0, 0.0, 0.0],
                theta: 0.0,
            };
        }
        AxisAngle4 {
            axis: mat3::scale3(self.u, 1.0 / theta),
            theta,
        }
    }
}

impl AxisAngle4 {
    pub fn new(axis: Vec3, theta: f64) -> Self {
        Self { axis, theta }
    }

    pub fn to_axis_angle3(&self) -> AxisAngle3 {
        AxisAngle3::new(mat3::scale3(self.axis, self.theta))
    }

    pub fn to_matrix(&self) -> Result<RotationMatrix3, RepError> {
        let n = mat3::norm3(self.axis);
        if n <= 1e-12 {
            if self.theta == 0.0 {
                return Ok(RotationMatrix3::identity());
            }
            return Err(RepError::ZeroAxis);
        }
        let unit = mat3::scale3(self.axis, 1.0 / n);
        Ok(AxisAngle3::new(mat3::scale3(unit, self.theta)).to_matrix())
    }

    pub fn from_matrix(r: &RotationMatrix3) -> Self {
        AxisAngle3::from_matrix(r).to_axis_angle4()
    }
}
