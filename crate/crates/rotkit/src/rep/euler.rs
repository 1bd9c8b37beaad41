//! Euler angles in the Z(alpha) Y(beta) X(gamma) convention.
//!
//! The forward map is the closed-form product of the three elementary
//! rotations. The inverse extracts `beta = asin(-R31)` and the two
//! remaining angles with `atan2`, which pins the canonical ranges
//! `alpha, gamma in (-pi, pi]`, `beta in [-pi/2, pi/2]`. Where the middle
//! axis degenerates (gimbal lock) only `alpha +- gamma` is observable; the
//! inverse then reports `gamma = 0` and folds the free angle into `alpha`.

use crate::so3::RotationMatrix3;

/// `|R31| >= 1 - GIMBAL_TOL` switches the inverse to the gimbal-lock branch.
const GIMBAL_TOL: f64 = 1e-9;

/// Euler angles in radians, applied as `Z(alpha) Y(beta) X(gamma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerZYX {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Wrap into `(-pi, pi]`.
pub(crate) fn wrap_pi(a: f64) -> f64 {
    let mut x = a.rem_euclid(std::f64::consts::TAU);
    if x > std::f64::consts::PI {
        x -= std::f64::consts::TAU;
    }
    x
}

impl EulerZYX {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }

    /// The rotation `Z(alpha) Y(beta) X(gamma)`, written out as one matrix.
    pub fn to_matrix(&self) -> RotationMatrix3 {
        let (sa, ca) = self.alpha.sin_cos();
        let (sb, cb) = self.beta.sin_cos();
        let (sg, cg) = self.gamma.sin_cos();
        RotationMatrix3::new_unchecked([
            [ca * cb, ca * sb * sg - cg * sa, sa * sg + ca * cg * sb],
            [cb * sa, ca * cg + sa * sb * sg, cg * sa * sb - ca * sg],
            [-sb, cb * sg, cb * cg],
        ])
    }

    /// Canonical Euler angles of `r`; inverse of [`to_matrix`](Self::to_matrix)
    /// away from gimbal lock, and a consistent section through it.
    pub fn from_matrix(r: &RotationMatrix3) -> Self {
        let r31 = r.at(2, 0);
        if r31.abs() >= 1.0 - GIMBAL_TOL {
            // Middle axis at +-90 degrees: only alpha -+ gamma is determined.
            // Convention: gamma = 0. In both lock cases the remaining angle
            // satisfies R12 = -sin(alpha), R22 = cos(alpha) once gamma = 0.
            let beta = (-r31.clamp(-1.0, 1.0)).asin();
            let alpha = (-r.at(0, 1)).atan2(r.at(1, 1));
            return Self::new(wrap_pi(alpha), beta, 0.0);
        }
        let beta = (-r31).asin();
        let alpha = r.at(1, 0).atan2(r.at(0, 0));
        let gamma = r.at(2, 1).atan2(r.at(2, 2));
        Self::new(wrap_pi(alpha), beta, wrap_pi(gamma))
    }
}
