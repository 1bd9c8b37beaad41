//! Unit quaternions: points on the 4-sphere, double-covering the rotations.
//!
//! `q` and `-q` rotate identically, so matrix-to-quaternion picks the
//! canonical sign (`r >= 0`, ties broken by the first nonzero component).
//! That choice makes the map single-valued but necessarily discontinuous
//! near half turns, which is exactly what the continuity probes measure.

use crate::rep::RepError;
use crate::so3::RotationMatrix3;

/// Quaternion `(r, i, j, k)` with scalar part first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuaternion {
    pub r: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl UnitQuaternion {
    pub fn new(r: f64, i: f64, j: f64, k: f64) -> Self {
        Self { r, i, j, k }
    }

    pub fn norm(&self) -> f64 {
        (self.r * self.r + self.i * self.i + self.j * self.j + self.k * self.k).sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self::new(self.r / n, self.i / n, self.j / n, self.k / n)
    }

    /// Canonical sign: scalar part nonnegative; if it is zero, the first
    /// nonzero vector component is made positive.
    pub fn canonicalized(&self) -> Self {
        let flip = if self.r != 0.0 {
            self.r < 0.0
        } else if self.i != 0.0 {
            self.i < 0.0
        } else if self.j != 0.0 {
            self.j < 0.0
        } else {
            self.k < 0.0
        };
        if flip {
            Self::new(-self.r, -self.i, -self.j, -self.k)
        } else {
            *self
        }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.r, self.i, self.j, self.k]
    }

    /// Rotation matrix of the quaternion.
    ///
    /// Rejects inputs whose norm deviates from 1 by more than 1e-6, then
    /// renormalizes so the produced matrix is orthonormal to machine
    /// precision rather than to the input's drift.
    pub fn to_matrix(&self) -> Result<RotationMatrix3, RepError> {
        let n = self.norm();
        if (n - 1.0).abs() > 1e-6 {
            return Err(RepError::NotUnit { norm: n });
        }
        let q = self.normalized();
        Ok(RotationMatrix3::from_unit_quat(q.r, q.i, q.j, q.k))
    }

    /// Canonical unit quaternion of `r` via the largest-diagonal-pivot
    /// (Shepperd) branches, stable for every trace sign.
    pub fn from_matrix(r: &RotationMatrix3) -> Self {
        let m = r.rows();
        let trace = m[0][0] + m[1][1] + m[2][2];
        let q = if trace > 0.0 {
            let s = 0.5 / (trace + 1.0).sqrt();
            Self::new(
                0.25 / s,
                (m[2][1] - m[1][2]) * s,
                (m[0][2] - m[2][0]) * s,
                (m[1][0] - m[0][1]) * s,
            )
        } else if m[0][0] > m[1][1] && m[0][0] > m[2][2] {
            let s = 2.0 * (1.0 + m[0][0] - m[1][1] - m[2][2]).sqrt();
            Self::new(
                (m[2][1] - m[1][2]) / s,
                0.25 * s,
                (m[0][1] + m[1][0]) / s,
                (m[0][2] + m[2][0]) / s,
            )
        } else if m[1][1] > m[2][2] {
            let s = 2.0 * (1.0 + m[1][1] - m[0][0] - m[2][2]).sqrt();
            Self::new(
                (m[0][2] - m[2][0]) / s,
                (m[0][1] + m[1][0]) / s,
                0.25 * s,
                (m[1][2] + m[2][1]) / s,
            )
        } else {
            let s = 2.0 * (1.0 + m[2][2] - m[0][0] - m[1][1]).sqrt();
            Self::new(
                (m[1][0] - m[0][1]) / s,
                (m[0][2] + m[2][0]) / s,
                (m[1][2] + m[2][1]) / s,
                0.25 * s,
            )
        };
        q.normalized().canonicalized()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::so3::haar_random;
    use std::f64::consts::FRAC_PI_2;

    // Test-side quaternion arithmetic, kept independent of the conversion
    // under test.
    fn qmul(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
        [
            a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
        ]
    }

    #[test]
    fn identity_quaternion() {
        let r = UnitQuaternion::new(1.0, 0.0, 0.0, 0.0).to_matrix().unwrap();
        assert!(r.frobenius_distance(&RotationMatrix3::identity()) < 1e-15);
        let q = UnitQuaternion::from_matrix(&RotationMatrix3::identity());
        assert_eq!(q.to_array(), [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn quarter_turn_about_z_by_hand() {
        let h = FRAC_PI_2 / 2.0;
        let q = UnitQuaternion::new(h.cos(), 0.0, 0.0, h.sin());
        let r = q.to_matrix().unwrap();
        assert!(r.frobenius_distance(&RotationMatrix3::rot_z(FRAC_PI_2)) < 1e-15);

        let back = UnitQuaternion::from_matrix(&RotationMatrix3::rot_z(FRAC_PI_2));
        assert!((back.r - h.cos()).abs() < 1e-15);
        assert!((back.k - h.sin()).abs() < 1e-15);
        assert!(back.i.abs() < 1e-15 && back.j.abs() < 1e-15);
    }

    #[test]
    fn double_cover_gives_identical_matrices() {
        let q = UnitQuaternion::new(0.3, -0.5, 0.4, 0.706399893905786).normalized();
        let neg = UnitQuaternion::new(-q.r, -q.i, -q.j, -q.k);
        assert_eq!(
            q.to_matrix().unwrap().to_flat(),
            neg.to_matrix().unwrap().to_flat()
        );
    }

    #[test]
    fn non_unit_is_rejected() {
        let err = UnitQuaternion::new(1.1, 0.0, 0.0, 0.0).to_matrix().unwrap_err();
        assert!(matches!(err, RepError::NotUnit { .. }));
    }

    #[test]
    fn haar_round_trip() {
        for r in haar_random(31, 10_000) {
            let q = UnitQuaternion::from_matrix(&r);
            assert!((q.norm() - 1.0).abs() < 1e-12);
            assert!(q.r >= 0.0);
            let back = q.to_matrix().unwrap();
            assert!(back.frobenius_distance(&r) < 1e-9);
        }
    }

    #[test]
    fn matrix_action_matches_conjugation() {
        // q p q^-1 computed in quaternion arithmetic is the oracle for the
        // matrix produced by to_matrix.
        let rotations = haar_random(37, 40);
        let points = haar_random(41, 25);
        let mut checked = 0usize;
        for r in &rotations {
            let q = UnitQuaternion::from_matrix(r).to_array();
            let qinv = [q[0], -q[1], -q[2], -q[3]];
            for p in &points {
                let v = p.col(0);
                let pq = [0.0, v[0], v[1], v[2]];
                let rotated = qmul(qmul(q, pq), qinv);
                let direct = r.apply(v);
                for i in 0..3 {
                    assert!((rotated[i + 1] - direct[i]).abs() < 1e-10);
                }
                checked += 1;
            }
        }
        assert_eq!(checked, 1000);
    }

    #[test]
    fn canonical_sign_tie_breaking() {
        let q = UnitQuaternion::new(0.0, -1.0, 0.0, 0.0).canonicalized();
        assert_eq!(q.to_array(), [0.0, 1.0, 0.0, 0.0]);
        let q = UnitQuaternion::new(0.0, 0.0, -0.6, -0.8).canonicalized();
        assert_eq!(q.to_array(), [0.0, 0.0, 0.6, 0.8]);
    }
}
