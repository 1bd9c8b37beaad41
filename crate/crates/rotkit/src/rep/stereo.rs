//! The 5D representation: the Gram-Schmidt pair with its last four
//! coordinates compressed through a normalized stereographic projection.
//!
//! `project` normalizes its 4-vector input and projects from the pole
//! `(1, 0, 0, 0)`; `unproject` is the standard inverse onto the unit
//! 3-sphere. Encoding a rotation keeps `(M11, M21)` verbatim and projects
//! `(M31, M12, M22, M32)`. Because the flattened pair of two unit columns
//! has total squared norm 2, the decoder can restore the discarded length
//! as `sqrt(2 - u1^2 - u2^2)`, which makes the round trip exact.

use crate::rep::{GramSchmidt6, RepError};
use crate::so3::RotationMatrix3;

/// How close the normalized input may come to the projection pole before
/// `project` refuses.
const POLE_TOL: f64 = 1e-9;

/// Free 5-vector; any value decodes through [`Stereo5::to_matrix`] unless the
/// reconstructed column pair is degenerate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stereo5 {
    pub u: [f64; 5],
}

/// Normalized stereographic projection from the pole `(1, 0, 0, 0)`.
pub fn project(w: [f64; 4]) -> Result<[f64; 3], RepError> {
    let n = (w.iter().map(|x| x * x).sum::<f64>()).sqrt();
    if n <= 1e-12 {
        return Err(RepError::PoleSingularity);
    }
    let v: [f64; 4] = [w[0] / n, w[1] / n, w[2] / n, w[3] / n];
    if v[0] >= 1.0 - POLE_TOL {
        return Err(RepError::PoleSingularity);
    }
    let d = 1.0 - v[0];
    Ok([v[1] / d, v[2] / d, v[3] / d])
}

/// Inverse projection onto the unit 3-sphere.
pub fn unproject(u: [f64; 3]) -> [f64; 4] {
    let s = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    let d = s + 1.0;
    [(s - 1.0) / d, 2.0 * u[0] / d, 2.0 * u[1] / d, 2.0 * u[2] / d]
}

impl Stereo5 {
    pub fn new(u: [f64; 5]) -> Self {
        Self { u }
    }

    /// Encode a rotation: keep the first column's x and y, project the rest.
    pub fn from_matrix(r: &RotationMatrix3) -> Result<Self, RepError> {
        let gs = GramSchmidt6::from_matrix(r);
        let tail = project([gs.a1[2], gs.a2[0], gs.a2[1], gs.a2[2]])?;
        Ok(Self::new([gs.a1[0], gs.a1[1], tail[0], tail[1], tail[2]]))
    }

    /// Decode: unproject, restore the discarded norm, reassemble the column
    /// pair, and orthonormalize.
    pub fn to_matrix(&self) -> Result<RotationMatrix3, RepError> {
        let [u1, u2, u3, u4, u5] = self.u;
        let q = unproject([u3, u4, u5]);
        let scale = (2.0 - u1 * u1 - u2 * u2).max(1e-12).sqrt();
        let a1 = [u1, u2, scale * q[0]];
        let a2 = [scale * q[1], scale * q[2], scale * q[3]];
        GramSchmidt6::new(a1, a2).to_matrix()
    }
}
