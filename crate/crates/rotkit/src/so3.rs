//! Rotation matrices, group operations, uniform sampling, and the geodesic
//! angle metric.
//!
//! [`RotationMatrix3`] is the hub every other representation converts to and
//! from: a 3x3 orthogonal matrix with determinant +1, checked on construction.
//! Distances between rotations are measured by [`geodesic_angle`], the angle
//! of the relative rotation `a^T b`, which is what every loss and evaluation
//! metric in this crate ultimately reports.

use rand::{Rng, RngExt};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::mat3::{self, Mat3, Vec3};

/// Orthonormality / determinant tolerance for accepting a matrix as a rotation.
///
/// Loose enough to absorb drift from chained conversions (~1e-15 per step),
/// tight enough to reject genuinely deformed matrices.
pub const VALIDATION_TOL: f64 = 1e-9;

/// Produced when a 3x3 array fails the rotation-matrix invariants: it would
/// distort, magnify, or project rather than purely rotate.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("not a rotation matrix: |M^T M - I|_F = {orthogonality_defect:.3e}, det = {det:.12}")]
pub struct NotARotation {
    /// Frobenius norm of `M^T M - I`.
    pub orthogonality_defect: f64,
    /// Determinant of the offered matrix.
    pub det: f64,
}

/// An angle stored in radians. Degrees appear only at I/O boundaries.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle {
    radians: f64,
}

impl Angle {
    pub fn from_radians(radians: f64) -> Self {
        Self { radians }
    }

    pub fn from_degrees(degrees: f64) -> Self {
        Self {
            radians: degrees.to_radians(),
        }
    }

    pub fn radians(self) -> f64 {
        self.radians
    }

    pub fn degrees(self) -> f64 {
        self.radians.to_degrees()
    }
}

/// A 3x3 rotation matrix, row-major, with orthonormal columns and det +1.
///
/// Construction goes through [`RotationMatrix3::validate`] (or through
/// conversions that are valid by construction), so holding a value of this
/// type means the invariants hold to within [`VALIDATION_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix3 {
    m: Mat3,
}

impl RotationMatrix3 {
    /// Accept `m` as a rotation iff `|M^T M - I|_F <= 1e-9` and `det = 1 +- 1e-9`.
    pub fn validate(m: Mat3) -> Result<Self, NotARotation> {
        let gram = mat3::mat_mul(&mat3::transpose(&m), &m);
        let defect = mat3::frob_norm(&mat3::mat_sub(&gram, &mat3::MAT3_IDENTITY));
        let det = mat3::det3(&m);
        if defect <= VALIDATION_TOL && (det - 1.0).abs() <= VALIDATION_TOL {
            Ok(Self { m })
        } else {
            Err(NotARotation {
                orthogonality_defect: defect,
                det,
            })
        }
    }

    /// Construction for internal paths that are valid by construction
    /// (elementary rotations, products of rotations, orthonormalized output).
    pub(crate) fn new_unchecked(m: Mat3) -> Self {
        debug_assert!(
            Self::validate(m).is_ok(),
            "new_unchecked received an invalid matrix"
        );
        Self { m }
    }

    pub fn identity() -> Self {
        Self {
            m: mat3::MAT3_IDENTITY,
        }
    }

    /// Rotation about the x-axis by `theta` radians.
    pub fn rot_x(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]],
        }
    }

    /// Rotation about the y-axis by `theta` radians.
    pub fn rot_y(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            m: [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]],
        }
    }

    /// Rotation about the z-axis by `theta` radians.
    pub fn rot_z(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            m: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Matrix product `self * other` (apply `other` first, then `self`).
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            m: mat3::mat_mul(&self.m, &other.m),
        }
    }

    /// Group inverse; for orthogonal matrices this is the transpose.
    pub fn inverse(&self) -> Self {
        Self {
            m: mat3::transpose(&self.m),
        }
    }

    /// Rotate a point.
    pub fn apply(&self, v: Vec3) -> Vec3 {
        mat3::mat_vec(&self.m, v)
    }

    pub fn trace(&self) -> f64 {
        mat3::trace(&self.m)
    }

    pub fn det(&self) -> f64 {
        mat3::det3(&self.m)
    }

    /// Row-major element access; `i`, `j` in `0..3`.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn col(&self, j: usize) -> Vec3 {
        [self.m[0][j], self.m[1][j], self.m[2][j]]
    }

    pub fn rows(&self) -> &Mat3 {
        &self.m
    }

    /// Flattened row-major elements, the order used by dataset files.
    pub fn to_flat(&self) -> [f64; 9] {
        let m = &self.m;
        [
            m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2],
        ]
    }

    /// Validating inverse of [`to_flat`](Self::to_flat).
    pub fn from_flat(f: [f64; 9]) -> Result<Self, NotARotation> {
        Self::validate([[f[0], f[1], f[2]], [f[3], f[4], f[5]], [f[6], f[7], f[8]]])
    }

    /// Frobenius distance `|a - b|_F`.
    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        mat3::frob_norm(&mat3::mat_sub(&self.m, &other.m))
    }

    /// Rotation matrix of the unit quaternion `(w, x, y, z)`.
    ///
    /// The caller must pass unit-norm components; the public checked entry
    /// point is `rep::UnitQuaternion::to_matrix`.
    pub(crate) fn from_unit_quat(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self {
            m: [
                [
                    1.0 - 2.0 * (y * y + z * z),
                    2.0 * (x * y - z * w),
                    2.0 * (x * z + y * w),
                ],
                [
                    2.0 * (x * y + z * w),
                    1.0 - 2.0 * (x * x + z * z),
                    2.0 * (y * z - x * w),
                ],
                [
                    2.0 * (x * z - y * w),
                    2.0 * (y * z + x * w),
                    1.0 - 2.0 * (x * x + y * y),
                ],
            ],
        }
    }
}

impl std::ops::Mul for RotationMatrix3 {
    type Output = RotationMatrix3;

    fn mul(self, rhs: Self) -> Self::Output {
        self.compose(&rhs)
    }
}

/// Geodesic angle between two rotations: `arccos((tr(a^T b) - 1) / 2)`.
///
/// The arccos argument is clamped to `[-1, 1]`; trace round-off routinely
/// exceeds the domain by ~1e-16 and clamping absorbs it. The result lies in
/// `[0, pi]`.
pub fn geodesic_angle(a: &RotationMatrix3, b: &RotationMatrix3) -> Angle {
    // tr(a^T b) = sum_ij a_ij b_ij; no need to materialize the product.
    let mut t = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            t += a.m[i][j] * b.m[i][j];
        }
    }
    let c = ((t - 1.0) / 2.0).clamp(-1.0, 1.0);
    Angle::from_radians(c.acos())
}

/// Deterministic ChaCha key for a `(seed, index, purpose)` triple.
///
/// Distinct triples give distinct keys, so every sampling site in the crate
/// owns an independent, schedule-free stream.
pub(crate) fn stream_key(seed: u64, index: u64, purpose: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&index.to_le_bytes());
    key[16..24].copy_from_slice(&purpose.to_le_bytes());
    key
}

pub(crate) const STREAM_HAAR: u64 = 0;
pub(crate) const STREAM_DATASET: u64 = 1;
pub(crate) const STREAM_CENTER: u64 = 2;
pub(crate) const STREAM_PROBE: u64 = 3;
pub(crate) const STREAM_FIT: u64 = 4;

/// Two independent standard normals via Box-Muller.
fn box_muller(rng: &mut impl Rng) -> (f64, f64) {
    // 1 - u lies in (0, 1], keeping the log argument away from zero.
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    let r = (-2.0 * (1.0 - u).ln()).sqrt();
    let phi = std::f64::consts::TAU * v;
    (r * phi.cos(), r * phi.sin())
}

/// One Haar-uniform rotation drawn from the given RNG: a Gaussian 4-vector
/// normalized to a unit quaternion, then converted to a matrix.
pub fn haar_rotation(rng: &mut impl Rng) -> RotationMatrix3 {
    loop {
        let (a, b) = box_muller(rng);
        let (c, d) = box_muller(rng);
        let n = (a * a + b * b + c * c + d * d).sqrt();
        if n > 1e-12 {
            return RotationMatrix3::from_unit_quat(a / n, b / n, c / n, d / n);
        }
    }
}

/// `n` Haar-uniform rotations, bitwise reproducible for a given seed.
///
/// The RNG state is local to the call, so results never depend on what other
/// threads or call sites are doing.
pub fn haar_random(seed: u64, n: usize) -> Vec<RotationMatrix3> {
    let mut rng = ChaCha8Rng::from_seed(stream_key(seed, 0, STREAM_HAAR));
    (0..n).map(|_| haar_rotation(&mut rng)).collect()
}
