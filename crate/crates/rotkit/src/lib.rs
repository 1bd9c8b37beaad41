//! rotkit: 3D rotation representations and everything needed to study them.
//!
//! The crate covers, end to end:
//!
//! - [`so3`] -- the rotation-matrix type, group operations, Haar-uniform
//!   sampling, and the geodesic angle metric;
//! - [`rep`] -- seven parameterizations (Euler, binned Euler, quaternion,
//!   two axis-angle forms, binned axis-angle, Gram-Schmidt 6D, and
//!   stereographic 5D) with conversions in both directions;
//! - [`loss`] -- rotation losses with analytic gradients, the 20-entry
//!   catalog of representation/loss pairings, and a finite-difference
//!   gradient checker;
//! - [`datagen`] -- synthetic rotation datasets (random, big-hole,
//!   many-holes) with train/val/test carving and the zeta difficulty metric;
//! - [`eval`] -- accuracy curves, mean average accuracy, summary reports,
//!   and the error-versus-nearest-train-distance linear fit;
//! - [`continuity`] -- direct measurements of representation continuity and
//!   a gradient-descent fitting harness for comparing losses.
//!
//! Start with the runnable examples (`cargo run --example <name>`), one per
//! capability. A thin `rotkit` binary exposes the same operations as
//! subcommands for scripting; see the README.

pub mod calibration;
pub mod cli;
pub mod continuity;
pub mod datagen;
pub mod eval;
pub mod loss;
mod mat3;
pub mod rep;
pub mod so3;

pub use rep::{
    AxisAngle3, AxisAngle4, BinDistribution, BinRange, EulerZYX, GramSchmidt6, RepError, RepKind,
    Stereo5, UnitQuaternion,
};
pub use so3::{geodesic_angle, haar_random, Angle, NotARotation, RotationMatrix3};
