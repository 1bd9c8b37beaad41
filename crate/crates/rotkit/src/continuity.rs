//! Direct measurements of representation (dis)continuity, and a plain
//! gradient-descent harness for fitting a single rotation under any catalog
//! loss.
//!
//! The probes quantify one thing: when two rotations are geodesically close,
//! how far apart can their parameter vectors be? For a continuous
//! representation the ratio is bounded; for a discontinuous one it blows up
//! at the representation's seams (angle wraparound, quaternion sign flip,
//! half-turn axis flip), and the probes both find such pairs at random and
//! construct them directly.
//!
//! Descent here is deliberately plain (no momentum, no adaptivity): the
//! point is to isolate what the representation and loss geometry do to the
//! optimization, with nothing else in the loop.

use std::fmt::Write as _;

use rand::{Rng, RngExt};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::calibration::STEREO5_POLE_MARGIN;
use crate::loss::{evaluate, LossError, LossSpec};
use crate::rep::{canonical_params, params_to_matrix, GramSchmidt6, RepKind};
use crate::so3::{
    geodesic_angle, haar_rotation, stream_key, RotationMatrix3, STREAM_FIT, STREAM_PROBE,
};

#[derive(Debug, Error)]
pub enum FitError {
    #[error("conversion became singular at iteration {iteration}: {source}")]
    DivergedToSingular {
        iteration: usize,
        source: LossError,
    },
    #[error(transparent)]
    Loss(#[from] LossError),
}

/// What a discontinuity probe saw for one representation.
#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub rep: RepKind,
    /// Perturbation angle in radians.
    pub delta: f64,
    /// Pairs measured (pole-adjacent pairs are excluded for the 5D form).
    pub n_pairs: usize,
    pub max_rep_distance: f64,
    pub mean_rep_distance: f64,
    pub worst_pair: (RotationMatrix3, RotationMatrix3),
}

impl ProbeReport {
    pub fn to_json(&self) -> String {
        let flat = |r: &RotationMatrix3| {
            let mut s = String::from("[");
            for (i, v) in r.to_flat().iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                s.push_str(&crate::datagen::fmt_f64(*v));
            }
            s.push(']');
            s
        };
        let mut out = String::new();
        write!(
            out,
            "{{\"rep\":\"{}\",\"delta_rad\":{},\"n_pairs\":{},\"max_rep_distance\":{},\"mean_rep_distance\":{},\"worst_pair\":[{},{}]}}",
            self.rep.tag(),
            crate::datagen::fmt_f64(self.delta),
            self.n_pairs,
            crate::datagen::fmt_f64(self.max_rep_distance),
            crate::datagen::fmt_f64(self.mean_rep_distance),
            flat(&self.worst_pair.0),
            flat(&self.worst_pair.1),
        )
        .expect("write to string");
        out
    }
}

/// The two-point construction on the unit circle: rotations at angles
/// `+epsilon` and `-epsilon` are geodesically `2 epsilon` apart, but an
/// interval parameterization `[0, 2 pi)` assigns them values `epsilon` and
/// `2 pi - epsilon`.
///
/// Returns `(true_distance, representation_distance)` in radians.
pub fn probe_2d(epsilon: f64) -> (f64, f64) {
    (2.0 * epsilon, std::f64::consts::TAU - 2.0 * epsilon)
}

/// Is this rotation within the excluded margin of the stereographic
/// projection pole? (Unreachable for exact rotations, whose projected
/// coordinate never exceeds 1/sqrt(2); kept as an explicit guard.)
fn near_stereo_pole(r: &RotationMatrix3) -> bool {
    let gs = GramSchmidt6::from_matrix(r);
    let w = [gs.a1[2], gs.a2[0], gs.a2[1], gs.a2[2]];
    let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    n <= 1e-12 || w[0] / n >= 1.0 - STEREO5_POLE_MARGIN
}

/// Sample `n` Haar rotations, perturb each by a rotation of angle `delta`
/// about a random axis, and measure the Euclidean distance between the
/// canonical parameter vectors of each pair.
///
/// `delta` must lie in `(0, 0.1]` radians: large perturbations stop being
/// probes of local behavior.
pub fn probe_discontinuity(rep: RepKind, delta: f64, n: usize, seed: u64) -> ProbeReport {
    assert!(
        delta > 0.0 && delta <= 0.1,
        "perturbation angle must lie in (0, 0.1] radians"
    );
    let mut max_rep_distance = 0.0_f64;
    let mut sum = 0.0;
    let mut n_pairs = 0usize;
    let mut worst_pair = (RotationMatrix3::identity(), RotationMatrix3::identity());
    for index in 0..n as u64 {
        // Per-pair stream, so the report is independent of scheduling.
        let mut rng = ChaCha8Rng::from_seed(stream_key(seed, index, STREAM_PROBE));
        let r = haar_rotation(&mut rng);
        let axis = random_unit_axis(&mut rng);
        let step = crate::rep::AxisAngle3::new([axis[0] * delta, axis[1] * delta, axis[2] * delta])
            .to_matrix();
        let perturbed = r.compose(&step);
        if rep == RepKind::Stereo5 && (near_stereo_pole(&r) || near_stereo_pole(&perturbed)) {
            continue;
        }
        let pa = canonical_params(rep, &r);
        let pb = canonical_params(rep, &perturbed);
        let dist = pa
            .iter()
            .zip(&pb)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        sum += dist;
        n_pairs += 1;
        if dist > max_rep_distance {
            max_rep_distance = dist;
            worst_pair = (r, perturbed);
        }
    }
    ProbeReport {
        rep,
        delta,
        n_pairs,
        max_rep_distance,
        mean_rep_distance: if n_pairs > 0 { sum / n_pairs as f64 } else { 0.0 },
        worst_pair,
    }
}

fn random_unit_axis(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v = [
            rng.random_range(-1.0_f64..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// A constructed pair of rotations that are geodesically `delta` apart but
/// map to distant parameter vectors -- the direct witness that the
/// representation map has a seam. Defined for the three discontinuous
/// regression representations.
///
/// All three constructions straddle the half-turn: the canonical angle wraps
/// (Euler), the canonical rotation-vector flips (axis-angle), and the
/// canonical quaternion changes sign.
pub fn discontinuity_witness(rep: RepKind, delta: f64) -> Option<(RotationMatrix3, RotationMatrix3)> {
    let half = delta / 2.0;
    match rep {
        RepKind::Euler | RepKind::AxisAngle3 | RepKind::Quaternion => Some((
            RotationMatrix3::rot_z(std::f64::consts::PI - half),
            RotationMatrix3::rot_z(std::f64::consts::PI + half),
        )),
        _ => None,
    }
}

/// Euclidean distance between the canonical parameter vectors of two
/// rotations.
pub fn rep_distance(rep: RepKind, a: &RotationMatrix3, b: &RotationMatrix3) -> f64 {
    canonical_params(rep, a)
        .iter()
        .zip(&canonical_params(rep, b))
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Options for [`fit_rotation`].
#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub step_size: f64,
    pub max_iters: usize,
    /// Geodesic error (degrees) below which the fit counts as converged and
    /// stops.
    pub convergence_deg: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            step_size: crate::calibration::GS6_L2_STEP_SIZE,
            max_iters: crate::calibration::FIT_MAX_ITERS,
            convergence_deg: crate::calibration::FIT_CONVERGENCE_DEG,
        }
    }
}

/// Per-iteration geodesic error of a gradient-descent fit.
#[derive(Debug, Clone)]
pub struct FitTrace {
    /// `errors_deg[i]` is the error after `i` descent steps; the first entry
    /// is the error at the initial parameters.
    pub errors_deg: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

impl FitTrace {
    pub fn final_error_deg(&self) -> f64 {
        *self.errors_deg.last().expect("trace is never empty")
    }

    /// CSV rows `iteration,e_re_deg`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,e_re_deg\n");
        for (i, e) in self.errors_deg.iter().enumerate() {
            out.push_str(&format!("{i},{}\n", crate::datagen::fmt_f64(*e)));
        }
        out
    }
}

/// Plain gradient descent on `spec`'s loss toward `target`, tracing the
/// geodesic error each iteration.
pub fn fit_rotation(
    target: &RotationMatrix3,
    spec: &LossSpec,
    init: &[f64],
    opts: FitOptions,
) -> Result<FitTrace, FitError> {
    let mut params = init.to_vec();
    let mut errors_deg = Vec::with_capacity(opts.max_iters + 1);
    let mut iterations = 0;

    let error_of = |params: &[f64], iteration: usize| -> Result<f64, FitError> {
        let r = params_to_matrix(spec.rep, params).map_err(|e| FitError::DivergedToSingular {
            iteration,
            source: e.into(),
        })?;
        Ok(geodesic_angle(&r, target).degrees())
    };

    errors_deg.push(error_of(&params, 0)?);
    while iterations < opts.max_iters {
        if errors_deg[iterations] < opts.convergence_deg {
            break;
        }
        let lv = evaluate(spec, &params, target).map_err(|e| FitError::DivergedToSingular {
            iteration: iterations,
            source: e,
        })?;
        for (p, g) in params.iter_mut().zip(&lv.gradient) {
            *p -= opts.step_size * g;
        }
        iterations += 1;
        errors_deg.push(error_of(&params, iterations)?);
    }
    let converged = errors_deg[iterations] < opts.convergence_deg;
    Ok(FitTrace {
        errors_deg,
        converged,
        iterations,
    })
}

/// Standard-normal initial parameters for a fit run, one stream per
/// `(seed, run)` pair.
pub fn random_init(rep: RepKind, seed: u64, run: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::from_seed(stream_key(seed, run, STREAM_FIT));
    let n = rep.param_count();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        // Box-Muller.
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        let r = (-2.0 * (1.0 - u).ln()).sqrt();
        let phi = std::f64::consts::TAU * v;
        out.push(r * phi.cos());
        if out.len() < n {
            out.push(r * phi.sin());
        }
    }
    out
}
