//! Rotation losses with analytic gradients, the catalog of the twenty
//! representation/loss configurations, and a finite-difference gradient
//! checker.
//!
//! Every loss takes a free parameter vector for its representation (the
//! shape a regressor head would emit) plus a ground-truth rotation, and
//! returns the scalar value together with its gradient with respect to the
//! parameters. Composite configurations sum their terms with unit weights.
//!
//! The geodesic loss has unbounded slope where the predicted and true
//! rotations coincide or oppose; its gradient clamps the trace argument to
//! `[-1 + 1e-9, 1 - 1e-9]` so descent stays finite near convergence. The
//! clamp is a deliberate smoothing and applies to the gradient only.

use rand::{Rng, RngExt};
use thiserror::Error;

use crate::mat3::{self, Mat3, Vec3};
use crate::rep::{
    self, canonical_params, jacobian, params_to_matrix, AxisAngle4, BinDistribution, BinRange,
    EulerZYX, RepError, RepKind,
};
use crate::so3::RotationMatrix3;

/// Floor inside the cross-entropy logarithm; keeps the loss finite for
/// zero-probability true bins.
pub const CE_FLOOR: f64 = 1e-12;

/// Inset for the arccos-argument clamp used when differentiating the
/// angular losses.
const GRAD_CLAMP: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum LossError {
    #[error("no catalog entry with id {0} (valid ids are 1..=20)")]
    UnknownId(u8),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("(near-)zero vector where a direction is required")]
    ZeroVector,
    #[error(transparent)]
    Conversion(#[from] RepError),
}

/// A loss value and its gradient with respect to the prediction parameters.
#[derive(Debug, Clone)]
pub struct LossValue {
    pub value: f64,
    pub gradient: Vec<f64>,
}

/// One additive term of a catalog configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossTerm {
    /// Geodesic angle after conversion to a matrix.
    RotationError,
    /// Squared distance between the parameter vector and the canonical
    /// parameters of the ground truth.
    ParamL2,
    /// Angle between the predicted axis slot and the ground-truth axis.
    AxisTe,
    /// Squared error of the rotation-vector norm against the true angle.
    NormL2,
    /// Squared error of the separate angle scalar against the true angle.
    ThetaL2,
    /// Squared distance of the axis slot from the true unit axis.
    AxisL2,
    /// Cross-entropy of each bin block against the true bins.
    BinCrossEntropy,
    /// Column-wise squared error against the two ground-truth columns
    /// (direct on the parameters for the 6D form, after decoding for 5D).
    GsColumnsL2,
    /// Column-wise vector angle against the two ground-truth columns.
    GsColumnsTe,
}

impl LossTerm {
    fn label(self) -> &'static str {
        match self {
            LossTerm::RotationError => "e_RE",
            LossTerm::ParamL2 => "L2",
            LossTerm::AxisTe => "e_TE(axis)",
            LossTerm::NormL2 => "L2(norm)",
            LossTerm::ThetaL2 => "L2(angle)",
            LossTerm::AxisL2 => "L2(axis)",
            LossTerm::BinCrossEntropy => "CE",
            LossTerm::GsColumnsL2 => "L2+L2(columns)",
            LossTerm::GsColumnsTe => "e_TE+e_TE(columns)",
        }
    }
}

/// One row of the configuration catalog: a representation and the terms its
/// training loss sums.
#[derive(Debug, Clone)]
pub struct LossSpec {
    pub config_id: u8,
    pub rep: RepKind,
    pub terms: Vec<LossTerm>,
}

impl LossSpec {
    /// Human-readable name of the loss composition, e.g. `e_TE(axis) + L2(norm)`.
    pub fn loss_label(&self) -> String {
        self.terms
            .iter()
            .map(|t| t.label())
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl std::fmt::Display for LossSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "id {:2} {:9} {}",
            self.config_id,
            self.rep.tag(),
            self.loss_label()
        )
    }
}

/// The catalog row for a configuration id.
pub fn loss_catalog(id: u8) -> Result<LossSpec, LossError> {
    use LossTerm::*;
    use RepKind::*;
    let (rep, terms): (RepKind, Vec<LossTerm>) = match id {
        1 => (Euler, vec![RotationError]),
        2 => (Euler, vec![ParamL2]),
        3 => (EulerBin, vec![RotationError]),
        4 => (EulerBin, vec![BinCrossEntropy]),
        5 => (Quaternion, vec![RotationError]),
        6 => (Quaternion, vec![ParamL2]),
        7 => (AxisAngle3, vec![RotationError]),
        8 => (AxisAngle3, vec![ParamL2]),
        9 => (AxisAngle3, vec![AxisTe, NormL2]),
        10 => (AxisAngle4, vec![RotationError]),
        11 => (AxisAngle4, vec![ParamL2]),
        12 => (AxisAngle4, vec![AxisTe, ThetaL2]),
        13 => (AxisAngleBin, vec![BinCrossEntropy, AxisL2]),
        14 => (AxisAngleBin, vec![BinCrossEntropy, AxisTe]),
        15 => (Stereo5, vec![RotationError]),
        16 => (Stereo5, vec![GsColumnsL2]),
        17 => (Stereo5, vec![GsColumnsTe]),
        18 => (GramSchmidt6, vec![RotationError]),
        19 => (GramSchmidt6, vec![GsColumnsL2]),
        20 => (GramSchmidt6, vec![GsColumnsTe]),
        other => return Err(LossError::UnknownId(other)),
    };
    Ok(LossSpec {
        config_id: id,
        rep,
        terms,
    })
}

/// All twenty configurations in id order.
pub fn full_catalog() -> Vec<LossSpec> {
    (1..=20).map(|id| loss_catalog(id).unwrap()).collect()
}

// ---------------------------------------------------------------------------
// The four loss families.
// ---------------------------------------------------------------------------

/// Geodesic rotation error of a prediction in any representation.
pub fn loss_ere(rep: RepKind, params: &[f64], gt: &RotationMatrix3) -> Result<LossValue, LossError> {
    let (value, gradient) = rotation_error_term(rep, params, gt)?;
    Ok(LossValue { value, gradient })
}

/// Angle between two vectors, gradient with respect to the first.
pub fn loss_te(y: &[f64], y_hat: &[f64]) -> Result<LossValue, LossError> {
    if y.len() != y_hat.len() {
        return Err(LossError::LengthMismatch {
            expected: y_hat.len(),
            got: y.len(),
        });
    }
    let (value, gradient) = te_value_grad(y, y_hat)?;
    Ok(LossValue { value, gradient })
}

/// Squared Euclidean distance, gradient with respect to the first argument.
pub fn loss_l2(y: &[f64], y_hat: &[f64]) -> Result<LossValue, LossError> {
    if y.len() != y_hat.len() {
        return Err(LossError::LengthMismatch {
            expected: y_hat.len(),
            got: y.len(),
        });
    }
    let mut value = 0.0;
    let mut gradient = Vec::with_capacity(y.len());
    for (a, b) in y.iter().zip(y_hat) {
        value += (a - b) * (a - b);
        gradient.push(2.0 * (a - b));
    }
    Ok(LossValue { value, gradient })
}

/// Cross-entropy of a distribution against a one-hot target.
pub fn loss_ce(p: &BinDistribution, true_bin: usize) -> Result<LossValue, LossError> {
    p.validate()?;
    let mut gradient = vec![0.0; p.probs.len()];
    let pt = p.probs[true_bin] + CE_FLOOR;
    gradient[true_bin] = -1.0 / pt;
    Ok(LossValue {
        value: -pt.ln(),
        gradient,
    })
}

// ---------------------------------------------------------------------------
// Shared pieces.
// ---------------------------------------------------------------------------

fn te_value_grad(y: &[f64], y_hat: &[f64]) -> Result<(f64, Vec<f64>), LossError> {
    let ny = y.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nh = y_hat.iter().map(|a| a * a).sum::<f64>().sqrt();
    if ny <= 1e-12 || nh <= 1e-12 {
        return Err(LossError::ZeroVector);
    }
    let dot: f64 = y.iter().zip(y_hat).map(|(a, b)| a * b).sum();
    let c = (dot / (ny * nh)).clamp(-1.0, 1.0);
    let value = c.acos();
    let cg = c.clamp(-1.0 + GRAD_CLAMP, 1.0 - GRAD_CLAMP);
    let scale = -1.0 / (1.0 - cg * cg).sqrt();
    let gradient = y
        .iter()
        .zip(y_hat)
        .map(|(a, b)| scale * (b / (ny * nh) - cg * a / (ny * ny)))
        .collect();
    Ok((value, gradient))
}

/// Value and matrix-space gradient of the geodesic angle against `gt`.
fn ere_matrix_grad(r: &RotationMatrix3, gt: &RotationMatrix3) -> (f64, Mat3) {
    let mut t = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            t += r.at(i, j) * gt.at(i, j);
        }
    }
    let c = ((t - 1.0) / 2.0).clamp(-1.0, 1.0);
    let value = c.acos();
    let cg = c.clamp(-1.0 + GRAD_CLAMP, 1.0 - GRAD_CLAMP);
    let scale = -1.0 / (2.0 * (1.0 - cg * cg).sqrt());
    let mut grad = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            grad[i][j] = scale * gt.at(i, j);
        }
    }
    (value, grad)
}

/// Contract a matrix-space gradient through the conversion Jacobian of the
/// representation at `params`.
fn chain_matrix_grad(rep: RepKind, params: &[f64], dldr: &Mat3) -> Result<Vec<f64>, LossError> {
    let contract = |j: &Mat3| -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for k in 0..3 {
                s += dldr[i][k] * j[i][k];
            }
        }
        s
    };
    match rep {
        RepKind::EulerBin => {
            // Chain: bins -> decoded angles -> matrix.
            let blocks = [&params[0..360], &params[360..720], &params[720..1080]];
            let angles: Vec<f64> = blocks
                .iter()
                .map(|b| rep::decode_unchecked(b, BinRange::FullCircle360))
                .collect();
            let jac = jacobian::euler_jacobian(&EulerZYX::new(angles[0], angles[1], angles[2]));
            let mut grad = vec![0.0; params.len()];
            for (b, block) in blocks.iter().enumerate() {
                let d_angle = contract(&jac[b]);
                let decode_jac = jacobian::decode_circular_jacobian(block, BinRange::FullCircle360);
                for (i, dj) in decode_jac.iter().enumerate() {
                    grad[b * 360 + i] = d_angle * dj;
                }
            }
            Ok(grad)
        }
        RepKind::AxisAngleBin => {
            let theta = rep::decode_unchecked(&params[0..180], BinRange::HalfCircle180);
            let axis = [params[180], params[181], params[182]];
            let jac =
                jacobian::matrix_jacobian(RepKind::AxisAngle4, &[axis[0], axis[1], axis[2], theta])?;
            let d_theta = contract(&jac[3]);
            let mut grad = vec![0.0; params.len()];
            for (i, c) in jacobian::decode_linear_jacobian(180, BinRange::HalfCircle180)
                .iter()
                .enumerate()
            {
                grad[i] = d_theta * c;
            }
            for k in 0..3 {
                grad[180 + k] = contract(&jac[k]);
            }
            Ok(grad)
        }
        _ => {
            let jac = jacobian::matrix_jacobian(rep, params)?;
            Ok(jac.iter().map(contract).collect())
        }
    }
}

fn rotation_error_term(
    rep: RepKind,
    params: &[f64],
    gt: &RotationMatrix3,
) -> Result<(f64, Vec<f64>), LossError> {
    let r = params_to_matrix(rep, params)?;
    let (value, dldr) = ere_matrix_grad(&r, gt);
    Ok((value, chain_matrix_grad(rep, params, &dldr)?))
}

/// Column-wise loss against the two ground-truth columns, evaluated on a
/// converted matrix; gradient in matrix space (third column untouched).
fn columns_matrix_term(
    r: &RotationMatrix3,
    gt: &RotationMatrix3,
    squared: bool,
) -> Result<(f64, Mat3), LossError> {
    let mut value = 0.0;
    let mut dldr = [[0.0; 3]; 3];
    for col in 0..2 {
        let a: Vec<f64> = (0..3).map(|i| r.at(i, col)).collect();
        let c: Vec<f64> = (0..3).map(|i| gt.at(i, col)).collect();
        let term = if squared {
            loss_l2(&a, &c)?
        } else {
            loss_te(&a, &c)?
        };
        value += term.value;
        for i in 0..3 {
            dldr[i][col] = term.gradient[i];
        }
    }
    Ok((value, dldr))
}

/// Where the axis parameters live in the flat vector.
fn axis_range(rep: RepKind) -> std::ops::Range<usize> {
    match rep {
        RepKind::AxisAngle3 | RepKind::AxisAngle4 => 0..3,
        RepKind::AxisAngleBin => 180..183,
        other => unreachable!("no axis slot in {other}"),
    }
}

fn eval_term(
    rep: RepKind,
    term: LossTerm,
    params: &[f64],
    gt: &RotationMatrix3,
) -> Result<(f64, Vec<f64>), LossError> {
    match term {
        LossTerm::RotationError => rotation_error_term(rep, params, gt),
        LossTerm::ParamL2 => {
            let target = canonical_params(rep, gt);
            let l = loss_l2(params, &target)?;
            Ok((l.value, l.gradient))
        }
        LossTerm::AxisTe => {
            let target: Vec<f64> = match rep {
                // For the rotation-vector form the "axis" is the full vector;
                // the angle between prediction and target ignores its norm.
                RepKind::AxisAngle3 => canonical_params(rep, gt),
                _ => AxisAngle4::from_matrix(gt).axis.to_vec(),
            };
            let range = axis_range(rep);
            let (value, g) = te_value_grad(&params[range.clone()], &target)?;
            let mut gradient = vec![0.0; params.len()];
            gradient[range].copy_from_slice(&g);
            Ok((value, gradient))
        }
        LossTerm::NormL2 => {
            let u = [params[0], params[1], params[2]];
            let norm = mat3::norm3(u);
            if norm <= 1e-12 {
                return Err(LossError::ZeroVector);
            }
            let theta_gt = AxisAngle4::from_matrix(gt).theta;
            let diff = norm - theta_gt;
            let gradient = vec![
                2.0 * diff * u[0] / norm,
                2.0 * diff * u[1] / norm,
                2.0 * diff * u[2] / norm,
            ];
            Ok((diff * diff, gradient))
        }
        LossTerm::ThetaL2 => {
            let theta_gt = AxisAngle4::from_matrix(gt).theta;
            let diff = params[3] - theta_gt;
            let mut gradient = vec![0.0; params.len()];
            gradient[3] = 2.0 * diff;
            Ok((diff * diff, gradient))
        }
        LossTerm::AxisL2 => {
            let target = AxisAngle4::from_matrix(gt).axis;
            let range = axis_range(rep);
            let l = loss_l2(&params[range.clone()], &target)?;
            let mut gradient = vec![0.0; params.len()];
            gradient[range].copy_from_slice(&l.gradient);
            Ok((l.value, gradient))
        }
        LossTerm::BinCrossEntropy => {
            let mut value = 0.0;
            let mut gradient = vec![0.0; params.len()];
            for (block, _, true_bin) in bin_blocks(rep, gt) {
                let pt = params[block.clone()][true_bin] + CE_FLOOR;
                value += -pt.ln();
                gradient[block.start + true_bin] = -1.0 / pt;
            }
            Ok((value, gradient))
        }
        LossTerm::GsColumnsL2 | LossTerm::GsColumnsTe => {
            let squared = term == LossTerm::GsColumnsL2;
            match rep {
                RepKind::GramSchmidt6 => {
                    // Directly on the two parameter halves.
                    let mut value = 0.0;
                    let mut gradient = vec![0.0; 6];
                    for col in 0..2 {
                        let a = &params[col * 3..col * 3 + 3];
                        let c: Vec<f64> = (0..3).map(|i| gt.at(i, col)).collect();
                        let l = if squared {
                            loss_l2(a, &c)?
                        } else {
                            loss_te(a, &c)?
                        };
                        value += l.value;
                        gradient[col * 3..col * 3 + 3].copy_from_slice(&l.gradient);
                    }
                    Ok((value, gradient))
                }
                RepKind::Stereo5 => {
                    let r = params_to_matrix(rep, params)?;
                    let (value, dldr) = columns_matrix_term(&r, gt, squared)?;
                    Ok((value, chain_matrix_grad(rep, params, &dldr)?))
                }
                other => unreachable!("column losses are not defined for {other}"),
            }
        }
    }
}

/// The bin blocks of a representation with their decode ranges and the
/// ground-truth bins.
fn bin_blocks(
    rep: RepKind,
    gt: &RotationMatrix3,
) -> Vec<(std::ops::Range<usize>, BinRange, usize)> {
    match rep {
        RepKind::EulerBin => {
            let e = EulerZYX::from_matrix(gt);
            [e.alpha, e.beta, e.gamma]
                .into_iter()
                .enumerate()
                .map(|(b, angle)| {
                    (
                        b * 360..(b + 1) * 360,
                        BinRange::FullCircle360,
                        BinRange::FullCircle360.bin_index(angle),
                    )
                })
                .collect()
        }
        RepKind::AxisAngleBin => {
            let theta = AxisAngle4::from_matrix(gt).theta;
            vec![(
                0..180,
                BinRange::HalfCircle180,
                BinRange::HalfCircle180.bin_index(theta),
            )]
        }
        other => unreachable!("no bin blocks in {other}"),
    }
}

/// Evaluate a catalog configuration: the unit-weight sum of its terms.
pub fn evaluate(
    spec: &LossSpec,
    params: &[f64],
    gt: &RotationMatrix3,
) -> Result<LossValue, LossError> {
    if params.len() != spec.rep.param_count() {
        return Err(LossError::LengthMismatch {
            expected: spec.rep.param_count(),
            got: params.len(),
        });
    }
    let mut value = 0.0;
    let mut gradient = vec![0.0; params.len()];
    for term in &spec.terms {
        let (v, g) = eval_term(spec.rep, *term, params, gt)?;
        value += v;
        for (acc, gi) in gradient.iter_mut().zip(&g) {
            *acc += gi;
        }
    }
    Ok(LossValue { value, gradient })
}

// ---------------------------------------------------------------------------
// Gradient checking.
// ---------------------------------------------------------------------------

/// Outcome of comparing the analytic gradient against central differences.
#[derive(Debug, Clone)]
pub struct GradCheckReport {
    /// `max_k |analytic_k - numeric_k| / max(|analytic|_inf, |numeric|_inf, 1)`.
    pub max_rel_deviation: f64,
    /// The point sits near a non-differentiable set (angular loss at 0 or
    /// pi, vanishing axis, vanishing true-bin probability); deviations there
    /// are reported, not thrown.
    pub singular: bool,
}

/// How close an angular term may come to its endpoints before the point is
/// flagged singular (radians).
const SINGULAR_MARGIN: f64 = std::f64::consts::PI / 180.0;

fn is_singular(spec: &LossSpec, params: &[f64], gt: &RotationMatrix3) -> bool {
    let near_endpoint =
        |angle: f64| !(SINGULAR_MARGIN..=std::f64::consts::PI - SINGULAR_MARGIN).contains(&angle);
    for term in &spec.terms {
        let singular = match term {
            LossTerm::RotationError => match params_to_matrix(spec.rep, params) {
                Ok(r) => near_endpoint(crate::so3::geodesic_angle(&r, gt).radians()),
                Err(_) => true,
            },
            LossTerm::AxisTe => {
                let target: Vec<f64> = match spec.rep {
                    RepKind::AxisAngle3 => canonical_params(spec.rep, gt),
                    _ => AxisAngle4::from_matrix(gt).axis.to_vec(),
                };
                match te_value_grad(&params[axis_range(spec.rep)], &target) {
                    Ok((v, _)) => near_endpoint(v),
                    Err(_) => true,
                }
            }
            LossTerm::GsColumnsTe => match params_to_matrix(spec.rep, params) {
                Ok(r) => (0..2).any(|col| {
                    let a: Vec<f64> = (0..3)
                        .map(|i| {
                            if spec.rep == RepKind::GramSchmidt6 {
                                params[col * 3 + i]
                            } else {
                                r.at(i, col)
                            }
                        })
                        .collect();
                    let c: Vec<f64> = (0..3).map(|i| gt.at(i, col)).collect();
                    match te_value_grad(&a, &c) {
                        Ok((v, _)) => near_endpoint(v),
                        Err(_) => true,
                    }
                }),
                Err(_) => true,
            },
            LossTerm::NormL2 => mat3::norm3([params[0], params[1], params[2]]) < 1e-6,
            LossTerm::BinCrossEntropy => bin_blocks(spec.rep, gt)
                .iter()
                .any(|(block, _, true_bin)| params[block.clone()][*true_bin] < 1e-6),
            LossTerm::ParamL2 | LossTerm::ThetaL2 | LossTerm::AxisL2 | LossTerm::GsColumnsL2 => {
                false
            }
        };
        if singular {
            return true;
        }
    }
    false
}

/// Compare the analytic gradient of `spec` at `point` against central finite
/// differences with step `h`.
pub fn gradcheck(
    spec: &LossSpec,
    point: &[f64],
    gt: &RotationMatrix3,
    h: f64,
) -> Result<GradCheckReport, LossError> {
    let analytic = evaluate(spec, point, gt)?.gradient;
    let mut p = point.to_vec();
    let mut numeric = Vec::with_capacity(point.len());
    for k in 0..point.len() {
        p[k] = point[k] + h;
        let plus = evaluate(spec, &p, gt)?.value;
        p[k] = point[k] - h;
        let minus = evaluate(spec, &p, gt)?.value;
        p[k] = point[k];
        numeric.push((plus - minus) / (2.0 * h));
    }
    let inf = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let denom = inf(&analytic).max(inf(&numeric)).max(1.0);
    let max_rel_deviation = analytic
        .iter()
        .zip(&numeric)
        .map(|(a, n)| (a - n).abs())
        .fold(0.0_f64, f64::max)
        / denom;
    Ok(GradCheckReport {
        max_rel_deviation,
        singular: is_singular(spec, point, gt),
    })
}

/// Draw a parameter vector for `spec` that stays clear of every singular
/// set, by rejection.
pub fn sample_regular_point(spec: &LossSpec, gt: &RotationMatrix3, rng: &mut impl Rng) -> Vec<f64> {
    for _ in 0..10_000 {
        let candidate = random_params(spec.rep, rng);
        if is_singular(spec, &candidate, gt) {
            continue;
        }
        // Keep the geodesic error well inside (0, pi) so every
        // conversion-mediated term sits in its regular regime.
        if let Ok(r) = params_to_matrix(spec.rep, &candidate) {
            let e = crate::so3::geodesic_angle(&r, gt).degrees();
            if (5.0..175.0).contains(&e) {
                return candidate;
            }
        }
    }
    panic!("no regular point found for {spec} after 10000 draws");
}

fn random_unit(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let n = mat3::norm3(v);
        if n > 0.1 && n <= 1.0 {
            return mat3::scale3(v, 1.0 / n);
        }
    }
}

fn random_params(rep: RepKind, rng: &mut impl Rng) -> Vec<f64> {
    match rep {
        RepKind::Euler => vec![
            rng.random_range(-3.0..3.0),
            rng.random_range(-1.4..1.4),
            rng.random_range(-3.0..3.0),
        ],
        RepKind::Quaternion => {
            let axis = random_unit(rng);
            let half: f64 = rng.random_range(0.1..1.4);
            let scale: f64 = rng.random_range(0.8..1.2);
            vec![
                half.cos() * scale,
                axis[0] * half.sin() * scale,
                axis[1] * half.sin() * scale,
                axis[2] * half.sin() * scale,
            ]
        }
        RepKind::AxisAngle3 => {
            let axis = random_unit(rng);
            let theta: f64 = rng.random_range(0.2..2.9);
            mat3::scale3(axis, theta).to_vec()
        }
        RepKind::AxisAngle4 => {
            let axis = random_unit(rng);
            let scale: f64 = rng.random_range(0.8..1.2);
            vec![
                axis[0] * scale,
                axis[1] * scale,
                axis[2] * scale,
                rng.random_range(0.2..2.9),
            ]
        }
        RepKind::GramSchmidt6 => loop {
            let v: Vec<f64> = (0..6).map(|_| rng.random_range(-1.5..1.5)).collect();
            let a1 = [v[0], v[1], v[2]];
            let a2 = [v[3], v[4], v[5]];
            let n1 = mat3::norm3(a1);
            if n1 < 0.3 {
                continue;
            }
            let b1 = mat3::scale3(a1, 1.0 / n1);
            let w = mat3::sub3(a2, mat3::scale3(b1, mat3::dot3(b1, a2)));
            if mat3::norm3(w) > 0.3 {
                return v;
            }
        },
        RepKind::Stereo5 => {
            let base = canonical_params(RepKind::Stereo5, &crate::so3::haar_rotation(rng));
            base.iter()
                .map(|x| x + rng.random_range(-0.1..0.1))
                .collect()
        }
        RepKind::EulerBin | RepKind::AxisAngleBin => {
            let n = rep.param_count();
            let mut out = vec![0.0; n];
            let blocks: &[std::ops::Range<usize>] = if rep == RepKind::EulerBin {
                &[0..360, 360..720, 720..1080]
            } else {
                &[0..180]
            };
            for block in blocks {
                let len = block.len();
                // Random mass everywhere plus a strong lump at one bin, so
                // the decoded angle is well defined and no probability is
                // near zero.
                let lump = rng.random_range(0..len);
                let mut sum = 0.0;
                for i in 0..len {
                    let mut w: f64 = rng.random_range(0.05..1.0);
                    if i == lump {
                        w += len as f64 / 4.0;
                    }
                    out[block.start + i] = w;
                    sum += w;
                }
                for i in 0..len {
                    out[block.start + i] /= sum;
                }
            }
            if rep == RepKind::AxisAngleBin {
                out[180..183].copy_from_slice(&random_unit(rng));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::so3::haar_random;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};

    #[test]
    fn te_analytic_cases() {
        let v = loss_te(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap();
        assert!((v.value - FRAC_PI_2).abs() < 1e-12);
        let v = loss_te(&[2.0, 0.0, 0.0], &[1.0, 0.0, 0.0]).unwrap();
        assert!(v.value < 1e-4);
        let v = loss_te(&[1.0, 1.0, 0.0], &[1.0, 0.0, 0.0]).unwrap();
        assert!((v.value - FRAC_PI_4).abs() < 1e-12);
        assert!(matches!(
            loss_te(&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0]),
            Err(LossError::ZeroVector)
        ));
    }

    #[test]
    fn l2_analytic_cases() {
        assert_eq!(loss_l2(&[1.0, 2.0], &[1.0, 2.0]).unwrap().value, 0.0);
        assert_eq!(loss_l2(&[1.0, 0.0], &[0.0, 1.0]).unwrap().value, 2.0);
        let g = loss_l2(&[3.0, 4.0], &[0.0, 0.0]).unwrap().gradient;
        assert_eq!(g, vec![6.0, 8.0]);
        assert!(matches!(
            loss_l2(&[1.0], &[1.0, 2.0]),
            Err(LossError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn ce_analytic_cases() {
        let one_hot = BinDistribution::encode(0.1, BinRange::HalfCircle180);
        let v = loss_ce(&one_hot, BinRange::HalfCircle180.bin_index(0.1)).unwrap();
        assert!(v.value.abs() < 1e-11);

        let uniform = BinDistribution::new(vec![1.0 / 360.0; 360], BinRange::FullCircle360);
        let v = loss_ce(&uniform, 17).unwrap();
        assert!((v.value - 360.0_f64.ln()).abs() < 1e-9);

        let mut probs = vec![0.0; 180];
        probs[10] = 0.5;
        probs[20] = 0.5;
        let v = loss_ce(&BinDistribution::new(probs, BinRange::HalfCircle180), 10).unwrap();
        assert!((v.value - 2.0_f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn ere_zero_at_truth_for_every_representation() {
        for gt in haar_random(301, 20) {
            for kind in RepKind::ALL {
                let params = canonical_params(kind, &gt);
                let v = loss_ere(kind, &params, &gt).unwrap();
                // Binned kinds quantize to bin centers; the rest hit zero.
                let tol = match kind {
                    RepKind::EulerBin | RepKind::AxisAngleBin => 2.5_f64.to_radians(),
                    _ => 1e-6,
                };
                assert!(v.value < tol, "{kind}: {}", v.value);
            }
        }
    }

    #[test]
    fn ere_analytic_value() {
        let gt = RotationMatrix3::identity();
        let pred = canonical_params(RepKind::GramSchmidt6, &RotationMatrix3::rot_z(FRAC_PI_6));
        let v = loss_ere(RepKind::GramSchmidt6, &pred, &gt).unwrap();
        assert!((v.value - FRAC_PI_6).abs() < 1e-12);
    }

    #[test]
    fn ere_is_symmetric_and_sign_invariant() {
        for pair in haar_random(307, 40).chunks_exact(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let ab =
                loss_ere(RepKind::GramSchmidt6, &canonical_params(RepKind::GramSchmidt6, a), b)
                    .unwrap()
                    .value;
            let ba =
                loss_ere(RepKind::GramSchmidt6, &canonical_params(RepKind::GramSchmidt6, b), a)
                    .unwrap()
                    .value;
            assert!((ab - ba).abs() < 1e-12);

            let q = canonical_params(RepKind::Quaternion, a);
            let neg: Vec<f64> = q.iter().map(|x| -x).collect();
            let v1 = loss_ere(RepKind::Quaternion, &q, b).unwrap().value;
            let v2 = loss_ere(RepKind::Quaternion, &neg, b).unwrap().value;
            assert_eq!(v1, v2);
        }
    }

    #[test]
    fn catalog_matches_table_rows() {
        let spec = loss_catalog(9).unwrap();
        assert_eq!(spec.rep, RepKind::AxisAngle3);
        assert_eq!(spec.terms, vec![LossTerm::AxisTe, LossTerm::NormL2]);

        let spec = loss_catalog(19).unwrap();
        assert_eq!(spec.rep, RepKind::GramSchmidt6);
        assert_eq!(spec.terms, vec![LossTerm::GsColumnsL2]);

        let spec = loss_catalog(13).unwrap();
        assert_eq!(spec.rep, RepKind::AxisAngleBin);
        assert_eq!(spec.terms, vec![LossTerm::BinCrossEntropy, LossTerm::AxisL2]);

        assert!(matches!(loss_catalog(0), Err(LossError::UnknownId(0))));
        assert!(matches!(loss_catalog(21), Err(LossError::UnknownId(21))));
        assert_eq!(full_catalog().len(), 20);
    }

    #[test]
    fn gradcheck_quadratic_is_exact() {
        let gt = haar_random(311, 1)[0];
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let spec = loss_catalog(19).unwrap();
        let point = sample_regular_point(&spec, &gt, &mut rng);
        let report = gradcheck(&spec, &point, &gt, 1e-6).unwrap();
        assert!(!report.singular);
        assert!(report.max_rel_deviation < 1e-8, "{}", report.max_rel_deviation);
    }

    #[test]
    fn gradcheck_geodesic_at_regular_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let spec = loss_catalog(18).unwrap();
        for gt in haar_random(313, 20) {
            let point = sample_regular_point(&spec, &gt, &mut rng);
            let report = gradcheck(&spec, &point, &gt, 1e-6).unwrap();
            assert!(!report.singular);
            assert!(report.max_rel_deviation < 1e-4, "{}", report.max_rel_deviation);
        }
    }

    #[test]
    fn gradcheck_flags_singular_at_truth() {
        let gt = haar_random(317, 1)[0];
        let spec = loss_catalog(18).unwrap();
        let report =
            gradcheck(&spec, &canonical_params(RepKind::GramSchmidt6, &gt), &gt, 1e-6).unwrap();
        assert!(report.singular);
    }

    #[test]
    fn every_catalog_id_passes_gradcheck_at_regular_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let targets = haar_random(331, 5);
        for spec in full_catalog() {
            for gt in &targets {
                let point = sample_regular_point(&spec, gt, &mut rng);
                let report = gradcheck(&spec, &point, gt, 1e-6).unwrap();
                assert!(
                    report.max_rel_deviation < 1e-4,
                    "{spec}: deviation {}",
                    report.max_rel_deviation
                );
            }
        }
    }

    #[test]
    fn loss_values_are_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let targets = haar_random(337, 3);
        for spec in full_catalog() {
            for gt in &targets {
                let point = sample_regular_point(&spec, gt, &mut rng);
                let v = evaluate(&spec, &point, gt).unwrap();
                assert!(v.value >= 0.0, "{spec} produced {}", v.value);
            }
        }
    }

    #[test]
    fn ere_gradient_points_downhill() {
        // One explicit descent step must reduce the loss.
        let gt = RotationMatrix3::rot_x(1.0);
        let spec = loss_catalog(18).unwrap();
        let start = canonical_params(RepKind::GramSchmidt6, &RotationMatrix3::rot_x(0.2));
        let v = evaluate(&spec, &start, &gt).unwrap();
        let stepped: Vec<f64> = start
            .iter()
            .zip(&v.gradient)
            .map(|(p, g)| p - 1e-3 * g)
            .collect();
        let v2 = evaluate(&spec, &stepped, &gt).unwrap();
        assert!(v2.value < v.value);
    }

    #[test]
    fn half_turn_boundary_is_finite() {
        // Trace argument at the clamp boundary: gradients stay finite.
        let gt = RotationMatrix3::rot_x(PI);
        let params = canonical_params(RepKind::GramSchmidt6, &RotationMatrix3::identity());
        let v = loss_ere(RepKind::GramSchmidt6, &params, &gt).unwrap();
        assert!((v.value - PI).abs() < 1e-9);
        assert!(v.gradient.iter().all(|g| g.is_finite()));
    }
}
