//! Analytic Jacobians of the parameter-to-matrix conversions.
//!
//! For a representation with parameters `p`, `matrix_jacobian` returns one
//! 3x3 matrix per parameter: `dR/dp_k`. Loss gradients contract these with
//! `dL/dR`. The binned representations chain through their angle decoders
//! instead; the decoder partials live here too.

use crate::mat3::{self, Mat3, Vec3};
use crate::rep::{BinRange, EulerZYX, RepError, RepKind};

/// `dR/dp_k` for each parameter of a regression representation.
///
/// Binned kinds are composites (decoder plus this machinery) and are
/// assembled by the loss module; asking for them here is a bug.
pub(crate) fn matrix_jacobian(kind: RepKind, params: &[f64]) -> Result<Vec<Mat3>, RepError> {
    match kind {
        RepKind::Euler => Ok(euler_jacobian(&EulerZYX::new(params[0], params[1], params[2])).to_vec()),
        RepKind::AxisAngle3 => Ok(aa3_jacobian([params[0], params[1], params[2]]).to_vec()),
        RepKind::AxisAngle4 => aa4_jacobian([params[0], params[1], params[2]], params[3]),
        RepKind::Quaternion => quat_jacobian([params[0], params[1], params[2], params[3]]),
        RepKind::GramSchmidt6 => gs6_jacobian(
            [params[0], params[1], params[2]],
            [params[3], params[4], params[5]],
        ),
        RepKind::Stereo5 => stereo5_jacobian([params[0], params[1], params[2], params[3], params[4]]),
        RepKind::EulerBin | RepKind::AxisAngleBin => {
            unreachable!("binned kinds are chained through their decoders")
        }
    }
}

fn z_mat(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

fn y_mat(b: f64) -> Mat3 {
    let (s, c) = b.sin_cos();
    [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]]
}

fn x_mat(g: f64) -> Mat3 {
    let (s, c) = g.sin_cos();
    [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]
}

fn dz_mat(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    [[-s, -c, 0.0], [c, -s, 0.0], [0.0, 0.0, 0.0]]
}

fn dy_mat(b: f64) -> Mat3 {
    let (s, c) = b.sin_cos();
    [[-s, 0.0, c], [0.0, 0.0, 0.0], [-c, 0.0, -s]]
}

fn dx_mat(g: f64) -> Mat3 {
    let (s, c) = g.sin_cos();
    [[0.0, 0.0, 0.0], [0.0, -s, -c], [0.0, c, -s]]
}

/// Product-rule derivative of `Z(alpha) Y(beta) X(gamma)`.
pub(crate) fn euler_jacobian(e: &EulerZYX) -> [Mat3; 3] {
    let z = z_mat(e.alpha);
    let y = y_mat(e.beta);
    let x = x_mat(e.gamma);
    [
        mat3::mat_mul(&mat3::mat_mul(&dz_mat(e.alpha), &y), &x),
        mat3::mat_mul(&mat3::mat_mul(&z, &dy_mat(e.beta)), &x),
        mat3::mat_mul(&mat3::mat_mul(&z, &y), &dx_mat(e.gamma)),
    ]
}

/// Derivative of Rodrigues' formula in its smooth `I + f K + g K^2` form.
fn aa3_jacobian(u: Vec3) -> [Mat3; 3] {
    let theta2 = mat3::dot3(u, u);
    let theta = theta2.sqrt();
    let (f, g) = super::axis_angle::sinc_pair(theta);
    // a = f'(theta)/theta, b = g'(theta)/theta, with series at the origin.
    let (a, b) = if theta < 1e-4 {
        (-1.0 / 3.0 + theta2 / 30.0, -1.0 / 12.0 + theta2 / 180.0)
    } else {
        (
            (theta * theta.cos() - theta.sin()) / (theta2 * theta),
            (theta * theta.sin() - 2.0 * (1.0 - theta.cos())) / (theta2 * theta2),
        )
    };
    let k = mat3::skew(u);
    let k2 = mat3::mat_mul(&k, &k);
    std::array::from_fn(|idx| {
        let mut e = [0.0; 3];
        e[idx] = 1.0;
        let ek = mat3::skew(e);
        let mut out = mat3::mat_scale(&k, a * u[idx]);
        out = mat3::mat_add(&out, &mat3::mat_scale(&ek, f));
        out = mat3::mat_add(&out, &mat3::mat_scale(&k2, b * u[idx]));
        let cross_terms = mat3::mat_add(&mat3::mat_mul(&ek, &k), &mat3::mat_mul(&k, &ek));
        mat3::mat_add(&out, &mat3::mat_scale(&cross_terms, g))
    })
}

fn aa4_jacobian(axis: Vec3, theta: f64) -> Result<Vec<Mat3>, RepError> {
    let norm = mat3::norm3(axis);
    if norm <= 1e-12 {
        return Err(RepError::ZeroAxis);
    }
    let n = mat3::scale3(axis, 1.0 / norm);
    let (s, c) = theta.sin_cos();
    let k = mat3::skew(n);
    let k2 = mat3::mat_mul(&k, &k);

    // dR/dn_j before chaining through the normalization.
    let d_wrt_unit: [Mat3; 3] = std::array::from_fn(|j| {
        let mut e = [0.0; 3];
        e[j] = 1.0;
        let ej = mat3::skew(e);
        let cross = mat3::mat_add(&mat3::mat_mul(&ej, &k), &mat3::mat_mul(&k, &ej));
        mat3::mat_add(&mat3::mat_scale(&ej, s), &mat3::mat_scale(&cross, 1.0 - c))
    });

    let mut out = Vec::with_capacity(4);
    for comp in 0..3 {
        let mut acc = [[0.0; 3]; 3];
        for (j, d) in d_wrt_unit.iter().enumerate() {
            let dn = ((j == comp) as i32 as f64 - n[j] * n[comp]) / norm;
            acc = mat3::mat_add(&acc, &mat3::mat_scale(d, dn));
        }
        out.push(acc);
    }
    out.push(mat3::mat_add(
        &mat3::mat_scale(&k, c),
        &mat3::mat_scale(&k2, s),
    ));
    Ok(out)
}

/// Partials of the quadratic quaternion-to-matrix map at unit `v = (w,x,y,z)`.
fn quat_form_partials(v: [f64; 4]) -> [Mat3; 4] {
    let [w, x, y, z] = v;
    [
        [
            [0.0, -2.0 * z, 2.0 * y],
            [2.0 * z, 0.0, -2.0 * x],
            [-2.0 * y, 2.0 * x, 0.0],
        ],
        [
            [0.0, 2.0 * y, 2.0 * z],
            [2.0 * y, -4.0 * x, -2.0 * w],
            [2.0 * z, 2.0 * w, -4.0 * x],
        ],
        [
            [-4.0 * y, 2.0 * x, 2.0 * w],
            [2.0 * x, 0.0, 2.0 * z],
            [-2.0 * w, 2.0 * z, -4.0 * y],
        ],
        [
            [-4.0 * z, -2.0 * w, 2.0 * x],
            [2.0 * w, -4.0 * z, 2.0 * y],
            [2.0 * x, 2.0 * y, 0.0],
        ],
    ]
}

fn quat_jacobian(q: [f64; 4]) -> Result<Vec<Mat3>, RepError> {
    let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm <= 1e-12 {
        return Err(RepError::NotUnit { norm });
    }
    let v: [f64; 4] = std::array::from_fn(|i| q[i] / norm);
    let partials = quat_form_partials(v);
    let mut out = Vec::with_capacity(4);
    for comp in 0..4 {
        let mut acc = [[0.0; 3]; 3];
        for (j, d) in partials.iter().enumerate() {
            let dv = ((j == comp) as i32 as f64 - v[j] * v[comp]) / norm;
            acc = mat3::mat_add(&acc, &mat3::mat_scale(d, dv));
        }
        out.push(acc);
    }
    Ok(out)
}

fn gs6_jacobian(a1: Vec3, a2: Vec3) -> Result<Vec<Mat3>, RepError> {
    let n1 = mat3::norm3(a1);
    if n1 <= 1e-12 {
        return Err(RepError::DegenerateInput);
    }
    let b1 = mat3::scale3(a1, 1.0 / n1);
    let proj1 = mat3::mat_sub(&mat3::MAT3_IDENTITY, &mat3::outer(b1, b1));
    let d_b1_a1 = mat3::mat_scale(&proj1, 1.0 / n1);

    let coeff = mat3::dot3(b1, a2);
    let w = mat3::sub3(a2, mat3::scale3(b1, coeff));
    let nw = mat3::norm3(w);
    if nw <= 1e-12 {
        return Err(RepError::DegenerateInput);
    }
    let b2 = mat3::scale3(w, 1.0 / nw);
    let d_b2_w = mat3::mat_scale(
        &mat3::mat_sub(&mat3::MAT3_IDENTITY, &mat3::outer(b2, b2)),
        1.0 / nw,
    );

    // dw/da1 = -(b1 (D1 a2)^T + <b1,a2> D1); D1 is symmetric.
    let d1a2 = mat3::mat_vec(&d_b1_a1, a2);
    let d_w_a1 = mat3::mat_scale(
        &mat3::mat_add(&mat3::outer(b1, d1a2), &mat3::mat_scale(&d_b1_a1, coeff)),
        -1.0,
    );
    let d_w_a2 = proj1;

    let d_b2_a1 = mat3::mat_mul(&d_b2_w, &d_w_a1);
    let d_b2_a2 = mat3::mat_mul(&d_b2_w, &d_w_a2);

    let sk_b1 = mat3::skew(b1);
    let sk_b2 = mat3::skew(b2);
    // d(b1 x b2) = skew(b1) db2 - skew(b2) db1.
    let d_b3_a1 = mat3::mat_sub(
        &mat3::mat_mul(&sk_b1, &d_b2_a1),
        &mat3::mat_mul(&sk_b2, &d_b1_a1),
    );
    let d_b3_a2 = mat3::mat_mul(&sk_b1, &d_b2_a2);

    let column = |m: &Mat3, k: usize| -> Vec3 { [m[0][k], m[1][k], m[2][k]] };
    let mut out = Vec::with_capacity(6);
    for k in 0..3 {
        let c1 = column(&d_b1_a1, k);
        let c2 = column(&d_b2_a1, k);
        let c3 = column(&d_b3_a1, k);
        out.push([
            [c1[0], c2[0], c3[0]],
            [c1[1], c2[1], c3[1]],
            [c1[2], c2[2], c3[2]],
        ]);
    }
    for k in 0..3 {
        let c2 = column(&d_b2_a2, k);
        let c3 = column(&d_b3_a2, k);
        out.push([
            [0.0, c2[0], c3[0]],
            [0.0, c2[1], c3[1]],
            [0.0, c2[2], c3[2]],
        ]);
    }
    Ok(out)
}

fn stereo5_jacobian(u: [f64; 5]) -> Result<Vec<Mat3>, RepError> {
    let y = [u[2], u[3], u[4]];
    let s = mat3::dot3(y, y);
    let den = s + 1.0;
    let v = [
        (s - 1.0) / den,
        2.0 * y[0] / den,
        2.0 * y[1] / den,
        2.0 * y[2] / den,
    ];
    // dv/dy.
    let mut dv = [[0.0; 3]; 4];
    for k in 0..3 {
        dv[0][k] = 4.0 * y[k] / (den * den);
        for i in 0..3 {
            dv[i + 1][k] =
                2.0 * ((i == k) as i32 as f64) / den - 4.0 * y[i] * y[k] / (den * den);
        }
    }
    let m = 2.0 - u[0] * u[0] - u[1] * u[1];
    let clamped = m <= 1e-12;
    let scale = m.max(1e-12).sqrt();
    let dscale = |comp: usize| -> f64 {
        if clamped {
            0.0
        } else {
            -u[comp] / scale
        }
    };

    let a1 = [u[0], u[1], scale * v[0]];
    let a2 = [scale * v[1], scale * v[2], scale * v[3]];

    // Rows: (a1, a2) flattened; columns: the five parameters.
    let mut d_cols = [[0.0_f64; 5]; 6];
    d_cols[0][0] = 1.0;
    d_cols[1][1] = 1.0;
    for (row, vi) in [(2usize, 0usize), (3, 1), (4, 2), (5, 3)] {
        d_cols[row][0] = dscale(0) * v[vi];
        d_cols[row][1] = dscale(1) * v[vi];
        for k in 0..3 {
            d_cols[row][2 + k] = scale * dv[vi][k];
        }
    }

    let gs = gs6_jacobian(a1, a2)?;
    let mut out = Vec::with_capacity(5);
    for t in 0..5 {
        let mut acc = [[0.0; 3]; 3];
        for (p, g) in gs.iter().enumerate() {
            if d_cols[p][t] != 0.0 {
                acc = mat3::mat_add(&acc, &mat3::mat_scale(g, d_cols[p][t]));
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Partials of the circular weighted-mean decoder with respect to the
/// weights. Undefined (returns huge values) when the resultant vanishes.
pub(crate) fn decode_circular_jacobian(probs: &[f64], range: BinRange) -> Vec<f64> {
    let mut sin_sum = 0.0;
    let mut cos_sum = 0.0;
    for (i, p) in probs.iter().enumerate() {
        let c = range.center(i);
        sin_sum += p * c.sin();
        cos_sum += p * c.cos();
    }
    let r2 = sin_sum * sin_sum + cos_sum * cos_sum;
    (0..probs.len())
        .map(|i| {
            let c = range.center(i);
            (cos_sum * c.sin() - sin_sum * c.cos()) / r2
        })
        .collect()
}

/// Partials of the linear weighted-mean decoder: just the bin centers.
pub(crate) fn decode_linear_jacobian(n: usize, range: BinRange) -> Vec<f64> {
    (0..n).map(|i| range.center(i)).collect()
}
