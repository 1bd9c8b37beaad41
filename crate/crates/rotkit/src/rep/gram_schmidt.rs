//! The 6D representation: a rotation's first two columns, recovered by
//! Gram-Schmidt orthonormalization plus a cross product.
//!
//! Any pair of linearly independent vectors maps to a rotation, which is what
//! makes this representation usable as a free parameter space: the decoder
//! never has to reject anything except an actually degenerate pair.

use crate::mat3::{self, Vec3};
use crate::rep::RepError;
use crate::so3::RotationMatrix3;

/// A pair of 3-vectors standing for the first two matrix columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramSchmidt6 {
    pub a1: Vec3,
    pub a2: Vec3,
}

impl GramSchmidt6 {
    pub fn new(a1: Vec3, a2: Vec3) -> Self {
        Self { a1, a2 }
    }

    pub fn to_params(&self) -> [f64; 6] {
        [
            self.a1[0], self.a1[1], self.a1[2], self.a2[0], self.a2[1], self.a2[2],
        ]
    }

    /// Orthonormalize: `b1 = N(a1)`, `b2 = N(a2 - <b1, a2> b1)`, `b3 = b1 x b2`;
    /// the columns `(b1, b2, b3)` always form a proper rotation.
    pub fn to_matrix(&self) -> Result<RotationMatrix3, RepError> {
        let n1 = mat3::norm3(self.a1);
        if n1 <= 1e-12 {
            return Err(RepError::DegenerateInput);
        }
        let b1 = mat3::scale3(self.a1, 1.0 / n1);
        let w = mat3::sub3(self.a2, mat3::scale3(b1, mat3::dot3(b1, self.a2)));
        let nw = mat3::norm3(w);
        if nw <= 1e-12 {
            return Err(RepError::DegenerateInput);
        }
        let b2 = mat3::scale3(w, 1.0 / nw);
        let b3 = mat3::cross3(b1, b2);
        Ok(RotationMatrix3::new_unchecked([
            [b1[0], b2[0], b3[0]],
            [b1[1], b2[1], b3[1]],
            [b1[2], b2[2], b3[2]],
        ]))
    }

    /// Drop the last column.
    pub fn from_matrix(r: &RotationMatrix3) -> Self {
        Self::new(r.col(0), r.col(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngExt;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    use crate::so3::haar_random;

    #[test]
    fn hand_worked_orthonormalization() {
        // b1 = (1,0,0); a2 - <b1,a2> b1 = (1,1,0) - (1,0,0) = (0,1,0).
        let r = GramSchmidt6::new([2.0, 0.0, 0.0], [1.0, 1.0, 0.0])
            .to_matrix()
            .unwrap();
        assert!(r.frobenius_distance(&RotationMatrix3::identity()) < 1e-15);
    }

    #[test]
    fn orthonormal_input_passes_through() {
        let r = GramSchmidt6::new([1.0, 0.0, 0.0], [0.0, 1.0, 0.0])
            .to_matrix()
            .unwrap();
        assert!(r.frobenius_distance(&RotationMatrix3::identity()) < 1e-15);
    }

    #[test]
    fn parallel_columns_are_degenerate() {
        let err = GramSchmidt6::new([1.0, 1.0, 1.0], [1.0, 1.0, 1.0])
            .to_matrix()
            .unwrap_err();
        assert!(matches!(err, RepError::DegenerateInput));
        let err = GramSchmidt6::new([0.0, 0.0, 0.0], [1.0, 0.0, 0.0])
            .to_matrix()
            .unwrap_err();
        assert!(matches!(err, RepError::DegenerateInput));
    }

    #[test]
    fn reads_matrix_columns() {
        let g = GramSchmidt6::from_matrix(&RotationMatrix3::rot_z(FRAC_PI_2));
        assert!(mat3::norm3(mat3::sub3(g.a1, [0.0, 1.0, 0.0])) < 1e-15);
        assert!(mat3::norm3(mat3::sub3(g.a2, [-1.0, 0.0, 0.0])) < 1e-15);

        let g = GramSchmidt6::from_matrix(&RotationMatrix3::identity());
        assert_eq!(g.a1, [1.0, 0.0, 0.0]);
        assert_eq!(g.a2, [0.0, 1.0, 0.0]);
    }

    #[test]
    fn haar_round_trip_is_tight() {
        for r in haar_random(43, 10_000) {
            let back = GramSchmidt6::from_matrix(&r).to_matrix().unwrap();
            assert!(back.frobenius_distance(&r) < 1e-12);
        }
    }

    #[test]
    fn free_inputs_always_orthonormalize() {
        let mut rng = ChaCha8Rng::seed_from_u64(4311);
        let mut produced = 0usize;
        while produced < 100_000 {
            let v: [f64; 6] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let g = GramSchmidt6::new([v[0], v[1], v[2]], [v[3], v[4], v[5]]);
            match g.to_matrix() {
                Ok(m) => {
                    assert!(RotationMatrix3::validate(*m.rows()).is_ok());
                    produced += 1;
                }
                Err(RepError::DegenerateInput) => {}
                Err(other) => panic!("unexpected error {other:?}"),
            }
        }
    }
}
