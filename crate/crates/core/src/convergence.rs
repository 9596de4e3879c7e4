//! Power-weighted positions and the convergence/divergence interdependence weights.

use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Divisor applied to the net convergence when forming the interdependence weight.
pub const MCDV_DIVISOR: f64 = 9.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceProfile<T> {
    pub three_mao: Matrix<T>,
    pub three_caa: Matrix<T>,
    pub three_daa: Matrix<T>,
    pub mcdv: Matrix<T>,
}

impl<T: Scalar> ConvergenceProfile<T> {
    pub fn compute(positions: &Matrix<i32>, power_normalized: &[T]) -> Result<Self, EngineError> {
        let three_mao = scale_positions(positions, power_normalized)?;
        let (three_caa, three_daa) = convergence_divergence(&three_mao);
        let mcdv = mcdv_matrix(&three_caa, &three_daa)?;
        Ok(Self {
            three_mao,
            three_caa,
            three_daa,
            mcdv,
        })
    }
}

/// Multiplies row `a` of the signed position matrix by the actor's normalized power.
pub fn scale_positions<T: Scalar>(positions: &Matrix<i32>, power_normalized: &[T]) -> Result<Matrix<T>, EngineError> {
    if positions.rows() != power_normalized.len() {
        return Err(EngineError::DimensionMismatch {
            what: "position rows vs power coefficients",
            expected: power_normalized.len().to_string(),
            found: positions.rows().to_string(),
        });
    }
    Ok(Matrix::from_fn(positions.rows(), positions.cols(), |a, i| {
        T::from_int(positions[(a, i)].into()) * power_normalized[a]
    }))
}

/// Valued convergence and divergence between every pair of actors.
///
/// For each mode both actors hold a nonzero position on, half the sum of the two
/// absolute intensities goes to convergence when the signs agree and to divergence
/// when they differ. Modes where either position is zero count for neither.
pub fn convergence_divergence<T: Scalar>(three_mao: &Matrix<T>) -> (Matrix<T>, Matrix<T>) {
    let n = three_mao.rows();
    let half = T::lit(0.5);
    let mut caa = Matrix::filled(n, n, T::zero());
    let mut daa = Matrix::filled(n, n, T::zero());
    for a in 0..n {
        for b in a..n {
            let (mut conv, mut div) = (T::zero(), T::zero());
            for (&x, &y) in three_mao.row(a).iter().zip(three_mao.row(b)) {
                let product = x * y;
                if product > T::zero() {
                    conv = conv + half * (x.abs() + y.abs());
                } else if product < T::zero() {
                    div = div + half * (x.abs() + y.abs());
                }
            }
            caa[(a, b)] = conv;
            caa[(b, a)] = conv;
            daa[(a, b)] = div;
            daa[(b, a)] = div;
        }
    }
    (caa, daa)
}

/// `(3CAA - 3DAA) / 9`, entrywise. No clamping.
pub fn mcdv_matrix<T: Scalar>(three_caa: &Matrix<T>, three_daa: &Matrix<T>) -> Result<Matrix<T>, EngineError> {
    if three_caa.rows() != three_daa.rows() || three_caa.cols() != three_daa.cols() {
        return Err(EngineError::DimensionMismatch {
            what: "convergence vs divergence matrix",
            expected: format!("{}x{}", three_caa.rows(), three_caa.cols()),
            found: format!("{}x{}", three_daa.rows(), three_daa.cols()),
        });
    }
    let divisor = T::lit(MCDV_DIVISOR);
    Ok(Matrix::from_fn(three_caa.rows(), three_caa.cols(), |a, b| {
        (three_caa[(a, b)] - three_daa[(a, b)]) / divisor
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rows(v: Vec<Vec<i32>>) -> Matrix<i32> {
        Matrix::from_rows(v).unwrap()
    }

    #[test]
    fn identity_scaling() {
        let p = rows(vec![vec![3, -1], vec![0, 2]]);
        let scaled = scale_positions(&p, &[1.0f64, 1.0]).unwrap();
        assert_eq!(scaled, p.map(|&v| f64::from(v)));
    }

    #[test]
    fn zero_row_stays_zero() {
        let p = rows(vec![vec![0, 0], vec![1, 2]]);
        let scaled = scale_positions(&p, &[2.5f64, 0.5]).unwrap();
        assert_eq!(scaled.row(0), &[0.0, 0.0]);
        let (caa, daa) = convergence_divergence(&scaled);
        assert_eq!((caa[(0, 1)], daa[(0, 1)]), (0.0, 0.0));
        assert_eq!(caa[(0, 0)], 0.0);
    }

    #[test]
    fn row_count_must_match() {
        let err = scale_positions(&rows(vec![vec![1]]), &[1.0f64, 2.0]).unwrap_err();
        assert!(matches!(err, EngineError::DimensionMismatch { .. }));
    }

    #[test]
    fn hand_evaluated_pair() {
        // modes: agree (+2,+1), disagree (-3,+1), one-sided (0,+3)
        let mao = Matrix::from_rows(vec![vec![2.0, -3.0, 0.0], vec![1.0, 1.0, 3.0]]).unwrap();
        let (caa, daa) = convergence_divergence(&mao);
        assert_relative_eq!(caa[(0, 1)], 1.5);
        assert_relative_eq!(daa[(0, 1)], 2.0);
        assert_relative_eq!(caa[(0, 0)], 5.0);
        assert_relative_eq!(daa[(1, 1)], 0.0);
        let mcdv = mcdv_matrix(&caa, &daa).unwrap();
        assert_relative_eq!(mcdv[(1, 0)], -0.5 / 9.0);
        assert_relative_eq!(mcdv[(1, 1)], 5.0 / 9.0);
    }

    #[test]
    fn equal_convergence_and_divergence_cancel() {
        let c = Matrix::filled(3, 3, 0.7f64);
        let mcdv = mcdv_matrix(&c, &c).unwrap();
        assert!(mcdv.indexed().all(|(_, _, &v)| v == 0.0));
    }

    #[test]
    fn mismatched_shapes() {
        let a = Matrix::filled(2, 2, 0.0f64);
        let b = Matrix::filled(3, 3, 0.0f64);
        assert!(mcdv_matrix(&a, &b).is_err());
    }
}
