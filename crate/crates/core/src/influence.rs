//! Direct-plus-indirect influence and per-actor power coefficients.
//!
//! Indirect influence goes through exactly one intermediary: each entry of the combined
//! matrix adds, for every third actor, the weaker of the two links along that path.

use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::matrix::Matrix;
use crate::model::{INFLUENCE_MAX, INFLUENCE_MIN};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfluenceProfile<T> {
    pub midi: Matrix<u32>,
    pub net_influence: Vec<u32>,
    pub net_dependence: Vec<u32>,
    pub power_raw: Vec<T>,
    pub power_normalized: Vec<T>,
}

impl<T: Scalar> InfluenceProfile<T> {
    pub fn compute(mid: &Matrix<i32>) -> Result<Self, EngineError> {
        let midi = compute_midi(mid)?;
        let net_influence = (0..midi.rows()).map(|a| net_influence(&midi, a)).collect();
        let net_dependence = (0..midi.rows()).map(|a| net_dependence(&midi, a)).collect();
        let power_raw = power_coefficients(&midi)?;
        let power_normalized = normalized_power(&power_raw)?;
        Ok(Self {
            midi,
            net_influence,
            net_dependence,
            power_raw,
            power_normalized,
        })
    }
}

/// Single-pass composition `MIDI[a][b] = MID[a][b] + sum_c min(MID[a][c], MID[c][b])`.
///
/// The diagonal of `mid` is read as zero. Not iterated to a fixpoint.
pub fn compute_midi(mid: &Matrix<i32>) -> Result<Matrix<u32>, EngineError> {
    if !mid.is_square() {
        return Err(EngineError::DimensionMismatch {
            what: "direct influence matrix",
            expected: "a square matrix".into(),
            found: format!("{}x{}", mid.rows(), mid.cols()),
        });
    }
    let n = mid.rows();
    let mut direct = Matrix::filled(n, n, 0u32);
    for (r, c, &v) in mid.indexed() {
        if !(INFLUENCE_MIN..=INFLUENCE_MAX).contains(&v) {
            return Err(EngineError::OutOfScale {
                what: "direct influence",
                row: r,
                col: c,
                value: v,
            });
        }
        if r != c {
            direct[(r, c)] = v as u32;
        }
    }
    Ok(Matrix::from_fn(n, n, |a, b| {
        direct[(a, b)] + (0..n).map(|c| direct[(a, c)].min(direct[(c, b)])).sum::<u32>()
    }))
}

/// Row sum of `midi` without the diagonal.
pub fn net_influence(midi: &Matrix<u32>, a: usize) -> u32 {
    midi.row(a).iter().sum::<u32>() - midi[(a, a)]
}

/// Column sum of `midi` without the diagonal.
pub fn net_dependence(midi: &Matrix<u32>, a: usize) -> u32 {
    (0..midi.rows()).map(|b| midi[(b, a)]).sum::<u32>() - midi[(a, a)]
}

fn total_influence(midi: &Matrix<u32>) -> Result<u32, EngineError> {
    let total: u32 = (0..midi.rows()).map(|a| net_influence(midi, a)).sum();
    if total == 0 {
        return Err(EngineError::DegenerateNetwork("no actor exerts any influence"));
    }
    Ok(total)
}

fn power_with_total<T: Scalar>(midi: &Matrix<u32>, a: usize, total: u32) -> T {
    let influence = net_influence(midi, a);
    let dependence = net_dependence(midi, a);
    if influence + dependence == 0 {
        // isolated actor
        return T::zero();
    }
    // The diagonal is subtracted once more on top of the net influence.
    let share = T::from_int(i64::from(influence) - i64::from(midi[(a, a)])) / T::from_int(total.into());
    let balance = T::from_int(influence.into()) / T::from_int((influence + dependence).into());
    share * balance
}

/// Raw power coefficient of actor `a`:
/// `((I_a - MIDI[a][a]) / sum I) * (I_a / (I_a + D_a))`, zero for an isolated actor.
pub fn power_coefficient<T: Scalar>(midi: &Matrix<u32>, a: usize) -> Result<T, EngineError> {
    let total = total_influence(midi)?;
    Ok(power_with_total(midi, a, total))
}

pub fn power_coefficients<T: Scalar>(midi: &Matrix<u32>) -> Result<Vec<T>, EngineError> {
    let total = total_influence(midi)?;
    Ok((0..midi.rows()).map(|a| power_with_total(midi, a, total)).collect())
}

/// Rescales power so that the coefficients sum to the actor count.
pub fn normalized_power<T: Scalar>(power_raw: &[T]) -> Result<Vec<T>, EngineError> {
    let sum = power_raw.iter().fold(T::zero(), |acc, &r| acc + r);
    // NaN sums land here too
    if sum.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
        return Err(EngineError::DegenerateNetwork("all power coefficients are zero"));
    }
    let n = T::from_int(power_raw.len() as i64);
    Ok(power_raw.iter().map(|&r| n * r / sum).collect())
}
