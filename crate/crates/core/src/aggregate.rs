//! Combines personal and interdependent risk into the per-actor total and the treatment ranking.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::fmea::FailureRisk;
use crate::matrix::Matrix;
use crate::model::ActorId;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterdependentEffect<T> {
    pub target: ActorId,
    pub weight: T,
    pub irpn: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActorRisk<T> {
    pub actor: ActorId,
    pub failures: Vec<FailureRisk<T>>,
    pub tprpn: T,
    pub tirpn: T,
    pub trpn: T,
    /// Nonzero interdependent terms, the actor itself included.
    pub effects: Vec<InterdependentEffect<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskReport<T> {
    /// In project actor order.
    pub per_actor: Vec<ActorRisk<T>>,
    /// Highest treatment priority first.
    pub ranking: Vec<ActorId>,
}

impl<T: Scalar> RiskReport<T> {
    pub fn actor(&self, id: &ActorId) -> Option<&ActorRisk<T>> {
        self.per_actor.iter().find(|r| &r.actor == id)
    }

    /// 1-based position of `id` in the ranking.
    pub fn rank_of(&self, id: &ActorId) -> Option<usize> {
        self.ranking.iter().position(|a| a == id).map(|i| i + 1)
    }

    /// Actors whose total risk exceeds `threshold`, in ranking order.
    pub fn above_threshold(&self, threshold: T) -> Vec<&ActorRisk<T>> {
        self.ranking
            .iter()
            .filter_map(|id| self.actor(id))
            .filter(|r| r.trpn > threshold)
            .collect()
    }
}

/// Interdependent risk carried from a source actor to one target.
pub fn irpn<T: Scalar>(tprpn_of_source: T, mcdv_entry: T) -> T {
    tprpn_of_source * mcdv_entry
}

/// Total interdependent risk of actor `a`: its personal risk weighted by every entry of its
/// interdependence row, the diagonal included.
pub fn tirpn<T: Scalar>(a: usize, tprpn: T, mcdv: &Matrix<T>, actors: &[ActorId]) -> (T, Vec<InterdependentEffect<T>>) {
    let effects: Vec<InterdependentEffect<T>> = mcdv
        .row(a)
        .iter()
        .zip(actors)
        .map(|(&weight, target)| InterdependentEffect {
            target: target.clone(),
            weight,
            irpn: irpn(tprpn, weight),
        })
        .filter(|e| e.irpn != T::zero())
        .collect();
    let total = effects.iter().fold(T::zero(), |acc, e| acc + e.irpn);
    (total, effects)
}

fn descending<T: Scalar>(a: T, b: T) -> Ordering {
    b.partial_cmp(&a).unwrap_or(Ordering::Equal)
}

/// Orders actors by total risk, then personal risk, both descending, then by id.
pub fn rank_actors<T: Scalar>(per_actor: &[ActorRisk<T>]) -> Vec<ActorId> {
    let mut order: Vec<&ActorRisk<T>> = per_actor.iter().collect();
    order.sort_by(|x, y| {
        descending(x.trpn, y.trpn)
            .then_with(|| descending(x.tprpn, y.tprpn))
            .then_with(|| x.actor.cmp(&y.actor))
    });
    order.into_iter().map(|r| r.actor.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn risk(id: &str, tprpn: f64, trpn: f64) -> ActorRisk<f64> {
        ActorRisk {
            actor: id.into(),
            failures: vec![],
            tprpn,
            tirpn: trpn - tprpn,
            trpn,
            effects: vec![],
        }
    }

    #[test]
    fn irpn_products() {
        assert_relative_eq!(irpn(15.0, -0.17), -2.55, epsilon = 1e-12);
        assert_relative_eq!(irpn(40.0, 0.27), 10.8, epsilon = 1e-12);
        assert_eq!(irpn(123.0, 0.0), 0.0);
    }

    #[test]
    fn tirpn_includes_diagonal() {
        let actors: Vec<ActorId> = vec!["x".into(), "y".into(), "z".into()];
        let mcdv = Matrix::from_rows(vec![vec![0.5, -0.25, 0.0], vec![-0.25, 0.1, 0.0], vec![0.0, 0.0, 0.0]]).unwrap();
        let (total, effects) = tirpn(0, 8.0, &mcdv, &actors);
        assert_relative_eq!(total, 2.0);
        assert_eq!(effects.len(), 2);
        assert_eq!(effects[0].target.as_str(), "x");
        let (zero, none) = tirpn(1, 0.0, &mcdv, &actors);
        assert_eq!(zero, 0.0);
        assert!(none.is_empty());
    }

    #[test]
    fn tie_breaks() {
        let rows = vec![
            risk("b", 0.0, 0.0),
            risk("a", 0.0, 0.0),
            risk("c", 5.0, 3.0),
            risk("d", 3.0, 3.0),
            risk("e", 1.0, 9.0),
        ];
        let ids: Vec<String> = rank_actors(&rows).into_iter().map(|a| a.0).collect();
        assert_eq!(ids, vec!["e", "c", "d", "a", "b"]);
    }

    #[test]
    fn threshold_filter() {
        let per_actor = vec![risk("a", 10.0, 12.0), risk("b", 4.0, 2.0)];
        let report = RiskReport {
            ranking: rank_actors(&per_actor),
            per_actor,
        };
        let hot: Vec<&str> = report.above_threshold(5.0).iter().map(|r| r.actor.as_str()).collect();
        assert_eq!(hot, vec!["a"]);
        assert_eq!(report.rank_of(&"b".into()), Some(2));
    }
}
