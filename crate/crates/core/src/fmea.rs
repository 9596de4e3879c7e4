//! Personal risk priority numbers.

use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::model::{ActorId, DetectionRank, FailureInstance, OccurrenceRank, ProjectDefinition, SeverityRank};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRisk<T> {
    pub failure: FailureInstance,
    pub prpn: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersonalRiskBreakdown<T> {
    pub actor: ActorId,
    pub per_failure: Vec<FailureRisk<T>>,
    pub tprpn: T,
}

/// `S * D * O`. Negative for beneficial behaviour (negative severity).
pub fn prpn<T: Scalar>(s: SeverityRank, d: DetectionRank, o: OccurrenceRank) -> T {
    T::from_int(i64::from(s.value()) * i64::from(d.value()) * i64::from(o.value()))
}

/// Sums the personal risk of every failure instance attributed to `actor`.
pub fn tprpn<T: Scalar>(p: &ProjectDefinition, actor: &ActorId) -> Result<PersonalRiskBreakdown<T>, EngineError> {
    if p.actor_index(actor).is_none() {
        return Err(EngineError::UnknownActor(actor.clone()));
    }
    let per_failure: Vec<FailureRisk<T>> = p
        .failures_of(actor)
        .map(|f| FailureRisk {
            failure: f.clone(),
            prpn: prpn(f.severity, f.detection, f.occurrence),
        })
        .collect();
    let tprpn = per_failure.iter().fold(T::zero(), |acc, f| acc + f.prpn);
    Ok(PersonalRiskBreakdown {
        actor: actor.clone(),
        per_failure,
        tprpn,
    })
}
