//! The full pipeline: validation, influence, convergence, personal risk, aggregation.

use serde::{Deserialize, Serialize};

use crate::aggregate::{rank_actors, tirpn, ActorRisk, RiskReport};
use crate::convergence::ConvergenceProfile;
use crate::error::AnalysisError;
use crate::fmea::tprpn;
use crate::influence::InfluenceProfile;
use crate::model::ProjectDefinition;
use crate::scalar::Scalar;
use crate::validate::{validate_project, Issue, IssueKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis<T> {
    pub influence: InfluenceProfile<T>,
    pub convergence: ConvergenceProfile<T>,
    pub report: RiskReport<T>,
    pub warnings: Vec<Issue>,
}

pub fn analyze<T: Scalar>(p: &ProjectDefinition) -> Result<Analysis<T>, AnalysisError> {
    let validation = validate_project(p);
    if !validation.is_valid() {
        return Err(AnalysisError::Invalid(validation));
    }
    let mut warnings = validation.warnings;

    let influence = InfluenceProfile::<T>::compute(&p.influence)?;
    let convergence = ConvergenceProfile::compute(&p.positions, &influence.power_normalized)?;
    let ids = p.actor_ids();

    for (a, b, &v) in convergence.mcdv.indexed() {
        if a <= b && v.abs() > T::one() {
            warnings.push(Issue::new(
                format!("mcdv[{}][{}]", ids[a], ids[b]),
                IssueKind::McdvOutOfBand {
                    value: v.to_f64().unwrap_or(f64::NAN),
                },
            ));
        }
    }

    let mut per_actor = Vec::with_capacity(ids.len());
    for (a, id) in ids.iter().enumerate() {
        let personal = tprpn::<T>(p, id)?;
        let (total_interdependent, effects) = tirpn(a, personal.tprpn, &convergence.mcdv, &ids);
        per_actor.push(ActorRisk {
            actor: id.clone(),
            failures: personal.per_failure,
            tprpn: personal.tprpn,
            tirpn: total_interdependent,
            trpn: personal.tprpn + total_interdependent,
            effects,
        });
    }
    let ranking = rank_actors(&per_actor);

    Ok(Analysis {
        influence,
        convergence,
        report: RiskReport { per_actor, ranking },
        warnings,
    })
}

pub fn trpn_report<T: Scalar>(p: &ProjectDefinition) -> Result<RiskReport<T>, AnalysisError> {
    analyze(p).map(|a| a.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::model::{Actor, FailureInstance, FailureMode, ProjectMetadata};
    use approx::assert_relative_eq;

    fn single_actor() -> ProjectDefinition {
        ProjectDefinition {
            metadata: ProjectMetadata::default(),
            actors: vec![Actor::new("solo", "Solo")],
            modes: vec![FailureMode::new("M", "Mode", "")],
            failures: vec![FailureInstance::new("solo", "M", 2, 2, 2).unwrap()],
            positions: Matrix::filled(1, 1, 2),
            influence: Matrix::filled(1, 1, 0),
        }
    }

    #[test]
    fn single_actor_network_is_degenerate() {
        // One actor cannot influence anybody; there is no power to distribute.
        let err = trpn_report::<f64>(&single_actor()).unwrap_err();
        assert!(matches!(err, AnalysisError::Engine(_)));
    }

    #[test]
    fn two_actor_hand_evaluation() {
        // A influences B at 2; B holds no influence. MIDI = MID, I = (2, 0), D = (0, 2),
        // r = (1, 0), r* = (2, 0). 3MAO row A = 2 * 2 = 4, row B = 0.
        // mcdv[A][A] = 4/9; TRPN_A = 8 + 8 * 4/9.
        let mut p = single_actor();
        p.actors.push(Actor::new("other", "Other"));
        p.positions = Matrix::from_rows(vec![vec![2], vec![1]]).unwrap();
        p.influence = Matrix::from_rows(vec![vec![0, 2], vec![0, 0]]).unwrap();
        let analysis = analyze::<f64>(&p).unwrap();
        let solo = analysis.report.actor(&"solo".into()).unwrap();
        assert_relative_eq!(solo.tprpn, 8.0);
        assert_relative_eq!(solo.trpn, 8.0 + 8.0 * 4.0 / 9.0, epsilon = 1e-12);
        assert_eq!(analysis.report.ranking[0].as_str(), "solo");
        let other = analysis.report.actor(&"other".into()).unwrap();
        assert_eq!(other.trpn, 0.0);
    }

    #[test]
    fn invalid_project_is_rejected() {
        let mut p = single_actor();
        p.influence[(0, 0)] = 1;
        assert!(matches!(analyze::<f64>(&p), Err(AnalysisError::Invalid(_))));
    }

    #[test]
    fn out_of_band_weights_are_warned() {
        // Strong power concentration on one actor holding maximal positions.
        let mut p = single_actor();
        p.actors.push(Actor::new("b", "B"));
        p.actors.push(Actor::new("c", "C"));
        p.modes = (0..5).map(|i| FailureMode::new(&format!("M{i}"), "m", "")).collect();
        p.failures[0].mode = "M0".into();
        p.positions = Matrix::from_rows(vec![vec![3; 5], vec![0; 5], vec![0; 5]]).unwrap();
        p.influence = Matrix::from_rows(vec![vec![0, 3, 3], vec![0, 0, 0], vec![0, 0, 0]]).unwrap();
        let analysis = analyze::<f64>(&p).unwrap();
        assert!(analysis.convergence.mcdv[(0, 0)] > 1.0);
        assert!(analysis
            .warnings
            .iter()
            .any(|w| matches!(w.kind, IssueKind::McdvOutOfBand { .. })));
    }
}
