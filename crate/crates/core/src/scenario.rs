//! Treatment actions and what-if scenarios over a base project.
//!
//! Every scenario is recomputed from scratch: actions are applied to a copy of the base
//! project in order and the whole pipeline runs again on the result.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::aggregate::RiskReport;
use crate::analysis::{analyze, Analysis};
use crate::error::AnalysisError;
use crate::io::project_to_json;
use crate::model::{
    ActorId, DetectionRank, ModeId, OccurrenceRank, ProjectDefinition, ScaleError, SeverityRank, INFLUENCE_MAX,
    INFLUENCE_MIN, POSITION_MAX, POSITION_MIN,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TreatmentAction {
    /// Re-rates an existing failure instance; omitted ranks are left unchanged.
    MitigateFailure {
        actor: ActorId,
        mode: ModeId,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        severity: Option<i32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        detection: Option<i32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        occurrence: Option<i32>,
    },
    AdjustPosition {
        actor: ActorId,
        mode: ModeId,
        value: i32,
    },
    AdjustInfluence {
        from: ActorId,
        to: ActorId,
        value: i32,
    },
    /// Removes the actor, its failure instances, its position row and its influence row and column.
    EliminateActor {
        actor: ActorId,
    },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("action {index}: unknown actor {actor}")]
    UnknownActor { index: usize, actor: ActorId },
    #[error("action {index}: unknown failure mode {mode}")]
    UnknownMode { index: usize, mode: ModeId },
    #[error("action {index}: actor {actor} has no failure instance for mode {mode}")]
    NoSuchFailure { index: usize, actor: ActorId, mode: ModeId },
    #[error("action {index}: {source}")]
    OutOfScale {
        index: usize,
        #[source]
        source: ScaleError,
    },
    #[error("action {index}: self-influence cannot be set")]
    SelfInfluence { index: usize },
    #[error("action {index}: cannot eliminate {actor}, the last remaining actor")]
    LastActor { index: usize, actor: ActorId },
    #[error("scenarios were built on different base projects")]
    MismatchedBases,
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

fn scale(index: usize, what: &'static str, value: i32, min: i32, max: i32) -> Result<i32, ScenarioError> {
    if (min..=max).contains(&value) {
        Ok(value)
    } else {
        Err(ScenarioError::OutOfScale {
            index,
            source: ScaleError {
                scale: what,
                value,
                min,
                max,
            },
        })
    }
}

fn find_actor(p: &ProjectDefinition, index: usize, actor: &ActorId) -> Result<usize, ScenarioError> {
    p.actor_index(actor).ok_or_else(|| ScenarioError::UnknownActor {
        index,
        actor: actor.clone(),
    })
}

fn find_mode(p: &ProjectDefinition, index: usize, mode: &ModeId) -> Result<usize, ScenarioError> {
    p.mode_index(mode).ok_or_else(|| ScenarioError::UnknownMode {
        index,
        mode: mode.clone(),
    })
}

impl TreatmentAction {
    /// Applies the action to `p` in place. `index` is only used for error messages.
    pub fn apply(&self, p: &mut ProjectDefinition, index: usize) -> Result<(), ScenarioError> {
        let out_of_scale = |source| ScenarioError::OutOfScale { index, source };
        match self {
            Self::MitigateFailure {
                actor,
                mode,
                severity,
                detection,
                occurrence,
            } => {
                find_actor(p, index, actor)?;
                find_mode(p, index, mode)?;
                let severity = severity.map(SeverityRank::new).transpose().map_err(out_of_scale)?;
                let detection = detection.map(DetectionRank::new).transpose().map_err(out_of_scale)?;
                let occurrence = occurrence.map(OccurrenceRank::new).transpose().map_err(out_of_scale)?;
                let failure = p
                    .failures
                    .iter_mut()
                    .find(|f| &f.actor == actor && &f.mode == mode)
                    .ok_or_else(|| ScenarioError::NoSuchFailure {
                        index,
                        actor: actor.clone(),
                        mode: mode.clone(),
                    })?;
                if let Some(s) = severity {
                    failure.severity = s;
                }
                if let Some(d) = detection {
                    failure.detection = d;
                }
                if let Some(o) = occurrence {
                    failure.occurrence = o;
                }
            }
            Self::AdjustPosition { actor, mode, value } => {
                let a = find_actor(p, index, actor)?;
                let m = find_mode(p, index, mode)?;
                p.positions[(a, m)] = scale(index, "position", *value, POSITION_MIN, POSITION_MAX)?;
            }
            Self::AdjustInfluence { from, to, value } => {
                let a = find_actor(p, index, from)?;
                let b = find_actor(p, index, to)?;
                if a == b {
                    return Err(ScenarioError::SelfInfluence { index });
                }
                p.influence[(a, b)] = scale(index, "influence", *value, INFLUENCE_MIN, INFLUENCE_MAX)?;
            }
            Self::EliminateActor { actor } => {
                let a = find_actor(p, index, actor)?;
                if p.actors.len() == 1 {
                    return Err(ScenarioError::LastActor {
                        index,
                        actor: actor.clone(),
                    });
                }
                p.actors.remove(a);
                p.failures.retain(|f| &f.actor != actor);
                p.positions.remove_row(a);
                p.influence.remove_row(a);
                p.influence.remove_col(a);
            }
        }
        Ok(())
    }
}

/// Applies `actions` in order to a copy of `base`.
pub fn apply_actions(
    base: &ProjectDefinition,
    actions: &[TreatmentAction],
) -> Result<ProjectDefinition, ScenarioError> {
    let mut project = base.clone();
    for (i, action) in actions.iter().enumerate() {
        action.apply(&mut project, i)?;
    }
    Ok(project)
}

/// Applies `actions` and re-runs the full analysis on the derived project.
pub fn apply_scenario<T: Scalar>(
    base: &ProjectDefinition,
    actions: &[TreatmentAction],
) -> Result<(ProjectDefinition, Analysis<T>), ScenarioError> {
    let project = apply_actions(base, actions)?;
    let analysis = analyze(&project)?;
    Ok((project, analysis))
}

/// Content fingerprint of a project (hex SHA-256 of its canonical serialization).
pub fn project_fingerprint(p: &ProjectDefinition) -> String {
    hex::encode(Sha256::digest(project_to_json(p).as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario<T> {
    pub id: String,
    /// Fingerprint of the base project the actions apply to.
    pub base: String,
    pub actions: Vec<TreatmentAction>,
    pub report: RiskReport<T>,
}

impl<T: Scalar> Scenario<T> {
    pub fn run(
        id: impl Into<String>,
        base: &ProjectDefinition,
        actions: Vec<TreatmentAction>,
    ) -> Result<Self, ScenarioError> {
        let (_, analysis) = apply_scenario::<T>(base, &actions)?;
        Ok(Self {
            id: id.into(),
            base: project_fingerprint(base),
            actions,
            report: analysis.report,
        })
    }

    /// The unmodified base project as a scenario.
    pub fn baseline(base: &ProjectDefinition) -> Result<Self, ScenarioError> {
        Self::run("base", base, Vec::new())
    }

    /// True when replaying the actions on `base` reproduces the stored report exactly.
    pub fn replays_on(&self, base: &ProjectDefinition) -> bool {
        project_fingerprint(base) == self.base
            && apply_scenario::<T>(base, &self.actions).is_ok_and(|(_, a)| a.report == self.report)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActorStatus {
    Present,
    /// Absent from the second scenario.
    Eliminated,
    /// Absent from the first scenario.
    Added,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActorDelta<T> {
    pub actor: ActorId,
    pub status: ActorStatus,
    pub trpn_before: Option<T>,
    pub trpn_after: Option<T>,
    pub trpn_delta: Option<T>,
    pub rank_before: Option<usize>,
    pub rank_after: Option<usize>,
    /// Positive when the actor moved up the priority list.
    pub rank_change: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioComparison<T> {
    pub first: String,
    pub second: String,
    pub rows: Vec<ActorDelta<T>>,
}

/// Per-actor change from `first` to `second`. Rows follow the first scenario's ranking,
/// followed by any actors only the second one knows.
pub fn compare_scenarios<T: Scalar>(
    first: &Scenario<T>,
    second: &Scenario<T>,
) -> Result<ScenarioComparison<T>, ScenarioError> {
    if first.base != second.base {
        return Err(ScenarioError::MismatchedBases);
    }
    let after: BTreeMap<&ActorId, T> = second.report.per_actor.iter().map(|r| (&r.actor, r.trpn)).collect();
    let mut rows = Vec::new();
    for id in &first.report.ranking {
        let before = first.report.actor(id).map(|r| r.trpn);
        let now = after.get(id).copied();
        let rank_before = first.report.rank_of(id);
        let rank_after = second.report.rank_of(id);
        rows.push(ActorDelta {
            actor: id.clone(),
            status: if now.is_some() {
                ActorStatus::Present
            } else {
                ActorStatus::Eliminated
            },
            trpn_before: before,
            trpn_after: now,
            trpn_delta: before.zip(now).map(|(b, a)| a - b),
            rank_before,
            rank_after,
            rank_change: rank_before.zip(rank_after).map(|(b, a)| b as i64 - a as i64),
        });
    }
    for id in &second.report.ranking {
        if first.report.actor(id).is_none() {
            rows.push(ActorDelta {
                actor: id.clone(),
                status: ActorStatus::Added,
                trpn_before: None,
                trpn_after: after.get(id).copied(),
                trpn_delta: None,
                rank_before: None,
                rank_after: second.report.rank_of(id),
                rank_change: None,
            });
        }
    }
    Ok(ScenarioComparison {
        first: first.id.clone(),
        second: second.id.clone(),
        rows,
    })
}
