//! Input validation. Failures are reported as data; nothing here returns `Err`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{ProjectDefinition, ScaleError, INFLUENCE_MAX, INFLUENCE_MIN, POSITION_MAX, POSITION_MIN};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IssueKind {
    NoActors,
    EmptyId,
    DuplicateActor {
        id: String,
    },
    DuplicateMode {
        id: String,
    },
    EmptyLabel,
    UnknownActor {
        id: String,
    },
    UnknownMode {
        id: String,
    },
    DuplicateFailure {
        actor: String,
        mode: String,
    },
    RankOutOfScale {
        scale: String,
        value: i32,
        min: i32,
        max: i32,
    },
    DimensionMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    PositionOutOfScale {
        value: i32,
    },
    InfluenceOutOfScale {
        value: i32,
    },
    NonzeroSelfInfluence {
        value: i32,
    },
    /// Warning: a harmful failure on an actor whose position on that mode is not positive.
    PositionSeverityMismatch {
        severity: i32,
        position: i32,
    },
    /// Warning: an interdependence weight beyond the nominal [-1, 1] band.
    McdvOutOfBand {
        value: f64,
    },
    /// Warning: a field the reader does not know about.
    UnknownField {
        path: String,
    },
}

impl fmt::Display for IssueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoActors => write!(f, "project has no actors"),
            Self::EmptyId => write!(f, "empty identifier"),
            Self::DuplicateActor { id } => write!(f, "duplicate actor id {id:?}"),
            Self::DuplicateMode { id } => write!(f, "duplicate failure mode id {id:?}"),
            Self::EmptyLabel => write!(f, "empty failure mode label"),
            Self::UnknownActor { id } => write!(f, "unknown actor {id:?}"),
            Self::UnknownMode { id } => write!(f, "unknown failure mode {id:?}"),
            Self::DuplicateFailure { actor, mode } => {
                write!(f, "duplicate failure instance for actor {actor:?} and mode {mode:?}")
            }
            Self::RankOutOfScale { scale, value, min, max } => {
                write!(f, "{scale} out of scale: {value} not in [{min}, {max}]")
            }
            Self::DimensionMismatch {
                expected_rows,
                expected_cols,
                rows,
                cols,
            } => write!(
                f,
                "dimension mismatch: expected {expected_rows}x{expected_cols}, found {rows}x{cols}"
            ),
            Self::PositionOutOfScale { value } => {
                write!(
                    f,
                    "position out of scale: {value} not in [{POSITION_MIN}, {POSITION_MAX}]"
                )
            }
            Self::InfluenceOutOfScale { value } => write!(
                f,
                "influence out of scale: {value} not in [{INFLUENCE_MIN}, {INFLUENCE_MAX}]"
            ),
            Self::NonzeroSelfInfluence { value } => write!(f, "nonzero self-influence: {value}"),
            Self::PositionSeverityMismatch { severity, position } => write!(
                f,
                "failure with severity {severity} but position {position} (expected a positive position)"
            ),
            Self::McdvOutOfBand { value } => write!(f, "interdependence weight {value:.3} outside [-1, 1]"),
            Self::UnknownField { path } => write!(f, "unknown field {path:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Issue {
    /// Field path of the offending value, e.g. `influence[A2][A2]` or `failures[3].severity`.
    pub location: String,
    #[serde(flatten)]
    pub kind: IssueKind,
}

impl Issue {
    pub fn new(location: impl Into<String>, kind: IssueKind) -> Self {
        Self {
            location: location.into(),
            kind,
        }
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.kind)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationResult {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl ValidationResult {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

impl fmt::Display for ValidationResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

fn rank_issue(location: String, err: ScaleError) -> Issue {
    Issue::new(
        location,
        IssueKind::RankOutOfScale {
            scale: err.scale.to_owned(),
            value: err.value,
            min: err.min,
            max: err.max,
        },
    )
}

pub fn validate_project(p: &ProjectDefinition) -> ValidationResult {
    let mut out = ValidationResult::default();
    let errors = &mut out.errors;

    if p.actors.is_empty() {
        errors.push(Issue::new("actors", IssueKind::NoActors));
    }
    let mut seen = HashSet::new();
    for (i, actor) in p.actors.iter().enumerate() {
        if actor.id.as_str().is_empty() {
            errors.push(Issue::new(format!("actors[{i}].id"), IssueKind::EmptyId));
        } else if !seen.insert(&actor.id) {
            errors.push(Issue::new(
                format!("actors[{i}].id"),
                IssueKind::DuplicateActor { id: actor.id.0.clone() },
            ));
        }
    }
    let mut seen = HashSet::new();
    for (i, mode) in p.modes.iter().enumerate() {
        if mode.id.as_str().is_empty() {
            errors.push(Issue::new(format!("modes[{i}].id"), IssueKind::EmptyId));
        } else if !seen.insert(&mode.id) {
            errors.push(Issue::new(
                format!("modes[{i}].id"),
                IssueKind::DuplicateMode { id: mode.id.0.clone() },
            ));
        }
        if mode.label.trim().is_empty() {
            errors.push(Issue::new(format!("modes[{i}].label"), IssueKind::EmptyLabel));
        }
    }

    let n = p.actors.len();
    let m = p.modes.len();
    let positions_ok = p.positions.rows() == n && p.positions.cols() == m;
    if !positions_ok {
        errors.push(Issue::new(
            "positions",
            IssueKind::DimensionMismatch {
                expected_rows: n,
                expected_cols: m,
                rows: p.positions.rows(),
                cols: p.positions.cols(),
            },
        ));
    }
    let actor_label = |r: usize| p.actors.get(r).map_or(r.to_string(), |a| a.id.0.clone());
    let mode_label = |c: usize| p.modes.get(c).map_or(c.to_string(), |m| m.id.0.clone());
    for (r, c, &v) in p.positions.indexed() {
        if !(POSITION_MIN..=POSITION_MAX).contains(&v) {
            errors.push(Issue::new(
                format!("positions[{}][{}]", actor_label(r), mode_label(c)),
                IssueKind::PositionOutOfScale { value: v },
            ));
        }
    }

    if p.influence.rows() != n || p.influence.cols() != n {
        errors.push(Issue::new(
            "influence",
            IssueKind::DimensionMismatch {
                expected_rows: n,
                expected_cols: n,
                rows: p.influence.rows(),
                cols: p.influence.cols(),
            },
        ));
    }
    for (r, c, &v) in p.influence.indexed() {
        let loc = format!("influence[{}][{}]", actor_label(r), actor_label(c));
        if !(INFLUENCE_MIN..=INFLUENCE_MAX).contains(&v) {
            errors.push(Issue::new(loc, IssueKind::InfluenceOutOfScale { value: v }));
        } else if r == c && v != 0 {
            errors.push(Issue::new(loc, IssueKind::NonzeroSelfInfluence { value: v }));
        }
    }

    let mut pairs = HashSet::new();
    for (i, f) in p.failures.iter().enumerate() {
        let actor = p.actor_index(&f.actor);
        let mode = p.mode_index(&f.mode);
        if actor.is_none() {
            errors.push(Issue::new(
                format!("failures[{i}].actor"),
                IssueKind::UnknownActor { id: f.actor.0.clone() },
            ));
        }
        if mode.is_none() {
            errors.push(Issue::new(
                format!("failures[{i}].mode"),
                IssueKind::UnknownMode { id: f.mode.0.clone() },
            ));
        }
        if !pairs.insert((&f.actor, &f.mode)) {
            errors.push(Issue::new(
                format!("failures[{i}]"),
                IssueKind::DuplicateFailure {
                    actor: f.actor.0.clone(),
                    mode: f.mode.0.clone(),
                },
            ));
        }
        if let Err(e) = f.severity.check() {
            errors.push(rank_issue(format!("failures[{i}].severity"), e));
        }
        if let Err(e) = f.detection.check() {
            errors.push(rank_issue(format!("failures[{i}].detection"), e));
        }
        if let Err(e) = f.occurrence.check() {
            errors.push(rank_issue(format!("failures[{i}].occurrence"), e));
        }
        if let (Some(a), Some(mi), true) = (actor, mode, positions_ok) {
            let position = p.positions[(a, mi)];
            if f.severity.value() > 0 && position <= 0 {
                out.warnings.push(Issue::new(
                    format!("failures[{i}]"),
                    IssueKind::PositionSeverityMismatch {
                        severity: f.severity.value(),
                        position,
                    },
                ));
            }
        }
    }

    out
}
