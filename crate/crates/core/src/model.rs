//! Project definition: actors, failure modes, FMEA-rated failure instances and the two
//! input matrices (signed positions and direct influence).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;

macro_rules! id_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }
    };
}

id_newtype!(
    /// Opaque actor identifier, unique within a project.
    ActorId
);
id_newtype!(
    /// Opaque failure-mode identifier, unique within a project.
    ModeId
);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Actor {
    pub id: ActorId,
    pub name: String,
}

impl Actor {
    pub fn new(id: &str, name: &str) -> Self {
        Self {
            id: ActorId::from(id),
            name: name.to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureMode {
    pub id: ModeId,
    pub label: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub effect: String,
}

impl FailureMode {
    pub fn new(id: &str, label: &str, effect: &str) -> Self {
        Self {
            id: ModeId::from(id),
            label: label.to_owned(),
            effect: effect.to_owned(),
        }
    }

    /// The five organizational failure modes used by the bundled example project.
    pub fn default_catalog() -> Vec<FailureMode> {
        vec![
            Self::new("LL", "Lack of leadership", "Delay of design project"),
            Self::new("LK", "Lack of knowledge", "Design accident/insecurity for user"),
            Self::new("LR", "Lack of responsibility", "Delay of the design project"),
            Self::new("PC", "Poor communication", "Low quality of product"),
            Self::new("IGA", "Insensitive to global awareness", "Low market share"),
        ]
    }
}

/// Out-of-scale rank or matrix entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("{scale} value {value} outside [{min}, {max}]")]
pub struct ScaleError {
    pub scale: &'static str,
    pub value: i32,
    pub min: i32,
    pub max: i32,
}

macro_rules! rank_newtype {
    ($(#[$meta:meta])* $name:ident, $scale:literal, $min:literal, $max:literal) => {
        $(#[$meta])*
        ///
        /// Deserialization does not check the scale; `validate_project` does.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(i32);

        impl $name {
            pub const MIN: i32 = $min;
            pub const MAX: i32 = $max;

            pub fn new(value: i32) -> Result<Self, ScaleError> {
                let rank = Self(value);
                rank.check()?;
                Ok(rank)
            }

            pub fn value(self) -> i32 {
                self.0
            }

            pub fn check(self) -> Result<(), ScaleError> {
                if (Self::MIN..=Self::MAX).contains(&self.0) {
                    Ok(())
                } else {
                    Err(ScaleError {
                        scale: $scale,
                        value: self.0,
                        min: Self::MIN,
                        max: Self::MAX,
                    })
                }
            }
        }

        impl TryFrom<i32> for $name {
            type Error = ScaleError;

            fn try_from(value: i32) -> Result<Self, ScaleError> {
                Self::new(value)
            }
        }
    };
}

rank_newtype!(
    /// Signed severity: 3 = failure to meet the functional definition, -3 = success at it.
    SeverityRank,
    "severity",
    -3,
    3
);
rank_newtype!(
    /// Detection rank: 5 = no detection method, 1 = failure fully prevented.
    DetectionRank,
    "detection",
    1,
    5
);
rank_newtype!(
    /// Occurrence rank: 5 = inevitable with a new design, 1 = eliminated by preventive control.
    OccurrenceRank,
    "occurrence",
    1,
    5
);

pub const POSITION_MIN: i32 = -3;
pub const POSITION_MAX: i32 = 3;
pub const INFLUENCE_MIN: i32 = 0;
pub const INFLUENCE_MAX: i32 = 3;

/// Severity scale rows, from strongly harmful to strongly beneficial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectClass {
    NegativeHigh,
    NegativeMedium,
    NegativeLow,
    NoEffect,
    PositiveLow,
    PositiveMedium,
    PositiveHigh,
}

impl EffectClass {
    pub const ALL: [EffectClass; 7] = [
        Self::NegativeHigh,
        Self::NegativeMedium,
        Self::NegativeLow,
        Self::NoEffect,
        Self::PositiveLow,
        Self::PositiveMedium,
        Self::PositiveHigh,
    ];

    pub fn description(self) -> &'static str {
        match self {
            Self::NegativeHigh => "Failure to meet the functional definition in design process",
            Self::NegativeMedium => "Failure to meet the organic definition in design process",
            Self::NegativeLow => "Failure to meet the operational definition in design process",
            Self::NoEffect => "No effect to the design process",
            Self::PositiveLow => "Success to meet the operational definition in design process",
            Self::PositiveMedium => "Success to meet the organic definition in design process",
            Self::PositiveHigh => "Success to meet the functional definition in design process",
        }
    }
}

pub fn severity_from_effect(effect: EffectClass) -> SeverityRank {
    SeverityRank(match effect {
        EffectClass::NegativeHigh => 3,
        EffectClass::NegativeMedium => 2,
        EffectClass::NegativeLow => 1,
        EffectClass::NoEffect => 0,
        EffectClass::PositiveLow => -1,
        EffectClass::PositiveMedium => -2,
        EffectClass::PositiveHigh => -3,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectionOpportunity {
    NoDetectionOpportunity,
    NotLikely,
    Moderate,
    EasyAndComprehensive,
    NotApplicable,
}

pub fn detection_from_opportunity(opportunity: DetectionOpportunity) -> DetectionRank {
    DetectionRank(match opportunity {
        DetectionOpportunity::NoDetectionOpportunity => 5,
        DetectionOpportunity::NotLikely => 4,
        DetectionOpportunity::Moderate => 3,
        DetectionOpportunity::EasyAndComprehensive => 2,
        DetectionOpportunity::NotApplicable => 1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Likelihood {
    VeryHigh,
    High,
    Moderate,
    Low,
    VeryLow,
}

pub fn occurrence_from_likelihood(likelihood: Likelihood) -> OccurrenceRank {
    OccurrenceRank(match likelihood {
        Likelihood::VeryHigh => 5,
        Likelihood::High => 4,
        Likelihood::Moderate => 3,
        Likelihood::Low => 2,
        Likelihood::VeryLow => 1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureInstance {
    pub actor: ActorId,
    pub mode: ModeId,
    pub severity: SeverityRank,
    pub detection: DetectionRank,
    pub occurrence: OccurrenceRank,
}

impl FailureInstance {
    pub fn new(actor: &str, mode: &str, severity: i32, detection: i32, occurrence: i32) -> Result<Self, ScaleError> {
        Ok(Self {
            actor: ActorId::from(actor),
            mode: ModeId::from(mode),
            severity: SeverityRank::new(severity)?,
            detection: DetectionRank::new(detection)?,
            occurrence: OccurrenceRank::new(occurrence)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ProjectMetadata {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

/// Everything an analysis needs. Rows of `positions` follow `actors`, its columns follow
/// `modes`; `influence` is actors x actors, row = influencing actor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectDefinition {
    pub metadata: ProjectMetadata,
    pub actors: Vec<Actor>,
    pub modes: Vec<FailureMode>,
    pub failures: Vec<FailureInstance>,
    pub positions: Matrix<i32>,
    pub influence: Matrix<i32>,
}

impl ProjectDefinition {
    pub fn actor_index(&self, id: &ActorId) -> Option<usize> {
        self.actors.iter().position(|a| &a.id == id)
    }

    pub fn mode_index(&self, id: &ModeId) -> Option<usize> {
        self.modes.iter().position(|m| &m.id == id)
    }

    pub fn actor_ids(&self) -> Vec<ActorId> {
        self.actors.iter().map(|a| a.id.clone()).collect()
    }

    pub fn failures_of<'a>(&'a self, actor: &'a ActorId) -> impl Iterator<Item = &'a FailureInstance> + 'a {
        self.failures.iter().filter(move |f| &f.actor == actor)
    }

    /// Relabels actor order: actor `i` of the result is actor `perm[i]` of `self`.
    /// Failure instances keep their order.
    pub fn permute_actors(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.actors.len());
        let positions = Matrix::from_fn(self.positions.rows(), self.positions.cols(), |r, c| {
            self.positions[(perm[r], c)]
        });
        Self {
            metadata: self.metadata.clone(),
            actors: perm.iter().map(|&i| self.actors[i].clone()).collect(),
            modes: self.modes.clone(),
            failures: self.failures.clone(),
            positions,
            influence: self.influence.permuted(perm),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn severity_scale_rows() {
        assert_eq!(severity_from_effect(EffectClass::NegativeHigh).value(), 3);
        assert_eq!(severity_from_effect(EffectClass::NoEffect).value(), 0);
        assert_eq!(severity_from_effect(EffectClass::PositiveHigh).value(), -3);
        let ranks: Vec<i32> = EffectClass::ALL
            .iter()
            .map(|&e| severity_from_effect(e).value())
            .collect();
        assert_eq!(ranks, vec![3, 2, 1, 0, -1, -2, -3]);
    }

    #[test]
    fn detection_and_occurrence_scales() {
        assert_eq!(
            detection_from_opportunity(DetectionOpportunity::NoDetectionOpportunity).value(),
            5
        );
        assert_eq!(
            detection_from_opportunity(DetectionOpportunity::NotApplicable).value(),
            1
        );
        assert_eq!(occurrence_from_likelihood(Likelihood::VeryHigh).value(), 5);
        assert_eq!(occurrence_from_likelihood(Likelihood::VeryLow).value(), 1);
    }

    #[test]
    fn rank_bounds() {
        assert!(SeverityRank::new(-3).is_ok());
        assert!(SeverityRank::new(4).is_err());
        assert!(DetectionRank::new(0).is_err());
        let err = OccurrenceRank::new(6).unwrap_err();
        assert_eq!(err.to_string(), "occurrence value 6 outside [1, 5]");
    }

    #[test]
    fn unchecked_deserialization() {
        let s: SeverityRank = serde_json::from_str("9").unwrap();
        assert!(s.check().is_err());
    }
}
