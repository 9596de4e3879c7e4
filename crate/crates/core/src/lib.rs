//! Total failure-risk priority (TRPN) analysis for point-to-point project organizations.
//!
//! Each actor's personal risk (FMEA severity x detection x occurrence) is combined with the
//! risk it carries into other actors, weighted by how their stances on shared failure modes
//! converge or diverge once scaled by each actor's power in the influence network. The
//! resulting totals rank actors for treatment; scenarios replay treatment actions and
//! recompute the ranking.
//!
//! The real-valued stages are generic over [`Scalar`] (`f32` or `f64`). The aliases at the
//! crate root fix the scalar to `f64`.

pub mod aggregate;
pub mod analysis;
pub mod convergence;
pub mod error;
pub mod fixtures;
pub mod fmea;
pub mod influence;
pub mod io;
pub mod matrix;
pub mod model;
pub mod report;
pub mod scalar;
pub mod scenario;
pub mod validate;

pub use analysis::{analyze, trpn_report};
pub use error::{AnalysisError, EngineError};
pub use matrix::Matrix;
pub use model::{
    Actor, ActorId, DetectionRank, FailureInstance, FailureMode, ModeId, OccurrenceRank, ProjectDefinition,
    ProjectMetadata, SeverityRank,
};
pub use scalar::Scalar;
pub use scenario::{apply_actions, apply_scenario, compare_scenarios, TreatmentAction};
pub use validate::{validate_project, Issue, IssueKind, ValidationResult};

pub type Analysis = analysis::Analysis<f64>;
pub type InfluenceProfile = influence::InfluenceProfile<f64>;
pub type ConvergenceProfile = convergence::ConvergenceProfile<f64>;
pub type PersonalRiskBreakdown = fmea::PersonalRiskBreakdown<f64>;
pub type RiskReport = aggregate::RiskReport<f64>;
pub type ActorRisk = aggregate::ActorRisk<f64>;
pub type Scenario = scenario::Scenario<f64>;
pub type ScenarioComparison = scenario::ScenarioComparison<f64>;
pub type ReportDocument = report::ReportDocument<f64>;
