//! Report documents: a machine-readable JSON form carrying every intermediate matrix, and a
//! human-readable ranked table.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::aggregate::RiskReport;
use crate::analysis::Analysis;
use crate::convergence::ConvergenceProfile;
use crate::influence::InfluenceProfile;
use crate::model::{ActorId, ModeId, ProjectDefinition};
use crate::scalar::Scalar;
use crate::scenario::{ActorStatus, ScenarioComparison};
use crate::validate::Issue;

pub const REPORT_FORMAT_VERSION: u32 = 1;

/// Decimal places for interdependence weights in the human form.
pub const MCDV_DECIMALS: usize = 2;
/// Decimal places for risk numbers in the human form.
pub const RISK_DECIMALS: usize = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument<T> {
    pub format_version: u32,
    pub project: String,
    pub actors: Vec<ActorId>,
    pub modes: Vec<ModeId>,
    pub influence: InfluenceProfile<T>,
    pub convergence: ConvergenceProfile<T>,
    pub risk: RiskReport<T>,
    pub warnings: Vec<Issue>,
}

impl<T: Scalar + Serialize> ReportDocument<T> {
    pub fn new(project: &ProjectDefinition, analysis: Analysis<T>) -> Self {
        Self {
            format_version: REPORT_FORMAT_VERSION,
            project: project.metadata.name.clone(),
            actors: project.actor_ids(),
            modes: project.modes.iter().map(|m| m.id.clone()).collect(),
            influence: analysis.influence,
            convergence: analysis.convergence,
            risk: analysis.report,
            warnings: analysis.warnings,
        }
    }

    /// Pretty JSON with a trailing newline. Floats use the shortest representation that
    /// reads back to the same value, so the output is stable and lossless.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

impl<T: Scalar + for<'de> Deserialize<'de>> ReportDocument<T> {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Fixed-point formatting without a `-0.00` artefact.
pub fn fixed<T: Scalar>(value: T, decimals: usize) -> String {
    let text = format!("{value:.decimals$}");
    if text.starts_with('-') && text[1..].chars().all(|c| c == '0' || c == '.') {
        text[1..].to_owned()
    } else {
        text
    }
}

/// Renders the ranked priority table, the personal-risk breakdown, the influence table and
/// the interdependence weights. Actors whose total exceeds `threshold` are starred.
pub fn render_human<T: Scalar>(doc: &ReportDocument<T>, project: &ProjectDefinition, threshold: Option<T>) -> String {
    let mut out = String::new();
    let name_of = |id: &ActorId| {
        project
            .actors
            .iter()
            .find(|a| &a.id == id)
            .map_or_else(|| id.to_string(), |a| a.name.clone())
    };
    let id_w = doc.actors.iter().map(|a| a.as_str().len()).max().unwrap_or(0).max(5);
    let name_w = project.actors.iter().map(|a| a.name.len()).max().unwrap_or(0).max(4);

    let _ = writeln!(out, "Risk analysis: {}", doc.project);
    let _ = writeln!(
        out,
        "{} actors, {} failure modes, {} failure instances",
        doc.actors.len(),
        doc.modes.len(),
        project.failures.len()
    );
    out.push('\n');

    let _ = writeln!(out, "Treatment priority (TRPN = TPRPN + TIRPN)");
    let _ = writeln!(
        out,
        "{:>4}  {:<id_w$}  {:<name_w$}  {:>9}  {:>9}  {:>9}",
        "Rank", "Actor", "Name", "TPRPN", "TIRPN", "TRPN"
    );
    for (i, id) in doc.risk.ranking.iter().enumerate() {
        let Some(r) = doc.risk.actor(id) else { continue };
        let flag = match threshold {
            Some(t) if r.trpn > t => " *",
            _ => "",
        };
        let _ = writeln!(
            out,
            "{:>4}  {:<id_w$}  {:<name_w$}  {:>9}  {:>9}  {:>9}{flag}",
            i + 1,
            id.as_str(),
            name_of(id),
            fixed(r.tprpn, RISK_DECIMALS),
            fixed(r.tirpn, RISK_DECIMALS),
            fixed(r.trpn, RISK_DECIMALS),
        );
    }
    if let Some(t) = threshold {
        let _ = writeln!(out, "* above tolerance threshold {}", fixed(t, RISK_DECIMALS));
    }
    out.push('\n');

    let _ = writeln!(out, "Personal risk (PRPN = S x D x O)");
    let mode_w = doc.modes.iter().map(|m| m.as_str().len()).max().unwrap_or(0).max(4);
    let _ = writeln!(
        out,
        "{:<id_w$}  {:<mode_w$}  {:>2}  {:>2}  {:>2}  {:>6}",
        "Actor", "Mode", "S", "D", "O", "PRPN"
    );
    for r in doc.risk.per_actor.iter().filter(|r| !r.failures.is_empty()) {
        for f in &r.failures {
            let _ = writeln!(
                out,
                "{:<id_w$}  {:<mode_w$}  {:>2}  {:>2}  {:>2}  {:>6}",
                r.actor.as_str(),
                f.failure.mode.as_str(),
                f.failure.severity.value(),
                f.failure.detection.value(),
                f.failure.occurrence.value(),
                fixed(f.prpn, 0),
            );
        }
        let _ = writeln!(out, "{:<id_w$}  {:<mode_w$}  {:>18}", "", "TPRPN", fixed(r.tprpn, 0));
    }
    out.push('\n');

    let cell = doc.actors.iter().map(|a| a.as_str().len()).max().unwrap_or(0).max(6);
    let header = |out: &mut String, extra: &[&str]| {
        let _ = write!(out, "{:<id_w$}", "");
        for a in &doc.actors {
            let _ = write!(out, " {:>cell$}", a.as_str());
        }
        for e in extra {
            let _ = write!(out, " {e:>8}");
        }
        out.push('\n');
    };

    let _ = writeln!(out, "Direct and indirect influence (MIDI), net influence I, power r*");
    header(&mut out, &["I", "r*"]);
    let inf = &doc.influence;
    for (a, id) in doc.actors.iter().enumerate() {
        let _ = write!(out, "{:<id_w$}", id.as_str());
        for v in inf.midi.row(a) {
            let _ = write!(out, " {v:>cell$}");
        }
        let _ = writeln!(
            out,
            " {:>8} {:>8}",
            inf.net_influence[a],
            fixed(inf.power_normalized[a], 3)
        );
    }
    let _ = write!(out, "{:<id_w$}", "D");
    for d in &inf.net_dependence {
        let _ = write!(out, " {d:>cell$}");
    }
    let total: u32 = inf.net_influence.iter().sum();
    let _ = writeln!(out, " {total:>8}");
    out.push('\n');

    let _ = writeln!(out, "Interdependence weights (MCDV)");
    header(&mut out, &[]);
    for (a, id) in doc.actors.iter().enumerate() {
        let _ = write!(out, "{:<id_w$}", id.as_str());
        for &v in doc.convergence.mcdv.row(a) {
            let _ = write!(out, " {:>cell$}", fixed(v, MCDV_DECIMALS));
        }
        out.push('\n');
    }

    if !doc.warnings.is_empty() {
        out.push('\n');
        let _ = writeln!(out, "Warnings");
        for w in &doc.warnings {
            let _ = writeln!(out, "  {w}");
        }
    }
    out
}

/// Per-actor change table between two scenarios.
pub fn render_comparison<T: Scalar>(cmp: &ScenarioComparison<T>) -> String {
    let mut out = String::new();
    let id_w = cmp
        .rows
        .iter()
        .map(|r| r.actor.as_str().len())
        .max()
        .unwrap_or(0)
        .max(5);
    let opt = |v: Option<T>| v.map_or_else(|| "-".to_owned(), |v| fixed(v, RISK_DECIMALS));
    let rank = |v: Option<usize>| v.map_or_else(|| "-".to_owned(), |v| v.to_string());
    let _ = writeln!(out, "Change from {} to {}", cmp.first, cmp.second);
    let _ = writeln!(
        out,
        "{:<id_w$}  {:>9}  {:>9}  {:>9}  {:>9}  Status",
        "Actor", "TRPN was", "TRPN now", "Delta", "Rank"
    );
    for r in &cmp.rows {
        let status = match r.status {
            ActorStatus::Present => "",
            ActorStatus::Eliminated => "eliminated",
            ActorStatus::Added => "added",
        };
        let moved = format!("{} -> {}", rank(r.rank_before), rank(r.rank_after));
        let line = format!(
            "{:<id_w$}  {:>9}  {:>9}  {:>9}  {:>9}  {status}",
            r.actor.as_str(),
            opt(r.trpn_before),
            opt(r.trpn_after),
            opt(r.trpn_delta),
            moved,
        );
        let _ = writeln!(out, "{}", line.trim_end());
    }
    out
}
