//! In-memory project store with optional on-disk persistence.
//!
//! Only project files and scenario action logs are written to disk. Analyses are derived
//! and recomputed whenever a project or scenario changes, and again on load.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};
use trpn_core::io::{parse_and_validate, project_to_json, ReadOptions, FORMAT_VERSION};
use trpn_core::report::ReportDocument;
use trpn_core::scenario::{apply_scenario, compare_scenarios, project_fingerprint};
use trpn_core::{analyze, Issue, ProjectDefinition, Scenario, ScenarioComparison, TreatmentAction};

use crate::error::ApiError;

/// Name reserved for the unmodified project in comparisons.
pub const BASE: &str = "base";

type Outcome = Result<Arc<ReportDocument<f64>>, ApiError>;

fn run(project: &ProjectDefinition, actions: &[TreatmentAction]) -> Outcome {
    let (derived, analysis) = apply_scenario::<f64>(project, actions)?;
    Ok(Arc::new(ReportDocument::new(&derived, analysis)))
}

#[derive(Debug, Clone)]
struct ScenarioEntry {
    id: String,
    actions: Vec<TreatmentAction>,
    outcome: Outcome,
}

#[derive(Debug)]
struct Entry {
    project: ProjectDefinition,
    version: u64,
    fingerprint: String,
    analysis: Outcome,
    scenarios: Vec<ScenarioEntry>,
    next_scenario: u64,
}

impl Entry {
    fn new(project: ProjectDefinition, version: u64) -> Self {
        let analysis = analyze::<f64>(&project)
            .map(|a| Arc::new(ReportDocument::new(&project, a)))
            .map_err(ApiError::from);
        Self {
            fingerprint: project_fingerprint(&project),
            analysis,
            project,
            version,
            scenarios: Vec::new(),
            next_scenario: 1,
        }
    }

    fn scenario(&self, id: &str) -> Option<&ScenarioEntry> {
        self.scenarios.iter().find(|s| s.id == id)
    }

    fn as_scenario(&self, id: &str) -> Result<Scenario, ApiError> {
        let (actions, outcome) = if id == BASE {
            (Vec::new(), &self.analysis)
        } else {
            let s = self
                .scenario(id)
                .ok_or_else(|| ApiError::NotFound(format!("scenario {id:?}")))?;
            (s.actions.clone(), &s.outcome)
        };
        let doc = outcome.clone()?;
        Ok(Scenario {
            id: id.to_owned(),
            base: self.fingerprint.clone(),
            actions,
            report: doc.risk.clone(),
        })
    }

    fn state(&self) -> StateFile {
        StateFile {
            format_version: FORMAT_VERSION,
            version: self.version,
            next_scenario: self.next_scenario,
            scenarios: self
                .scenarios
                .iter()
                .map(|s| StoredScenario {
                    id: s.id.clone(),
                    actions: s.actions.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StoredScenario {
    id: String,
    actions: Vec<TreatmentAction>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    format_version: u32,
    version: u64,
    next_scenario: u64,
    scenarios: Vec<StoredScenario>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectSummary {
    pub id: String,
    pub name: String,
    pub version: u64,
    pub actors: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Created {
    pub id: String,
    pub version: u64,
    pub warnings: Vec<Issue>,
}

#[derive(Debug, Clone)]
pub struct ProjectSnapshot {
    pub project: ProjectDefinition,
    pub version: u64,
}

#[derive(Debug, Clone)]
pub struct ScenarioSnapshot {
    pub id: String,
    pub actions: Vec<TreatmentAction>,
    pub outcome: Result<Arc<ReportDocument<f64>>, ApiError>,
    pub version: u64,
}

#[derive(Debug, Default)]
pub struct Store {
    projects: RwLock<BTreeMap<String, Entry>>,
    data_dir: Option<PathBuf>,
}

fn storage<E: std::fmt::Display>(e: E) -> ApiError {
    ApiError::Storage(e.to_string())
}

fn write_atomic(path: &Path, text: &str) -> Result<(), ApiError> {
    let dir = path.parent().expect("store paths have a parent");
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(storage)?;
    tmp.write_all(text.as_bytes()).map_err(storage)?;
    tmp.persist(path).map_err(storage)?;
    Ok(())
}

fn valid_scenario_id(id: &str) -> bool {
    !id.is_empty()
        && id.len() <= 64
        && id != BASE
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

impl Store {
    /// A store that lives only in memory.
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// A store persisted under `dir`, one subdirectory per project. Existing projects are
    /// loaded and their scenarios replayed.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, ApiError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(storage)?;
        let mut projects = BTreeMap::new();
        for item in fs::read_dir(&dir).map_err(storage)? {
            let item = item.map_err(storage)?;
            if !item.file_type().map_err(storage)?.is_dir() {
                continue;
            }
            let id = item.file_name().to_string_lossy().into_owned();
            let entry = Self::load_entry(&item.path()).map_err(|e| ApiError::Storage(format!("project {id}: {e}")))?;
            projects.insert(id, entry);
        }
        Ok(Self {
            projects: RwLock::new(projects),
            data_dir: Some(dir),
        })
    }

    fn load_entry(dir: &Path) -> Result<Entry, ApiError> {
        let text = fs::read_to_string(dir.join("project.json")).map_err(storage)?;
        let project = parse_and_validate(&text, Some(dir), ReadOptions { strict: true })?.project;
        let state: StateFile =
            serde_json::from_str(&fs::read_to_string(dir.join("state.json")).map_err(storage)?).map_err(storage)?;
        let mut entry = Entry::new(project, state.version);
        entry.next_scenario = state.next_scenario;
        entry.scenarios = state
            .scenarios
            .into_iter()
            .map(|s| ScenarioEntry {
                outcome: run(&entry.project, &s.actions),
                id: s.id,
                actions: s.actions,
            })
            .collect();
        Ok(entry)
    }

    fn persist(&self, id: &str, entry: &Entry, project_changed: bool) -> Result<(), ApiError> {
        let Some(root) = &self.data_dir else { return Ok(()) };
        let dir = root.join(id);
        fs::create_dir_all(&dir).map_err(storage)?;
        if project_changed {
            write_atomic(&dir.join("project.json"), &project_to_json(&entry.project))?;
        }
        let mut state = serde_json::to_string_pretty(&entry.state()).expect("state serializes");
        state.push('\n');
        write_atomic(&dir.join("state.json"), &state)
    }

    fn not_found(id: &str) -> ApiError {
        ApiError::NotFound(format!("project {id:?}"))
    }

    pub fn list(&self) -> Vec<ProjectSummary> {
        let projects = self.projects.read().expect("store lock");
        projects
            .iter()
            .map(|(id, e)| ProjectSummary {
                id: id.clone(),
                name: e.project.metadata.name.clone(),
                version: e.version,
                actors: e.project.actors.len(),
            })
            .collect()
    }

    /// Parses, validates and stores a project document.
    pub fn create(&self, text: &str) -> Result<Created, ApiError> {
        let loaded = parse_and_validate(text, None, ReadOptions::default())?;
        let id = uuid::Uuid::new_v4().simple().to_string();
        let entry = Entry::new(loaded.project, 1);
        let mut projects = self.projects.write().expect("store lock");
        self.persist(&id, &entry, true)?;
        let version = entry.version;
        projects.insert(id.clone(), entry);
        Ok(Created {
            id,
            version,
            warnings: loaded.warnings,
        })
    }

    pub fn get(&self, id: &str) -> Result<ProjectSnapshot, ApiError> {
        let projects = self.projects.read().expect("store lock");
        let e = projects.get(id).ok_or_else(|| Self::not_found(id))?;
        Ok(ProjectSnapshot {
            project: e.project.clone(),
            version: e.version,
        })
    }

    /// Replaces the project if `expected` is still the current version. Scenarios are
    /// replayed against the new project.
    pub fn update(&self, id: &str, expected: u64, text: &str) -> Result<Created, ApiError> {
        let loaded = parse_and_validate(text, None, ReadOptions::default())?;
        let mut projects = self.projects.write().expect("store lock");
        let current = projects.get(id).ok_or_else(|| Self::not_found(id))?;
        if current.version != expected {
            return Err(ApiError::Conflict {
                current: current.version,
            });
        }
        let mut entry = Entry::new(loaded.project, expected + 1);
        entry.next_scenario = current.next_scenario;
        entry.scenarios = current
            .scenarios
            .iter()
            .map(|s| ScenarioEntry {
                outcome: run(&entry.project, &s.actions),
                ..s.clone()
            })
            .collect();
        self.persist(id, &entry, true)?;
        let version = entry.version;
        projects.insert(id.to_owned(), entry);
        Ok(Created {
            id: id.to_owned(),
            version,
            warnings: loaded.warnings,
        })
    }

    pub fn delete(&self, id: &str) -> Result<(), ApiError> {
        let mut projects = self.projects.write().expect("store lock");
        if !projects.contains_key(id) {
            return Err(Self::not_found(id));
        }
        if let Some(root) = &self.data_dir {
            let dir = root.join(id);
            if dir.exists() {
                fs::remove_dir_all(dir).map_err(storage)?;
            }
        }
        projects.remove(id);
        Ok(())
    }

    /// The machine report of the current project version.
    pub fn analysis(&self, id: &str) -> Result<(Arc<ReportDocument<f64>>, u64), ApiError> {
        let projects = self.projects.read().expect("store lock");
        let e = projects.get(id).ok_or_else(|| Self::not_found(id))?;
        Ok((e.analysis.clone()?, e.version))
    }

    /// Records a scenario. Actions that do not apply to the project are rejected and
    /// nothing is stored.
    pub fn add_scenario(
        &self,
        id: &str,
        scenario_id: Option<String>,
        expected: Option<u64>,
        actions: Vec<TreatmentAction>,
    ) -> Result<ScenarioSnapshot, ApiError> {
        let mut projects = self.projects.write().expect("store lock");
        let e = projects.get_mut(id).ok_or_else(|| Self::not_found(id))?;
        if expected.is_some_and(|v| v != e.version) {
            return Err(ApiError::Conflict { current: e.version });
        }
        let sid = match scenario_id {
            Some(s) if !valid_scenario_id(&s) => {
                return Err(ApiError::bad_request(format!(
                    "invalid scenario id {s:?}: use 1 to 64 letters, digits, '-', '_' or '.', and not {BASE:?}"
                )))
            }
            Some(s) if e.scenario(&s).is_some() => return Err(ApiError::Exists(s)),
            Some(s) => s,
            None => loop {
                let candidate = format!("s{}", e.next_scenario);
                e.next_scenario += 1;
                if e.scenario(&candidate).is_none() {
                    break candidate;
                }
            },
        };
        let outcome = run(&e.project, &actions);
        let doc = outcome.clone()?;
        e.version += 1;
        e.scenarios.push(ScenarioEntry {
            id: sid.clone(),
            actions: actions.clone(),
            outcome,
        });
        if let Err(err) = self.persist(id, e, false) {
            e.scenarios.pop();
            e.version -= 1;
            return Err(err);
        }
        Ok(ScenarioSnapshot {
            id: sid,
            actions,
            outcome: Ok(doc),
            version: e.version,
        })
    }

    pub fn scenarios(&self, id: &str) -> Result<(Vec<ScenarioSnapshot>, u64), ApiError> {
        let projects = self.projects.read().expect("store lock");
        let e = projects.get(id).ok_or_else(|| Self::not_found(id))?;
        let list = e
            .scenarios
            .iter()
            .map(|s| ScenarioSnapshot {
                id: s.id.clone(),
                actions: s.actions.clone(),
                outcome: s.outcome.clone(),
                version: e.version,
            })
            .collect();
        Ok((list, e.version))
    }

    pub fn scenario(&self, id: &str, scenario_id: &str) -> Result<ScenarioSnapshot, ApiError> {
        let projects = self.projects.read().expect("store lock");
        let e = projects.get(id).ok_or_else(|| Self::not_found(id))?;
        let s = e
            .scenario(scenario_id)
            .ok_or_else(|| ApiError::NotFound(format!("scenario {scenario_id:?}")))?;
        Ok(ScenarioSnapshot {
            id: s.id.clone(),
            actions: s.actions.clone(),
            outcome: s.outcome.clone(),
            version: e.version,
        })
    }

    pub fn delete_scenario(&self, id: &str, scenario_id: &str) -> Result<u64, ApiError> {
        let mut projects = self.projects.write().expect("store lock");
        let e = projects.get_mut(id).ok_or_else(|| Self::not_found(id))?;
        let pos = e
            .scenarios
            .iter()
            .position(|s| s.id == scenario_id)
            .ok_or_else(|| ApiError::NotFound(format!("scenario {scenario_id:?}")))?;
        let removed = e.scenarios.remove(pos);
        e.version += 1;
        if let Err(err) = self.persist(id, e, false) {
            e.scenarios.insert(pos, removed);
            e.version -= 1;
            return Err(err);
        }
        Ok(e.version)
    }

    /// Per-actor deltas between two scenarios of one project; [`BASE`] names the project
    /// itself.
    pub fn compare(&self, id: &str, first: &str, second: &str) -> Result<ScenarioComparison, ApiError> {
        let projects = self.projects.read().expect("store lock");
        let e = projects.get(id).ok_or_else(|| Self::not_found(id))?;
        let a = e.as_scenario(first)?;
        let b = e.as_scenario(second)?;
        Ok(compare_scenarios(&a, &b)?)
    }
}
