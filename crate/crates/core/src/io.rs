//! Project files: a versioned JSON document. Either matrix may be given inline as nested
//! rows or as `{"csv": "relative/path.csv"}` pointing at a delimiter-separated export.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::matrix::Matrix;
use crate::model::{Actor, FailureInstance, FailureMode, ProjectDefinition, ProjectMetadata};
use crate::scenario::TreatmentAction;
use crate::validate::{validate_project, Issue, IssueKind, ValidationResult};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReadOptions {
    /// Reject unknown fields instead of reporting them as warnings.
    pub strict: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("unsupported format_version {found} (expected {expected})")]
    Version { found: u64, expected: u32 },
    #[error("unknown fields: {}", .0.join(", "))]
    UnknownFields(Vec<String>),
    #[error("project is invalid:\n{0}")]
    Invalid(ValidationResult),
}

impl LoadError {
    /// True for well-formed input that fails validation, as opposed to unreadable input.
    pub fn is_validation(&self) -> bool {
        matches!(self, Self::Invalid(_))
    }
}

impl From<serde_json::Error> for LoadError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep only the message part
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_owned(),
            None => message,
        };
        Self::Parse {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ProjectFile {
    format_version: u32,
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    timestamp: Option<String>,
    actors: Vec<Actor>,
    #[serde(default)]
    modes: Vec<FailureMode>,
    #[serde(default)]
    failures: Vec<FailureInstance>,
    positions: Value,
    influence: Value,
}

/// A parsed project together with non-fatal findings.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub project: ProjectDefinition,
    pub warnings: Vec<Issue>,
}

fn matrix_from_value(field: &str, value: Value, base_dir: Option<&Path>) -> Result<Matrix<i32>, LoadError> {
    let field_err = |message: String| LoadError::Field {
        field: field.to_owned(),
        message,
    };
    match value {
        Value::Object(map) => {
            let Some(Value::String(rel)) = map.get("csv") else {
                return Err(field_err("expected a table of rows or {\"csv\": \"path\"}".into()));
            };
            if let Some(extra) = map.keys().find(|k| *k != "csv") {
                return Err(field_err(format!("unexpected key {extra:?} in file reference")));
            }
            let Some(dir) = base_dir else {
                return Err(field_err("file references are not allowed here".into()));
            };
            read_csv_matrix(&dir.join(rel)).map_err(|e| match e {
                LoadError::Field { message, .. } => field_err(message),
                other => other,
            })
        }
        other => serde_json::from_value::<Matrix<i32>>(other).map_err(|e| field_err(e.to_string())),
    }
}

/// Reads an integer table. A leading header row and a leading label column are skipped
/// when they are not numeric.
pub fn read_csv_matrix(path: &Path) -> Result<Matrix<i32>, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_owned(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let field = |message: String| LoadError::Field {
        field: path.display().to_string(),
        message,
    };
    let mut records = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| field(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        records.push((line, record.iter().map(str::to_owned).collect::<Vec<_>>()));
    }
    let numeric = |s: &str| s.parse::<i32>().is_ok();
    if records.first().is_some_and(|(_, r)| !r.iter().all(|c| numeric(c))) {
        records.remove(0);
    }
    let labelled = records
        .first()
        .is_some_and(|(_, r)| r.first().is_some_and(|c| !numeric(c)));
    let mut rows = Vec::with_capacity(records.len());
    for (line, record) in records {
        let cells = if labelled { &record[1..] } else { &record[..] };
        let row = cells
            .iter()
            .map(|c| {
                c.parse::<i32>()
                    .map_err(|_| field(format!("line {line}: {c:?} is not an integer")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Matrix::from_rows(rows).map_err(|e| field(e.to_string()))
}

fn check_version(raw: &Value) -> Result<(), LoadError> {
    match raw.get("format_version").and_then(Value::as_u64) {
        Some(v) if v == u64::from(FORMAT_VERSION) => Ok(()),
        Some(found) => Err(LoadError::Version {
            found,
            expected: FORMAT_VERSION,
        }),
        None if raw.is_object() => Err(LoadError::Field {
            field: "format_version".into(),
            message: "missing or not an integer".into(),
        }),
        None => Ok(()),
    }
}

/// Parses a project document without validating it. Relative matrix file references are
/// resolved against `base_dir`; without one they are rejected.
pub fn parse_project(text: &str, base_dir: Option<&Path>, options: ReadOptions) -> Result<Loaded, LoadError> {
    let raw: Value = serde_json::from_str(text)?;
    check_version(&raw)?;

    let mut unknown = Vec::new();
    let mut de = serde_json::Deserializer::from_str(text);
    let file: ProjectFile = serde_ignored::deserialize(&mut de, |path| unknown.push(path.to_string()))?;
    de.end()?;
    if options.strict && !unknown.is_empty() {
        return Err(LoadError::UnknownFields(unknown));
    }

    let positions = matrix_from_value("positions", file.positions, base_dir)?;
    let influence = matrix_from_value("influence", file.influence, base_dir)?;
    Ok(Loaded {
        project: ProjectDefinition {
            metadata: ProjectMetadata {
                name: file.name,
                timestamp: file.timestamp,
            },
            actors: file.actors,
            modes: file.modes,
            failures: file.failures,
            positions,
            influence,
        },
        warnings: unknown
            .into_iter()
            .map(|path| Issue::new(path.clone(), IssueKind::UnknownField { path }))
            .collect(),
    })
}

/// Parses and validates. Validation warnings are appended to the parse warnings.
pub fn parse_and_validate(text: &str, base_dir: Option<&Path>, options: ReadOptions) -> Result<Loaded, LoadError> {
    let mut loaded = parse_project(text, base_dir, options)?;
    let validation = validate_project(&loaded.project);
    if !validation.is_valid() {
        return Err(LoadError::Invalid(validation));
    }
    loaded.warnings.extend(validation.warnings);
    Ok(loaded)
}

pub fn load_project(path: &Path, options: ReadOptions) -> Result<Loaded, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_and_validate(&text, path.parent(), options)
}

/// Canonical serialization: fixed field order, inline matrices, pretty-printed.
pub fn project_to_json(p: &ProjectDefinition) -> String {
    let file = ProjectFile {
        format_version: FORMAT_VERSION,
        name: p.metadata.name.clone(),
        timestamp: p.metadata.timestamp.clone(),
        actors: p.actors.clone(),
        modes: p.modes.clone(),
        failures: p.failures.clone(),
        positions: serde_json::to_value(&p.positions).expect("matrix serializes"),
        influence: serde_json::to_value(&p.influence).expect("matrix serializes"),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("project serializes");
    text.push('\n');
    text
}

pub fn save_project(p: &ProjectDefinition, path: &Path) -> Result<(), LoadError> {
    fs::write(path, project_to_json(p)).map_err(|source| LoadError::Io {
        path: path.to_owned(),
        source,
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionFile {
    format_version: u32,
    actions: Vec<TreatmentAction>,
}

/// Parses an action list: `{"format_version": 1, "actions": [...]}` or a bare array.
pub fn parse_actions(text: &str) -> Result<Vec<TreatmentAction>, LoadError> {
    let raw: Value = serde_json::from_str(text)?;
    if raw.is_array() {
        return Ok(serde_json::from_str(text)?);
    }
    check_version(&raw)?;
    let file: ActionFile = serde_json::from_str(text)?;
    Ok(file.actions)
}

pub fn actions_to_json(actions: &[TreatmentAction]) -> String {
    let file = ActionFile {
        format_version: FORMAT_VERSION,
        actions: actions.to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("actions serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example_project, EXAMPLE_PROJECT_JSON};

    #[test]
    fn fixture_shape() {
        let loaded = parse_and_validate(EXAMPLE_PROJECT_JSON, None, ReadOptions { strict: true }).unwrap();
        let p = loaded.project;
        assert_eq!((p.actors.len(), p.modes.len(), p.failures.len()), (10, 5, 8));
        assert!(loaded.warnings.is_empty());
    }

    #[test]
    fn empty_file_reports_position() {
        match parse_project("", None, ReadOptions::default()).unwrap_err() {
            LoadError::Parse { line, column, .. } => assert_eq!((line, column), (1, 0)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_position() {
        let text = "{\n  \"format_version\": 1,\n  \"name\": oops\n}";
        match parse_project(text, None, ReadOptions::default()).unwrap_err() {
            LoadError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn version_mismatch() {
        let text = EXAMPLE_PROJECT_JSON.replacen("\"format_version\": 1", "\"format_version\": 7", 1);
        assert!(matches!(
            parse_project(&text, None, ReadOptions::default()),
            Err(LoadError::Version { found: 7, .. })
        ));
    }

    #[test]
    fn unknown_fields_strict_and_lenient() {
        let text = EXAMPLE_PROJECT_JSON.replacen("\"name\": \"Actor 1\"", "\"name\": \"Actor 1\", \"role\": \"x\"", 1);
        let loaded = parse_project(&text, None, ReadOptions::default()).unwrap();
        assert_eq!(loaded.warnings.len(), 1);
        assert_eq!(loaded.warnings[0].location, "actors.0.role");
        let err = parse_project(&text, None, ReadOptions { strict: true }).unwrap_err();
        assert!(matches!(err, LoadError::UnknownFields(ref f) if f == &["actors.0.role"]));
    }

    #[test]
    fn diagonal_fixture_is_a_validation_error() {
        let text = EXAMPLE_PROJECT_JSON.replacen("[0, 0, 2, 0, 0, 0, 0, 0, 0, 0]", "[2, 0, 2, 0, 0, 0, 0, 0, 0, 0]", 1);
        let err = parse_and_validate(&text, None, ReadOptions::default()).unwrap_err();
        assert!(err.is_validation());
        assert!(err.to_string().contains("influence[A1][A1]"), "{err}");
    }

    #[test]
    fn ragged_matrix_names_field() {
        let text = EXAMPLE_PROJECT_JSON.replacen("[ 3,  1,  0,  0,  0]", "[3, 1]", 1);
        let err = parse_project(&text, None, ReadOptions::default()).unwrap_err();
        assert!(
            matches!(err, LoadError::Field { ref field, .. } if field == "positions"),
            "{err}"
        );
    }

    #[test]
    fn csv_matrices() {
        let dir = tempfile::tempdir().unwrap();
        let p = example_project();
        let mut csv = String::from(",LL,LK,LR,PC,IGA\n");
        for (actor, row) in p.actors.iter().zip(p.positions.iter_rows()) {
            let cells: Vec<String> = row.iter().map(i32::to_string).collect();
            csv.push_str(&format!("{},{}\n", actor.name, cells.join(",")));
        }
        fs::write(dir.path().join("positions.csv"), csv).unwrap();
        let plain: Vec<String> = p
            .influence
            .iter_rows()
            .map(|r| r.iter().map(i32::to_string).collect::<Vec<_>>().join(","))
            .collect();
        fs::write(dir.path().join("mid.csv"), plain.join("\n")).unwrap();

        let mut doc: Value = serde_json::from_str(EXAMPLE_PROJECT_JSON).unwrap();
        doc["positions"] = serde_json::json!({"csv": "positions.csv"});
        doc["influence"] = serde_json::json!({"csv": "mid.csv"});
        let path = dir.path().join("project.json");
        fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();

        let loaded = load_project(&path, ReadOptions { strict: true }).unwrap();
        assert_eq!(loaded.project, p);

        assert!(parse_project(&fs::read_to_string(&path).unwrap(), None, ReadOptions::default()).is_err());
    }

    #[test]
    fn csv_bad_cell() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        fs::write(&path, "1,2\n3,x\n").unwrap();
        let err = read_csv_matrix(&path).unwrap_err();
        assert!(err.to_string().contains("\"x\" is not an integer"), "{err}");
    }

    #[test]
    fn save_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.json");
        let p = example_project();
        save_project(&p, &path).unwrap();
        assert_eq!(load_project(&path, ReadOptions { strict: true }).unwrap().project, p);
    }

    #[test]
    fn action_files() {
        use crate::fixtures::ELIMINATE_ACTOR3_JSON;
        let actions = parse_actions(ELIMINATE_ACTOR3_JSON).unwrap();
        assert_eq!(actions, [TreatmentAction::EliminateActor { actor: "A3".into() }]);
        assert_eq!(parse_actions(&actions_to_json(&actions)).unwrap(), actions);
        assert!(parse_actions("[]").unwrap().is_empty());
        assert!(matches!(
            parse_actions(r#"{"format_version": 2, "actions": []}"#),
            Err(LoadError::Version { found: 2, .. })
        ));
        assert!(parse_actions(r#"[{"kind": "eliminate_actor", "actor": "A3", "why": 1}]"#).is_err());
    }
}
