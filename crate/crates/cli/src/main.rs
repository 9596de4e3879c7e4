//! `trpn`: validate projects, produce risk reports, run what-if scenarios and serve the HTTP API.
//!
//! Exit status: 0 on success, 1 when the project is invalid or cannot be analysed, 2 when
//! input cannot be read or parsed.

use std::fmt;
use std::fs;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use trpn_core::fixtures::{bundled_actions, bundled_project};
use trpn_core::io::{load_project, parse_actions, parse_and_validate, LoadError, Loaded, ReadOptions};
use trpn_core::report::{render_comparison, render_human};
use trpn_core::scenario::{apply_scenario, compare_scenarios, ScenarioError};
use trpn_core::{analyze, AnalysisError, Issue, ProjectDefinition, ReportDocument, Scenario, TreatmentAction};

#[derive(Parser)]
#[command(name = "trpn", version, about = "Total risk priority analysis for project actors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse a project and write report.json and/or report.txt.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Check a project file and report every problem found.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Apply treatment actions to a project and report the re-assessed risk.
    Scenario {
        #[command(flatten)]
        input: Input,
        /// Action list file, or the name of a bundled action list.
        #[arg(long)]
        actions: String,
        #[command(flatten)]
        output: Output,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Address to bind. Loopback unless overridden.
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        host: IpAddr,
        /// Directory for persisted projects. Without it the store is in memory only.
        #[arg(long, env = "TRPN_DATA_DIR")]
        data: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Input {
    /// Project file, or the name of a bundled project such as `paper-10-actors`.
    project: String,
    /// Reject unknown fields instead of warning about them.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct Output {
    /// Output directory.
    #[arg(long, env = "TRPN_OUT_DIR", default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Both)]
    format: Format,
    /// Mark actors whose TRPN exceeds this value in the human report.
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
    Both,
}

/// A failed command and its exit status.
enum Failure {
    Invalid(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Invalid(_) => 1,
            Self::Input(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Invalid(m) | Self::Input(m) => f.write_str(m.trim_end()),
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        if e.is_validation() {
            Self::Invalid(e.to_string())
        } else {
            Self::Input(e.to_string())
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        Self::Invalid(e.to_string())
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Self::Invalid(e.to_string())
    }
}

fn warn(warnings: &[Issue]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn load(input: &Input) -> Result<Loaded, Failure> {
    let options = ReadOptions { strict: input.strict };
    let path = Path::new(&input.project);
    let loaded = match bundled_project(&input.project) {
        Some(text) if !path.exists() => parse_and_validate(text, None, options)?,
        _ => load_project(path, options)?,
    };
    warn(&loaded.warnings);
    Ok(loaded)
}

fn load_actions(name: &str) -> Result<Vec<TreatmentAction>, Failure> {
    let path = Path::new(name);
    let text = match (path.exists(), bundled_actions(name)) {
        (false, Some(text)) => text.to_owned(),
        _ => fs::read_to_string(path).map_err(|e| Failure::Input(format!("{name}: {e}")))?,
    };
    parse_actions(&text).map_err(|e| Failure::Input(format!("{name}: {e}")))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn emit(
    output: &Output,
    project: &ProjectDefinition,
    doc: &ReportDocument,
    extra: Option<String>,
) -> Result<(), Failure> {
    fs::create_dir_all(&output.out).map_err(|e| Failure::Input(format!("{}: {e}", output.out.display())))?;
    warn(&doc.warnings);
    if output.format != Format::Human {
        write(&output.out.join("report.json"), &doc.to_json())?;
    }
    if output.format != Format::Machine {
        let mut text = render_human(doc, project, output.threshold);
        if let Some(extra) = extra {
            text.push('\n');
            text.push_str(&extra);
        }
        write(&output.out.join("report.txt"), &text)?;
        print!("{text}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { input, output } => {
            let project = load(&input)?.project;
            let analysis = analyze::<f64>(&project)?;
            emit(&output, &project, &ReportDocument::new(&project, analysis), None)
        }
        Command::Validate { input } => {
            let project = load(&input)?.project;
            // A valid project can still have no influence structure to analyse.
            let analysis = analyze::<f64>(&project)?;
            warn(&analysis.warnings);
            println!(
                "{}: valid ({} actors, {} failure modes, {} failure instances)",
                input.project,
                project.actors.len(),
                project.modes.len(),
                project.failures.len()
            );
            Ok(())
        }
        Command::Scenario { input, actions, output } => {
            let base = load(&input)?.project;
            let actions = load_actions(&actions)?;
            let (derived, analysis) = apply_scenario::<f64>(&base, &actions)?;
            let before = Scenario::baseline(&base)?;
            let after = Scenario {
                id: "scenario".into(),
                base: before.base.clone(),
                actions,
                report: analysis.report.clone(),
            };
            let delta = render_comparison(&compare_scenarios(&before, &after)?);
            emit(&output, &derived, &ReportDocument::new(&derived, analysis), Some(delta))
        }
        Command::Serve { port, host, data } => {
            let store = match data {
                Some(dir) => trpn_service::Store::open(dir).map_err(|e| Failure::Input(e.to_string()))?,
                None => trpn_service::Store::in_memory(),
            };
            let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Input(e.to_string()))?;
            runtime
                .block_on(trpn_service::serve(SocketAddr::new(host, port), Arc::new(store)))
                .map_err(|e| Failure::Input(format!("serve: {e}")))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
