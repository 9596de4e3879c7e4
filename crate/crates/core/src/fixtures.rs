//! Bundled example data: ten actors, five failure modes, eight rated failures.

use crate::io::{parse_and_validate, ReadOptions};
use crate::model::ProjectDefinition;

pub const EXAMPLE_PROJECT_NAME: &str = "paper-10-actors";
pub const EXAMPLE_PROJECT_JSON: &str = include_str!("../fixtures/paper-10-actors.json");
pub const ELIMINATE_ACTOR3_JSON: &str = include_str!("../fixtures/eliminate-actor3.json");
pub const MITIGATE_ACTOR7_JSON: &str = include_str!("../fixtures/mitigate-actor7.json");

pub fn example_project() -> ProjectDefinition {
    parse_and_validate(EXAMPLE_PROJECT_JSON, None, ReadOptions { strict: true })
        .expect("bundled fixture is valid")
        .project
}

/// Bundled project documents by name.
pub fn bundled_project(name: &str) -> Option<&'static str> {
    (name == EXAMPLE_PROJECT_NAME).then_some(EXAMPLE_PROJECT_JSON)
}

/// Bundled action lists by name.
pub fn bundled_actions(name: &str) -> Option<&'static str> {
    match name {
        "eliminate-actor3" => Some(ELIMINATE_ACTOR3_JSON),
        "mitigate-actor7" => Some(MITIGATE_ACTOR7_JSON),
        _ => None,
    }
}
