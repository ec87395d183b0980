//! Built-in diagrams, transcribed from the figures and shipped as JSON.

use crate::error::{Error, Result};

use super::spec::DiagramSpec;

pub const CATALOG_NAMES: [&str; 9] = [
    "bisector",
    "morley",
    "conway",
    "icos",
    "icosvar",
    "centers-orthocenter",
    "centers-circumcenter",
    "isogonal",
    "chopsticks",
];

fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "bisector" => include_str!("../../catalog/bisector.json"),
        "morley" => include_str!("../../catalog/morley.json"),
        "conway" => include_str!("../../catalog/conway.json"),
        "icos" => include_str!("../../catalog/icos.json"),
        "icosvar" => include_str!("../../catalog/icosvar.json"),
        "centers-orthocenter" => include_str!("../../catalog/centers-orthocenter.json"),
        "centers-circumcenter" => include_str!("../../catalog/centers-circumcenter.json"),
        "isogonal" => include_str!("../../catalog/isogonal.json"),
        "chopsticks" => include_str!("../../catalog/chopsticks.json"),
        _ => return None,
    })
}

pub fn catalog(name: &str) -> Result<DiagramSpec> {
    let text = source(name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
    DiagramSpec::from_json(text)
}
