//! JSON case catalogs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::verdict::ObstructionCase;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    pub description: String,
    pub cases: Vec<ObstructionCase>,
}

/// The shipped catalogs as `(file name, contents)`.
pub const BUILTIN_CATALOGS: [(&str, &str); 3] = [
    ("nonexistence.json", include_str!("../../../../data/catalog/nonexistence.json")),
    ("known_quotients.json", include_str!("../../../../data/catalog/known_quotients.json")),
    ("split_rank_one.json", include_str!("../../../../data/catalog/split_rank_one.json")),
];

pub fn parse_catalog(text: &str) -> Result<Catalog> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("catalog: {e}")))
}

pub fn load_catalog(path: &Path) -> Result<Catalog> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_catalog(&text)
}
