//! Named varieties and setups, with optional additions from a JSON file.
//!
//! ```json
//! {
//!   "varieties": { "k3-line": { "kind": "quartic-k3", "gram": [[4, 1], [1, -2]] } },
//!   "setups": { "qds-line": { "kind": "quartic-double-solid", "gram": [[4, 1], [1, -2]] } }
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chow::{make_variety_model, VarietyKind, VarietyModel, VarietySpec};
use crate::error::{Error, Result};
use crate::grr::{CoverSetup, SetupKind, SetupSpec};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub varieties: BTreeMap<String, VarietySpec>,
    #[serde(default)]
    pub setups: BTreeMap<String, SetupSpec>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Looks up a variety by config name, falling back to the built-in slugs.
    pub fn variety_spec(&self, name: &str, gram: Option<Vec<Vec<i64>>>) -> Result<VarietySpec> {
        let mut spec = match self.varieties.get(name) {
            Some(spec) => spec.clone(),
            None => VarietySpec::new(VarietyKind::parse(name)?),
        };
        if gram.is_some() {
            spec.gram = gram;
        }
        Ok(spec)
    }

    pub fn variety(&self, name: &str, gram: Option<Vec<Vec<i64>>>) -> Result<Arc<VarietyModel>> {
        make_variety_model(&self.variety_spec(name, gram)?)
    }

    /// Built-in names are `qds`, `qds-line`, `gm3` and `gm4`; an explicit
    /// `gram` replaces the one in the named spec.
    pub fn setup_spec(&self, name: &str, gram: Option<Vec<Vec<i64>>>) -> Result<SetupSpec> {
        let mut spec = match self.setups.get(name) {
            Some(spec) => spec.clone(),
            None => match name {
                "qds-line" => {
                    SetupSpec::new(SetupKind::QuarticDoubleSolid, Some(vec![vec![4, 1], vec![1, -2]]))
                }
                _ => SetupSpec::new(SetupKind::parse(name)?, None),
            },
        };
        if gram.is_some() {
            spec.gram = gram;
        }
        Ok(spec)
    }

    pub fn setup(&self, name: &str, gram: Option<Vec<Vec<i64>>>) -> Result<CoverSetup> {
        CoverSetup::from_spec(&self.setup_spec(name, gram)?)
    }
}

/// Parses `a,b;c,d` (rows separated by `;`) into a square integer matrix.
pub fn parse_gram(s: &str) -> Result<Vec<Vec<i64>>> {
    let rows: Vec<Vec<i64>> = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|e| Error::BadGram(format!("`{x}`: {e}"))))
                .collect()
        })
        .collect::<Result<_>>()?;
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(Error::BadGram(format!("`{s}` is not square")));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_setups() {
        let c = Config::default();
        assert_eq!(c.setup("qds", None).unwrap().source.len(), 3);
        assert_eq!(c.setup("qds-line", None).unwrap().source.len(), 4);
        assert_eq!(c.setup("gm3", Some(vec![vec![10, 7], vec![7, 2]])).unwrap().source.len(), 4);
        assert_eq!(c.setup("gm4", None).unwrap().source.kind(), VarietyKind::Gm3fold);
        assert!(matches!(c.setup("nope", None), Err(Error::Config(_))));
    }

    #[test]
    fn json_round_trip() {
        let c = Config::from_json(
            r#"{"varieties": {"k3": {"kind": "quartic-k3", "gram": [[4, 1], [1, -2]]}},
                "setups": {"mine": {"kind": "gm-threefold", "gram": [[10, 6], [6, 2]]}}}"#,
        )
        .unwrap();
        assert_eq!(c.variety("k3", None).unwrap().len(), 4);
        assert_eq!(c.setup("mine", None).unwrap().kind, SetupKind::GmThreefold);
        let again = Config::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(again, c);
        assert!(Config::from_json(r#"{"extra": 1}"#).is_err());
    }

    #[test]
    fn grams() {
        assert_eq!(parse_gram("4,1;1,-2").unwrap(), vec![vec![4, 1], vec![1, -2]]);
        assert_eq!(parse_gram("10").unwrap(), vec![vec![10]]);
        assert!(parse_gram("1,2;3").is_err());
        assert!(parse_gram("a").is_err());
    }
}
