//! Dataset files: variables with prompt descriptions and an optional
//! reference graph.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::consistency::{validate_variables, VariableSpec};
use crate::metrics::TrueDag;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    pub variables: Vec<VariableSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_edges: Option<Vec<(String, String)>>,
}

impl Dataset {
    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::Validation("dataset name is empty".into()));
        }
        validate_variables(&self.variables)?;
        if self.true_edges.is_some() {
            self.true_dag()?;
        }
        Ok(())
    }

    pub fn names(&self) -> Vec<String> {
        self.variables.iter().map(|v| v.name.clone()).collect()
    }

    /// Reference graph, or a validation error when none is given.
    pub fn true_dag(&self) -> Result<TrueDag> {
        let edges = self.true_edges.as_ref().ok_or_else(|| {
            Error::Validation(format!("dataset {:?} has no true_edges", self.name))
        })?;
        TrueDag::from_named_edges(self.names(), edges)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let d: Dataset =
            serde_json::from_str(text).map_err(|e| Error::json("parsing dataset", e))?;
        d.validate()?;
        Ok(d)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Self::from_json_str(&text).map_err(|e| match e {
            Error::Json { source, .. } => {
                Error::json(format!("parsing {}", path.display()), source)
            }
            other => other,
        })
    }

    /// Loads `path` and, when `<stem>.descriptions.json` sits next to it,
    /// takes descriptions from that `{name: description}` map.
    pub fn load_with_sidecar(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut d = Self::load(path)?;
        let sidecar = sidecar_path(path);
        if sidecar.exists() {
            let text = std::fs::read_to_string(&sidecar)
                .map_err(|e| Error::io(format!("reading {}", sidecar.display()), e))?;
            let map: BTreeMap<String, String> = serde_json::from_str(&text)
                .map_err(|e| Error::json(format!("parsing {}", sidecar.display()), e))?;
            d.apply_descriptions(&map)?;
        }
        Ok(d)
    }

    pub fn apply_descriptions(&mut self, map: &BTreeMap<String, String>) -> Result<()> {
        for name in map.keys() {
            if !self.variables.iter().any(|v| &v.name == name) {
                return Err(Error::UnknownVertex(name.clone()));
            }
        }
        for v in &mut self.variables {
            if let Some(d) = map.get(&v.name) {
                v.description = d.clone();
            }
        }
        Ok(())
    }

    /// Builds a dataset from an edge list, one edge per line as `a -> b`,
    /// `a,b` or `a b`. A line with a single name adds an isolated variable;
    /// `#` starts a comment. Variables keep first-appearance order.
    pub fn from_edge_list(name: &str, text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut edges = Vec::new();
        let mut intern = |s: &str| {
            if !names.iter().any(|n| n == s) {
                names.push(s.to_string());
            }
            s.to_string()
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = if line.contains("->") {
                line.split("->").map(str::trim).collect()
            } else if line.contains(',') {
                line.split(',').map(str::trim).collect()
            } else {
                line.split_whitespace().collect()
            };
            match parts.as_slice() {
                [v] if !v.is_empty() => {
                    intern(v);
                }
                [a, b] if !a.is_empty() && !b.is_empty() => {
                    let edge = (intern(a), intern(b));
                    edges.push(edge);
                }
                _ => {
                    return Err(Error::Validation(format!(
                        "edge list line {}: cannot parse {raw:?}",
                        lineno + 1
                    )))
                }
            }
        }
        let d = Dataset {
            name: name.to_string(),
            variables: names
                .into_iter()
                .map(|n| VariableSpec::new(n, ""))
                .collect(),
            true_edges: Some(edges),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn to_pretty_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("dataset serializes");
        s.push('\n');
        s
    }
}

fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("dataset");
    path.with_file_name(format!("{stem}.descriptions.json"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_formats() {
        let d = Dataset::from_edge_list("toy", "# comment\nA -> B\nB,C\nC D\nE\n").unwrap();
        assert_eq!(d.names(), ["A", "B", "C", "D", "E"]);
        assert_eq!(d.true_edges.as_ref().unwrap().len(), 3);
        assert!(Dataset::from_edge_list("bad", "A -> B -> C").is_err());
        assert!(Dataset::from_edge_list("cyc", "A,B\nB,A").is_err());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let text = r#"{"name":"t","variables":[{"name":"a"},{"name":"b","description":"bee"}],
                       "true_edges":[["a","b"]]}"#;
        let d = Dataset::from_json_str(text).unwrap();
        assert_eq!(d.variables[1].description, "bee");
        assert_eq!(Dataset::from_json_str(&d.to_pretty_string()).unwrap(), d);
        let bad = r#"{"name":"t","variables":[{"name":"a"}],"true_edges":[["a","z"]]}"#;
        assert!(matches!(
            Dataset::from_json_str(bad),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn sidecar_overrides_descriptions() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("toy.json");
        std::fs::write(
            &path,
            r#"{"name":"toy","variables":[{"name":"a","description":"old"}]}"#,
        )
        .unwrap();
        std::fs::write(dir.path().join("toy.descriptions.json"), r#"{"a":"new"}"#).unwrap();
        let d = Dataset::load_with_sidecar(&path).unwrap();
        assert_eq!(d.variables[0].description, "new");
        std::fs::write(dir.path().join("toy.descriptions.json"), r#"{"zz":"new"}"#).unwrap();
        assert!(Dataset::load_with_sidecar(&path).is_err());
    }
}
