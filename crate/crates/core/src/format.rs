//! The JSON file formats for quandles and homomorphisms.
//!
//! A quandle file:
//!
//! ```json
//! {
//!   "name": "R3",
//!   "size": 3,
//!   "table": [
//!     [0, 2, 1],
//!     [2, 1, 0],
//!     [1, 0, 2]
//!   ]
//! }
//! ```
//!
//! Row `x`, column `y` holds `x ▷ y`. `name` and `labels` are optional.
//! [`QuandleFile::to_text`] is deterministic, so written files re-read and
//! re-write byte for byte.
//!
//! A homomorphism file names its source and target either inline or by a
//! path relative to the homomorphism file:
//!
//! ```json
//! { "source": "r3.json", "target": { "size": 1, "table": [[0]] }, "map": [0, 0, 0] }
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quandle::{check_hom, Quandle, QuandleHom};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuandleFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub size: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

impl QuandleFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_quandle(q: &Quandle, name: Option<String>) -> Self {
        QuandleFile {
            name,
            size: q.size(),
            table: q.rows(),
            labels: None,
        }
    }

    /// Checks the declared shape, then the quandle axioms.
    pub fn to_quandle(&self) -> Result<Quandle> {
        if self.table.len() != self.size {
            return Err(Error::MalformedTable(format!(
                "size is {} but the table has {} rows",
                self.size,
                self.table.len()
            )));
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.size {
                return Err(Error::MalformedTable(format!(
                    "size is {} but there are {} labels",
                    self.size,
                    labels.len()
                )));
            }
        }
        Quandle::validate(&self.table)
    }

    pub fn to_text(&self) -> String {
        let quote = |s: &str| serde_json::to_string(s).expect("strings serialize");
        let mut out = String::from("{\n");
        if let Some(name) = &self.name {
            out.push_str(&format!("  \"name\": {},\n", quote(name)));
        }
        out.push_str(&format!("  \"size\": {},\n  \"table\": [\n", self.size));
        let rows: Vec<String> = self
            .table
            .iter()
            .map(|row| {
                let cells: Vec<String> = row.iter().map(usize::to_string).collect();
                format!("    [{}]", cells.join(", "))
            })
            .collect();
        out.push_str(&rows.join(",\n"));
        out.push_str("\n  ]");
        if let Some(labels) = &self.labels {
            let quoted: Vec<String> = labels.iter().map(|l| quote(l)).collect();
            out.push_str(&format!(",\n  \"labels\": [{}]", quoted.join(", ")));
        }
        out.push_str("\n}\n");
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuandleSource {
    Path(String),
    Inline(QuandleFile),
}

impl QuandleSource {
    fn load(&self, base: &Path) -> Result<Quandle> {
        match self {
            QuandleSource::Path(p) => QuandleFile::read(&base.join(p))?.to_quandle(),
            QuandleSource::Inline(file) => file.to_quandle(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomFile {
    pub source: QuandleSource,
    pub target: QuandleSource,
    pub map: Vec<usize>,
}

impl HomFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Reads the file and its quandles, and checks the homomorphism law.
    pub fn load(path: &Path) -> Result<QuandleHom> {
        let file = Self::parse(&read_text(path)?).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        let base: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
        file.to_hom(&base)
    }

    /// Resolves relative paths against `base`.
    pub fn to_hom(&self, base: &Path) -> Result<QuandleHom> {
        let source = self.source.load(base)?;
        let target = self.target.load(base)?;
        check_hom(&self.map, &source, &target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const R3: &str = "{\n  \"name\": \"R3\",\n  \"size\": 3,\n  \"table\": [\n    [0, 2, 1],\n    [2, 1, 0],\n    [1, 0, 2]\n  ]\n}\n";

    #[test]
    fn writer_is_byte_exact() {
        let file = QuandleFile::parse(R3).unwrap();
        assert_eq!(file.to_text(), R3);
        assert_eq!(file.to_quandle().unwrap(), Quandle::dihedral(3));
        let labelled = QuandleFile {
            labels: Some(vec!["a".into(), "b \"c\"".into(), "d".into()]),
            ..file
        };
        assert_eq!(QuandleFile::parse(&labelled.to_text()).unwrap(), labelled);
    }

    #[test]
    fn shape_errors() {
        let bad = QuandleFile::parse(r#"{"size": 2, "table": [[0, 0]]}"#).unwrap();
        assert!(matches!(bad.to_quandle(), Err(Error::MalformedTable(_))));
        assert!(matches!(QuandleFile::parse("{\"size\": 2"), Err(Error::Parse(_))));
        assert!(matches!(
            QuandleFile::parse(r#"{"size": 1, "table": [[0]], "extra": 1}"#),
            Err(Error::Parse(_))
        ));
        let axiom = QuandleFile::parse(r#"{"size": 2, "table": [[0, 0], [0, 1]]}"#).unwrap();
        match axiom.to_quandle() {
            Err(Error::Axiom(v)) => {
                let text = v.to_string();
                assert!(text.contains("axiom ii") && text.contains("column 0"), "{text}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inline_hom() {
        let text = r#"{
            "source": {"size": 3, "table": [[0, 2, 1], [2, 1, 0], [1, 0, 2]]},
            "target": {"size": 1, "table": [[0]]},
            "map": [0, 0, 0]
        }"#;
        let h = HomFile::parse(text).unwrap().to_hom(Path::new(".")).unwrap();
        assert!(h.is_surjective());
        let bad = text.replace("[0, 0, 0]", "[0, 0]");
        assert!(HomFile::parse(&bad).unwrap().to_hom(Path::new(".")).is_err());
    }
}
