//! Job documents: a fan plus optional divisor, group and command inputs.
//!
//! The fan may sit under a `"fan"` key or inline at the top level:
//!
//! ```json
//! {"dimension": 2, "rays": [[1,0],[0,1],[-1,-1]], "max_cones": [[0,1],[1,2],[2,0]],
//!  "divisor": [1,1,1], "group": "full", "point": "1/3,1/3"}
//! ```

use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;
use serde_json::Value;
use toralpha_core::exact::int_serde::int_vector;
use toralpha_core::exact::{IntMatrix, IntVector, Rat, RatVector};
use toralpha_core::fan::{Fan, FanDocument};
use toralpha_core::symmetry::SymmetryGroup;
use toralpha_core::{Error, Limits};

#[derive(Clone, Debug, Deserialize)]
#[serde(transparent)]
pub struct IntList(#[serde(with = "int_vector")] pub IntVector);

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Text(String),
    List(Vec<Rat>),
}

impl PointSpec {
    pub fn resolve(&self) -> Result<RatVector, Error> {
        match self {
            PointSpec::Text(s) => parse_point(s),
            PointSpec::List(v) => Ok(v.clone()),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Named(String),
    Matrices(Vec<Vec<IntList>>),
}

#[derive(Clone, Debug, Default, Deserialize)]
pub struct Extras {
    pub divisor: Option<IntList>,
    pub group: Option<GroupSpec>,
    pub point: Option<PointSpec>,
    pub sections: Option<Vec<IntList>>,
    pub level: Option<u32>,
}

#[derive(Debug)]
pub struct JobDocument {
    pub fan: Fan,
    pub extras: Extras,
}

/// Section exponents either as a bare list or as `{"sections": [...], "level": m}`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum SectionsFile {
    Bare(Vec<IntList>),
    Tagged {
        sections: Vec<IntList>,
        level: Option<u32>,
    },
}

/// A group file holds a matrix list, `"full"`, or `{"group": ...}`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum GroupFile {
    Wrapped { group: GroupSpec },
    Bare(GroupSpec),
}

pub fn read_json(path: &Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn from_value<T: serde::de::DeserializeOwned>(value: Value, what: &str) -> Result<T, Error> {
    serde_json::from_value(value).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

impl JobDocument {
    pub fn load(path: &Path, limits: Limits) -> Result<Self, Error> {
        Self::from_value(read_json(path)?, limits)
    }

    pub fn from_value(value: Value, limits: Limits) -> Result<Self, Error> {
        if !value.is_object() {
            return Err(Error::Parse("job document must be a JSON object".into()));
        }
        let fan_value = value.get("fan").cloned().unwrap_or_else(|| value.clone());
        let fan_doc: FanDocument = from_value(fan_value, "fan")?;
        let fan = Fan::from_document(&fan_doc, limits)?;
        let extras: Extras = from_value(value, "document")?;
        Ok(JobDocument { fan, extras })
    }

    pub fn divisor_coefficients(&self) -> Option<&IntVector> {
        self.extras.divisor.as_ref().map(|d| &d.0)
    }
}

pub fn parse_point(text: &str) -> Result<RatVector, Error> {
    text.split(',').map(|s| Rat::from_str(s.trim())).collect()
}

pub fn load_sections(path: &Path) -> Result<(Vec<IntVector>, Option<u32>), Error> {
    let file: SectionsFile = from_value(read_json(path)?, "sections")?;
    Ok(match file {
        SectionsFile::Bare(s) => (s.into_iter().map(|l| l.0).collect(), None),
        SectionsFile::Tagged { sections, level } => {
            (sections.into_iter().map(|l| l.0).collect(), level)
        }
    })
}

/// `"full"` or a path to a group file.
pub fn group_from_flag(flag: &str) -> Result<GroupSpec, Error> {
    if flag == "full" {
        return Ok(GroupSpec::Named(flag.into()));
    }
    let file: GroupFile = from_value(read_json(Path::new(flag))?, "group")?;
    Ok(match file {
        GroupFile::Wrapped { group } | GroupFile::Bare(group) => group,
    })
}

pub fn build_group(fan: &Fan, spec: Option<&GroupSpec>) -> Result<SymmetryGroup, Error> {
    match spec {
        None => Ok(SymmetryGroup::trivial(fan)),
        Some(GroupSpec::Named(name)) if name == "full" => SymmetryGroup::automorphism_group(fan),
        Some(GroupSpec::Named(name)) => Err(Error::Parse(format!(
            "unknown group {name:?}; expected \"full\" or a matrix list"
        ))),
        Some(GroupSpec::Matrices(ms)) => {
            let n = fan.dimension();
            let mut generators = Vec::with_capacity(ms.len());
            for m in ms {
                let rows: Vec<IntVector> = m.iter().map(|r| r.0.clone()).collect();
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::DimensionMismatch {
                        context: "group matrix size",
                        expected: n,
                        found: rows.len(),
                    });
                }
                generators.push(IntMatrix::from_rows(&rows, n));
            }
            SymmetryGroup::from_generators(fan, &generators)
        }
    }
}
