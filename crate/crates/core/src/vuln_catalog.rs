//! Vulnerability records (CVE id, CIA impact, access complexity) and the
//! mapping from access complexity to exploit-success probability.

use std::collections::btree_map::{self, BTreeMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How difficult a vulnerability is to exploit. Closed enumeration; unknown
/// strings are rejected at parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AccessComplexity {
    Easy,
    Medium,
    High,
}

/// One CVE-like entry: which host/service it lives on, the scalar CIA impact
/// gained by exploiting it, and its access complexity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VulnRecord {
    pub key: String,
    pub cve: String,
    pub vm: String,
    pub service: String,
    /// Scalar impact score in [0, 10].
    pub cia: f64,
    pub ac: AccessComplexity,
}

impl VulnRecord {
    fn check(&self) -> Result<()> {
        if !(self.cia >= 0.0 && self.cia <= 10.0) {
            return Err(Error::Parse {
                path: None,
                message: format!(
                    "record `{}`: cia {} outside [0, 10]",
                    self.key, self.cia
                ),
            });
        }
        Ok(())
    }
}

/// Success probability per access-complexity category.
///
/// The probabilities must be in (0, 1] and weakly decreasing with
/// difficulty: easy >= medium >= high.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcProbabilityMap {
    pub easy: f64,
    pub medium: f64,
    pub high: f64,
}

impl Default for AcProbabilityMap {
    fn default() -> Self {
        AcProbabilityMap { easy: 0.9, medium: 0.66, high: 0.35 }
    }
}

impl AcProbabilityMap {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("easy", self.easy), ("medium", self.medium), ("high", self.high)] {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::Config(format!(
                    "ac probability `{name}` = {p} outside (0, 1]"
                )));
            }
        }
        if !(self.easy >= self.medium && self.medium >= self.high) {
            return Err(Error::Config(
                "ac probabilities must satisfy easy >= medium >= high".into(),
            ));
        }
        Ok(())
    }

    /// Pure table lookup.
    pub fn probability(&self, ac: AccessComplexity) -> f64 {
        match ac {
            AccessComplexity::Easy => self.easy,
            AccessComplexity::Medium => self.medium,
            AccessComplexity::High => self.high,
        }
    }
}

/// Convenience alias for [`AcProbabilityMap::probability`].
pub fn ac_to_probability(ac: AccessComplexity, map: &AcProbabilityMap) -> f64 {
    map.probability(ac)
}

/// Validated, key-ordered collection of vulnerability records.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Catalog {
    records: BTreeMap<String, VulnRecord>,
}

impl Catalog {
    /// Build a catalog from records, rejecting duplicate keys and
    /// out-of-range scores.
    pub fn from_records(records: impl IntoIterator<Item = VulnRecord>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for rec in records {
            rec.check()?;
            let key = rec.key.clone();
            if map.insert(key.clone(), rec).is_some() {
                return Err(Error::Parse {
                    path: None,
                    message: format!("duplicate vulnerability key `{key}`"),
                });
            }
        }
        Ok(Catalog { records: map })
    }

    pub fn get(&self, key: &str) -> Option<&VulnRecord> {
        self.records.get(key)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records in ascending key order.
    pub fn iter(&self) -> btree_map::Values<'_, String, VulnRecord> {
        self.records.values()
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.records.keys().map(|k| k.as_str())
    }

    /// Serialize as a JSON array sorted by key.
    pub fn to_json(&self) -> String {
        let list: Vec<&VulnRecord> = self.iter().collect();
        let mut s = serde_json::to_string_pretty(&list).expect("catalog serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }
}

/// Load a catalog from a JSON array file.
pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let records: Vec<VulnRecord> = serde_json::from_str(&text)
        .map_err(|e| Error::parse(Some(path.to_path_buf()), e.to_string()))?;
    Catalog::from_records(records).map_err(|e| match e {
        Error::Parse { message, .. } => Error::parse(Some(path.to_path_buf()), message),
        other => other,
    })
}
