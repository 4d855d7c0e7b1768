//! JSON ring files.
//!
//! ```json
//! { "basis": [{"label": "1", "dim": 1}, ...],
//!   "unit": "1",
//!   "dual": {"1": "1", ...},
//!   "fusion": [{"a": "1", "b": "1", "c": "1", "n": 1}, ...] }
//! ```
//!
//! Every pair `(a, b)` needs at least one entry. Multiplicities beyond
//! `u64` are written as decimal strings. Saved generated rings carry
//! `"truncated_at": depth` and list fusion only for explored pairs.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ring_from_entries;
use crate::error::{FusionError, Result};
use crate::ring::{validate_ring, BasisElement, FusionRing, Mult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileBasisElement {
    pub label: String,
    pub dim: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FusionEntry {
    pub a: String,
    pub b: String,
    pub c: String,
    #[serde(serialize_with = "write_mult", deserialize_with = "read_mult")]
    pub n: Mult,
}

impl FusionEntry {
    pub fn new(a: &str, b: &str, c: &str, n: u64) -> Self {
        FusionEntry { a: a.into(), b: b.into(), c: c.into(), n: Mult::from(n) }
    }
}

pub(crate) fn write_mult<S: Serializer>(n: &Mult, s: S) -> std::result::Result<S::Ok, S::Error> {
    match n.to_u64() {
        Some(small) => s.serialize_u64(small),
        None => s.collect_str(n),
    }
}

pub(crate) fn read_mult<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Mult, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Small(u64),
        Big(String),
    }
    match Raw::deserialize(d)? {
        Raw::Small(n) => Ok(Mult::from(n)),
        Raw::Big(s) => s.parse().map_err(|_| serde::de::Error::custom(format!("bad multiplicity `{s}`"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingFile {
    pub basis: Vec<FileBasisElement>,
    pub unit: String,
    pub dual: BTreeMap<String, String>,
    pub fusion: Vec<FusionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncated_at: Option<usize>,
}

impl RingFile {
    /// Canonical file for a ring: basis order, duals by label, fusion by
    /// `(a, b, c)` in basis order. Generated rings are truncated at `depth`.
    pub fn from_ring(ring: &FusionRing, depth: usize) -> Result<Self> {
        let trunc = ring.truncate(depth)?;
        let basis = (0..trunc.len())
            .map(|i| FileBasisElement { label: trunc.label(i).to_string(), dim: trunc.dim(i) })
            .collect();
        let dual =
            (0..trunc.len()).map(|i| (trunc.label(i).to_string(), trunc.label(trunc.dual(i)).to_string())).collect();
        let mut fusion = Vec::new();
        for a in 0..trunc.explored() {
            for b in 0..trunc.explored() {
                for (c, n) in trunc.product(a, b) {
                    fusion.push(FusionEntry {
                        a: trunc.label(a).to_string(),
                        b: trunc.label(b).to_string(),
                        c: trunc.label(*c).to_string(),
                        n: n.clone(),
                    });
                }
            }
        }
        Ok(RingFile { basis, unit: trunc.label(trunc.unit()).to_string(), dual, fusion, truncated_at: trunc.depth() })
    }

    /// Builds and validates the ring described by the file.
    pub fn into_ring(self, name: &str) -> Result<FusionRing> {
        if let Some(d) = self.truncated_at {
            return Err(FusionError::MalformedFile(format!(
                "ring was truncated at depth {d}; truncated files are not complete fusion tables"
            )));
        }
        let basis = self.basis.into_iter().map(|b| BasisElement::new(b.label, b.dim)).collect();
        let ring = ring_from_entries(name, basis, &self.unit, Some(&self.dual), &self.fusion).map_err(|e| match e {
            FusionError::MalformedRing(m) => FusionError::MalformedFile(m),
            other => other,
        })?;
        let report = validate_ring(&ring, 1)?;
        if report.is_valid() {
            Ok(ring)
        } else {
            Err(FusionError::AxiomViolation(report))
        }
    }
}

pub fn parse_ring(text: &str, name: &str) -> Result<FusionRing> {
    let file: RingFile = serde_json::from_str(text).map_err(|e| FusionError::MalformedFile(e.to_string()))?;
    file.into_ring(name)
}

pub fn load_ring(path: impl AsRef<Path>) -> Result<FusionRing> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("ring");
    parse_ring(&text, name).map_err(|e| match e {
        FusionError::MalformedFile(m) => FusionError::MalformedFile(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Canonical pretty-printed JSON with a trailing newline.
pub fn ring_to_json(ring: &FusionRing, depth: usize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&RingFile::from_ring(ring, depth)?)?;
    s.push('\n');
    Ok(s)
}

pub fn save_ring(ring: &FusionRing, path: impl AsRef<Path>, depth: usize) -> Result<()> {
    std::fs::write(path, ring_to_json(ring, depth)?)?;
    Ok(())
}
