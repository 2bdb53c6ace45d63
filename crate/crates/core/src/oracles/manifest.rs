use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::setcore::{serialize_family, SetFamily};

/// `sha256:<hex>` of the canonical `.fam` text.
pub fn content_hash(family: &SetFamily) -> String {
    hash_text(&serialize_family(family))
}

pub fn hash_text(text: &str) -> String {
    format!("sha256:{:x}", Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub construction: String,
    pub seed: Option<u64>,
    pub params: BTreeMap<String, serde_json::Value>,
    /// One hash per generated family, in order.
    pub hashes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub files: Vec<String>,
}

impl ManifestEntry {
    pub fn new(construction: impl Into<String>, seed: Option<u64>, families: &[SetFamily]) -> Self {
        ManifestEntry {
            construction: construction.into(),
            seed,
            params: BTreeMap::new(),
            hashes: families.iter().map(content_hash).collect(),
            files: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: u32,
    pub entries: Vec<ManifestEntry>,
}

impl Default for Manifest {
    fn default() -> Self {
        Manifest {
            schema: 1,
            entries: Vec::new(),
        }
    }
}

impl Manifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_and_roundtrips() {
        let f = SetFamily::from_lists(4, Some(2), &[&[1, 2], &[1, 3]]).unwrap();
        assert_eq!(content_hash(&f), hash_text("n=4 k=2\n1 2\n1 3\n"));
        assert_eq!(
            hash_text(""),
            "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
        let mut m = Manifest::default();
        m.entries.push(ManifestEntry::new("star", Some(3), &[f]).param("n", 4));
        assert_eq!(Manifest::from_json(&m.to_json()).unwrap(), m);
    }
}
