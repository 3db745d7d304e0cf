//! Provenance header written at the top of every output file.
//!
//! Each entry is one `#manifest key=value` line. Entries keep insertion
//! order, so identical runs produce identical headers.

use std::io::Write;

use sha2::{Digest, Sha256};
use thiserror::Error;

pub const PREFIX: &str = "#manifest ";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ManifestError {
    #[error("manifest key {0:?} must be non-empty without '=' or whitespace")]
    BadKey(String),
    #[error("manifest value for {0} contains a line break")]
    BadValue(String),
    #[error("line {0}: manifest entry without '='")]
    Malformed(usize),
    #[error("duplicate manifest key {0}")]
    Duplicate(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) -> Result<(), ManifestError> {
        let (key, value) = (key.into(), value.into());
        if key.is_empty() || key.contains('=') || key.chars().any(char::is_whitespace) {
            return Err(ManifestError::BadKey(key));
        }
        if value.contains(['\n', '\r']) {
            return Err(ManifestError::BadValue(key));
        }
        if self.get(&key).is_some() {
            return Err(ManifestError::Duplicate(key));
        }
        self.entries.push((key, value));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (k, v) in &self.entries {
            writeln!(out, "{PREFIX}{k}={v}")?;
        }
        Ok(())
    }

    /// Collects every `#manifest` line of a file; other lines are ignored.
    pub fn parse(text: &str) -> Result<Self, ManifestError> {
        let mut m = Manifest::new();
        for (i, line) in text.lines().enumerate() {
            if let Some(entry) = line.strip_prefix(PREFIX) {
                let (k, v) = entry.split_once('=').ok_or(ManifestError::Malformed(i + 1))?;
                m.push(k, v)?;
            }
        }
        Ok(m)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut m = Manifest::new();
        m.push("tool", "influence").unwrap();
        m.push("input.events", "a=b.tsv").unwrap();
        m.push("param.epsilon", "1e-9").unwrap();
        m.push("empty", "").unwrap();
        let mut buf = Vec::new();
        m.write_to(&mut buf).unwrap();
        let text = format!("{}body\t1\n#other\n", String::from_utf8(buf).unwrap());
        assert_eq!(Manifest::parse(&text).unwrap(), m);
    }

    #[test]
    fn rejects_bad_entries() {
        let mut m = Manifest::new();
        assert_eq!(m.push("a b", "x"), Err(ManifestError::BadKey("a b".into())));
        assert_eq!(m.push("k=v", "x"), Err(ManifestError::BadKey("k=v".into())));
        assert_eq!(m.push("k", "x\ny"), Err(ManifestError::BadValue("k".into())));
        m.push("k", "1").unwrap();
        assert_eq!(m.push("k", "2"), Err(ManifestError::Duplicate("k".into())));
        assert_eq!(Manifest::parse("#manifest novalue\n"), Err(ManifestError::Malformed(1)));
    }

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
