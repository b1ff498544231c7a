//! Identifiers for ontology and disease entities.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier namespaces recognized by the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Namespace {
    Hp,
    Orpha,
    Omim,
}

impl Namespace {
    pub fn prefix(self) -> &'static str {
        match self {
            Namespace::Hp => "HP",
            Namespace::Orpha => "ORPHA",
            Namespace::Omim => "OMIM",
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermIdError {
    #[error("unsupported namespace in identifier `{0}`")]
    UnsupportedNamespace(String),
    #[error("malformed identifier `{0}`")]
    Malformed(String),
}

/// A namespaced term identifier, e.g. `HP:0001250` or `ORPHA:905`.
///
/// Comparison and ordering follow the canonical rendering, so a sorted
/// list of ids is stable across platforms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermId {
    namespace: Namespace,
    local_id: String,
}

impl TermId {
    pub fn new(namespace: Namespace, local_id: impl Into<String>) -> Self {
        let mut local_id: String = local_id.into();
        // HP local ids are zero-padded to seven digits.
        if namespace == Namespace::Hp && local_id.len() < 7 {
            local_id = format!("{local_id:0>7}");
        }
        TermId {
            namespace,
            local_id,
        }
    }

    pub fn hp(local: u32) -> Self {
        TermId::new(Namespace::Hp, format!("{local:07}"))
    }

    pub fn orpha(local: u64) -> Self {
        TermId::new(Namespace::Orpha, local.to_string())
    }

    pub fn omim(local: u64) -> Self {
        TermId::new(Namespace::Omim, local.to_string())
    }

    pub fn namespace(&self) -> Namespace {
        self.namespace
    }

    pub fn local_id(&self) -> &str {
        &self.local_id
    }

    pub fn is_disease(&self) -> bool {
        matches!(self.namespace, Namespace::Orpha | Namespace::Omim)
    }
}

impl fmt::Display for TermId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.namespace.prefix(), self.local_id)
    }
}

impl FromStr for TermId {
    type Err = TermIdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (prefix, local) = s
            .split_once(':')
            .ok_or_else(|| TermIdError::Malformed(s.to_string()))?;
        let namespace = match prefix.to_ascii_uppercase().as_str() {
            "HP" => Namespace::Hp,
            "ORPHA" | "ORPHANET" => Namespace::Orpha,
            "OMIM" | "MIM" => Namespace::Omim,
            _ => return Err(TermIdError::UnsupportedNamespace(s.to_string())),
        };
        let local = local.trim();
        if local.is_empty() || !local.bytes().all(|b| b.is_ascii_digit()) {
            return Err(TermIdError::Malformed(s.to_string()));
        }
        let local = match namespace {
            Namespace::Hp => format!("{local:0>7}"),
            // Integer namespaces drop leading zeros.
            _ => local.trim_start_matches('0').to_string(),
        };
        if local.is_empty() {
            return Err(TermIdError::Malformed(s.to_string()));
        }
        Ok(TermId {
            namespace,
            local_id: local,
        })
    }
}

impl PartialOrd for TermId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TermId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.to_string().cmp(&other.to_string())
    }
}

impl Serialize for TermId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TermId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
