//! Instance files: a JSON document with `schema_version`, `dim`, `balls` and
//! optional `metadata`.
//!
//! Reals are written in shortest round-trip decimal form and parsed exactly, so
//! a parse of a serialized file reproduces every double bit for bit.

use std::path::Path;

use minball::{Ball, Instance};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Version written into every output document.
pub const SCHEMA_VERSION: u32 = 1;

/// One ball of an instance file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallRecord {
    pub center: Vec<f64>,
    pub radius: f64,
}

/// Provenance of a generated instance.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// On-disk instance document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub dim: usize,
    pub balls: Vec<BallRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

impl InstanceFile {
    /// Wraps the balls of `instance`.
    pub fn from_instance(instance: &Instance, metadata: Option<Metadata>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            dim: instance.dim(),
            balls: instance
                .balls()
                .iter()
                .map(|b| BallRecord {
                    center: b.center.iter().copied().collect(),
                    radius: b.radius,
                })
                .collect(),
            metadata,
        }
    }

    /// Validates the document and builds the instance.
    pub fn to_instance(&self, context: &str) -> Result<Instance> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Schema {
                context: context.to_owned(),
                found: self.schema_version,
            });
        }
        let balls = self
            .balls
            .iter()
            .map(|b| Ball::new(&b.center, b.radius))
            .collect();
        Instance::new(self.dim, balls).map_err(|source| CliError::Instance {
            context: context.to_owned(),
            source,
        })
    }

    /// Parses a document; errors name the offending line, column and field.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| CliError::Parse {
            path: path.to_owned(),
            source,
        })
    }

    /// Reads and parses a file.
    pub fn read(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        Self::parse(&text, path)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Reads a whole file as UTF-8.
pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}
