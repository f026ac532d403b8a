//! The `.persona` bundle file: registry, personas and macros in one JSON document.
//!
//! Saving writes a canonical form (fixed key order, two-space indent, trailing
//! newline, shortest round-trip float formatting), so equal bundles give equal
//! bytes. Loading checks `format_version` before anything else, rejects unknown
//! fields, and cross-validates the whole bundle.
//!
//! Concurrent writers to the same path are not coordinated.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Rule, ValidationReport};
use crate::macros::{validate_macro, Macro};
use crate::persona::{validate_persona, Persona};
use crate::registry::FeatureRegistry;

pub const FORMAT_VERSION: u32 = 1;
pub const FILE_EXTENSION: &str = "persona";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PersonaBundle {
    pub format_version: u32,
    pub registry: FeatureRegistry,
    pub personas: Vec<Persona>,
    pub macros: Vec<Macro>,
}

impl PersonaBundle {
    pub fn persona(&self, id: &str) -> Option<&Persona> {
        self.personas.iter().find(|p| p.id == id)
    }

    pub fn macro_by_id(&self, id: &str) -> Option<&Macro> {
        self.macros.iter().find(|m| m.id == id)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = self.registry.validate();
        let mut ids = HashSet::new();
        for p in &self.personas {
            if !ids.insert(p.id.as_str()) {
                report.push(
                    format!("persona {}", p.id),
                    Rule::DuplicateId,
                    "persona id appears more than once",
                );
            }
            report.extend(validate_persona(&self.registry, p));
        }
        let mut macro_ids = HashSet::new();
        for m in &self.macros {
            if !macro_ids.insert(m.id.as_str()) {
                report.push(
                    format!("macro {}", m.id),
                    Rule::DuplicateId,
                    "macro id appears more than once",
                );
            }
            report.extend(validate_macro(m, Some(&self.registry)));
        }
        report
    }

    /// Canonical text form. Fails without output if the bundle is invalid.
    pub fn to_canonical_string(&self) -> Result<String> {
        self.validate().into_result()?;
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(parse_error)?;
        match value.get("format_version").and_then(|v| v.as_u64()) {
            Some(v) if v > u64::from(FORMAT_VERSION) => {
                return Err(Error::UnsupportedVersion {
                    found: v,
                    supported: FORMAT_VERSION,
                })
            }
            Some(0) => {
                return Err(Error::UnsupportedVersion {
                    found: 0,
                    supported: FORMAT_VERSION,
                })
            }
            _ => {}
        }
        // Second pass on the text, not the value, so schema errors keep their location.
        let bundle: PersonaBundle = serde_json::from_str(text).map_err(parse_error)?;
        bundle.validate().into_result()?;
        Ok(bundle)
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Writes the canonical form of `bundle` to `destination`.
pub fn save_bundle(bundle: &PersonaBundle, destination: impl AsRef<Path>) -> Result<()> {
    let text = bundle.to_canonical_string()?;
    fs::write(destination, text)?;
    Ok(())
}

pub fn load_bundle(source: impl AsRef<Path>) -> Result<PersonaBundle> {
    let text = fs::read_to_string(source)?;
    PersonaBundle::from_json_str(&text)
}
