use std::fmt;

use serde::{Deserialize, Serialize};

/// Which invariant a [`Violation`] breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    EmptyId,
    DuplicateId,
    EmptyRegistry,
    Bounds,
    Coverage,
    FeatureOrder,
    EmptyMixture,
    Normalization,
    NegativeWeight,
    NonPositiveSd,
    MeanOutOfRange,
    Truncation,
    NonFinite,
    ContextTag,
    UnknownFeature,
    DuplicateChannel,
    EmptyTargets,
    Sensitivity,
    EmptyBundle,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::EmptyId => "empty-id",
            Rule::DuplicateId => "duplicate-id",
            Rule::EmptyRegistry => "empty-registry",
            Rule::Bounds => "bounds",
            Rule::Coverage => "coverage",
            Rule::FeatureOrder => "feature-order",
            Rule::EmptyMixture => "empty-mixture",
            Rule::Normalization => "normalization",
            Rule::NegativeWeight => "negative-weight",
            Rule::NonPositiveSd => "non-positive-sd",
            Rule::MeanOutOfRange => "mean-out-of-range",
            Rule::Truncation => "truncation",
            Rule::NonFinite => "non-finite",
            Rule::ContextTag => "context-tag",
            Rule::UnknownFeature => "unknown-feature",
            Rule::DuplicateChannel => "duplicate-channel",
            Rule::EmptyTargets => "empty-targets",
            Rule::Sensitivity => "sensitivity",
            Rule::EmptyBundle => "empty-bundle",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One broken invariant. `subject` locates it, e.g. `persona baseline / feature jitter`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub subject: String,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: [{}] {}", self.subject, self.rule, self.message)
    }
}

/// Validation results are data: an empty report means every invariant holds.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValidationReport(pub Vec<Violation>);

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.0
    }

    pub fn push(&mut self, subject: impl Into<String>, rule: Rule, message: impl Into<String>) {
        self.0.push(Violation {
            subject: subject.into(),
            rule,
            message: message.into(),
        });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.0.extend(other.0);
    }

    pub fn has_rule(&self, rule: Rule) -> bool {
        self.0.iter().any(|v| v.rule == rule)
    }

    /// `Ok(())` when empty, otherwise the report wrapped in [`Error::Validation`].
    pub fn into_result(self) -> Result<()> {
        if self.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("validation failed:\n{0}")]
    Validation(ValidationReport),
    #[error("incomparable personas: {0}")]
    Incomparable(String),
    #[error("unknown macro `{0}`")]
    UnknownMacro(String),
    #[error("unknown persona `{0}`")]
    UnknownPersona(String),
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("{name} = {value} is outside [{min}, {max}]")]
    Domain {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format_version {found} (this build reads up to {supported})")]
    UnsupportedVersion { found: u64, supported: u32 },
    #[error("bundle contains no personas")]
    EmptyBundle,
    #[error("storage error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, min: f64, max: f64) -> Self {
        Error::Domain { name, value, min, max }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
