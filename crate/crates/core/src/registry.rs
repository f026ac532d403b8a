//! The low-level feature space that personas parameterize and renderers consume.
//!
//! A registry is an ordered list of features; the position of a feature in the
//! list is its index everywhere else (persona PDFs, sample vectors, PRNG streams).

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Rule, ValidationReport};

pub const F0_MEAN: &str = "f0_mean";
pub const F0_RANGE: &str = "f0_range";
pub const SPEECH_RATE: &str = "speech_rate";
pub const PAUSE_SCALE: &str = "pause_scale";
pub const LOUDNESS: &str = "loudness";
pub const SPECTRAL_TILT: &str = "spectral_tilt";
pub const BREATHINESS: &str = "breathiness";
pub const JITTER: &str = "jitter";

pub const REGISTRY_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureSpec {
    pub id: String,
    pub name: String,
    pub unit: String,
    /// Hard lower clamp, in `unit`.
    pub min: f64,
    /// Hard upper clamp, in `unit`.
    pub max: f64,
    pub description: String,
}

impl FeatureSpec {
    pub fn new(id: &str, name: &str, unit: &str, min: f64, max: f64, description: &str) -> Self {
        Self {
            id: id.to_string(),
            name: name.to_string(),
            unit: unit.to_string(),
            min,
            max,
            description: description.to_string(),
        }
    }

    pub fn clamp(&self, value: f64) -> f64 {
        value.clamp(self.min, self.max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureRegistry {
    pub version: u32,
    pub features: Vec<FeatureSpec>,
}

impl FeatureRegistry {
    pub fn new(features: Vec<FeatureSpec>) -> Self {
        Self {
            version: REGISTRY_VERSION,
            features,
        }
    }

    /// N, the number of features.
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.features.iter().position(|f| f.id == id)
    }

    pub fn get(&self, id: &str) -> Option<&FeatureSpec> {
        self.features.iter().find(|f| f.id == id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.features.iter().map(|f| f.id.as_str())
    }

    pub fn validate(&self) -> ValidationReport {
        validate_registry(self)
    }
}

/// The canonical eight-feature registry.
///
/// Pitch level and range, rate and pausing cover the prosodic side; loudness,
/// spectral tilt, breathiness and jitter are the voice-quality correlates.
/// The bounds are generous physical clamps for adult speech, not norms.
pub fn build_default_registry() -> FeatureRegistry {
    FeatureRegistry::new(vec![
        FeatureSpec::new(
            F0_MEAN,
            "pitch level",
            "Hz",
            50.0,
            400.0,
            "mean fundamental frequency of voiced speech",
        ),
        FeatureSpec::new(
            F0_RANGE,
            "pitch range",
            "semitones",
            0.0,
            24.0,
            "span of the pitch contour over an utterance",
        ),
        FeatureSpec::new(
            SPEECH_RATE,
            "speech rate",
            "syllables/second",
            1.0,
            10.0,
            "articulation rate excluding pauses",
        ),
        FeatureSpec::new(
            PAUSE_SCALE,
            "pause scale",
            "dimensionless",
            0.25,
            4.0,
            "multiplier on the nominal inter-word pause",
        ),
        FeatureSpec::new(
            LOUDNESS,
            "loudness",
            "dB relative",
            -20.0,
            20.0,
            "gain relative to the renderer's reference level",
        ),
        FeatureSpec::new(
            SPECTRAL_TILT,
            "spectral tilt",
            "dB/octave",
            -24.0,
            0.0,
            "slope of the source spectrum; more negative is darker",
        ),
        FeatureSpec::new(
            BREATHINESS,
            "breathiness",
            "dimensionless 0-1",
            0.0,
            1.0,
            "aspiration noise share of the excitation",
        ),
        FeatureSpec::new(
            JITTER,
            "jitter",
            "dimensionless 0-1",
            0.0,
            1.0,
            "cycle-to-cycle pitch period perturbation",
        ),
    ])
}

pub fn validate_registry(reg: &FeatureRegistry) -> ValidationReport {
    let mut report = ValidationReport::new();
    if reg.features.is_empty() {
        report.push(
            "registry",
            Rule::EmptyRegistry,
            "registry must define at least one feature",
        );
    }
    let mut seen = HashSet::new();
    for (n, f) in reg.features.iter().enumerate() {
        let subject = if f.id.is_empty() {
            format!("feature #{n}")
        } else {
            format!("feature {}", f.id)
        };
        if f.id.is_empty() {
            report.push(&subject, Rule::EmptyId, "feature id must be non-empty");
        } else if !seen.insert(f.id.as_str()) {
            report.push(
                &subject,
                Rule::DuplicateId,
                format!("id `{}` appears more than once", f.id),
            );
        }
        if !f.min.is_finite() || !f.max.is_finite() {
            report.push(&subject, Rule::NonFinite, "bounds must be finite");
        } else if f.min >= f.max {
            report.push(
                &subject,
                Rule::Bounds,
                format!("min ({}) must be strictly below max ({})", f.min, f.max),
            );
        }
    }
    report
}
