//! Expressive macros: named controls that rescale persona parameters.
//!
//! A macro holds one channel per involved feature. At control value `x` in
//! [0, 100] a channel yields the factor `base(x)^w`, where `base` is the
//! channel's transform (`base(0) = 1`) and `w` is the feature's involvement.
//! All active macros multiply into one factor per feature, which then scales
//! the targeted location and/or scale parameter of every mixture component.
//! The clamp into the feature's support happens once, after the product.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Rule, ValidationReport};
use crate::persona::Persona;
use crate::registry::FeatureRegistry;

pub const MACRO_MIN: f64 = 0.0;
pub const MACRO_MAX: f64 = 100.0;

/// Lower sd clamp as a fraction of the truncation width.
pub const SD_MIN_FRACTION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    /// `base(x) = 1 + a·x/100`
    Linear,
    /// `base(x) = exp(a·x/100)`
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformSpec {
    pub kind: TransformKind,
    pub sensitivity: f64,
}

impl TransformSpec {
    pub fn linear(sensitivity: f64) -> Self {
        Self {
            kind: TransformKind::Linear,
            sensitivity,
        }
    }

    pub fn exponential(sensitivity: f64) -> Self {
        Self {
            kind: TransformKind::Exponential,
            sensitivity,
        }
    }

    /// `base(x)`; positive for every valid spec and x in [0, 100].
    pub fn base(&self, x: f64) -> f64 {
        let t = self.sensitivity * x / 100.0;
        match self.kind {
            TransformKind::Linear => 1.0 + t,
            TransformKind::Exponential => t.exp(),
        }
    }

    fn check(&self) -> std::result::Result<(), String> {
        if !self.sensitivity.is_finite() {
            return Err("sensitivity must be finite".into());
        }
        if self.kind == TransformKind::Linear && self.sensitivity <= -1.0 {
            return Err(format!(
                "linear sensitivity {} would make the factor non-positive; it must be > -1",
                self.sensitivity
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Mean,
    Sd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MacroChannel {
    pub feature_id: String,
    /// Involvement `w`; zero means the feature is untouched.
    pub involvement: f64,
    pub transform: TransformSpec,
    pub targets: BTreeSet<Target>,
}

impl MacroChannel {
    pub fn new(feature_id: &str, involvement: f64, transform: TransformSpec, targets: &[Target]) -> Self {
        Self {
            feature_id: feature_id.to_string(),
            involvement,
            transform,
            targets: targets.iter().copied().collect(),
        }
    }

    pub fn targets(&self, t: Target) -> bool {
        self.targets.contains(&t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Macro {
    pub id: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub channels: Vec<MacroChannel>,
}

impl Macro {
    pub fn channel(&self, feature_id: &str) -> Option<&MacroChannel> {
        self.channels.iter().find(|c| c.feature_id == feature_id)
    }
}

/// Checks channel invariants, and feature references when a registry is given.
pub fn validate_macro(m: &Macro, registry: Option<&FeatureRegistry>) -> ValidationReport {
    let mut report = ValidationReport::new();
    let subject = format!("macro {}", m.id);
    if m.id.is_empty() {
        report.push(&subject, Rule::EmptyId, "macro id must be non-empty");
    }
    let mut seen = HashSet::new();
    for ch in &m.channels {
        let s = format!("macro {} / channel {}", m.id, ch.feature_id);
        if !seen.insert(ch.feature_id.as_str()) {
            report.push(&s, Rule::DuplicateChannel, "more than one channel for this feature");
        }
        if let Some(reg) = registry {
            if reg.get(&ch.feature_id).is_none() {
                report.push(&s, Rule::UnknownFeature, "feature is not in the registry");
            }
        }
        if !ch.involvement.is_finite() {
            report.push(&s, Rule::NonFinite, "involvement must be finite");
        }
        if ch.targets.is_empty() {
            report.push(&s, Rule::EmptyTargets, "channel must target mean and/or sd");
        }
        if let Err(msg) = ch.transform.check() {
            report.push(&s, Rule::Sensitivity, msg);
        }
    }
    report
}

/// A user value for one macro, `x` in [0, 100].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MacroSetting {
    pub macro_id: String,
    pub value: f64,
}

impl MacroSetting {
    pub fn new(macro_id: impl Into<String>, value: f64) -> Result<Self> {
        check_value(value)?;
        Ok(Self {
            macro_id: macro_id.into(),
            value,
        })
    }
}

pub(crate) fn check_value(x: f64) -> Result<()> {
    if (MACRO_MIN..=MACRO_MAX).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain("macro value", x, MACRO_MIN, MACRO_MAX))
    }
}

/// At most one setting per macro.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct MacroSet {
    settings: Vec<MacroSetting>,
}

impl MacroSet {
    pub fn new(settings: Vec<MacroSetting>) -> Result<Self> {
        let mut seen = HashSet::new();
        for s in &settings {
            check_value(s.value)?;
            if !seen.insert(s.macro_id.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "macro `{}` is set more than once",
                    s.macro_id
                )));
            }
        }
        Ok(Self { settings })
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, f64)>) -> Result<Self> {
        let settings = pairs
            .into_iter()
            .map(|(id, x)| MacroSetting::new(id, x))
            .collect::<Result<Vec<_>>>()?;
        Self::new(settings)
    }

    pub fn settings(&self) -> &[MacroSetting] {
        &self.settings
    }

    pub fn is_empty(&self) -> bool {
        self.settings.is_empty()
    }
}

/// `base(x)^w`, exactly 1 when `x = 0` or `w = 0`.
pub fn macro_factor(ch: &MacroChannel, x: f64) -> Result<f64> {
    check_value(x)?;
    ch.transform.check().map_err(Error::InvalidArgument)?;
    if x == 0.0 || ch.involvement == 0.0 {
        return Ok(1.0);
    }
    Ok(ch.transform.base(x).powf(ch.involvement))
}

/// Per-feature (mean factor, sd factor) for a resolved macro set.
pub fn feature_factors(persona: &Persona, library: &[Macro], set: &MacroSet) -> Result<Vec<(f64, f64)>> {
    let resolved = set
        .settings()
        .iter()
        .map(|s| {
            library
                .iter()
                .find(|m| m.id == s.macro_id)
                .map(|m| (m, s.value))
                .ok_or_else(|| Error::UnknownMacro(s.macro_id.clone()))
        })
        .collect::<Result<Vec<_>>>()?;

    persona
        .pdfs
        .iter()
        .map(|pdf| {
            let mut mean_factor = 1.0;
            let mut sd_factor = 1.0;
            for (m, x) in &resolved {
                if let Some(ch) = m.channel(&pdf.feature_id) {
                    let f = macro_factor(ch, *x)?;
                    if ch.targets(Target::Mean) {
                        mean_factor *= f;
                    }
                    if ch.targets(Target::Sd) {
                        sd_factor *= f;
                    }
                }
            }
            Ok((mean_factor, sd_factor))
        })
        .collect()
}

/// Applies a macro set to a persona and returns the modified copy.
///
/// A parameter whose combined factor is exactly 1 is left bit-for-bit
/// untouched. Otherwise means are clamped to `[lo, hi]` and sds to
/// `[1e-6·(hi-lo), hi-lo]`. Weights and truncation bounds never change.
pub fn apply_macros(p: &Persona, library: &[Macro], set: &MacroSet, registry: &FeatureRegistry) -> Result<Persona> {
    if p.pdfs.len() != registry.len() || registry.ids().zip(&p.pdfs).any(|(id, pdf)| pdf.feature_id != id) {
        return Err(Error::Incomparable(format!(
            "persona `{}` does not match the registry's features",
            p.id
        )));
    }
    for s in set.settings() {
        let m = library
            .iter()
            .find(|m| m.id == s.macro_id)
            .ok_or_else(|| Error::UnknownMacro(s.macro_id.clone()))?;
        if let Some(ch) = m.channels.iter().find(|c| registry.get(&c.feature_id).is_none()) {
            return Err(Error::UnknownFeature(ch.feature_id.clone()));
        }
    }
    let factors = feature_factors(p, library, set)?;
    let mut out = p.clone();
    for (pdf, (fm, fs)) in out.pdfs.iter_mut().zip(factors) {
        let width = pdf.hi - pdf.lo;
        let (sd_min, sd_max) = (SD_MIN_FRACTION * width, width);
        for c in &mut pdf.components {
            if fm != 1.0 {
                c.mean = (c.mean * fm).clamp(pdf.lo, pdf.hi);
            }
            if fs != 1.0 {
                c.sd = (c.sd * fs).clamp(sd_min, sd_max);
            }
        }
    }
    Ok(out)
}
