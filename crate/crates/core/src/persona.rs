//! Personas as per-feature truncated-Gaussian mixtures.
//!
//! A persona fixes one density per registry feature. Features are independent,
//! so everything here (validation, overlap, blending) works feature by feature.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::dist::TruncatedNormal;
use crate::error::{Error, Result, Rule, ValidationReport};
use crate::registry::FeatureRegistry;

/// Allowed tolerance on Σ weights = 1.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Grid size used by [`persona_overlap`].
pub const OVERLAP_GRID_POINTS: usize = 2048;

pub const CONTEXT_TAGS: [&str; 5] = ["physical", "technological", "sociocultural", "performative", "baseline"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureComponent {
    pub weight: f64,
    pub mean: f64,
    pub sd: f64,
}

impl MixtureComponent {
    pub fn new(weight: f64, mean: f64, sd: f64) -> Self {
        Self { weight, mean, sd }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeaturePdf {
    pub feature_id: String,
    pub components: Vec<MixtureComponent>,
    pub lo: f64,
    pub hi: f64,
}

impl FeaturePdf {
    pub fn new(feature_id: &str, components: Vec<MixtureComponent>, lo: f64, hi: f64) -> Self {
        Self {
            feature_id: feature_id.to_string(),
            components,
            lo,
            hi,
        }
    }

    pub fn single(feature_id: &str, mean: f64, sd: f64, lo: f64, hi: f64) -> Self {
        Self::new(feature_id, vec![MixtureComponent::new(1.0, mean, sd)], lo, hi)
    }

    pub fn truncated(&self, c: &MixtureComponent) -> TruncatedNormal {
        TruncatedNormal::new(c.mean, c.sd, self.lo, self.hi)
    }

    /// Mixture density. Zero outside `[lo, hi]`.
    pub fn pdf(&self, x: f64) -> f64 {
        self.components
            .iter()
            .filter(|c| c.weight > 0.0)
            .map(|c| c.weight * self.truncated(c).pdf(x))
            .sum()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.components
            .iter()
            .filter(|c| c.weight > 0.0)
            .map(|c| c.weight * self.truncated(c).cdf(x))
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    pub fn mean_value(&self) -> f64 {
        self.components
            .iter()
            .filter(|c| c.weight > 0.0)
            .map(|c| c.weight * self.truncated(c).mean_value())
            .sum()
    }

    /// Checks the density's own invariants plus its fit inside `[min, max]`.
    fn validate_into(&self, subject: &str, bounds: Option<(f64, f64)>, report: &mut ValidationReport) {
        if !self.lo.is_finite() || !self.hi.is_finite() {
            report.push(subject, Rule::NonFinite, "truncation bounds must be finite");
        } else if self.lo >= self.hi {
            report.push(
                subject,
                Rule::Truncation,
                format!("lo ({}) must be strictly below hi ({})", self.lo, self.hi),
            );
        } else if let Some((min, max)) = bounds {
            if self.lo < min || self.hi > max {
                report.push(
                    subject,
                    Rule::Truncation,
                    format!("[{}, {}] is not inside feature bounds [{min}, {max}]", self.lo, self.hi),
                );
            }
        }
        if self.components.is_empty() {
            report.push(
                subject,
                Rule::EmptyMixture,
                "at least one mixture component is required",
            );
            return;
        }
        let mut sum = 0.0;
        for (k, c) in self.components.iter().enumerate() {
            if !c.weight.is_finite() || !c.mean.is_finite() || !c.sd.is_finite() {
                report.push(
                    subject,
                    Rule::NonFinite,
                    format!("component {k} has a non-finite parameter"),
                );
                continue;
            }
            if c.weight < 0.0 {
                report.push(
                    subject,
                    Rule::NegativeWeight,
                    format!("component {k} weight {} < 0", c.weight),
                );
            }
            if c.sd <= 0.0 {
                report.push(
                    subject,
                    Rule::NonPositiveSd,
                    format!("component {k} sd {} must be > 0", c.sd),
                );
            }
            if c.mean < self.lo || c.mean > self.hi {
                report.push(
                    subject,
                    Rule::MeanOutOfRange,
                    format!("component {k} mean {} is outside [{}, {}]", c.mean, self.lo, self.hi),
                );
            }
            sum += c.weight;
        }
        if sum.is_finite() && (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            report.push(
                subject,
                Rule::Normalization,
                format!("weights sum to {sum}, expected 1"),
            );
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Persona {
    pub id: String,
    pub name: String,
    pub context_tags: Vec<String>,
    pub pdfs: Vec<FeaturePdf>,
}

impl Persona {
    pub fn pdf(&self, feature_id: &str) -> Option<&FeaturePdf> {
        self.pdfs.iter().find(|p| p.feature_id == feature_id)
    }

    pub fn pdf_mut(&mut self, feature_id: &str) -> Option<&mut FeaturePdf> {
        self.pdfs.iter_mut().find(|p| p.feature_id == feature_id)
    }

    /// Invariants that hold without reference to a registry.
    pub fn validate_intrinsic(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let subject = format!("persona {}", self.id);
        if self.id.is_empty() {
            report.push(&subject, Rule::EmptyId, "persona id must be non-empty");
        }
        if self.pdfs.is_empty() {
            report.push(&subject, Rule::Coverage, "persona defines no feature densities");
        }
        for tag in &self.context_tags {
            if !is_valid_context_tag(tag) {
                report.push(&subject, Rule::ContextTag, format!("unknown context tag `{tag}`"));
            }
        }
        let mut seen = HashSet::new();
        for pdf in &self.pdfs {
            let s = format!("persona {} / feature {}", self.id, pdf.feature_id);
            if !seen.insert(pdf.feature_id.as_str()) {
                report.push(&s, Rule::DuplicateId, "feature has more than one density");
            }
            pdf.validate_into(&s, None, &mut report);
        }
        report
    }
}

pub fn is_valid_context_tag(tag: &str) -> bool {
    CONTEXT_TAGS.contains(&tag) || tag.strip_prefix("custom:").is_some_and(|rest| !rest.is_empty())
}

/// Empty iff `p` satisfies every persona invariant against `registry`.
pub fn validate_persona(registry: &FeatureRegistry, p: &Persona) -> ValidationReport {
    let mut report = ValidationReport::new();
    let subject = format!("persona {}", p.id);
    if p.id.is_empty() {
        report.push(&subject, Rule::EmptyId, "persona id must be non-empty");
    }
    for tag in &p.context_tags {
        if !is_valid_context_tag(tag) {
            report.push(&subject, Rule::ContextTag, format!("unknown context tag `{tag}`"));
        }
    }
    let mut seen = HashSet::new();
    for pdf in &p.pdfs {
        let s = format!("persona {} / feature {}", p.id, pdf.feature_id);
        if !seen.insert(pdf.feature_id.as_str()) {
            report.push(&s, Rule::DuplicateId, "feature has more than one density");
        }
        match registry.get(&pdf.feature_id) {
            Some(spec) => pdf.validate_into(&s, Some((spec.min, spec.max)), &mut report),
            None => {
                report.push(&s, Rule::UnknownFeature, "feature is not in the registry");
                pdf.validate_into(&s, None, &mut report);
            }
        }
    }
    for spec in &registry.features {
        if !seen.contains(spec.id.as_str()) {
            report.push(
                format!("persona {} / feature {}", p.id, spec.id),
                Rule::Coverage,
                "no density for this registry feature",
            );
        }
    }
    let all_present = registry.features.iter().all(|f| seen.contains(f.id.as_str()));
    if all_present && p.pdfs.len() == registry.len() && !same_feature_order(registry, p) {
        report.push(&subject, Rule::FeatureOrder, "densities are not in registry order");
    }
    report
}

fn same_feature_order(registry: &FeatureRegistry, p: &Persona) -> bool {
    p.pdfs.len() == registry.len() && registry.ids().zip(&p.pdfs).all(|(id, pdf)| pdf.feature_id == id)
}

/// The persona space: a registry plus the prototype personas defined on it.
#[derive(Debug, Clone, PartialEq)]
pub struct PersonaSpace {
    pub registry: FeatureRegistry,
    pub personas: Vec<Persona>,
}

impl PersonaSpace {
    pub fn new(registry: FeatureRegistry, personas: Vec<Persona>) -> Result<Self> {
        let space = Self { registry, personas };
        space.validate().into_result()?;
        Ok(space)
    }

    pub fn get(&self, id: &str) -> Option<&Persona> {
        self.personas.iter().find(|p| p.id == id)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = self.registry.validate();
        if self.personas.is_empty() {
            report.push("persona space", Rule::EmptyBundle, "at least one persona is required");
        }
        let mut seen = HashSet::new();
        for p in &self.personas {
            if !seen.insert(p.id.as_str()) {
                report.push(
                    format!("persona {}", p.id),
                    Rule::DuplicateId,
                    "persona id appears more than once",
                );
            }
            report.extend(validate_persona(&self.registry, p));
        }
        report
    }
}

/// Both personas must describe the same features in the same order.
fn check_comparable(a: &Persona, b: &Persona) -> Result<()> {
    if a.pdfs.len() != b.pdfs.len() {
        return Err(Error::Incomparable(format!(
            "`{}` has {} features, `{}` has {}",
            a.id,
            a.pdfs.len(),
            b.id,
            b.pdfs.len()
        )));
    }
    for (pa, pb) in a.pdfs.iter().zip(&b.pdfs) {
        if pa.feature_id != pb.feature_id {
            return Err(Error::Incomparable(format!(
                "feature `{}` of `{}` lines up with `{}` of `{}`",
                pa.feature_id, a.id, pb.feature_id, b.id
            )));
        }
    }
    Ok(())
}

/// Trapezoid weights times density on a uniform grid.
fn trapezoid(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..n - 1].iter().sum();
    h * (inner + 0.5 * (values[0] + values[n - 1]))
}

/// Bhattacharyya coefficient of two densities on one feature.
///
/// Trapezoidal quadrature on a uniform grid over the union of both supports.
/// Each density is normalized by its own quadrature mass, which makes the
/// result a discrete Cauchy-Schwarz ratio and therefore never above 1. If a
/// density is too narrow for the grid to see, the coefficient falls back to
/// the per-cell probability masses from the exact CDFs.
pub fn bhattacharyya(a: &FeaturePdf, b: &FeaturePdf, grid_points: usize) -> f64 {
    let lo = a.lo.min(b.lo);
    let hi = a.hi.max(b.hi);
    let n = grid_points.max(2);
    let h = (hi - lo) / (n - 1) as f64;
    let x = |i: usize| if i == n - 1 { hi } else { lo + h * i as f64 };

    let fa: Vec<f64> = (0..n).map(|i| a.pdf(x(i))).collect();
    let fb: Vec<f64> = (0..n).map(|i| b.pdf(x(i))).collect();
    let ma = trapezoid(&fa, h);
    let mb = trapezoid(&fb, h);
    let bc = if ma > 0.0 && mb > 0.0 && ma.is_finite() && mb.is_finite() {
        let cross: Vec<f64> = fa.iter().zip(&fb).map(|(p, q)| (p * q).sqrt()).collect();
        trapezoid(&cross, h) / (ma * mb).sqrt()
    } else {
        (0..n - 1)
            .map(|i| {
                let pa = a.cdf(x(i + 1)) - a.cdf(x(i));
                let pb = b.cdf(x(i + 1)) - b.cdf(x(i));
                (pa.max(0.0) * pb.max(0.0)).sqrt()
            })
            .sum()
    };
    bc.clamp(0.0, 1.0)
}

/// Overlap score in [0, 1]: geometric mean over features of the per-feature
/// Bhattacharyya coefficient. Symmetric in its arguments.
pub fn persona_overlap(a: &Persona, b: &Persona) -> Result<f64> {
    check_comparable(a, b)?;
    let (first, second) = if (&a.id, &a.pdfs.len()) <= (&b.id, &b.pdfs.len()) {
        (a, b)
    } else {
        (b, a)
    };
    let mut log_sum = 0.0;
    for (pa, pb) in first.pdfs.iter().zip(&second.pdfs) {
        let bc = bhattacharyya(pa, pb, OVERLAP_GRID_POINTS);
        if bc <= 0.0 {
            return Ok(0.0);
        }
        log_sum += bc.ln();
    }
    Ok((log_sum / first.pdfs.len() as f64).exp().clamp(0.0, 1.0))
}

/// Interpolates two personas feature by feature.
///
/// Components are paired after sorting by mean; the shorter list is padded
/// with zero-weight copies of the longer list's unpaired components. Means and
/// truncation bounds move linearly, sds log-linearly, weights linearly and are
/// then renormalized. `alpha = 0` reproduces `a` and `alpha = 1` reproduces `b`
/// up to the zero-weight padding.
pub fn blend_personas(a: &Persona, b: &Persona, alpha: f64) -> Result<Persona> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::domain("alpha", alpha, 0.0, 1.0));
    }
    check_comparable(a, b)?;
    let pdfs = a
        .pdfs
        .iter()
        .zip(&b.pdfs)
        .map(|(pa, pb)| blend_pdf(pa, pb, alpha))
        .collect();
    let mut context_tags = a.context_tags.clone();
    for t in &b.context_tags {
        if !context_tags.contains(t) {
            context_tags.push(t.clone());
        }
    }
    Ok(Persona {
        id: format!("blend({},{},{alpha})", a.id, b.id),
        name: format!("{} / {} at {alpha}", a.name, b.name),
        context_tags,
        pdfs,
    })
}

#[inline]
fn lerp(x: f64, y: f64, t: f64) -> f64 {
    (1.0 - t) * x + t * y
}

/// `x·(y/x)^t`, returning the endpoints unchanged at t = 0 and t = 1.
fn geometric_lerp(x: f64, y: f64, t: f64) -> f64 {
    if t == 0.0 {
        x
    } else if t == 1.0 {
        y
    } else {
        x * (y / x).powf(t)
    }
}

fn sorted_by_mean(components: &[MixtureComponent]) -> Vec<MixtureComponent> {
    let mut v = components.to_vec();
    v.sort_by(|p, q| p.mean.total_cmp(&q.mean));
    v
}

fn blend_pdf(a: &FeaturePdf, b: &FeaturePdf, alpha: f64) -> FeaturePdf {
    let mut ca = sorted_by_mean(&a.components);
    let mut cb = sorted_by_mean(&b.components);
    // A zero-weight copy keeps mean and sd but must sit inside its own bounds.
    let pad = |from: &[MixtureComponent], into: &mut Vec<MixtureComponent>, lo: f64, hi: f64| {
        for c in &from[into.len()..] {
            into.push(MixtureComponent::new(0.0, c.mean.clamp(lo, hi), c.sd));
        }
    };
    if ca.len() < cb.len() {
        pad(&cb, &mut ca, a.lo, a.hi);
    } else if cb.len() < ca.len() {
        pad(&ca, &mut cb, b.lo, b.hi);
    }

    let lo = lerp(a.lo, b.lo, alpha);
    let hi = lerp(a.hi, b.hi, alpha);
    let mut components: Vec<MixtureComponent> = ca
        .iter()
        .zip(&cb)
        .map(|(x, y)| MixtureComponent {
            weight: lerp(x.weight, y.weight, alpha),
            mean: lerp(x.mean, y.mean, alpha).clamp(lo, hi),
            sd: geometric_lerp(x.sd, y.sd, alpha),
        })
        .collect();
    let total: f64 = components.iter().map(|c| c.weight).sum();
    if total > 0.0 && total != 1.0 {
        for c in &mut components {
            c.weight /= total;
        }
    }
    FeaturePdf {
        feature_id: a.feature_id.clone(),
        components,
        lo,
        hi,
    }
}
