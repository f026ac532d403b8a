//! Live control state: active persona or blend, macro values, seed counter.
//!
//! Every operation takes `&self` and returns a new state, so a failed call
//! leaves the caller's state untouched. The effective persona is always
//! recomputed from the base persona (or blend) and the current macro values;
//! macros are applied after blending.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::macros::{apply_macros, check_value, MacroSet, MacroSetting};
use crate::persona::{blend_personas, FeaturePdf, Persona};
use crate::render::{AudioBuffer, RenderBackend, RenderRequest, SourceFilterRenderer};
use crate::sampler::{sample_features, FeatureSample};
use crate::store::PersonaBundle;

pub const CURVE_POINTS: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Active {
    Persona { persona_id: String },
    Blend { a: String, b: String, alpha: f64 },
}

impl Active {
    pub fn persona(id: impl Into<String>) -> Self {
        Active::Persona { persona_id: id.into() }
    }

    pub fn blend(a: impl Into<String>, b: impl Into<String>, alpha: f64) -> Self {
        Active::Blend {
            a: a.into(),
            b: b.into(),
            alpha,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionState {
    pub session_id: String,
    #[serde(skip)]
    bundle: Arc<PersonaBundle>,
    pub active: Active,
    /// Absent macros are at 0.
    pub macro_values: BTreeMap<String, f64>,
    pub seed_counter: u64,
}

/// Output of [`SessionState::synthesize`].
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub audio: AudioBuffer,
    pub sample: FeatureSample,
    pub effective: Persona,
    pub seed: u64,
    pub state: SessionState,
}

/// A fully resolved render request plus the persona it was drawn from.
#[derive(Debug, Clone)]
pub struct PreparedSynthesis {
    pub request: RenderRequest,
    pub effective: Persona,
    pub seed: u64,
}

/// Density of one feature before and after macros, on a shared grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePair {
    pub feature_id: String,
    pub x: Vec<f64>,
    pub pre: Vec<f64>,
    pub post: Vec<f64>,
}

impl SessionState {
    /// Starts on the bundle's first persona with every macro at 0.
    pub fn create(bundle: Arc<PersonaBundle>) -> Result<Self> {
        bundle.validate().into_result()?;
        let first = bundle.personas.first().ok_or(Error::EmptyBundle)?;
        Ok(Self {
            session_id: uuid::Uuid::new_v4().to_string(),
            active: Active::persona(first.id.clone()),
            bundle,
            macro_values: BTreeMap::new(),
            seed_counter: 0,
        })
    }

    pub fn bundle(&self) -> &PersonaBundle {
        &self.bundle
    }

    pub fn shared_bundle(&self) -> Arc<PersonaBundle> {
        Arc::clone(&self.bundle)
    }

    pub fn macro_value(&self, macro_id: &str) -> f64 {
        self.macro_values.get(macro_id).copied().unwrap_or(0.0)
    }

    pub fn set_macro(&self, macro_id: &str, x: f64) -> Result<Self> {
        if self.bundle.macro_by_id(macro_id).is_none() {
            return Err(Error::UnknownMacro(macro_id.to_string()));
        }
        check_value(x)?;
        let mut next = self.clone();
        next.macro_values.insert(macro_id.to_string(), x);
        Ok(next)
    }

    /// Replaces the active selection. Macro values are kept.
    pub fn select_active(&self, active: Active) -> Result<Self> {
        match &active {
            Active::Persona { persona_id } => {
                self.persona(persona_id)?;
            }
            Active::Blend { a, b, alpha } => {
                self.persona(a)?;
                self.persona(b)?;
                if !(0.0..=1.0).contains(alpha) {
                    return Err(Error::domain("alpha", *alpha, 0.0, 1.0));
                }
            }
        }
        let mut next = self.clone();
        next.active = active;
        Ok(next)
    }

    fn persona(&self, id: &str) -> Result<&Persona> {
        self.bundle
            .persona(id)
            .ok_or_else(|| Error::UnknownPersona(id.to_string()))
    }

    /// The active persona, or the blend it names, before any macros.
    pub fn base_persona(&self) -> Result<Persona> {
        match &self.active {
            Active::Persona { persona_id } => self.persona(persona_id).cloned(),
            Active::Blend { a, b, alpha } => blend_personas(self.persona(a)?, self.persona(b)?, *alpha),
        }
    }

    pub fn macro_set(&self) -> MacroSet {
        let settings = self
            .macro_values
            .iter()
            .map(|(id, &x)| MacroSetting {
                macro_id: id.clone(),
                value: x,
            })
            .collect();
        MacroSet::new(settings).expect("session macro values are validated on entry")
    }

    pub fn effective_persona(&self) -> Result<Persona> {
        let base = self.base_persona()?;
        apply_macros(&base, &self.bundle.macros, &self.macro_set(), &self.bundle.registry)
    }

    /// Seed for the next synthesis: SHA-256 of the session id and counter.
    pub fn next_seed(&self) -> u64 {
        derive_seed(&self.session_id, self.seed_counter)
    }

    pub fn synthesize(&self, text: &str, seed_override: Option<u64>) -> Result<Synthesis> {
        self.synthesize_with(&SourceFilterRenderer, text, seed_override)
    }

    /// Base persona, then macros, then one feature draw, then the backend.
    pub fn synthesize_with(
        &self,
        backend: &dyn RenderBackend,
        text: &str,
        seed_override: Option<u64>,
    ) -> Result<Synthesis> {
        let (prepared, state) = self.prepare_synthesis(text, seed_override)?;
        let audio = backend.render(&prepared.request)?;
        Ok(Synthesis {
            audio,
            sample: prepared.request.sample,
            effective: prepared.effective,
            seed: prepared.seed,
            state,
        })
    }

    /// Everything up to rendering: resolves the seed, applies macros, draws the
    /// features, and returns the request together with the advanced state.
    pub fn prepare_synthesis(&self, text: &str, seed_override: Option<u64>) -> Result<(PreparedSynthesis, Self)> {
        if text.trim().is_empty() {
            return Err(Error::InvalidArgument("text must be non-empty".into()));
        }
        let seed = seed_override.unwrap_or_else(|| self.next_seed());
        let effective = self.effective_persona()?;
        let sample = sample_features(&effective, seed)?;
        let mut state = self.clone();
        state.seed_counter += 1;
        Ok((
            PreparedSynthesis {
                request: RenderRequest::new(text, sample, seed),
                effective,
                seed,
            },
            state,
        ))
    }

    pub fn get_curves(&self, feature_id: &str) -> Result<CurvePair> {
        let base = self.base_persona()?;
        let index = self
            .bundle
            .registry
            .index_of(feature_id)
            .ok_or_else(|| Error::UnknownFeature(feature_id.to_string()))?;
        let effective = apply_macros(&base, &self.bundle.macros, &self.macro_set(), &self.bundle.registry)?;
        let pre = &base.pdfs[index];
        let post = &effective.pdfs[index];
        let x = grid(pre.lo, pre.hi, CURVE_POINTS);
        Ok(CurvePair {
            feature_id: feature_id.to_string(),
            pre: normalized_density(pre, &x),
            post: normalized_density(post, &x),
            x,
        })
    }
}

pub fn derive_seed(session_id: &str, counter: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(session_id.as_bytes());
    h.update([0u8]);
    h.update(counter.to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest is 32 bytes"))
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + h * i as f64 })
        .collect()
}

/// Density on `x`, rescaled so its trapezoid integral is 1. Falls back to
/// CDF differences over each point's cell when the density is narrower than
/// the grid.
fn normalized_density(pdf: &FeaturePdf, x: &[f64]) -> Vec<f64> {
    let h = x[1] - x[0];
    let trapz = |v: &[f64]| h * (v.iter().sum::<f64>() - 0.5 * (v[0] + v[v.len() - 1]));
    let mut d: Vec<f64> = x.iter().map(|&z| pdf.pdf(z)).collect();
    let mut mass = trapz(&d);
    if !(mass > 0.0 && mass.is_finite()) {
        let last = x.len() - 1;
        d = x
            .iter()
            .enumerate()
            .map(|(i, &z)| {
                let half = if i == 0 || i == last { 0.5 } else { 1.0 };
                (pdf.cdf(z + 0.5 * h) - pdf.cdf(z - 0.5 * h)) / (h * half)
            })
            .collect();
        mass = trapz(&d);
    }
    if mass > 0.0 {
        for v in &mut d {
            *v /= mass;
        }
    }
    d
}
