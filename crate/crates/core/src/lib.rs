//! Vocal persona engine.
//!
//! A persona is a set of independent truncated-Gaussian mixtures, one per
//! low-level synthesis feature. Expressive macros rescale the mixture
//! parameters multiplicatively, the sampler draws concrete feature values,
//! and a renderer turns those values into audio.
//!
//! ```
//! use persona_core::{library, macros::MacroSet, sampler, render};
//!
//! let bundle = library::starter_bundle();
//! let base = bundle.persona(library::BASELINE).unwrap();
//! let set = MacroSet::from_pairs([(library::STERN, 60.0)]).unwrap();
//! let stern = persona_core::macros::apply_macros(base, &bundle.macros, &set, &bundle.registry).unwrap();
//! let sample = sampler::sample_features(&stern, 42).unwrap();
//! let audio = render::render_utterance(&render::RenderRequest::new("good morning", sample, 42)).unwrap();
//! assert!(audio.duration_seconds() > 0.0);
//! ```

pub mod dist;
pub mod error;
pub mod library;
pub mod macros;
pub mod persona;
pub mod registry;
pub mod render;
pub mod rng;
pub mod sampler;
pub mod session;
pub mod store;

pub use error::{Error, Result, Rule, ValidationReport, Violation};
pub use macros::{apply_macros, macro_factor, Macro, MacroChannel, MacroSet, MacroSetting, Target, TransformSpec};
pub use persona::{
    blend_personas, persona_overlap, validate_persona, FeaturePdf, MixtureComponent, Persona, PersonaSpace,
};
pub use registry::{build_default_registry, validate_registry, FeatureRegistry, FeatureSpec};
pub use render::{
    estimate_syllables, render_utterance, AudioBuffer, RenderBackend, RenderRequest, SourceFilterRenderer,
};
pub use sampler::{sample_features, sample_trajectory, FeatureSample, Trajectory};
pub use session::{Active, CurvePair, SessionState, Synthesis};
pub use store::{load_bundle, save_bundle, PersonaBundle};
