//! Starter personas and the default macro library.
//!
//! The numbers here are illustrative voice settings, chosen so the personas
//! are audibly distinct and overlap to plausible degrees: the two
//! conversational personas sit close together, the public-speaking persona
//! sits further away. They are not measured data.

use std::f64::consts::LN_2;

use crate::macros::{Macro, MacroChannel, Target, TransformSpec};
use crate::persona::{FeaturePdf, MixtureComponent, Persona};
use crate::registry::{
    build_default_registry, FeatureRegistry, BREATHINESS, F0_MEAN, F0_RANGE, JITTER, LOUDNESS, PAUSE_SCALE,
    SPECTRAL_TILT, SPEECH_RATE,
};
use crate::store::{PersonaBundle, FORMAT_VERSION};

pub const BASELINE: &str = "baseline";
pub const MEETING_WITH_CLIENTS: &str = "meeting_with_clients";
pub const CHATTING_WITH_FAMILY: &str = "chatting_with_family";
pub const DELIVERING_A_SPEECH: &str = "delivering_a_speech";

pub const STERN: &str = "stern";
pub const BRIGHT: &str = "bright";
pub const SOFT: &str = "soft";
pub const ANIMATED: &str = "animated";

/// Shorthand for a single-component feature truncated to the registry bounds.
fn g(reg: &FeatureRegistry, id: &str, mean: f64, sd: f64) -> FeaturePdf {
    let spec = reg.get(id).expect("feature in default registry");
    FeaturePdf::single(id, mean, sd, spec.min, spec.max)
}

fn persona(id: &str, name: &str, tags: &[&str], pdfs: Vec<FeaturePdf>) -> Persona {
    Persona {
        id: id.to_string(),
        name: name.to_string(),
        context_tags: tags.iter().map(|t| t.to_string()).collect(),
        pdfs,
    }
}

/// Four personas over the default registry; `baseline` first.
pub fn starter_personas(reg: &FeatureRegistry) -> Vec<Persona> {
    vec![
        persona(
            BASELINE,
            "baseline",
            &["baseline"],
            vec![
                g(reg, F0_MEAN, 120.0, 10.0),
                g(reg, F0_RANGE, 6.0, 1.5),
                g(reg, SPEECH_RATE, 4.5, 0.4),
                g(reg, PAUSE_SCALE, 1.0, 0.15),
                g(reg, LOUDNESS, -2.0, 1.5),
                g(reg, SPECTRAL_TILT, -12.0, 1.5),
                g(reg, BREATHINESS, 0.15, 0.05),
                g(reg, JITTER, 0.05, 0.02),
            ],
        ),
        persona(
            MEETING_WITH_CLIENTS,
            "meeting with clients",
            &["sociocultural", "technological"],
            vec![
                FeaturePdf::single(F0_MEAN, 125.0, 8.0, 80.0, 250.0),
                g(reg, F0_RANGE, 5.0, 1.0),
                g(reg, SPEECH_RATE, 4.2, 0.3),
                g(reg, PAUSE_SCALE, 1.2, 0.15),
                g(reg, LOUDNESS, -1.0, 1.0),
                g(reg, SPECTRAL_TILT, -11.0, 1.2),
                FeaturePdf::single(BREATHINESS, 0.10, 0.04, 0.0, 0.6),
                FeaturePdf::single(JITTER, 0.04, 0.015, 0.0, 0.5),
            ],
        ),
        persona(
            CHATTING_WITH_FAMILY,
            "chatting with family",
            &["sociocultural", "physical"],
            vec![
                FeaturePdf::new(
                    F0_MEAN,
                    vec![
                        MixtureComponent::new(0.7, 135.0, 15.0),
                        MixtureComponent::new(0.3, 175.0, 20.0),
                    ],
                    50.0,
                    400.0,
                ),
                g(reg, F0_RANGE, 9.0, 2.5),
                g(reg, SPEECH_RATE, 5.2, 0.7),
                FeaturePdf::new(
                    PAUSE_SCALE,
                    vec![
                        MixtureComponent::new(0.6, 0.8, 0.15),
                        MixtureComponent::new(0.4, 1.4, 0.3),
                    ],
                    0.25,
                    4.0,
                ),
                g(reg, LOUDNESS, -3.0, 2.5),
                g(reg, SPECTRAL_TILT, -13.0, 2.5),
                g(reg, BREATHINESS, 0.25, 0.08),
                g(reg, JITTER, 0.07, 0.03),
            ],
        ),
        persona(
            DELIVERING_A_SPEECH,
            "delivering a speech",
            &["performative", "physical", "technological"],
            vec![
                FeaturePdf::single(F0_MEAN, 150.0, 9.0, 80.0, 300.0),
                g(reg, F0_RANGE, 12.0, 2.0),
                g(reg, SPEECH_RATE, 3.4, 0.3),
                g(reg, PAUSE_SCALE, 2.0, 0.3),
                g(reg, LOUDNESS, 6.0, 1.5),
                g(reg, SPECTRAL_TILT, -8.0, 1.2),
                g(reg, BREATHINESS, 0.06, 0.03),
                g(reg, JITTER, 0.03, 0.01),
            ],
        ),
    ]
}

fn exp_channel(feature: &str, full_scale: f64, involvement: f64, targets: &[Target]) -> MacroChannel {
    MacroChannel::new(
        feature,
        involvement,
        TransformSpec::exponential(full_scale.ln()),
        targets,
    )
}

/// `stern`, `bright`, `soft` and `animated`.
///
/// Exponential channels are written as their factor at x = 100 when w = 1.
/// Features like loudness and tilt are signed, so a factor above 1 pushes
/// them further from zero (a steeper tilt, for example).
pub fn build_default_macro_library(_reg: &FeatureRegistry) -> Vec<Macro> {
    vec![
        Macro {
            id: STERN.into(),
            name: "stern".into(),
            description: "lower, flatter, slower and darker".into(),
            channels: vec![
                exp_channel(F0_MEAN, 0.8, 1.0, &[Target::Mean]),
                MacroChannel::new(F0_RANGE, 0.8, TransformSpec::exponential(-LN_2), &[Target::Mean]),
                MacroChannel::new(SPEECH_RATE, 1.0, TransformSpec::linear(-0.2), &[Target::Mean]),
                exp_channel(SPECTRAL_TILT, 1.3, 1.0, &[Target::Mean]),
            ],
        },
        Macro {
            id: BRIGHT.into(),
            name: "bright".into(),
            description: "higher and livelier with a flatter spectrum".into(),
            channels: vec![
                exp_channel(F0_MEAN, 1.15, 1.0, &[Target::Mean]),
                exp_channel(F0_RANGE, 1.3, 1.0, &[Target::Mean]),
                exp_channel(SPECTRAL_TILT, 0.6, 1.0, &[Target::Mean]),
                MacroChannel::new(BREATHINESS, 1.0, TransformSpec::linear(-0.5), &[Target::Mean]),
            ],
        },
        Macro {
            id: SOFT.into(),
            name: "soft".into(),
            description: "breathier, darker and gentler".into(),
            channels: vec![
                exp_channel(BREATHINESS, 2.0, 1.0, &[Target::Mean]),
                exp_channel(SPECTRAL_TILT, 1.4, 1.0, &[Target::Mean]),
                MacroChannel::new(SPEECH_RATE, 0.5, TransformSpec::linear(-0.2), &[Target::Mean]),
                exp_channel(F0_RANGE, 0.8, 1.0, &[Target::Mean]),
            ],
        },
        Macro {
            id: ANIMATED.into(),
            name: "animated".into(),
            description: "wider and more variable pitch, quicker with shorter pauses".into(),
            channels: vec![
                exp_channel(F0_MEAN, 1.8, 1.0, &[Target::Sd]),
                exp_channel(F0_RANGE, 1.6, 1.0, &[Target::Mean, Target::Sd]),
                MacroChannel::new(SPEECH_RATE, 1.0, TransformSpec::linear(0.25), &[Target::Mean]),
                exp_channel(PAUSE_SCALE, 0.7, 1.0, &[Target::Mean]),
            ],
        },
    ]
}

/// The default registry, the four starter personas and the default macros.
pub fn starter_bundle() -> PersonaBundle {
    let registry = build_default_registry();
    PersonaBundle {
        format_version: FORMAT_VERSION,
        personas: starter_personas(&registry),
        macros: build_default_macro_library(&registry),
        registry,
    }
}
