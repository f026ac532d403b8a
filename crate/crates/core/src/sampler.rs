//! Drawing realized feature values from a persona.
//!
//! Every feature is drawn from its own Philox stream keyed by the seed:
//! stream `(segment << 32) | feature_index`. Each draw consumes exactly two
//! uniforms, the first picks a mixture component by weight and the second is
//! pushed through that component's truncated-normal inverse CDF.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::persona::{FeaturePdf, Persona};
use crate::rng::{Philox, Stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSample {
    pub persona_id: String,
    pub seed: u64,
    pub feature_ids: Vec<String>,
    /// One value per feature, in registry order.
    pub values: Vec<f64>,
}

impl FeatureSample {
    pub fn get(&self, feature_id: &str) -> Option<f64> {
        self.feature_ids
            .iter()
            .position(|f| f == feature_id)
            .map(|i| self.values[i])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub segments: Vec<FeatureSample>,
    pub smoothing: f64,
}

/// One feature draw together with the mixture component that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    pub component: usize,
    pub value: f64,
}

/// Picks the component whose cumulative weight first exceeds `u`.
/// Zero-weight components are never chosen.
fn select_component(pdf: &FeaturePdf, u: f64) -> usize {
    let mut cum = 0.0;
    let mut last = 0;
    for (k, c) in pdf.components.iter().enumerate() {
        if c.weight <= 0.0 {
            continue;
        }
        cum += c.weight;
        last = k;
        if u < cum {
            return k;
        }
    }
    last
}

pub fn draw_feature(pdf: &FeaturePdf, stream: &mut Stream) -> Draw {
    let u_select = stream.next_open01();
    let u_value = stream.next_open01();
    let component = select_component(pdf, u_select);
    let value = pdf.truncated(&pdf.components[component]).quantile(u_value);
    Draw { component, value }
}

fn stream_id(segment: u32, feature: usize) -> u64 {
    (u64::from(segment) << 32) | feature as u64
}

fn check(p: &Persona) -> Result<()> {
    p.validate_intrinsic().into_result()
}

fn sample_segment(p: &Persona, gen: &Philox, segment: u32) -> Vec<Draw> {
    p.pdfs
        .iter()
        .enumerate()
        .map(|(n, pdf)| draw_feature(pdf, &mut gen.stream(stream_id(segment, n))))
        .collect()
}

fn to_sample(p: &Persona, seed: u64, values: Vec<f64>) -> FeatureSample {
    FeatureSample {
        persona_id: p.id.clone(),
        seed,
        feature_ids: p.pdfs.iter().map(|pdf| pdf.feature_id.clone()).collect(),
        values,
    }
}

/// Draws every feature once; the same `(p, seed)` always gives the same sample.
pub fn sample_features(p: &Persona, seed: u64) -> Result<FeatureSample> {
    check(p)?;
    let values = sample_segment(p, &Philox::new(seed), 0)
        .into_iter()
        .map(|d| d.value)
        .collect();
    Ok(to_sample(p, seed, values))
}

/// Like [`sample_features`] but also reports the chosen mixture components.
pub fn sample_draws(p: &Persona, seed: u64) -> Result<Vec<Draw>> {
    check(p)?;
    Ok(sample_segment(p, &Philox::new(seed), 0))
}

/// `n_segments` draws smoothed by `t_i = λ·t_{i-1} + (1-λ)·s_i`.
///
/// The first raw segment is exactly `sample_features(p, seed)`.
pub fn sample_trajectory(p: &Persona, n_segments: usize, smoothing: f64, seed: u64) -> Result<Trajectory> {
    check(p)?;
    if n_segments == 0 {
        return Err(Error::InvalidArgument("a trajectory needs at least one segment".into()));
    }
    if n_segments > u32::MAX as usize {
        return Err(Error::InvalidArgument("too many segments".into()));
    }
    if !(0.0..=1.0).contains(&smoothing) {
        return Err(Error::domain("smoothing", smoothing, 0.0, 1.0));
    }
    let gen = Philox::new(seed);
    let raw: Vec<Vec<f64>> = (0..n_segments as u32)
        .map(|s| sample_segment(p, &gen, s).into_iter().map(|d| d.value).collect())
        .collect();
    Ok(Trajectory {
        segments: smooth(p, &raw, smoothing)
            .into_iter()
            .map(|values| to_sample(p, seed, values))
            .collect(),
        smoothing,
    })
}

fn smooth(p: &Persona, raw: &[Vec<f64>], lambda: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(raw.len());
    for (i, s) in raw.iter().enumerate() {
        let row = if i == 0 || lambda == 0.0 {
            s.clone()
        } else if lambda == 1.0 {
            out[i - 1].clone()
        } else {
            s.iter()
                .zip(&out[i - 1])
                .zip(&p.pdfs)
                .map(|((&x, &prev), pdf)| (lambda * prev + (1.0 - lambda) * x).clamp(pdf.lo, pdf.hi))
                .collect()
        };
        out.push(row);
    }
    out
}
