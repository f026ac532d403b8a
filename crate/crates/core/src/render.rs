//! Reference source-filter renderer and WAV encoding.
//!
//! This is not intelligible speech. Each syllable is a voiced vowel-like
//! segment: a Rosenberg glottal pulse train (differentiated for lip radiation)
//! mixed with aspiration noise, passed through three fixed formant resonators
//! picked from the syllable's vowel letter, then a cascade of one-pole
//! low-passes for spectral tilt. Words are separated by silent pauses.
//!
//! Feature mapping:
//! - `speech_rate`: each syllable lasts `1 / speech_rate` seconds.
//! - `pause_scale`: inter-word pause of `0.15 · pause_scale` seconds.
//! - `f0_mean`, `f0_range`: pitch falls linearly from `+range/2` to `-range/2`
//!   semitones around `f0_mean` across the voiced part of the utterance.
//! - `jitter`: each glottal period is scaled by `1 + 0.1 · jitter · r`, `r` uniform in [-1, 1).
//! - `breathiness`: noise share of the excitation.
//! - `spectral_tilt`: `-tilt / 6` one-pole sections (fractional ones blended) above 500 Hz.
//! - `loudness`: gain in dB relative to a fixed reference peak of 0.25.
//!
//! The result is scaled down only if its peak exceeds 0.99.

use std::f64::consts::PI;
use std::io::Cursor;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::registry::{
    build_default_registry, BREATHINESS, F0_MEAN, F0_RANGE, JITTER, LOUDNESS, PAUSE_SCALE, SPECTRAL_TILT, SPEECH_RATE,
};
use crate::rng::Philox;
use crate::sampler::FeatureSample;

pub const DEFAULT_SAMPLE_RATE: u32 = 44_100;
pub const MIN_SAMPLE_RATE: u32 = 8_000;
pub const PAUSE_SECONDS: f64 = 0.15;
pub const PEAK_LIMIT: f64 = 0.99;
pub const REFERENCE_PEAK: f64 = 0.25;

const JITTER_DEPTH: f64 = 0.1;
const NOISE_GAIN: f64 = 0.5;
const TILT_CORNER_HZ: f64 = 500.0;
const MAX_TILT_STAGES: f64 = 4.0;
const OPEN_PHASE: f64 = 0.4;
const CLOSING_PHASE: f64 = 0.16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderRequest {
    pub text: String,
    pub sample: FeatureSample,
    pub sample_rate: u32,
    pub seed: u64,
}

impl RenderRequest {
    pub fn new(text: impl Into<String>, sample: FeatureSample, seed: u64) -> Self {
        Self {
            text: text.into(),
            sample,
            sample_rate: DEFAULT_SAMPLE_RATE,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    pub pcm: Vec<f32>,
    pub sample_rate: u32,
}

impl AudioBuffer {
    pub fn duration_seconds(&self) -> f64 {
        self.pcm.len() as f64 / f64::from(self.sample_rate)
    }

    /// RIFF/WAVE, mono, 16-bit little-endian PCM.
    pub fn to_wav_bytes(&self) -> Result<Vec<u8>> {
        let mut cursor = Cursor::new(Vec::new());
        {
            let mut writer = hound::WavWriter::new(&mut cursor, wav_spec(self.sample_rate)).map_err(wav_error)?;
            for &x in &self.pcm {
                writer.write_sample(quantize(x)).map_err(wav_error)?;
            }
            writer.finalize().map_err(wav_error)?;
        }
        Ok(cursor.into_inner())
    }

    pub fn write_wav(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_wav_bytes()?)?;
        Ok(())
    }

    /// Reads mono 16-bit PCM back into floats.
    pub fn from_wav_bytes(bytes: &[u8]) -> Result<Self> {
        let mut reader = hound::WavReader::new(Cursor::new(bytes)).map_err(wav_error)?;
        let spec = reader.spec();
        if spec.channels != 1 || spec.bits_per_sample != 16 || spec.sample_format != hound::SampleFormat::Int {
            return Err(Error::Config("expected mono 16-bit PCM".into()));
        }
        let pcm = reader
            .samples::<i16>()
            .map(|s| s.map(|v| f32::from(v) / 32767.0))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(wav_error)?;
        Ok(Self {
            pcm,
            sample_rate: spec.sample_rate,
        })
    }
}

fn wav_spec(sample_rate: u32) -> hound::WavSpec {
    hound::WavSpec {
        channels: 1,
        sample_rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    }
}

fn quantize(x: f32) -> i16 {
    (f64::from(x).clamp(-1.0, 1.0) * 32767.0).round() as i16
}

fn wav_error(e: hound::Error) -> Error {
    match e {
        hound::Error::IoError(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(other.to_string())),
    }
}

/// Any speech engine driven by feature samples.
///
/// Implementations must be deterministic functions of the request.
pub trait RenderBackend: Send + Sync {
    fn name(&self) -> &str;
    fn render(&self, req: &RenderRequest) -> Result<AudioBuffer>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Vowel {
    A,
    E,
    I,
    O,
    U,
    Schwa,
}

impl Vowel {
    fn from_letter(c: char) -> Self {
        match c {
            'a' => Vowel::A,
            'e' => Vowel::E,
            'i' | 'y' => Vowel::I,
            'o' => Vowel::O,
            'u' => Vowel::U,
            _ => Vowel::Schwa,
        }
    }

    /// (frequency, bandwidth) of F1..F3 in Hz.
    fn formants(self) -> [(f64, f64); 3] {
        match self {
            Vowel::A => [(730.0, 90.0), (1090.0, 110.0), (2440.0, 160.0)],
            Vowel::E => [(530.0, 70.0), (1840.0, 100.0), (2480.0, 160.0)],
            Vowel::I => [(270.0, 60.0), (2290.0, 100.0), (3010.0, 170.0)],
            Vowel::O => [(570.0, 70.0), (840.0, 90.0), (2410.0, 160.0)],
            Vowel::U => [(300.0, 60.0), (870.0, 90.0), (2240.0, 160.0)],
            Vowel::Schwa => [(500.0, 80.0), (1500.0, 100.0), (2500.0, 160.0)],
        }
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Syllable nuclei of one word: the first letter of each vowel group.
fn word_syllables(word: &str) -> Vec<Vowel> {
    let mut out = Vec::new();
    let mut in_group = false;
    for c in word.chars().flat_map(char::to_lowercase) {
        let v = is_vowel(c);
        if v && !in_group {
            out.push(Vowel::from_letter(c));
        }
        in_group = v;
    }
    if out.is_empty() {
        out.push(Vowel::Schwa);
    }
    out
}

fn words(text: &str) -> Vec<Vec<Vowel>> {
    let ws: Vec<Vec<Vowel>> = text
        .split_whitespace()
        .filter(|w| w.chars().any(char::is_alphanumeric))
        .map(word_syllables)
        .collect();
    if ws.is_empty() {
        vec![vec![Vowel::Schwa]]
    } else {
        ws
    }
}

/// Vowel-letter groups per word (y counts as a vowel), at least one per word.
pub fn estimate_syllables(text: &str) -> usize {
    words(text).iter().map(Vec::len).sum()
}

/// Voice parameters read from a sample and clamped to the default registry bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoiceParams {
    pub f0_mean: f64,
    pub f0_range: f64,
    pub speech_rate: f64,
    pub pause_scale: f64,
    pub loudness: f64,
    pub spectral_tilt: f64,
    pub breathiness: f64,
    pub jitter: f64,
}

impl VoiceParams {
    pub fn from_sample(sample: &FeatureSample) -> Result<Self> {
        let reg = build_default_registry();
        let read = |id: &str| -> Result<f64> {
            let v = sample
                .get(id)
                .ok_or_else(|| Error::Config(format!("sample has no `{id}` value")))?;
            if !v.is_finite() {
                return Err(Error::Config(format!("`{id}` is not finite")));
            }
            Ok(reg.get(id).map_or(v, |spec| spec.clamp(v)))
        };
        Ok(Self {
            f0_mean: read(F0_MEAN)?,
            f0_range: read(F0_RANGE)?,
            speech_rate: read(SPEECH_RATE)?,
            pause_scale: read(PAUSE_SCALE)?,
            loudness: read(LOUDNESS)?,
            spectral_tilt: read(SPECTRAL_TILT)?,
            breathiness: read(BREATHINESS)?,
            jitter: read(JITTER)?,
        })
    }
}

#[derive(Debug, Clone, Copy)]
enum SegmentKind {
    Syllable(Vowel),
    Pause,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    start: usize,
    end: usize,
    kind: SegmentKind,
}

/// Lays syllables and pauses out on the sample grid. Boundaries are rounded
/// from accumulated times, so the total never drifts by more than one sample.
fn timeline(text: &str, p: &VoiceParams, sr: f64) -> Vec<Segment> {
    let syllable = 1.0 / p.speech_rate;
    let pause = PAUSE_SECONDS * p.pause_scale;
    let ws = words(text);
    let mut t = 0.0;
    let mut out = Vec::new();
    let at = |t: f64| (t * sr).round() as usize;
    for (i, w) in ws.iter().enumerate() {
        for &v in w {
            let start = at(t);
            t += syllable;
            out.push(Segment {
                start,
                end: at(t),
                kind: SegmentKind::Syllable(v),
            });
        }
        if i + 1 < ws.len() {
            let start = at(t);
            t += pause;
            out.push(Segment {
                start,
                end: at(t),
                kind: SegmentKind::Pause,
            });
        }
    }
    out
}

/// Rosenberg glottal flow over one period, phase in [0, 1).
fn glottal_flow(phase: f64) -> f64 {
    if phase < OPEN_PHASE {
        0.5 * (1.0 - (PI * phase / OPEN_PHASE).cos())
    } else if phase < OPEN_PHASE + CLOSING_PHASE {
        (0.5 * PI * (phase - OPEN_PHASE) / CLOSING_PHASE).cos()
    } else {
        0.0
    }
}

/// Tukey window, half of the syllable in cosine ramps.
fn syllable_envelope(i: usize, len: usize) -> f64 {
    if len < 2 {
        return 1.0;
    }
    let t = i as f64 / (len - 1) as f64;
    let ramp = 0.25;
    if t < ramp {
        0.5 * (1.0 - (PI * t / ramp).cos())
    } else if t > 1.0 - ramp {
        0.5 * (1.0 - (PI * (1.0 - t) / ramp).cos())
    } else {
        1.0
    }
}

/// Two-pole resonator with unity gain at DC.
#[derive(Debug, Clone, Copy, Default)]
struct Resonator {
    a: f64,
    b: f64,
    c: f64,
    y1: f64,
    y2: f64,
}

impl Resonator {
    fn tune(&mut self, freq: f64, bandwidth: f64, sr: f64) {
        let r = (-PI * bandwidth / sr).exp();
        self.c = -r * r;
        self.b = 2.0 * r * (2.0 * PI * freq / sr).cos();
        self.a = 1.0 - self.b - self.c;
    }

    fn process(&mut self, x: f64) -> f64 {
        let y = self.a * x + self.b * self.y1 + self.c * self.y2;
        self.y2 = self.y1;
        self.y1 = y;
        y
    }
}

fn one_pole_lowpass(signal: &mut [f64], coeff: f64) {
    let mut y = 0.0;
    for x in signal.iter_mut() {
        y = (1.0 - coeff) * *x + coeff * y;
        *x = y;
    }
}

fn apply_tilt(signal: &mut [f64], tilt_db_per_octave: f64, sr: f64) {
    let stages = (-tilt_db_per_octave / 6.0).clamp(0.0, MAX_TILT_STAGES);
    let coeff = (-2.0 * PI * TILT_CORNER_HZ / sr).exp();
    let full = stages.floor() as usize;
    for _ in 0..full {
        one_pole_lowpass(signal, coeff);
    }
    let frac = stages - full as f64;
    if frac > 0.0 {
        let mut filtered = signal.to_vec();
        one_pole_lowpass(&mut filtered, coeff);
        for (x, f) in signal.iter_mut().zip(filtered) {
            *x = (1.0 - frac) * *x + frac * f;
        }
    }
}

fn rms(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    (xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64).sqrt()
}

/// A render plus measurements taken before the final peak limit.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub audio: AudioBuffer,
    pub pre_normalization_rms: f64,
    pub voiced_samples: usize,
    pub pause_samples: usize,
}

/// The built-in backend.
#[derive(Debug, Clone, Copy, Default)]
pub struct SourceFilterRenderer;

impl SourceFilterRenderer {
    pub fn render_detailed(&self, req: &RenderRequest) -> Result<Rendered> {
        if req.sample_rate < MIN_SAMPLE_RATE {
            return Err(Error::Config(format!(
                "sample rate {} Hz is below the supported minimum of {MIN_SAMPLE_RATE} Hz",
                req.sample_rate
            )));
        }
        if req.text.trim().is_empty() {
            return Err(Error::InvalidArgument("text must be non-empty".into()));
        }
        let p = VoiceParams::from_sample(&req.sample)?;
        let sr = f64::from(req.sample_rate);
        let segments = timeline(&req.text, &p, sr);
        let total = segments.last().map_or(0, |s| s.end);
        let voiced_total: usize = segments
            .iter()
            .filter(|s| matches!(s.kind, SegmentKind::Syllable(_)))
            .map(|s| s.end - s.start)
            .sum();

        let gen = Philox::new(req.seed);
        let mut noise = gen.stream(0);
        let mut jitter = gen.stream(1);
        let mut formants = [Resonator::default(); 3];
        let mut signal = vec![0.0; total];

        let mut phase = 0.0;
        let mut prev_flow = 0.0;
        let mut period_scale = 1.0;
        let mut voiced_pos = 0usize;
        let contour_span = (voiced_total.max(2) - 1) as f64;

        for seg in &segments {
            let vowel = match seg.kind {
                SegmentKind::Syllable(v) => Some(v),
                SegmentKind::Pause => None,
            };
            if let Some(v) = vowel {
                for (r, (f, bw)) in formants.iter_mut().zip(v.formants()) {
                    r.tune(f, bw, sr);
                }
            }
            let len = seg.end - seg.start;
            for i in 0..len {
                let excitation = match vowel {
                    Some(_) => {
                        let progress = voiced_pos as f64 / contour_span;
                        let semitones = p.f0_range * (0.5 - progress);
                        let f0 = p.f0_mean * (semitones / 12.0).exp2() / period_scale;
                        phase += f0 / sr;
                        if phase >= 1.0 {
                            phase -= 1.0;
                            period_scale = 1.0 + JITTER_DEPTH * p.jitter * jitter.next_signed();
                        }
                        let flow = glottal_flow(phase);
                        let voiced = (flow - prev_flow) * sr / (f0 * 10.0);
                        prev_flow = flow;
                        let breath = NOISE_GAIN * noise.next_signed();
                        voiced_pos += 1;
                        ((1.0 - p.breathiness) * voiced + p.breathiness * breath) * syllable_envelope(i, len)
                    }
                    None => 0.0,
                };
                let mut y = excitation;
                for r in &mut formants {
                    y = r.process(y);
                }
                signal[seg.start + i] = y;
            }
        }

        apply_tilt(&mut signal, p.spectral_tilt, sr);

        let peak = signal.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let gain = if peak > 0.0 && peak.is_finite() {
            REFERENCE_PEAK / peak * 10f64.powf(p.loudness / 20.0)
        } else {
            0.0
        };
        for x in &mut signal {
            *x *= gain;
        }
        let pre_normalization_rms = rms(&signal);
        let peak = peak * gain;
        if peak > PEAK_LIMIT {
            let s = PEAK_LIMIT / peak;
            for x in &mut signal {
                *x *= s;
            }
        }
        let pcm = signal
            .iter()
            .map(|&x| if x.is_finite() { x.clamp(-1.0, 1.0) as f32 } else { 0.0 })
            .collect();
        Ok(Rendered {
            audio: AudioBuffer {
                pcm,
                sample_rate: req.sample_rate,
            },
            pre_normalization_rms,
            voiced_samples: voiced_total,
            pause_samples: total - voiced_total,
        })
    }
}

impl RenderBackend for SourceFilterRenderer {
    fn name(&self) -> &str {
        "source-filter"
    }

    fn render(&self, req: &RenderRequest) -> Result<AudioBuffer> {
        self.render_detailed(req).map(|r| r.audio)
    }
}

/// Renders with the built-in [`SourceFilterRenderer`].
pub fn render_utterance(req: &RenderRequest) -> Result<AudioBuffer> {
    SourceFilterRenderer.render(req)
}
