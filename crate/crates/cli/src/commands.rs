use std::fs::{self, File};
use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::Path;

use persona_core::library::starter_bundle;
use persona_core::{
    apply_macros, load_bundle, persona_overlap, render_utterance, sample_features, save_bundle, Error, MacroSet,
    Persona, PersonaBundle, RenderRequest,
};

pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;

/// Macro values visited by the sweep table.
pub const SWEEP_POINTS: [f64; 5] = [0.0, 25.0, 50.0, 75.0, 100.0];

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io(_) => EXIT_IO,
            Error::UnknownPersona(_)
            | Error::UnknownMacro(_)
            | Error::UnknownFeature(_)
            | Error::Domain { .. }
            | Error::InvalidArgument(_) => EXIT_USAGE,
            _ => EXIT_VALIDATION,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(), CliError>;

fn bundle_path(path: Option<&Path>) -> Result<&Path, CliError> {
    path.ok_or_else(|| CliError::usage("no bundle given: pass --bundle or set PERSONA_BUNDLE"))
}

fn load(path: Option<&Path>) -> Result<PersonaBundle, CliError> {
    Ok(load_bundle(bundle_path(path)?)?)
}

/// Stdout, or a freshly created file.
fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

/// The persona with `macros` applied, or a usage error naming what is unknown.
fn steer(bundle: &PersonaBundle, persona_id: &str, macros: &[(String, f64)]) -> Result<Persona, CliError> {
    let base = bundle
        .persona(persona_id)
        .ok_or_else(|| Error::UnknownPersona(persona_id.to_string()))?;
    let set = MacroSet::from_pairs(macros.iter().map(|(k, x)| (k.as_str(), *x)))?;
    Ok(apply_macros(base, &bundle.macros, &set, &bundle.registry)?)
}

pub fn validate(path: Option<&Path>) -> Outcome {
    match load_bundle(bundle_path(path)?) {
        Ok(b) => {
            println!(
                "ok: {} features, {} personas, {} macros",
                b.registry.len(),
                b.personas.len(),
                b.macros.len()
            );
            Ok(())
        }
        Err(Error::Validation(report)) => {
            for v in report.violations() {
                println!("{v}");
            }
            Err(CliError {
                code: EXIT_VALIDATION,
                message: format!("{} violation(s)", report.len()),
            })
        }
        Err(e) => Err(e.into()),
    }
}

pub fn sample(
    path: Option<&Path>,
    persona_id: &str,
    macros: &[(String, f64)],
    seed: u64,
    n: u64,
    out: Option<&Path>,
) -> Outcome {
    let bundle = load(path)?;
    let p = steer(&bundle, persona_id, macros)?;
    if seed.checked_add(n.saturating_sub(1)).is_none() {
        return Err(CliError::usage("seed range overflows u64"));
    }
    let mut w = csv::Writer::from_writer(sink(out)?);
    w.write_record(p.pdfs.iter().map(|pdf| pdf.feature_id.as_str()))?;
    for s in seed..seed + n {
        let draw = sample_features(&p, s)?;
        w.serialize(&draw.values)?;
    }
    w.flush()?;
    Ok(())
}

pub fn synth(
    path: Option<&Path>,
    persona_id: &str,
    macros: &[(String, f64)],
    seed: u64,
    text: &str,
    out: &Path,
) -> Outcome {
    let bundle = load(path)?;
    let p = steer(&bundle, persona_id, macros)?;
    if text.trim().is_empty() {
        return Err(CliError::usage("text must be non-empty"));
    }
    let sample = sample_features(&p, seed)?;
    let audio = render_utterance(&RenderRequest::new(text, sample.clone(), seed))?;
    audio.write_wav(out)?;
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(&sample.feature_ids)?;
    w.serialize(&sample.values)?;
    w.flush()?;
    eprintln!("wrote {} ({:.3} s)", out.display(), audio.duration_seconds());
    Ok(())
}

fn write_overlap(bundle: &PersonaBundle, out: Box<dyn Write>) -> Outcome {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["persona".to_string()];
    header.extend(bundle.personas.iter().map(|p| p.id.clone()));
    w.write_record(&header)?;
    for a in &bundle.personas {
        let mut row = vec![a.id.clone()];
        for b in &bundle.personas {
            row.push(persona_overlap(a, b)?.to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_sweep(bundle: &PersonaBundle, base: &Persona, out: Box<dyn Write>) -> Outcome {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["macro", "persona", "x", "feature", "component", "weight", "mean", "sd"])?;
    for m in &bundle.macros {
        for x in SWEEP_POINTS {
            let set = MacroSet::from_pairs([(m.id.as_str(), x)])?;
            let effective = apply_macros(base, &bundle.macros, &set, &bundle.registry)?;
            for pdf in &effective.pdfs {
                for (k, c) in pdf.components.iter().enumerate() {
                    w.write_record([
                        m.id.clone(),
                        base.id.clone(),
                        x.to_string(),
                        pdf.feature_id.clone(),
                        k.to_string(),
                        c.weight.to_string(),
                        c.mean.to_string(),
                        c.sd.to_string(),
                    ])?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Overlap matrix, a blank line, then the sweep table; or two files under `out`.
pub fn report(path: Option<&Path>, persona_id: Option<&str>, out: Option<&Path>) -> Outcome {
    let bundle = load(path)?;
    let base = match persona_id {
        Some(id) => bundle
            .persona(id)
            .ok_or_else(|| Error::UnknownPersona(id.to_string()))?,
        None => bundle.personas.first().ok_or(Error::EmptyBundle)?,
    };
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            write_overlap(&bundle, sink(Some(&dir.join("overlap.csv")))?)?;
            write_sweep(&bundle, base, sink(Some(&dir.join("sweep.csv")))?)?;
        }
        None => {
            write_overlap(&bundle, sink(None)?)?;
            println!();
            write_sweep(&bundle, base, sink(None)?)?;
        }
    }
    Ok(())
}

pub fn serve(path: Option<&Path>, addr: SocketAddr) -> Outcome {
    let bundle = load(path)?;
    let rt = tokio::runtime::Runtime::new()?;
    eprintln!("listening on http://{addr}");
    rt.block_on(persona_server::serve(bundle, addr))?;
    Ok(())
}

pub fn starter(out: &Path) -> Outcome {
    save_bundle(&starter_bundle(), out)?;
    Ok(())
}
