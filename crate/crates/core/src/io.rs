//! Trace files: mono WAV (16-bit PCM or 32-bit float in, 32-bit float out)
//! with an optional JSON sidecar carrying kind and scale, and two-column CSV.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::BudgetRow;
use crate::sensitivity::MitigationRow;
use crate::trace::{SampledTrace, TraceKind};

/// Metadata written next to a WAV file as `<file>.json`.
///
/// File samples equal physical values times `scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavSidecar {
    pub kind: String,
    pub unit: String,
    pub scale: f64,
    pub sample_rate: f64,
}

fn unit_of(kind: TraceKind) -> &'static str {
    match kind {
        TraceKind::AudioPressure => "Pa",
        TraceKind::Phase => "rad",
        TraceKind::Heterodyne | TraceKind::Baseband => "arb",
    }
}

fn kind_from_name(name: &str) -> Option<TraceKind> {
    [
        TraceKind::AudioPressure,
        TraceKind::Phase,
        TraceKind::Heterodyne,
        TraceKind::Baseband,
    ]
    .into_iter()
    .find(|k| k.name() == name)
}

pub fn sidecar_path(wav: &Path) -> PathBuf {
    let mut name = wav.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

/// Raw mono WAV contents as f64 in [−1, 1] (PCM) or as stored (float).
pub fn read_wav_samples(path: &Path) -> Result<(f64, Vec<f64>)> {
    let mut reader = hound::WavReader::open(path)?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(Error::input(format!(
            "{}: {} channels; only mono WAV is supported",
            path.display(),
            spec.channels
        )));
    }
    let samples = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Int, 16) => reader
            .samples::<i16>()
            .map(|s| s.map(|v| v as f64 / 32768.0))
            .collect::<Result<Vec<_>, _>>()?,
        (hound::SampleFormat::Float, 32) => reader
            .samples::<f32>()
            .map(|s| s.map(|v| v as f64))
            .collect::<Result<Vec<_>, _>>()?,
        (format, bits) => {
            return Err(Error::input(format!(
                "{}: unsupported WAV encoding {format:?}/{bits} bit (need PCM16 or float32)",
                path.display()
            )))
        }
    };
    Ok((spec.sample_rate as f64, samples))
}

/// Reads a WAV trace. A sidecar, when present, sets kind and undoes its scale;
/// otherwise the samples are taken as-is with `default_kind`.
pub fn read_wav(path: &Path, default_kind: TraceKind) -> Result<SampledTrace> {
    let (rate, mut samples) = read_wav_samples(path)?;
    let mut kind = default_kind;
    let side = sidecar_path(path);
    if side.exists() {
        let meta: WavSidecar = serde_json::from_reader(File::open(&side)?)
            .map_err(|e| Error::input(format!("{}: {e}", side.display())))?;
        kind = kind_from_name(&meta.kind).ok_or_else(|| {
            Error::input(format!("{}: unknown kind `{}`", side.display(), meta.kind))
        })?;
        if !(meta.scale.is_finite() && meta.scale != 0.0) {
            return Err(Error::input(format!(
                "{}: invalid scale {}",
                side.display(),
                meta.scale
            )));
        }
        samples.iter_mut().for_each(|v| *v /= meta.scale);
    }
    SampledTrace::new(kind, rate, samples)
}

/// Writes a float32 mono WAV of `trace · scale` and its sidecar.
pub fn write_wav(path: &Path, trace: &SampledTrace, scale: f64) -> Result<()> {
    let rate = trace.sample_rate();
    if rate.fract() != 0.0 || rate > u32::MAX as f64 {
        return Err(Error::input(format!(
            "WAV needs an integral sample rate, got {rate}"
        )));
    }
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: rate as u32,
        bits_per_sample: 32,
        sample_format: hound::SampleFormat::Float,
    };
    let mut writer = hound::WavWriter::create(path, spec)?;
    for &v in trace.samples() {
        writer.write_sample((v * scale) as f32)?;
    }
    writer.finalize()?;
    let meta = WavSidecar {
        kind: trace.kind().name().into(),
        unit: unit_of(trace.kind()).into(),
        scale,
        sample_rate: rate,
    };
    let mut f = BufWriter::new(File::create(sidecar_path(path))?);
    serde_json::to_writer_pretty(&mut f, &meta).map_err(std::io::Error::from)?;
    f.write_all(b"\n")?;
    Ok(())
}

/// Writes `time,value` rows with a header line.
pub fn write_csv(path: &Path, trace: &SampledTrace) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_io)?;
    w.write_record(["time", "value"]).map_err(csv_io)?;
    for (i, v) in trace.samples().iter().enumerate() {
        w.write_record([trace.time(i).to_string(), v.to_string()])
            .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::input(format!("csv: {other:?}")),
    }
}

/// Reads a `time,value` CSV; the sample rate comes from the time column.
pub fn read_csv(path: &Path, kind: TraceKind) -> Result<SampledTrace> {
    let mut r = csv::Reader::from_path(path).map_err(csv_io)?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let line = row + 2;
        let rec = rec.map_err(csv_io)?;
        let field = |i: usize| -> Result<f64> {
            rec.get(i)
                .ok_or_else(|| Error::Csv {
                    path: path.display().to_string(),
                    line,
                    reason: format!("missing column {}", i + 1),
                })?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Csv {
                    path: path.display().to_string(),
                    line,
                    reason: e.to_string(),
                })
        };
        times.push(field(0)?);
        values.push(field(1)?);
    }
    if times.len() < 2 {
        return Err(Error::input(format!(
            "{}: need at least two rows to infer the sample rate",
            path.display()
        )));
    }
    let span = times[times.len() - 1] - times[0];
    let mut rate = (times.len() - 1) as f64 / span;
    if (rate - rate.round()).abs() < 1e-6 * rate {
        rate = rate.round();
    }
    SampledTrace::new(kind, rate, values)
}

/// Reads a trace by extension: `.wav` or `.csv`.
pub fn read_trace(path: &Path, kind: TraceKind) -> Result<SampledTrace> {
    match extension(path).as_deref() {
        Some("wav") => read_wav(path, kind),
        Some("csv") => read_csv(path, kind),
        _ => Err(Error::input(format!(
            "{}: unsupported trace format (use .wav or .csv)",
            path.display()
        ))),
    }
}

/// Writes a trace by extension; WAV gets unit scale.
pub fn write_trace(path: &Path, trace: &SampledTrace) -> Result<()> {
    match extension(path).as_deref() {
        Some("wav") => write_wav(path, trace, 1.0),
        Some("csv") => write_csv(path, trace),
        _ => Err(Error::input(format!(
            "{}: unsupported trace format (use .wav or .csv)",
            path.display()
        ))),
    }
}

fn extension(path: &Path) -> Option<String> {
    path.extension()
        .map(|e| e.to_string_lossy().to_ascii_lowercase())
}

/// Detection-limit table: `x_value,thermal_rms_rad,laser_rms_rad,total_rms_rad,limit_db`.
pub fn write_budget_csv(path: &Path, rows: &[BudgetRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_io)?;
    w.write_record([
        "x_value",
        "thermal_rms_rad",
        "laser_rms_rad",
        "total_rms_rad",
        "limit_db",
    ])
    .map_err(csv_io)?;
    for r in rows {
        let b = &r.budget;
        w.write_record(
            [
                r.x,
                b.thermal_rms,
                b.laser_rms,
                b.total_rms,
                b.detection_limit_db,
            ]
            .map(|v| v.to_string()),
        )
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

/// Mitigation table, one row per scenario, baseline first.
pub fn write_mitigation_csv(path: &Path, rows: &[MitigationRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_io)?;
    for r in rows {
        w.serialize(r).map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}
