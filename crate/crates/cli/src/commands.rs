use std::path::{Path, PathBuf};

use serde::Serialize;

use fibertap_core::demod::{self, DemodConfig, RESAMPLE_STOPBAND_DB};
use fibertap_core::enhance::{self, EnhanceSummary, NoiseSource, SpectralSubtractParams};
use fibertap_core::io;
use fibertap_core::model::{self, PhaseNoise};
use fibertap_core::noise::{self, BudgetRow};
use fibertap_core::sensitivity::{self, MitigationRow};
use fibertap_core::{Config, SampledTrace, TraceKind};

use crate::args::*;
use crate::error::{file_error, CliError, CliResult, ExitStatus};
use crate::manifest::{manifest_path, with_suffix, write_json, RunManifest};

/// Executes a parsed command line and returns the files it wrote.
pub fn run(cli: Cli) -> CliResult<Vec<PathBuf>> {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Simulate(a) => simulate(cfg, &a),
        Command::Demod(a) => demod_cmd(cfg, &a),
        Command::Enhance(a) => enhance_cmd(cfg, &a),
        Command::Budget(a) => budget(cfg, &a),
        Command::Sensitivity(a) => sensitivity_cmd(cfg, &a),
        Command::Calibrate(a) => calibrate(cfg, &a),
        Command::Pipeline(a) => pipeline(cfg, &a),
    }
}

pub fn load_config(path: Option<&Path>) -> CliResult<Config> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| file_error(path)(e.into()))?;
    Config::from_toml(&text).map_err(|e| {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    })
}

fn revalidate(cfg: &Config) -> CliResult<()> {
    cfg.validate().map_err(|e| {
        let mut err = CliError::from(e);
        err.message = format!("after command-line overrides: {}", err.message);
        err
    })
}

fn read(path: &Path, kind: TraceKind) -> CliResult<SampledTrace> {
    io::read_trace(path, kind).map_err(file_error(path))
}

fn write(path: &Path, trace: &SampledTrace) -> CliResult<()> {
    io::write_trace(path, trace).map_err(file_error(path))
}

/// What a float32 WAV round trip leaves of `trace`.
fn as_stored(trace: &SampledTrace, path: &Path) -> CliResult<SampledTrace> {
    let is_wav = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("wav"));
    if !is_wav {
        return Ok(trace.clone());
    }
    let samples = trace.samples().iter().map(|&v| v as f32 as f64).collect();
    Ok(SampledTrace::new(
        trace.kind(),
        trace.sample_rate(),
        samples,
    )?)
}

fn apply_seed(cfg: &mut Config, seed: Option<u64>) {
    if let Some(s) = seed {
        cfg.simulate.seed = s;
    }
}

fn apply_level(cfg: &mut Config, level_db: Option<f64>) {
    if let Some(l) = level_db {
        cfg.simulate.level_db = l;
    }
}

fn apply_demod(cfg: &mut Config, o: &DemodOverrides) {
    let d = &mut cfg.demod;
    if let Some(v) = o.beat_frequency {
        d.beat_frequency = v;
    }
    if let Some(v) = o.lowpass_cutoff {
        d.lowpass_cutoff = v;
    }
    if let Some(v) = o.highpass_cutoff {
        d.highpass_cutoff = v;
    }
    if let Some(v) = o.audio_rate {
        d.audio_rate = v;
    }
}

fn apply_enhance(cfg: &mut Config, o: &EnhanceOverrides) {
    let e = &mut cfg.enhance;
    if let Some(v) = o.oversubtraction {
        e.oversubtraction = v;
    }
    if let Some(v) = o.spectral_floor {
        e.spectral_floor = v;
    }
    if let Some(v) = o.silence_threshold_db {
        e.silence_threshold_db = v;
    }
}

/// Rescales a recording to the configured sound level and resamples it to
/// the interferometer rate.
pub fn prepare_voice(cfg: &Config, audio: &SampledTrace) -> CliResult<SampledTrace> {
    let rms = audio.rms();
    if !(rms > 0.0) {
        return Err(CliError::new(
            ExitStatus::Numeric,
            "input recording is silent",
        ));
    }
    let target_rms = cfg.coupling.spl_to_pressure(cfg.simulate.level_db) / 2f64.sqrt();
    let pressure = SampledTrace::audio(
        audio.sample_rate(),
        audio
            .samples()
            .iter()
            .map(|v| v * target_rms / rms)
            .collect(),
    )?;
    let fs = cfg.interferometer.sample_rate;
    let pass = cfg.band.f_high.min(0.45 * fs.min(audio.sample_rate()));
    Ok(demod::resample(&pressure, fs, pass, RESAMPLE_STOPBAND_DB)?)
}

/// Pressure trace at the interferometer rate -> heterodyne record.
pub fn heterodyne(
    cfg: &Config,
    pressure: &SampledTrace,
    no_noise: bool,
) -> CliResult<SampledTrace> {
    let ifm = cfg.interferometer();
    let phase = model::voice_to_phase(pressure, &cfg.coupling, ifm.sensing_length)?;
    let noise = if no_noise {
        PhaseNoise::Off
    } else {
        PhaseNoise::Synthesized(cfg.noise)
    };
    Ok(model::synthesize_heterodyne(
        &ifm,
        &phase,
        noise,
        cfg.simulate.seed,
    )?)
}

fn simulate(mut cfg: Config, a: &SimulateArgs) -> CliResult<Vec<PathBuf>> {
    apply_seed(&mut cfg, a.seed);
    apply_level(&mut cfg, a.level_db);
    revalidate(&cfg)?;
    let mut m = RunManifest::new("simulate", &cfg, cfg.simulate.seed);
    let audio = m.stage("read", || read(&a.input, TraceKind::AudioPressure))?;
    let pressure = m.stage("prepare_voice", || prepare_voice(&cfg, &audio))?;
    let het = m.stage("synthesize", || heterodyne(&cfg, &pressure, a.no_noise))?;
    m.stage("write", || write(&a.out, &het))?;
    finish(m, vec![a.input.clone()], vec![a.out.clone()])
}

fn finish(
    mut m: RunManifest,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
) -> CliResult<Vec<PathBuf>> {
    let path = manifest_path(&outputs[0]);
    m.inputs = inputs;
    m.outputs = outputs;
    m.write(&path)?;
    let mut written = m.outputs;
    written.push(path);
    Ok(written)
}

/// Full-rate phase (high-passed unless disabled) and the resampled audio.
pub fn demodulate(
    het: &SampledTrace,
    cfg: &DemodConfig,
    highpass: bool,
    m: &mut RunManifest,
) -> CliResult<(SampledTrace, SampledTrace)> {
    cfg.validate(het.sample_rate())?;
    let baseband = m.stage("iq_demodulate", || Ok(demod::iq_demodulate(het, cfg)?))?;
    let mut phase = m.stage("unwrap", || Ok(demod::unwrap_phase(&baseband)?))?;
    if highpass && cfg.highpass_cutoff > 0.0 {
        phase = m.stage("highpass", || {
            Ok(demod::highpass(
                &phase,
                cfg.highpass_cutoff,
                cfg.filter_order,
            )?)
        })?;
    }
    let audio = m.stage("decimate", || {
        Ok(demod::decimate_to_audio(&phase, cfg.audio_rate)?)
    })?;
    Ok((phase, audio))
}

fn demod_cmd(mut cfg: Config, a: &DemodArgs) -> CliResult<Vec<PathBuf>> {
    apply_demod(&mut cfg, &a.overrides);
    let mut m = RunManifest::new("demod", &cfg, cfg.simulate.seed);
    let het = m.stage("read", || read(&a.input, TraceKind::Heterodyne))?;
    let (phase, audio) = demodulate(&het, &cfg.demod, !a.overrides.no_highpass, &mut m)?;
    let mut outputs = vec![a.out.clone()];
    m.stage("write", || {
        io::write_wav(&a.out, &audio, 1.0).map_err(file_error(&a.out))?;
        if let Some(p) = &a.phase_out {
            io::write_csv(p, &phase).map_err(file_error(p))?;
            outputs.push(p.clone());
        }
        Ok(())
    })?;
    finish(m, vec![a.input.clone()], outputs)
}

#[derive(Debug, Clone, Serialize)]
pub struct SegSnr {
    pub input_db: f64,
    pub output_db: f64,
    pub gain_db: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnhanceReport {
    pub sample_rate: f64,
    pub frame_length: usize,
    pub hop: usize,
    pub frames: usize,
    pub silent_frames: Option<usize>,
    pub noise_source: NoiseSource,
    pub segmental_snr: Option<SegSnr>,
}

/// Runs spectral subtraction and, with a reference, scores input and output.
pub fn enhance_trace(
    noisy: &SampledTrace,
    params: &SpectralSubtractParams,
    profile: Option<&SampledTrace>,
    reference: Option<&SampledTrace>,
    m: &mut RunManifest,
) -> CliResult<(SampledTrace, EnhanceReport)> {
    let (out, summary): (SampledTrace, EnhanceSummary) = m.stage("spectral_subtract", || {
        Ok(enhance::enhance(noisy, params, profile)?)
    })?;
    let segmental_snr = match reference {
        None => None,
        Some(r) => m.stage("segmental_snr", || {
            let input_db = enhance::segmental_snr(noisy, r, params.frame_length)?;
            let output_db = enhance::segmental_snr(&out, r, params.frame_length)?;
            Ok(Some(SegSnr {
                input_db,
                output_db,
                gain_db: output_db - input_db,
            }))
        })?,
    };
    let report = EnhanceReport {
        sample_rate: noisy.sample_rate(),
        frame_length: params.frame_length,
        hop: params.hop,
        frames: summary.frames,
        silent_frames: summary.silent_frames,
        noise_source: summary.noise_source,
        segmental_snr,
    };
    Ok((out, report))
}

fn read_optional(path: Option<&PathBuf>, kind: TraceKind) -> CliResult<Option<SampledTrace>> {
    path.map(|p| read(p, kind)).transpose()
}

fn enhance_cmd(mut cfg: Config, a: &EnhanceArgs) -> CliResult<Vec<PathBuf>> {
    apply_enhance(&mut cfg, &a.overrides);
    revalidate(&cfg)?;
    let mut m = RunManifest::new("enhance", &cfg, cfg.simulate.seed);
    let o = &a.overrides;
    let (noisy, profile, reference) = m.stage("read", || {
        let noisy = read(&a.input, TraceKind::Phase)?;
        let kind = noisy.kind();
        Ok((
            noisy,
            read_optional(o.noise_profile.as_ref(), kind)?,
            read_optional(o.reference.as_ref(), kind)?,
        ))
    })?;
    let params = cfg.enhance.params(noisy.sample_rate())?;
    let (out, report) = enhance_trace(
        &noisy,
        &params,
        profile.as_ref(),
        reference.as_ref(),
        &mut m,
    )?;
    let report_path = a
        .report
        .clone()
        .unwrap_or_else(|| with_suffix(&a.out, ".report.json"));
    m.stage("write", || {
        io::write_wav(&a.out, &out, 1.0).map_err(file_error(&a.out))?;
        write_json(&report_path, &report)
    })?;
    let inputs = [
        Some(&a.input),
        o.noise_profile.as_ref(),
        o.reference.as_ref(),
    ]
    .into_iter()
    .flatten()
    .cloned()
    .collect();
    finish(m, inputs, vec![a.out.clone(), report_path])
}

/// Sweep grid: logarithmic when it starts above zero, linear otherwise.
pub fn sweep_points(from: f64, to: f64, points: usize) -> CliResult<Vec<f64>> {
    if !(from.is_finite() && to.is_finite() && from >= 0.0 && to >= from) {
        return Err(CliError::new(
            ExitStatus::Config,
            format!("sweep range must satisfy 0 <= from <= to, got [{from}, {to}]"),
        ));
    }
    if points == 0 {
        return Err(CliError::new(
            ExitStatus::Config,
            "--points must be positive",
        ));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    let step = 1.0 / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let t = i as f64 * step;
            if i == points - 1 {
                to
            } else if from > 0.0 {
                from * (to / from).powf(t)
            } else {
                from + (to - from) * t
            }
        })
        .collect())
}

#[derive(Debug, Serialize)]
struct BudgetJsonRow {
    x_value: f64,
    thermal_rms_rad: f64,
    laser_rms_rad: f64,
    total_rms_rad: f64,
    limit_db: f64,
}

pub fn budget_rows(cfg: &Config, sweep: Sweep, xs: &[f64]) -> CliResult<Vec<BudgetRow>> {
    let setup = cfg.budget_setup();
    Ok(match sweep {
        Sweep::Length => noise::detection_limit_vs_length(&setup, xs)?,
        Sweep::Mismatch => noise::detection_limit_vs_mismatch(&setup, xs)?,
    })
}

fn budget(cfg: Config, a: &BudgetArgs) -> CliResult<Vec<PathBuf>> {
    let b = &cfg.budget;
    let (from, to) = match a.sweep {
        Sweep::Length => (b.length_from, b.length_to),
        Sweep::Mismatch => (b.mismatch_from, b.mismatch_to),
    };
    let xs = sweep_points(
        a.from.unwrap_or(from),
        a.to.unwrap_or(to),
        a.points.unwrap_or(b.points),
    )?;
    let mut m = RunManifest::new("budget", &cfg, cfg.simulate.seed);
    let rows = m.stage("sweep", || budget_rows(&cfg, a.sweep, &xs))?;
    m.stage("write", || match a.format {
        Format::Csv => io::write_budget_csv(&a.out, &rows).map_err(file_error(&a.out)),
        Format::Json => {
            let flat: Vec<_> = rows
                .iter()
                .map(|r| BudgetJsonRow {
                    x_value: r.x,
                    thermal_rms_rad: r.budget.thermal_rms,
                    laser_rms_rad: r.budget.laser_rms,
                    total_rms_rad: r.budget.total_rms,
                    limit_db: r.budget.detection_limit_db,
                })
                .collect();
            write_json(&a.out, &flat)
        }
    })?;
    finish(m, Vec::new(), vec![a.out.clone()])
}

#[derive(Debug, Serialize)]
pub struct SensitivitySummary {
    pub baseline: String,
    pub test_level_db: f64,
    pub coupling_sensitivity: f64,
    pub rows: Vec<MitigationRow>,
}

pub fn mitigation_summary(cfg: &Config) -> CliResult<SensitivitySummary> {
    let (base, variants) = cfg.mitigation_scenarios()?;
    let rows = sensitivity::compare_mitigations(
        &base,
        &variants,
        &cfg.coupling,
        cfg.sensitivity.test_level_db,
    )?;
    Ok(SensitivitySummary {
        baseline: base.label,
        test_level_db: cfg.sensitivity.test_level_db,
        coupling_sensitivity: cfg.coupling.sensitivity,
        rows,
    })
}

fn sensitivity_cmd(mut cfg: Config, a: &SensitivityArgs) -> CliResult<Vec<PathBuf>> {
    if let Some(l) = a.level_db {
        cfg.sensitivity.test_level_db = l;
    }
    let mut m = RunManifest::new("sensitivity", &cfg, cfg.simulate.seed);
    let summary = m.stage("compare", || mitigation_summary(&cfg))?;
    let mut outputs = vec![a.out.clone()];
    m.stage("write", || match a.format {
        Format::Json => write_json(&a.out, &summary),
        Format::Csv => {
            io::write_mitigation_csv(&a.out, &summary.rows).map_err(file_error(&a.out))?;
            let path = with_suffix(&a.out, ".summary.json");
            write_json(&path, &summary)?;
            outputs.push(path);
            Ok(())
        }
    })?;
    finish(m, Vec::new(), outputs)
}

fn calibrate(cfg: Config, a: &CalibrateArgs) -> CliResult<Vec<PathBuf>> {
    let fresh = cfg.recalibrated()?;
    println!("coupling.sensitivity = {:?}", fresh.coupling.sensitivity);
    println!("laser.flicker_coeff = {:?}", fresh.laser.flicker_coeff);
    match &a.out {
        None => Ok(Vec::new()),
        Some(path) => {
            std::fs::write(path, fresh.to_toml()).map_err(|e| file_error(path)(e.into()))?;
            Ok(vec![path.clone()])
        }
    }
}

fn pipeline(mut cfg: Config, a: &PipelineArgs) -> CliResult<Vec<PathBuf>> {
    apply_seed(&mut cfg, a.seed);
    apply_level(&mut cfg, a.level_db);
    apply_demod(&mut cfg, &a.demod);
    apply_enhance(&mut cfg, &a.enhance);
    revalidate(&cfg)?;
    std::fs::create_dir_all(&a.out).map_err(|e| file_error(&a.out)(e.into()))?;
    let het_path = a.out.join("heterodyne.wav");
    let recovered_path = a.out.join("recovered.wav");
    let enhanced_path = a.out.join("enhanced.wav");
    let report_path = a.out.join("enhance_report.json");

    let mut m = RunManifest::new("pipeline", &cfg, cfg.simulate.seed);
    let o = &a.enhance;
    let (audio, profile, reference) = m.stage("read", || {
        Ok((
            read(&a.input, TraceKind::AudioPressure)?,
            read_optional(o.noise_profile.as_ref(), TraceKind::Phase)?,
            read_optional(o.reference.as_ref(), TraceKind::Phase)?,
        ))
    })?;
    let pressure = m.stage("prepare_voice", || prepare_voice(&cfg, &audio))?;
    let het = m.stage("synthesize", || heterodyne(&cfg, &pressure, a.no_noise))?;
    // Later stages see exactly what the intermediate files hold.
    let het = as_stored(&het, &het_path)?;
    let (_, recovered) = demodulate(&het, &cfg.demod, !a.demod.no_highpass, &mut m)?;
    let recovered = as_stored(&recovered, &recovered_path)?;
    let params = cfg.enhance.params(recovered.sample_rate())?;
    let (enhanced, report) = enhance_trace(
        &recovered,
        &params,
        profile.as_ref(),
        reference.as_ref(),
        &mut m,
    )?;
    m.stage("write", || {
        write(&het_path, &het)?;
        io::write_wav(&recovered_path, &recovered, 1.0).map_err(file_error(&recovered_path))?;
        io::write_wav(&enhanced_path, &enhanced, 1.0).map_err(file_error(&enhanced_path))?;
        write_json(&report_path, &report)
    })?;
    let inputs = [
        Some(&a.input),
        o.noise_profile.as_ref(),
        o.reference.as_ref(),
    ]
    .into_iter()
    .flatten()
    .cloned()
    .collect();
    finish(
        m,
        inputs,
        vec![enhanced_path, het_path, recovered_path, report_path],
    )
}
