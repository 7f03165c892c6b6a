use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Fiber-tap acoustic eavesdropping simulator.
#[derive(Debug, Parser)]
#[command(name = "fibertap", version, about)]
pub struct Cli {
    /// TOML configuration; the built-in defaults are used when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Voice recording -> photodiode heterodyne trace.
    Simulate(SimulateArgs),
    /// Heterodyne trace -> recovered audio (phase, rad).
    Demod(DemodArgs),
    /// Spectral-subtraction speech enhancement.
    Enhance(EnhanceArgs),
    /// Detection limit versus fiber length or arm mismatch.
    Budget(BudgetArgs),
    /// Compare mitigation scenarios from the config file.
    Sensitivity(SensitivityArgs),
    /// Recompute the calibrated coupling sensitivity and flicker coefficient.
    Calibrate(CalibrateArgs),
    /// simulate -> demod -> enhance in one run.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Mono WAV or CSV recording; it is rescaled to --level-db.
    pub input: PathBuf,
    /// Heterodyne trace, .wav (float32) or .csv.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sine-equivalent sound level of the recording, dB SPL.
    #[arg(long, allow_negative_numbers = true)]
    pub level_db: Option<f64>,
    /// Disable thermal and laser phase noise.
    #[arg(long)]
    pub no_noise: bool,
}

#[derive(Debug, Args, Default)]
pub struct DemodOverrides {
    #[arg(long)]
    pub beat_frequency: Option<f64>,
    #[arg(long)]
    pub lowpass_cutoff: Option<f64>,
    #[arg(long)]
    pub highpass_cutoff: Option<f64>,
    #[arg(long)]
    pub audio_rate: Option<f64>,
    /// Skip the high-pass stage.
    #[arg(long)]
    pub no_highpass: bool,
}

#[derive(Debug, Args)]
pub struct DemodArgs {
    /// Heterodyne trace, .wav or .csv.
    pub input: PathBuf,
    /// Recovered audio WAV at the configured audio rate.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the full-rate phase trace as CSV.
    #[arg(long)]
    pub phase_out: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: DemodOverrides,
}

#[derive(Debug, Args, Default)]
pub struct EnhanceOverrides {
    #[arg(long)]
    pub oversubtraction: Option<f64>,
    #[arg(long)]
    pub spectral_floor: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub silence_threshold_db: Option<f64>,
    /// Noise-only recording; replaces silent-frame detection.
    #[arg(long)]
    pub noise_profile: Option<PathBuf>,
    /// Clean reference for segmental-SNR reporting.
    #[arg(long)]
    pub reference: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnhanceArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// JSON report; defaults to `<out>.report.json`.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: EnhanceOverrides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sweep {
    Length,
    Mismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[arg(long, value_enum)]
    pub sweep: Sweep,
    /// First swept value, m.
    #[arg(long)]
    pub from: Option<f64>,
    /// Last swept value, m.
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Test tone level, dB SPL.
    #[arg(long, allow_negative_numbers = true)]
    pub level_db: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Write the recalibrated configuration here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    pub input: PathBuf,
    /// Directory for heterodyne.wav, recovered.wav, enhanced.wav and reports.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    pub level_db: Option<f64>,
    #[arg(long)]
    pub no_noise: bool,
    #[command(flatten)]
    pub demod: DemodOverrides,
    #[command(flatten)]
    pub enhance: EnhanceOverrides,
}
