//! Forward optical model: sound pressure on the tail fiber, the phase it
//! imprints, and the photodiode beat note of the heterodyne interferometer.
//!
//! The reflected probe (amplitude α relative to the reference) beats against
//! the reference arm. With E₀² = 1 the photocurrent is
//!
//! ```text
//! I(t) = (1 + α²) + 2α·cos(2π·f_IF·t + φ_voice(t) + φ_noise(t) + φ_c)
//! ```
//!
//! where `f_IF` is the beat frequency as it appears in the sampled record and
//! `φ_c` lumps every static phase term (propagation delay of the carrier,
//! static arm lengths, initial phase).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{self, AudioBand};
use crate::trace::{SampledTrace, TraceKind};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Standard reference pressure for dB SPL, Pa.
pub const SPL_REFERENCE: f64 = 20e-6;

/// Optical carrier and its frequency-noise model `S(f) = S₀ + k/f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaserSpec {
    /// Vacuum wavelength, m.
    pub wavelength: f64,
    /// Lorentzian FWHM linewidth, Hz.
    pub linewidth: f64,
    /// White part of the one-sided frequency-noise PSD, rad²/s²/Hz.
    pub white_freq_psd: f64,
    /// Flicker coefficient of the frequency-noise PSD, rad²/s².
    pub flicker_coeff: f64,
}

impl LaserSpec {
    /// Angular optical frequency 2πc/λ, rad/s.
    pub fn center_frequency(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.wavelength
    }

    /// White frequency-noise level of a Lorentzian line: S₀ = 4π·Δν.
    pub fn lorentzian_white_psd(linewidth: f64) -> f64 {
        4.0 * PI * linewidth
    }

    /// One-sided frequency-noise PSD at `f`, rad²/s²/Hz.
    pub fn frequency_noise_psd(&self, f: f64) -> f64 {
        self.white_freq_psd + self.flicker_coeff / f
    }

    pub fn validate(&self) -> Result<()> {
        positive("laser.wavelength", self.wavelength)?;
        non_negative("laser.linewidth", self.linewidth)?;
        non_negative("laser.white_freq_psd", self.white_freq_psd)?;
        non_negative("laser.flicker_coeff", self.flicker_coeff)
    }
}

/// Material constants and length of one fiber arm for the thermal-noise model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberSpec {
    /// m
    pub length: f64,
    pub refractive_index: f64,
    /// Bulk modulus times cross-sectional area, N. Only the product enters the
    /// thermal PSD, and it is preserved when the coating is swapped.
    pub bulk_modulus_area_product: f64,
    /// Mechanical loss angle γ₀.
    pub loss_angle: f64,
    /// K
    pub temperature: f64,
}

impl FiberSpec {
    pub fn with_length(&self, length: f64) -> Self {
        Self { length, ..*self }
    }

    pub fn validate(&self, prefix: &str) -> Result<()> {
        non_negative(&format!("{prefix}.length"), self.length)?;
        if !(self.refractive_index.is_finite() && self.refractive_index > 1.0) {
            return Err(Error::config(
                format!("{prefix}.refractive_index"),
                format!("must exceed 1, got {}", self.refractive_index),
            ));
        }
        positive(
            &format!("{prefix}.bulk_modulus_area_product"),
            self.bulk_modulus_area_product,
        )?;
        positive(&format!("{prefix}.loss_angle"), self.loss_angle)?;
        positive(&format!("{prefix}.temperature"), self.temperature)
    }
}

/// Linear pressure-to-phase transduction of the sensing fiber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcousticCoupling {
    /// rad per Pa per meter of sensing fiber.
    pub sensitivity: f64,
    /// dB SPL reference pressure, Pa.
    #[serde(default = "default_spl_reference")]
    pub spl_reference: f64,
}

fn default_spl_reference() -> f64 {
    SPL_REFERENCE
}

impl AcousticCoupling {
    pub fn new(sensitivity: f64) -> Self {
        Self {
            sensitivity,
            spl_reference: SPL_REFERENCE,
        }
    }

    /// Pressure amplitude for a sound level in dB SPL.
    pub fn spl_to_pressure(&self, level_db: f64) -> f64 {
        self.spl_reference * 10f64.powf(level_db / 20.0)
    }

    /// Inverse of [`spl_to_pressure`](Self::spl_to_pressure).
    pub fn pressure_to_spl(&self, pressure: f64) -> f64 {
        20.0 * (pressure / self.spl_reference).log10()
    }

    /// RMS phase of a sine tone at `level_db` acting on `sensing_length` of fiber.
    pub fn tone_rms_phase(&self, level_db: f64, sensing_length: f64) -> f64 {
        self.sensitivity * sensing_length * self.spl_to_pressure(level_db) / 2f64.sqrt()
    }

    /// Sound level whose sine-equivalent RMS phase on `sensing_length` equals `rms_phase`.
    pub fn level_for_rms_phase(&self, rms_phase: f64, sensing_length: f64) -> f64 {
        let amplitude = rms_phase * 2f64.sqrt() / (self.sensitivity * sensing_length);
        self.pressure_to_spl(amplitude)
    }

    pub fn validate(&self) -> Result<()> {
        positive("coupling.sensitivity", self.sensitivity)?;
        positive("coupling.spl_reference", self.spl_reference)
    }
}

/// dB SPL to pressure amplitude against the standard 20 µPa reference.
pub fn spl_to_pressure(level_db: f64) -> f64 {
    AcousticCoupling::new(1.0).spl_to_pressure(level_db)
}

/// Geometry and acquisition parameters of the heterodyne interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferometerConfig {
    pub laser: LaserSpec,
    pub detect_fiber: FiberSpec,
    pub reference_fiber: FiberSpec,
    /// Indoor tail fiber exposed to sound, m.
    pub sensing_length: f64,
    /// AOM frequency shift, Hz.
    pub aom_shift: f64,
    /// Field amplitude ratio α of the echo; power reflectivity is α².
    pub reflection_amplitude: f64,
    /// Beat frequency as represented in the sampled record, Hz.
    pub intermediate_frequency: f64,
    pub sample_rate: f64,
    /// Static phase φ_c, rad.
    #[serde(default)]
    pub initial_phase: f64,
}

impl InterferometerConfig {
    /// Echo amplitude for a given power reflectivity (4 % PC end face → 0.2).
    pub fn amplitude_from_reflectivity(reflectivity: f64) -> f64 {
        reflectivity.sqrt()
    }

    /// |L_ref − 2·L_detect|: the probe travels the detecting arm twice.
    pub fn arm_mismatch(&self) -> f64 {
        (self.reference_fiber.length - 2.0 * self.detect_fiber.length).abs()
    }

    /// Delay τ₀ between the two interfering beams, s.
    pub fn delay(&self) -> f64 {
        noise::mismatch_to_delay(self.arm_mismatch(), self.detect_fiber.refractive_index)
    }

    /// Checks every invariant. A beat frequency outside (0, fs/2) is reported
    /// as [`Error::Nyquist`], everything else as [`Error::Config`].
    pub fn validate(&self) -> Result<()> {
        self.laser.validate()?;
        self.detect_fiber.validate("interferometer.detect_fiber")?;
        self.reference_fiber
            .validate("interferometer.reference_fiber")?;
        positive("interferometer.sample_rate", self.sample_rate)?;
        non_negative("interferometer.aom_shift", self.aom_shift)?;
        if !(0.0..=1.0).contains(&self.reflection_amplitude) {
            return Err(Error::config(
                "interferometer.reflection_amplitude",
                format!("must lie in [0, 1], got {}", self.reflection_amplitude),
            ));
        }
        non_negative("interferometer.sensing_length", self.sensing_length)?;
        if self.sensing_length > self.detect_fiber.length {
            return Err(Error::config(
                "interferometer.sensing_length",
                format!(
                    "{} m exceeds the detecting arm length {} m",
                    self.sensing_length, self.detect_fiber.length
                ),
            ));
        }
        if !self.initial_phase.is_finite() {
            return Err(Error::config(
                "interferometer.initial_phase",
                "must be finite",
            ));
        }
        let nyquist = self.sample_rate / 2.0;
        if !(self.intermediate_frequency > 0.0 && self.intermediate_frequency < nyquist) {
            return Err(Error::Nyquist {
                keys: "interferometer.intermediate_frequency / interferometer.sample_rate".into(),
                frequency: self.intermediate_frequency,
                nyquist,
            });
        }
        Ok(())
    }
}

/// Phase noise added on top of the voice phase during synthesis.
#[derive(Debug, Clone, Copy)]
pub enum PhaseNoise<'a> {
    Off,
    /// A precomputed noise trace at the configured sample rate.
    Trace(&'a SampledTrace),
    /// Synthesize thermal noise of both arms plus delayed laser frequency noise.
    Synthesized(NoiseModel),
}

/// Which noise terms the simulator realizes and how the 1/f divergence is tamed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    pub thermal: bool,
    pub laser: bool,
    /// Target PSD is held constant below this frequency, Hz.
    pub flatten_below: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            thermal: true,
            laser: true,
            flatten_below: AudioBand::default().f_low / 10.0,
        }
    }
}

impl NoiseModel {
    /// One-sided phase-noise PSD of the configured interferometer, rad²/Hz.
    pub fn psd(&self, config: &InterferometerConfig, f: f64) -> f64 {
        let mut s = 0.0;
        if self.thermal {
            let wl = config.laser.wavelength;
            s += noise::thermal_psd(&config.detect_fiber, wl, f).unwrap_or(0.0);
            s += noise::thermal_psd(&config.reference_fiber, wl, f).unwrap_or(0.0);
        }
        if self.laser {
            s += noise::laser_phase_psd_full(&config.laser, config.delay(), f).unwrap_or(0.0);
        }
        s
    }

    /// Noise phase trace of `n_samples` at the interferometer's sample rate.
    pub fn synthesize(
        &self,
        config: &InterferometerConfig,
        n_samples: usize,
        seed: u64,
    ) -> Result<SampledTrace> {
        noise::synthesize_colored_noise(
            |f| self.psd(config, f),
            n_samples,
            config.sample_rate,
            self.flatten_below,
            seed,
        )
    }
}

/// Phase imprinted on the sensing fiber by an acoustic pressure record.
pub fn voice_to_phase(
    audio: &SampledTrace,
    coupling: &AcousticCoupling,
    sensing_length: f64,
) -> Result<SampledTrace> {
    audio.expect_kind(TraceKind::AudioPressure)?;
    if !(sensing_length.is_finite() && sensing_length >= 0.0) {
        return Err(Error::input(format!(
            "sensing length must be non-negative, got {sensing_length}"
        )));
    }
    let gain = coupling.sensitivity * sensing_length;
    SampledTrace::phase(
        audio.sample_rate(),
        audio.samples().iter().map(|p| gain * p).collect(),
    )
}

/// Photodiode record for the given voice phase, with E₀² normalized to 1.
///
/// The output has the length of `voice_phase`. A supplied noise trace must
/// match it in length and sample rate; synthesized noise is seeded from `seed`.
pub fn synthesize_heterodyne(
    config: &InterferometerConfig,
    voice_phase: &SampledTrace,
    noise: PhaseNoise<'_>,
    seed: u64,
) -> Result<SampledTrace> {
    config.validate()?;
    voice_phase.expect_kind(TraceKind::Phase)?;
    if voice_phase.sample_rate() != config.sample_rate {
        return Err(Error::input(format!(
            "voice phase sampled at {} Hz, interferometer at {} Hz",
            voice_phase.sample_rate(),
            config.sample_rate
        )));
    }
    let n = voice_phase.len();
    let synthesized;
    let noise_samples: Option<&[f64]> = match noise {
        PhaseNoise::Off => None,
        PhaseNoise::Trace(trace) => {
            trace.expect_kind(TraceKind::Phase)?;
            if trace.sample_rate() != config.sample_rate || trace.len() != n {
                return Err(Error::input(format!(
                    "noise trace ({} samples at {} Hz) does not match voice trace ({} samples at {} Hz)",
                    trace.len(),
                    trace.sample_rate(),
                    n,
                    config.sample_rate
                )));
            }
            Some(trace.samples())
        }
        PhaseNoise::Synthesized(model) => {
            synthesized = if n >= 2 {
                Some(model.synthesize(config, n, seed)?)
            } else {
                None
            };
            synthesized.as_ref().map(|t| t.samples())
        }
    };

    let alpha = config.reflection_amplitude;
    let offset = 1.0 + alpha * alpha;
    let beat = 2.0 * alpha;
    let cycles_per_sample = config.intermediate_frequency / config.sample_rate;
    let samples = voice_phase
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &phi)| {
            // Reduce the carrier phase modulo one cycle before scaling by 2π so
            // long records keep full precision.
            let carrier = 2.0 * PI * (cycles_per_sample * i as f64).fract();
            let extra = noise_samples.map_or(0.0, |s| s[i]);
            offset + beat * (carrier + phi + extra + config.initial_phase).cos()
        })
        .collect();
    SampledTrace::heterodyne(config.sample_rate, samples)
}

fn positive(key: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::config(key, format!("must be positive, got {value}")))
    }
}

fn non_negative(key: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::config(
            key,
            format!("must be non-negative, got {value}"),
        ))
    }
}
