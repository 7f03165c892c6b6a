//! The run configuration: every physical constant and processing parameter,
//! loaded from one TOML file.
//!
//! The built-in defaults live in `config/default.toml`. Two of its numbers are
//! calibrated rather than measured: the acoustic coupling sensitivity (so a
//! 30 dB SPL tone matches the thermal noise of a 3 km detecting arm) and the
//! laser flicker coefficient (so a 100 m arm mismatch limits detection at
//! 60 dB). [`Config::recalibrated`] recomputes both from the `[calibration]`
//! anchors.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::demod::DemodConfig;
use crate::enhance::{SpectralSubtractParams, Window};
use crate::error::{Error, Result};
use crate::model::{AcousticCoupling, FiberSpec, InterferometerConfig, LaserSpec, NoiseModel};
use crate::noise::{self, AudioBand, BudgetSetup};
use crate::sensitivity::{MitigationScenario, PhotoelasticSpec};

/// Contents of the built-in default configuration file.
pub const DEFAULT_CONFIG: &str = include_str!("../config/default.toml");

/// Fiber material constants shared by both interferometer arms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberMaterial {
    pub refractive_index: f64,
    pub bulk_modulus_area_product: f64,
    pub loss_angle: f64,
    pub temperature: f64,
}

impl FiberMaterial {
    pub fn fiber(&self, length: f64) -> FiberSpec {
        FiberSpec {
            length,
            refractive_index: self.refractive_index,
            bulk_modulus_area_product: self.bulk_modulus_area_product,
            loss_angle: self.loss_angle,
            temperature: self.temperature,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferometerSection {
    /// m; the probe travels this arm twice.
    pub detect_length: f64,
    /// m
    pub reference_length: f64,
    pub sensing_length: f64,
    pub aom_shift: f64,
    pub reflection_amplitude: f64,
    pub intermediate_frequency: f64,
    pub sample_rate: f64,
    #[serde(default)]
    pub initial_phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    /// Sound level of the input audio, dB SPL (sine-equivalent RMS).
    pub level_db: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSection {
    pub snr_threshold_db: f64,
    pub include_thermal: bool,
    pub length_from: f64,
    pub length_to: f64,
    pub mismatch_from: f64,
    pub mismatch_to: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationSection {
    /// Detecting-arm length whose thermal RMS defines the anchor level, m.
    pub thermal_anchor_length: f64,
    pub thermal_anchor_level_db: f64,
    /// Arm mismatch at which the laser-noise limit is pinned, m.
    pub mismatch_anchor: f64,
    pub mismatch_anchor_level_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnhanceSection {
    /// s
    pub frame_duration: f64,
    /// Fraction of a frame shared with the next one.
    pub overlap: f64,
    pub oversubtraction: f64,
    pub spectral_floor: f64,
    pub silence_threshold_db: f64,
}

impl EnhanceSection {
    /// Frame parameters at `sample_rate`; the frame length is rounded to even.
    pub fn params(&self, sample_rate: f64) -> Result<SpectralSubtractParams> {
        let frame = 2 * ((self.frame_duration * sample_rate / 2.0).round() as usize);
        let hop = ((frame as f64) * (1.0 - self.overlap)).round() as usize;
        let params = SpectralSubtractParams {
            frame_length: frame,
            hop,
            window: Window::Hann,
            oversubtraction: self.oversubtraction,
            spectral_floor: self.spectral_floor,
            silence_threshold_db: self.silence_threshold_db,
        };
        params.validate()?;
        Ok(params)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensitivitySection {
    pub test_level_db: f64,
    /// Label of the scenario every other one is compared against.
    pub baseline: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub laser: LaserSpec,
    pub fiber: FiberMaterial,
    pub interferometer: InterferometerSection,
    pub coupling: AcousticCoupling,
    pub noise: NoiseModel,
    pub band: AudioBand,
    pub budget: BudgetSection,
    pub calibration: CalibrationSection,
    pub simulate: SimulateSection,
    pub demod: DemodConfig,
    pub enhance: EnhanceSection,
    pub photoelastic: PhotoelasticSpec,
    pub sensitivity: SensitivitySection,
    #[serde(default)]
    pub scenarios: Vec<MitigationScenario>,
}

impl Default for Config {
    fn default() -> Self {
        Self::from_toml(DEFAULT_CONFIG).expect("built-in default configuration is valid")
    }
}

impl Config {
    /// Parses and validates a configuration document.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Canonical serialization, used for digests.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn interferometer(&self) -> InterferometerConfig {
        let i = &self.interferometer;
        InterferometerConfig {
            laser: self.laser,
            detect_fiber: self.fiber.fiber(i.detect_length),
            reference_fiber: self.fiber.fiber(i.reference_length),
            sensing_length: i.sensing_length,
            aom_shift: i.aom_shift,
            reflection_amplitude: i.reflection_amplitude,
            intermediate_frequency: i.intermediate_frequency,
            sample_rate: i.sample_rate,
            initial_phase: i.initial_phase,
        }
    }

    pub fn budget_setup(&self) -> BudgetSetup {
        BudgetSetup {
            laser: self.laser,
            fiber: self.fiber.fiber(self.interferometer.detect_length),
            coupling: self.coupling,
            sensing_length: self.interferometer.sensing_length,
            band: self.band,
            snr_threshold_db: self.budget.snr_threshold_db,
            include_thermal: self.budget.include_thermal,
        }
    }

    /// The baseline scenario and the remaining variants, in file order.
    pub fn mitigation_scenarios(&self) -> Result<(MitigationScenario, Vec<MitigationScenario>)> {
        if self.scenarios.is_empty() {
            return Err(Error::config(
                "scenarios",
                "at least one scenario is required",
            ));
        }
        let base_idx = match &self.sensitivity.baseline {
            None => 0,
            Some(label) => self
                .scenarios
                .iter()
                .position(|s| &s.label == label)
                .ok_or_else(|| {
                    Error::config(
                        "sensitivity.baseline",
                        format!("no scenario labelled `{label}`"),
                    )
                })?,
        };
        let base = self.scenarios[base_idx].clone();
        let rest = self
            .scenarios
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != base_idx)
            .map(|(_, s)| s.clone())
            .collect();
        Ok((base, rest))
    }

    /// Coupling sensitivity and flicker coefficient recomputed from the
    /// calibration anchors; everything else unchanged.
    pub fn recalibrated(&self) -> Result<Config> {
        let mut cfg = self.clone();
        let cal = &self.calibration;
        cfg.coupling.sensitivity = noise::calibrate_sensitivity(
            &self.fiber.fiber(cal.thermal_anchor_length),
            self.laser.wavelength,
            &self.band,
            cal.thermal_anchor_level_db,
            self.interferometer.sensing_length,
            self.coupling.spl_reference,
            self.budget.snr_threshold_db,
        );
        let setup = cfg.budget_setup();
        let required = cfg
            .coupling
            .tone_rms_phase(cal.mismatch_anchor_level_db, setup.sensing_length)
            / 10f64.powf(setup.snr_threshold_db / 20.0);
        let thermal = if setup.include_thermal {
            noise::thermal_rms(&setup.fiber, setup.laser.wavelength, &setup.band)
        } else {
            0.0
        };
        let laser_target = (required * required - thermal * thermal).max(0.0).sqrt();
        let tau0 = noise::mismatch_to_delay(cal.mismatch_anchor, self.fiber.refractive_index);
        cfg.laser.flicker_coeff =
            noise::fit_flicker_coeff(&self.laser, tau0, &self.band, laser_target)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.band.validate()?;
        self.coupling.validate()?;
        self.photoelastic.validate()?;
        if !(self.noise.flatten_below.is_finite() && self.noise.flatten_below >= 0.0) {
            return Err(Error::config("noise.flatten_below", "must be non-negative"));
        }
        let b = &self.budget;
        if b.points == 0 {
            return Err(Error::config("budget.points", "must be positive"));
        }
        if !(b.length_from >= 0.0 && b.length_to >= b.length_from) {
            return Err(Error::config(
                "budget.length_from",
                "need 0 <= length_from <= length_to",
            ));
        }
        if !(b.mismatch_from >= 0.0 && b.mismatch_to >= b.mismatch_from) {
            return Err(Error::config(
                "budget.mismatch_from",
                "need 0 <= mismatch_from <= mismatch_to",
            ));
        }
        if !b.snr_threshold_db.is_finite() {
            return Err(Error::config("budget.snr_threshold_db", "must be finite"));
        }
        let e = &self.enhance;
        if !(e.frame_duration > 0.0) {
            return Err(Error::config("enhance.frame_duration", "must be positive"));
        }
        if !(0.0..1.0).contains(&e.overlap) {
            return Err(Error::config("enhance.overlap", "must lie in [0, 1)"));
        }
        for s in &self.scenarios {
            s.validate()?;
        }
        let cfg = self.interferometer();
        cfg.validate()?;
        self.demod.validate(cfg.sample_rate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_parses() {
        let cfg = Config::default();
        assert_eq!(cfg.interferometer.sample_rate, 400e3);
        assert_eq!(cfg.interferometer().arm_mismatch(), 100.0);
        assert!(cfg.scenarios.len() >= 3);
    }

    #[test]
    fn default_white_noise_is_lorentzian() {
        let cfg = Config::default();
        let expected = LaserSpec::lorentzian_white_psd(cfg.laser.linewidth);
        assert!((cfg.laser.white_freq_psd / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn default_constants_are_calibrated() {
        let cfg = Config::default();
        let fresh = cfg.recalibrated().unwrap();
        assert!((cfg.coupling.sensitivity / fresh.coupling.sensitivity - 1.0).abs() < 1e-12);
        assert!((cfg.laser.flicker_coeff / fresh.laser.flicker_coeff - 1.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_round_trip() {
        let cfg = Config::default();
        assert_eq!(Config::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = DEFAULT_CONFIG.replace("[band]", "[band]\nbogus = 1");
        let err = Config::from_toml(&text).unwrap_err().to_string();
        assert!(err.contains("bogus"), "{err}");
    }

    #[test]
    fn nyquist_in_config_is_distinct() {
        let text = DEFAULT_CONFIG.replace(
            "intermediate_frequency = 25000.0",
            "intermediate_frequency = 250000.0",
        );
        assert!(matches!(
            Config::from_toml(&text),
            Err(Error::Nyquist { .. })
        ));
    }

    #[test]
    fn enhance_frames_at_audio_rate() {
        let p = Config::default().enhance.params(40e3).unwrap();
        assert_eq!(p.frame_length, 800);
        assert_eq!(p.hop, 400);
    }

    #[test]
    fn baseline_lookup() {
        let mut cfg = Config::default();
        let (base, rest) = cfg.mitigation_scenarios().unwrap();
        assert_eq!(rest.len(), cfg.scenarios.len() - 1);
        assert!(!rest.contains(&base));
        cfg.sensitivity.baseline = Some("nope".into());
        assert!(cfg.mitigation_scenarios().is_err());
    }
}
