use serde::{Deserialize, Serialize};

use super::psd::{laser_rms, mismatch_to_delay, thermal_rms, LaserPsdForm};
use crate::error::{Error, Result};
use crate::model::{AcousticCoupling, FiberSpec, LaserSpec};

/// Frequency band over which RMS phase is integrated. Defaults to the
/// 100 Hz – 10 kHz voice band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AudioBand {
    pub f_low: f64,
    pub f_high: f64,
}

impl Default for AudioBand {
    fn default() -> Self {
        Self {
            f_low: 100.0,
            f_high: 10_000.0,
        }
    }
}

impl AudioBand {
    pub fn new(f_low: f64, f_high: f64) -> Result<Self> {
        let band = Self { f_low, f_high };
        band.validate()?;
        Ok(band)
    }

    pub fn validate(&self) -> Result<()> {
        if self.f_low.is_finite()
            && self.f_high.is_finite()
            && 0.0 < self.f_low
            && self.f_low < self.f_high
        {
            Ok(())
        } else {
            Err(Error::config(
                "band",
                format!(
                    "need 0 < f_low < f_high, got [{}, {}]",
                    self.f_low, self.f_high
                ),
            ))
        }
    }
}

/// Band-limited noise RMS per source and the resulting detection limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseBudget {
    pub band: AudioBand,
    pub thermal_rms: f64,
    pub laser_rms: f64,
    /// Root-sum-square of the two sources.
    pub total_rms: f64,
    /// Smallest dB SPL whose sine-equivalent RMS phase reaches the threshold.
    pub detection_limit_db: f64,
}

impl NoiseBudget {
    fn new(band: AudioBand, thermal_rms: f64, laser_rms: f64, setup: &BudgetSetup) -> Self {
        let total_rms = thermal_rms.hypot(laser_rms);
        Self {
            band,
            thermal_rms,
            laser_rms,
            total_rms,
            detection_limit_db: detection_limit_db(
                total_rms,
                &setup.coupling,
                setup.sensing_length,
                setup.snr_threshold_db,
            ),
        }
    }
}

/// One row of a detection-limit sweep; `x` is the swept length or mismatch in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BudgetRow {
    pub x: f64,
    pub budget: NoiseBudget,
}

/// Everything a detection-limit sweep needs besides the swept variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetSetup {
    pub laser: LaserSpec,
    /// Detecting-arm fiber; its length is the thermal term of a mismatch sweep
    /// and is replaced by the swept value in a length sweep.
    pub fiber: FiberSpec,
    pub coupling: AcousticCoupling,
    pub sensing_length: f64,
    pub band: AudioBand,
    /// Required voice-to-noise RMS ratio; 0 dB means SNR = 1.
    pub snr_threshold_db: f64,
    /// Fold the detecting arm's thermal noise into mismatch sweeps.
    pub include_thermal: bool,
}

/// Sound level (dB SPL) at which a tone on `sensing_length` of fiber produces
/// RMS phase `noise_rms · 10^(snr_threshold_db/20)`.
pub fn detection_limit_db(
    noise_rms: f64,
    coupling: &AcousticCoupling,
    sensing_length: f64,
    snr_threshold_db: f64,
) -> f64 {
    let required = noise_rms * 10f64.powf(snr_threshold_db / 20.0);
    coupling.level_for_rms_phase(required, sensing_length)
}

/// Thermal-noise detection limit versus detecting-arm length.
pub fn detection_limit_vs_length(setup: &BudgetSetup, lengths: &[f64]) -> Result<Vec<BudgetRow>> {
    check_sweep("length", lengths)?;
    setup.band.validate()?;
    Ok(lengths
        .iter()
        .map(|&length| {
            let thermal = thermal_rms(
                &setup.fiber.with_length(length),
                setup.laser.wavelength,
                &setup.band,
            );
            BudgetRow {
                x: length,
                budget: NoiseBudget::new(setup.band, thermal, 0.0, setup),
            }
        })
        .collect())
}

/// Laser-noise detection limit versus arm mismatch, small-delay form.
pub fn detection_limit_vs_mismatch(
    setup: &BudgetSetup,
    mismatches: &[f64],
) -> Result<Vec<BudgetRow>> {
    check_sweep("mismatch", mismatches)?;
    setup.band.validate()?;
    let thermal = if setup.include_thermal {
        thermal_rms(&setup.fiber, setup.laser.wavelength, &setup.band)
    } else {
        0.0
    };
    mismatches
        .iter()
        .map(|&mismatch| {
            let tau0 = mismatch_to_delay(mismatch, setup.fiber.refractive_index);
            let laser = laser_rms(&setup.laser, tau0, &setup.band, LaserPsdForm::Approx)?;
            Ok(BudgetRow {
                x: mismatch,
                budget: NoiseBudget::new(setup.band, thermal, laser, setup),
            })
        })
        .collect()
}

/// Coupling sensitivity (rad/(Pa·m)) that puts the thermal detection limit of
/// `anchor_fiber` exactly at `anchor_level_db`.
pub fn calibrate_sensitivity(
    anchor_fiber: &FiberSpec,
    wavelength: f64,
    band: &AudioBand,
    anchor_level_db: f64,
    sensing_length: f64,
    spl_reference: f64,
    snr_threshold_db: f64,
) -> f64 {
    let noise = thermal_rms(anchor_fiber, wavelength, band) * 10f64.powf(snr_threshold_db / 20.0);
    let amplitude = spl_reference * 10f64.powf(anchor_level_db / 20.0);
    noise * 2f64.sqrt() / (sensing_length * amplitude)
}

/// Flicker coefficient k that makes the small-delay laser RMS at `tau0`
/// equal `target_rms`, keeping the laser's white level.
pub fn fit_flicker_coeff(
    laser: &LaserSpec,
    tau0: f64,
    band: &AudioBand,
    target_rms: f64,
) -> Result<f64> {
    if !(tau0 > 0.0) {
        return Err(Error::Domain("flicker fit needs a positive delay".into()));
    }
    let white = laser.white_freq_psd * (band.f_high - band.f_low);
    let k = ((target_rms / tau0).powi(2) - white) / (band.f_high / band.f_low).ln();
    if k < 0.0 {
        return Err(Error::Domain(format!(
            "white frequency noise alone exceeds the target RMS {target_rms} rad"
        )));
    }
    Ok(k)
}

fn check_sweep(what: &str, xs: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::input(format!("{what} sweep is empty")));
    }
    if let Some(x) = xs.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::input(format!(
            "{what} values must be non-negative, got {x}"
        )));
    }
    Ok(())
}
