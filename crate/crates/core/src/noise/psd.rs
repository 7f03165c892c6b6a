use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::AudioBand;
use crate::error::{Error, Result};
use crate::model::{FiberSpec, LaserSpec, BOLTZMANN, SPEED_OF_LIGHT};
use crate::quad;

/// Relative tolerance for RMS integrals without a closed form.
pub const QUAD_REL_TOL: f64 = 1e-10;

/// Largest f·τ₀ for which the small-delay PSD is documented as valid.
pub const APPROX_VALIDITY: f64 = 0.05;

/// Which laser phase-noise PSD to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LaserPsdForm {
    /// Exact delay transfer function sin²(πfτ₀)/(πf)².
    Full,
    /// Small-delay limit τ₀².
    Approx,
}

fn check_frequency(f: f64) -> Result<()> {
    if f.is_finite() && f > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "PSD frequency must be positive, got {f} Hz"
        )))
    }
}

/// The constant `S(f)·f` of the fiber thermal phase PSD, rad².
pub fn thermal_psd_coefficient(fiber: &FiberSpec, wavelength: f64) -> f64 {
    let wavenumber = 2.0 * PI * fiber.refractive_index / wavelength;
    wavenumber * wavenumber * 2.0 * BOLTZMANN * fiber.temperature * fiber.length * fiber.loss_angle
        / (3.0 * PI * fiber.bulk_modulus_area_product)
}

/// One-sided thermal phase-noise PSD of a fiber, rad²/Hz. Scales as L/f.
pub fn thermal_psd(fiber: &FiberSpec, wavelength: f64, f: f64) -> Result<f64> {
    check_frequency(f)?;
    Ok(thermal_psd_coefficient(fiber, wavelength) / f)
}

/// RMS thermal phase in `band`: √(C·L·ln(f_H/f_L)).
pub fn thermal_rms(fiber: &FiberSpec, wavelength: f64, band: &AudioBand) -> f64 {
    (thermal_psd_coefficient(fiber, wavelength) * (band.f_high / band.f_low).ln()).sqrt()
}

/// Laser phase-noise PSD after the delay τ₀, exact transfer function, rad²/Hz.
pub fn laser_phase_psd_full(laser: &LaserSpec, tau0: f64, f: f64) -> Result<f64> {
    check_frequency(f)?;
    check_delay(tau0)?;
    let s = (PI * f * tau0).sin() / (PI * f);
    Ok(s * s * laser.frequency_noise_psd(f))
}

/// Small-delay form τ₀²·(S₀ + k/f), valid for f·τ₀ ≪ 1 (see [`APPROX_VALIDITY`]).
///
/// Never smaller than [`laser_phase_psd_full`] since sin²x ≤ x².
pub fn laser_phase_psd_approx(laser: &LaserSpec, tau0: f64, f: f64) -> Result<f64> {
    check_frequency(f)?;
    check_delay(tau0)?;
    Ok(tau0 * tau0 * laser.frequency_noise_psd(f))
}

/// RMS laser-induced phase in `band`.
///
/// The small-delay form has the closed form τ₀·√(S₀(f_H − f_L) + k·ln(f_H/f_L));
/// the full form is integrated adaptively.
pub fn laser_rms(
    laser: &LaserSpec,
    tau0: f64,
    band: &AudioBand,
    form: LaserPsdForm,
) -> Result<f64> {
    check_delay(tau0)?;
    if tau0 == 0.0 {
        return Ok(0.0);
    }
    match form {
        LaserPsdForm::Approx => Ok(tau0
            * (laser.white_freq_psd * (band.f_high - band.f_low)
                + laser.flicker_coeff * (band.f_high / band.f_low).ln())
            .sqrt()),
        LaserPsdForm::Full => {
            let var = quad::integrate(
                |f| laser_phase_psd_full(laser, tau0, f).unwrap_or(f64::NAN),
                band.f_low,
                band.f_high,
                QUAD_REL_TOL,
            )?;
            Ok(var.sqrt())
        }
    }
}

/// Delay τ₀ = n·ΔL/c of an arm mismatch ΔL, s.
pub fn mismatch_to_delay(mismatch: f64, refractive_index: f64) -> f64 {
    refractive_index * mismatch / SPEED_OF_LIGHT
}

fn check_delay(tau0: f64) -> Result<()> {
    if tau0.is_finite() && tau0 >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "delay must be non-negative, got {tau0} s"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fiber(length: f64) -> FiberSpec {
        FiberSpec {
            length,
            refractive_index: 1.468,
            bulk_modulus_area_product: 453.0,
            loss_angle: 0.01,
            temperature: 293.15,
        }
    }

    fn laser() -> LaserSpec {
        LaserSpec {
            wavelength: 1550e-9,
            linewidth: 100.0,
            white_freq_psd: 4.0 * PI * 100.0,
            flicker_coeff: 5.7e6,
        }
    }

    const WL: f64 = 1550e-9;

    #[test]
    fn thermal_psd_scaling() {
        let f1 = fiber(1000.0);
        let s = thermal_psd(&f1, WL, 1000.0).unwrap();
        assert_eq!(thermal_psd(&f1, WL, 2000.0).unwrap(), s / 2.0);
        let s2 = thermal_psd(&fiber(2000.0), WL, 1000.0).unwrap();
        assert!((s2 / s - 2.0).abs() < 1e-15);
    }

    #[test]
    fn thermal_psd_direct_substitution() {
        // (2π·1.468/1550e-9)² · 2·k_B·293.15·1000·0.01 / (3π·453) / 1000, term by term
        let k = 2.0 * PI * 1.468 / 1550e-9;
        let num = 2.0 * 1.380649e-23 * 293.15 * 1000.0 * 0.01;
        let den = 3.0 * PI * 453.0;
        let oracle = k * k * num / den / 1000.0;
        let got = thermal_psd(&fiber(1000.0), WL, 1000.0).unwrap();
        assert!((got / oracle - 1.0).abs() < 1e-13, "{got} vs {oracle}");
        assert!((got - 6.711e-13).abs() < 1e-15, "{got}");
    }

    #[test]
    fn thermal_psd_domain() {
        assert!(matches!(
            thermal_psd(&fiber(1.0), WL, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(thermal_psd(&fiber(1.0), WL, -5.0).is_err());
    }

    #[test]
    fn thermal_rms_cases() {
        let band = AudioBand::default();
        assert_eq!(thermal_rms(&fiber(0.0), WL, &band), 0.0);
        let r1 = thermal_rms(&fiber(750.0), WL, &band);
        let r4 = thermal_rms(&fiber(3000.0), WL, &band);
        assert!((r4 / r1 - 2.0).abs() < 1e-15);
        let var = quad::integrate(
            |f| thermal_psd(&fiber(750.0), WL, f).unwrap(),
            100.0,
            10_000.0,
            1e-13,
        )
        .unwrap();
        assert!((r1 * r1 / var - 1.0).abs() < 1e-9);
    }

    #[test]
    fn laser_psd_zero_delay_and_null() {
        for f in [10.0, 1e3, 1e4] {
            assert_eq!(laser_phase_psd_full(&laser(), 0.0, f).unwrap(), 0.0);
            assert_eq!(laser_phase_psd_approx(&laser(), 0.0, f).unwrap(), 0.0);
        }
        // f·τ₀ = 1 sits on a transfer-function null
        let v = laser_phase_psd_full(&laser(), 1e-4, 1e4).unwrap();
        let peak = laser_phase_psd_full(&laser(), 0.5e-4, 1e4).unwrap();
        assert!(v < 1e-28 * peak.max(1.0), "{v}");
    }

    #[test]
    fn laser_psd_forms_agree_at_small_delay() {
        let tau = mismatch_to_delay(100.0, 1.468);
        let full = laser_phase_psd_full(&laser(), tau, 1e4).unwrap();
        let approx = laser_phase_psd_approx(&laser(), tau, 1e4).unwrap();
        // ratio = (sin x / x)² with x = π·1e4·4.896e-7
        let x = PI * 1e4 * tau;
        assert!((full / approx - (x.sin() / x).powi(2)).abs() < 1e-14);
        assert!((full / approx - 1.0).abs() < 1e-3);
    }

    #[test]
    fn approx_psd_quadruples_with_double_delay() {
        let tau = 4.896e-7;
        for f in [100.0, 1234.5, 1e4] {
            let a = laser_phase_psd_approx(&laser(), tau, f).unwrap();
            let b = laser_phase_psd_approx(&laser(), 2.0 * tau, f).unwrap();
            assert!((b / a - 4.0).abs() < 1e-14);
        }
    }

    #[test]
    fn delay_from_mismatch() {
        assert_eq!(mismatch_to_delay(0.0, 1.468), 0.0);
        let t = mismatch_to_delay(100.0, 1.468);
        assert!((t - 4.896e-7).abs() < 1e-10, "{t}");
        assert!(mismatch_to_delay(2000.0, 1.468) < 10e-6);
        assert!((mismatch_to_delay(2000.0, 1.468) - 9.79e-6).abs() < 1e-8);
    }

    #[test]
    fn laser_rms_cases() {
        let band = AudioBand::default();
        let tau = mismatch_to_delay(100.0, 1.468);
        assert_eq!(
            laser_rms(&laser(), 0.0, &band, LaserPsdForm::Approx).unwrap(),
            0.0
        );
        assert_eq!(
            laser_rms(&laser(), 0.0, &band, LaserPsdForm::Full).unwrap(),
            0.0
        );
        let a1 = laser_rms(&laser(), tau, &band, LaserPsdForm::Approx).unwrap();
        let a2 = laser_rms(&laser(), 2.0 * tau, &band, LaserPsdForm::Approx).unwrap();
        assert!((a2 / a1 - 2.0).abs() < 1e-15);
        let var = quad::integrate(
            |f| laser_phase_psd_approx(&laser(), tau, f).unwrap(),
            100.0,
            10_000.0,
            1e-13,
        )
        .unwrap();
        assert!((a1 * a1 / var - 1.0).abs() < 1e-9);
        let full = laser_rms(&laser(), tau, &band, LaserPsdForm::Full).unwrap();
        assert!(full <= a1);
        assert!((full / a1 - 1.0).abs() < 5e-3);
    }

    proptest! {
        #[test]
        fn thermal_psd_joint_scaling(a in 0.01f64..100.0, b in 0.01f64..100.0, f in 1.0f64..1e5) {
            let base = thermal_psd(&fiber(500.0), WL, f).unwrap();
            let scaled = thermal_psd(&fiber(500.0 * a), WL, f * b).unwrap();
            prop_assert!((scaled / (base * a / b) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn full_never_exceeds_approx(tau in 1e-9f64..1e-3, f in 1.0f64..1e5) {
            let full = laser_phase_psd_full(&laser(), tau, f).unwrap();
            let approx = laser_phase_psd_approx(&laser(), tau, f).unwrap();
            prop_assert!(full <= approx * (1.0 + 1e-12));
        }
    }

    #[test]
    fn ratio_tends_to_one_for_small_product() {
        let f = 1e3;
        let tau = 1e-4 / f;
        let full = laser_phase_psd_full(&laser(), tau, f).unwrap();
        let approx = laser_phase_psd_approx(&laser(), tau, f).unwrap();
        assert!((full / approx - 1.0).abs() < 1e-7);
    }
}
