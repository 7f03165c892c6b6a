//! Strain-optic phase response of a fiber section and the arithmetic of the
//! anti-eavesdropping measures: shorter tail fiber, stiffer cable, angled
//! (APC) connector.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::AcousticCoupling;

/// Axial and radial strain of the fiber core.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrainState {
    pub axial_strain: f64,
    pub radial_strain: f64,
}

/// Largest strain magnitude accepted as small elastic deformation.
pub const MAX_STRAIN: f64 = 1e-2;

impl StrainState {
    pub fn new(axial_strain: f64, radial_strain: f64) -> Result<Self> {
        for (name, v) in [
            ("axial_strain", axial_strain),
            ("radial_strain", radial_strain),
        ] {
            if !(v.is_finite() && v.abs() <= MAX_STRAIN) {
                return Err(Error::input(format!(
                    "{name} must be finite with |ε| <= {MAX_STRAIN}, got {v}"
                )));
            }
        }
        Ok(Self {
            axial_strain,
            radial_strain,
        })
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            axial_strain: a * self.axial_strain,
            radial_strain: a * self.radial_strain,
        }
    }
}

/// Pockels coefficients and index of the core.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhotoelasticSpec {
    pub p11: f64,
    pub p12: f64,
    pub n: f64,
}

impl Default for PhotoelasticSpec {
    /// Fused silica.
    fn default() -> Self {
        Self {
            p11: 0.121,
            p12: 0.270,
            n: 1.468,
        }
    }
}

impl PhotoelasticSpec {
    pub fn validate(&self) -> Result<()> {
        for (key, v) in [
            ("photoelastic.p11", self.p11),
            ("photoelastic.p12", self.p12),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::config(key, format!("must lie in (0, 1), got {v}")));
            }
        }
        if !(self.n > 1.0 && self.n.is_finite()) {
            return Err(Error::config(
                "photoelastic.n",
                format!("must exceed 1, got {}", self.n),
            ));
        }
        Ok(())
    }
}

/// Δφ/φ = ε_z − (n²/2)·((P₁₁ + P₁₂)·ε_r + P₁₂·ε_z).
///
/// The first term is the physical elongation; the second is the index change,
/// which opposes it.
pub fn relative_phase_change(strain: &StrainState, photo: &PhotoelasticSpec) -> f64 {
    let (ez, er) = (strain.axial_strain, strain.radial_strain);
    ez - 0.5 * photo.n * photo.n * ((photo.p11 + photo.p12) * er + photo.p12 * ez)
}

/// Δφ = (Δφ/φ)·2πnL/λ, rad.
pub fn absolute_phase_change(rel_change: f64, length: f64, wavelength: f64, n: f64) -> Result<f64> {
    if !(length.is_finite() && length >= 0.0) {
        return Err(Error::input(format!(
            "length must be non-negative, got {length}"
        )));
    }
    Ok(rel_change * 2.0 * PI * n * length / wavelength)
}

/// One anti-eavesdropping configuration of the indoor fiber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MitigationScenario {
    pub label: String,
    /// m
    pub sensing_length: f64,
    /// Effective bulk-modulus increase over the plain cable (≥ 1).
    pub bulk_modulus_scale: f64,
    /// Echo amplitude α of the modem connector.
    pub reflection_amplitude: f64,
}

impl MitigationScenario {
    pub fn validate(&self) -> Result<()> {
        let key = |field: &str| format!("scenarios[{}].{field}", self.label);
        if !(self.sensing_length.is_finite() && self.sensing_length >= 0.0) {
            return Err(Error::config(key("sensing_length"), "must be non-negative"));
        }
        if !(self.bulk_modulus_scale.is_finite() && self.bulk_modulus_scale >= 1.0) {
            return Err(Error::config(
                key("bulk_modulus_scale"),
                "must be at least 1",
            ));
        }
        if !(0.0..=1.0).contains(&self.reflection_amplitude) {
            return Err(Error::config(
                key("reflection_amplitude"),
                "must lie in [0, 1]",
            ));
        }
        Ok(())
    }

    /// RMS voice phase of a tone at `level_db`: coupling scales with length
    /// and inversely with bulk modulus.
    pub fn signal_rms(&self, coupling: &AcousticCoupling, level_db: f64) -> f64 {
        coupling.tone_rms_phase(level_db, self.sensing_length) / self.bulk_modulus_scale
    }
}

/// One row of a mitigation comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MitigationRow {
    pub label: String,
    pub signal_rms_rad: f64,
    /// 20·log10 of the voice phase relative to the baseline.
    pub delta_db_vs_baseline: f64,
    /// 20·log10 of the beat amplitude relative to the baseline (echo strength).
    pub carrier_delta_db: f64,
}

/// Compares each variant with the baseline; the first row is the baseline itself.
pub fn compare_mitigations(
    baseline: &MitigationScenario,
    variants: &[MitigationScenario],
    coupling: &AcousticCoupling,
    test_level_db: f64,
) -> Result<Vec<MitigationRow>> {
    baseline.validate()?;
    if !(baseline.sensing_length > 0.0) {
        return Err(Error::config(
            format!("scenarios[{}].sensing_length", baseline.label),
            "baseline must have a positive sensing length",
        ));
    }
    let base_rms = baseline.signal_rms(coupling, test_level_db);
    let row = |s: &MitigationScenario| -> Result<MitigationRow> {
        s.validate()?;
        let rms = s.signal_rms(coupling, test_level_db);
        Ok(MitigationRow {
            label: s.label.clone(),
            signal_rms_rad: rms,
            delta_db_vs_baseline: 20.0 * (rms / base_rms).log10(),
            carrier_delta_db: 20.0
                * (s.reflection_amplitude / baseline.reflection_amplitude).log10(),
        })
    };
    std::iter::once(baseline).chain(variants).map(row).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scenario(label: &str, length: f64, scale: f64, alpha: f64) -> MitigationScenario {
        MitigationScenario {
            label: label.into(),
            sensing_length: length,
            bulk_modulus_scale: scale,
            reflection_amplitude: alpha,
        }
    }

    #[test]
    fn zero_strain() {
        let s = StrainState::new(0.0, 0.0).unwrap();
        assert_eq!(relative_phase_change(&s, &PhotoelasticSpec::default()), 0.0);
    }

    #[test]
    fn axial_only_reduction() {
        let photo = PhotoelasticSpec::default();
        let s = StrainState::new(1e-6, 0.0).unwrap();
        let expected = 1e-6 * (1.0 - 1.468f64.powi(2) * 0.270 / 2.0);
        let got = relative_phase_change(&s, &photo);
        assert!((got / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn silica_substitution() {
        // 1e-6 − (1.468²/2)·((0.121 + 0.270)·(−3e-7) + 0.270·1e-6)
        let n2_half = 1.468 * 1.468 / 2.0;
        let inner = 0.391 * -3e-7 + 0.270e-6;
        let oracle = 1e-6 - n2_half * inner;
        let got = relative_phase_change(
            &StrainState::new(1e-6, -3e-7).unwrap(),
            &PhotoelasticSpec::default(),
        );
        assert!((got - oracle).abs() < 1e-18, "{got} {oracle}");
        assert!((got - 8.3546e-7).abs() < 1e-10, "{got}");
    }

    #[test]
    fn strain_bounds() {
        assert!(StrainState::new(0.02, 0.0).is_err());
        assert!(StrainState::new(0.0, f64::NAN).is_err());
    }

    #[test]
    fn absolute_change() {
        assert_eq!(
            absolute_phase_change(1e-9, 0.0, 1550e-9, 1.468).unwrap(),
            0.0
        );
        let one = absolute_phase_change(1e-9, 3.0, 1550e-9, 1.468).unwrap();
        let three = absolute_phase_change(1e-9, 9.0, 1550e-9, 1.468).unwrap();
        assert!((three / one - 3.0).abs() < 1e-15);
        let oracle = 1e-9 * 2.0 * PI * 1.468 * 3.0 / 1.55e-6;
        assert!((one - oracle).abs() < 1e-20);
        assert!(absolute_phase_change(1e-9, -1.0, 1550e-9, 1.468).is_err());
    }

    #[test]
    fn mitigation_deltas() {
        let c = AcousticCoupling::new(0.0718);
        let base = scenario("pc-3m", 3.0, 1.0, 0.2);
        let rows = compare_mitigations(
            &base,
            &[
                scenario("same", 3.0, 1.0, 0.2),
                scenario("1m", 1.0, 1.0, 0.2),
                scenario("steel", 3.0, 10.0, 0.2),
                scenario("apc", 3.0, 1.0, 0.0025),
            ],
            &c,
            65.0,
        )
        .unwrap();
        assert_eq!(rows[0].delta_db_vs_baseline, 0.0);
        assert_eq!(rows[1].delta_db_vs_baseline, 0.0);
        assert!((rows[2].delta_db_vs_baseline - 20.0 * (1.0f64 / 3.0).log10()).abs() < 1e-12);
        assert!((rows[2].delta_db_vs_baseline + 9.54).abs() < 0.01);
        assert!((rows[3].delta_db_vs_baseline + 20.0).abs() < 1e-12);
        assert_eq!(rows[4].delta_db_vs_baseline, 0.0);
        assert!((rows[4].carrier_delta_db - 20.0 * (0.0025f64 / 0.2).log10()).abs() < 1e-12);
    }

    #[test]
    fn zero_length_baseline_rejected() {
        let c = AcousticCoupling::new(0.0718);
        let err = compare_mitigations(&scenario("b", 0.0, 1.0, 0.2), &[], &c, 65.0).unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
    }

    #[test]
    fn bad_scenario_names_field() {
        let c = AcousticCoupling::new(0.0718);
        let err = compare_mitigations(
            &scenario("b", 3.0, 1.0, 0.2),
            &[scenario("soft", 3.0, 0.5, 0.2)],
            &c,
            65.0,
        )
        .unwrap_err();
        assert!(err
            .to_string()
            .contains("scenarios[soft].bulk_modulus_scale"));
    }

    proptest! {
        #[test]
        fn linear_in_strain(ez in -1e-3f64..1e-3, er in -1e-3f64..1e-3, a in -5.0f64..5.0) {
            let photo = PhotoelasticSpec::default();
            let s = StrainState::new(ez, er).unwrap();
            let lhs = relative_phase_change(&s.scaled(a), &photo);
            let rhs = a * relative_phase_change(&s, &photo);
            prop_assert!((lhs - rhs).abs() <= 1e-15 * (1.0 + rhs.abs()));
        }

        #[test]
        fn index_term_opposes_elongation(
            ez in 1e-9f64..1e-3,
            p11 in 0.01f64..0.99,
            p12 in 0.01f64..0.99,
            n in 1.01f64..1.99,
        ) {
            prop_assume!(n * n * p12 / 2.0 < 1.0);
            let photo = PhotoelasticSpec { p11, p12, n };
            let r = relative_phase_change(&StrainState::new(ez, 0.0).unwrap(), &photo);
            prop_assert!(r > 0.0 && r < ez);
        }

        #[test]
        fn length_and_stiffness_compose(len in 0.1f64..3.0, scale in 1.0f64..100.0) {
            let c = AcousticCoupling::new(0.0718);
            let base = scenario("b", 3.0, 1.0, 0.2);
            let rows = compare_mitigations(
                &base,
                &[scenario("l", len, 1.0, 0.2), scenario("m", 3.0, scale, 0.2), scenario("lm", len, scale, 0.2)],
                &c,
                60.0,
            ).unwrap();
            let sum = rows[1].delta_db_vs_baseline + rows[2].delta_db_vs_baseline;
            prop_assert!((rows[3].delta_db_vs_baseline - sum).abs() < 1e-9);
        }
    }
}
