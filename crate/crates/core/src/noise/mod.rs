//! Phase-noise sources of the interferometer, their band-limited RMS, colored
//! noise synthesis, and detection-limit budgets.

mod budget;
mod psd;
mod synth;

pub use budget::{
    calibrate_sensitivity, detection_limit_db, detection_limit_vs_length,
    detection_limit_vs_mismatch, fit_flicker_coeff, AudioBand, BudgetRow, BudgetSetup, NoiseBudget,
};
pub use psd::{
    laser_phase_psd_approx, laser_phase_psd_full, laser_rms, mismatch_to_delay, thermal_psd,
    thermal_psd_coefficient, thermal_rms, LaserPsdForm, APPROX_VALIDITY, QUAD_REL_TOL,
};
pub use synth::synthesize_colored_noise;
