//! Spectral-subtraction speech enhancement with the noise power spectrum
//! estimated from silent frames (or a separate noise-only recording), and the
//! segmental SNR metric used to score it.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectrum::hann_periodic;
use crate::trace::SampledTrace;

/// Bounds applied to each frame of [`segmental_snr`], dB.
pub const SEGSNR_FLOOR_DB: f64 = -10.0;
pub const SEGSNR_CEILING_DB: f64 = 35.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    Hann,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralSubtractParams {
    /// samples
    pub frame_length: usize,
    /// samples
    pub hop: usize,
    pub window: Window,
    /// β: multiple of the noise estimate subtracted from each bin.
    pub oversubtraction: f64,
    /// Fraction of the noisy power kept when subtraction overshoots.
    pub spectral_floor: f64,
    /// Frames whose energy is at most this many dB above the median frame
    /// energy count as silent.
    pub silence_threshold_db: f64,
}

impl SpectralSubtractParams {
    /// 20 ms frames, 50 % overlap, β = 2, floor 0.02, silence within 5 dB of the median.
    pub fn for_sample_rate(sample_rate: f64) -> Self {
        let half = ((0.01 * sample_rate).round() as usize).max(1);
        Self {
            frame_length: 2 * half,
            hop: half,
            window: Window::Hann,
            oversubtraction: 2.0,
            spectral_floor: 0.02,
            silence_threshold_db: 5.0,
        }
    }

    pub fn bins(&self) -> usize {
        self.frame_length / 2 + 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.frame_length < 2 {
            return Err(Error::config(
                "enhance.frame_length",
                "must be at least 2 samples",
            ));
        }
        if self.hop == 0 || self.hop > self.frame_length {
            return Err(Error::config(
                "enhance.hop",
                format!(
                    "must lie in [1, frame_length = {}], got {}",
                    self.frame_length, self.hop
                ),
            ));
        }
        if !(self.oversubtraction.is_finite() && self.oversubtraction >= 1.0) {
            return Err(Error::config(
                "enhance.oversubtraction",
                "must be at least 1",
            ));
        }
        if !(0.0..1.0).contains(&self.spectral_floor) {
            return Err(Error::config(
                "enhance.spectral_floor",
                "must lie in [0, 1)",
            ));
        }
        if !self.silence_threshold_db.is_finite() {
            return Err(Error::config(
                "enhance.silence_threshold_db",
                "must be finite",
            ));
        }
        Ok(())
    }

    fn window(&self) -> Vec<f64> {
        match self.window {
            Window::Hann => hann_periodic(self.frame_length),
        }
    }
}

/// Noise power spectrum: mean windowed periodogram |X(k)|², k = 0..=N/2.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpectrum(pub Vec<f64>);

impl NoiseSpectrum {
    pub fn zeros(params: &SpectralSubtractParams) -> Self {
        Self(vec![0.0; params.bins()])
    }
}

/// Analysis frames start every `hop` samples; the last is zero-padded.
fn frame_count(len: usize, params: &SpectralSubtractParams) -> usize {
    1 + (len - params.frame_length).div_ceil(params.hop)
}

fn frame(x: &[f64], start: usize, len: usize) -> impl Iterator<Item = f64> + '_ {
    (start..start + len).map(move |i| x.get(i).copied().unwrap_or(0.0))
}

fn check_length(trace: &SampledTrace, params: &SpectralSubtractParams) -> Result<()> {
    params.validate()?;
    if trace.len() < params.frame_length {
        return Err(Error::input(format!(
            "trace of {} samples is shorter than one {}-sample frame",
            trace.len(),
            params.frame_length
        )));
    }
    Ok(())
}

/// Indices of frames whose energy is no more than `silence_threshold_db` above
/// the median frame energy. An empty result means no frame qualified.
pub fn detect_silent_frames(
    trace: &SampledTrace,
    params: &SpectralSubtractParams,
) -> Result<Vec<usize>> {
    check_length(trace, params)?;
    let x = trace.samples();
    let energies: Vec<f64> = (0..frame_count(x.len(), params))
        .map(|j| {
            frame(x, j * params.hop, params.frame_length)
                .map(|v| v * v)
                .sum()
        })
        .collect();
    let mut sorted = energies.clone();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len().is_multiple_of(2) {
        0.5 * (sorted[mid - 1] + sorted[mid])
    } else {
        sorted[mid]
    };
    let limit = median * 10f64.powf(params.silence_threshold_db / 10.0);
    Ok(energies
        .iter()
        .enumerate()
        .filter(|(_, &e)| e <= limit)
        .map(|(j, _)| j)
        .collect())
}

fn periodogram(
    fft: &Arc<dyn Fft<f64>>,
    window: &[f64],
    samples: impl Iterator<Item = f64>,
    buf: &mut [Complex64],
) {
    for ((b, v), w) in buf.iter_mut().zip(samples).zip(window) {
        *b = Complex64::new(v * w, 0.0);
    }
    fft.process(buf);
}

/// Per-bin mean of windowed periodograms over the given frames.
pub fn estimate_noise_spectrum(
    trace: &SampledTrace,
    silent_frames: &[usize],
    params: &SpectralSubtractParams,
) -> Result<NoiseSpectrum> {
    check_length(trace, params)?;
    if silent_frames.is_empty() {
        return Err(Error::Estimation(
            "no silent frames to estimate the noise spectrum from".into(),
        ));
    }
    let x = trace.samples();
    let total = frame_count(x.len(), params);
    if let Some(&bad) = silent_frames.iter().find(|&&j| j >= total) {
        return Err(Error::input(format!(
            "frame {bad} out of range ({total} frames)"
        )));
    }
    let n = params.frame_length;
    let window = params.window();
    let fft = FftPlanner::new().plan_fft_forward(n);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let mut acc = vec![0.0; params.bins()];
    for &j in silent_frames {
        periodogram(&fft, &window, frame(x, j * params.hop, n), &mut buf);
        for (a, z) in acc.iter_mut().zip(&buf) {
            *a += z.norm_sqr();
        }
    }
    let count = silent_frames.len() as f64;
    Ok(NoiseSpectrum(acc.into_iter().map(|a| a / count).collect()))
}

/// Noise spectrum from a noise-only recording, averaging all of its frames.
pub fn noise_profile_spectrum(
    profile: &SampledTrace,
    params: &SpectralSubtractParams,
) -> Result<NoiseSpectrum> {
    check_length(profile, params)?;
    let all: Vec<usize> = (0..frame_count(profile.len(), params)).collect();
    estimate_noise_spectrum(profile, &all, params)
}

/// Power spectral subtraction with overlap-add resynthesis.
///
/// Each bin's power becomes `max(|Y|² − β·N, floor·|Y|²)` with the noisy phase
/// kept. The output never has more power per bin than the input and never
/// less than `floor` times it. Overlapping frames are normalized by the summed
/// analysis window, so a zero noise spectrum reproduces the input.
/// Requires `hop ≤ frame_length / 2`.
pub fn spectral_subtract(
    noisy: &SampledTrace,
    noise: &NoiseSpectrum,
    params: &SpectralSubtractParams,
) -> Result<SampledTrace> {
    params.validate()?;
    if noise.0.len() != params.bins() {
        return Err(Error::DimensionMismatch {
            expected: params.bins(),
            actual: noise.0.len(),
        });
    }
    if 2 * params.hop > params.frame_length {
        return Err(Error::config(
            "enhance.hop",
            "overlap-add resynthesis needs hop <= frame_length / 2",
        ));
    }
    let x = noisy.samples();
    if x.is_empty() {
        return Ok(noisy.clone());
    }
    let n = params.frame_length;
    let lead = n - params.hop;
    let padded_len = lead + x.len();
    let frames = 1 + padded_len.saturating_sub(n).div_ceil(params.hop);
    let total = (frames - 1) * params.hop + n;

    let window = params.window();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let mut out = vec![0.0; total];
    let mut norm = vec![0.0; total];
    let beta = params.oversubtraction;
    let floor = params.spectral_floor;

    let sample = |i: usize| -> f64 {
        if i < lead {
            0.0
        } else {
            x.get(i - lead).copied().unwrap_or(0.0)
        }
    };

    for j in 0..frames {
        let start = j * params.hop;
        periodogram(&fwd, &window, (start..start + n).map(sample), &mut buf);
        for k in 0..params.bins() {
            let power = buf[k].norm_sqr();
            let cleaned = (power - beta * noise.0[k]).max(floor * power);
            let gain = if power > 0.0 {
                (cleaned / power).sqrt()
            } else {
                0.0
            };
            buf[k] *= gain;
            if k != 0 && k != n - k {
                buf[n - k] *= gain;
            }
        }
        inv.process(&mut buf);
        for i in 0..n {
            out[start + i] += buf[i].re / n as f64;
            norm[start + i] += window[i];
        }
    }

    let y = (0..x.len())
        .map(|i| {
            let w = norm[lead + i];
            if w > 0.0 {
                out[lead + i] / w
            } else {
                0.0
            }
        })
        .collect();
    SampledTrace::new(noisy.kind(), noisy.sample_rate(), y)
}

/// Where the noise estimate came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseSource {
    SilentFrames,
    Profile,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnhanceSummary {
    pub frames: usize,
    /// Number of silent frames found; `None` when a noise profile was used.
    pub silent_frames: Option<usize>,
    pub noise_source: NoiseSource,
}

/// Estimates the noise (from `profile` if given, else from silent frames) and
/// applies spectral subtraction.
pub fn enhance(
    noisy: &SampledTrace,
    params: &SpectralSubtractParams,
    profile: Option<&SampledTrace>,
) -> Result<(SampledTrace, EnhanceSummary)> {
    check_length(noisy, params)?;
    let frames = frame_count(noisy.len(), params);
    let (noise, summary) = match profile {
        Some(p) => (
            noise_profile_spectrum(p, params)?,
            EnhanceSummary {
                frames,
                silent_frames: None,
                noise_source: NoiseSource::Profile,
            },
        ),
        None => {
            let silent = detect_silent_frames(noisy, params)?;
            (
                estimate_noise_spectrum(noisy, &silent, params)?,
                EnhanceSummary {
                    frames,
                    silent_frames: Some(silent.len()),
                    noise_source: NoiseSource::SilentFrames,
                },
            )
        }
    };
    Ok((spectral_subtract(noisy, &noise, params)?, summary))
}

/// Mean over consecutive `frame_length` blocks of 10·log10(Σref² / Σ(ref − processed)²),
/// each block clamped to [−10, 35] dB. A trailing partial block counts as a frame.
pub fn segmental_snr(
    processed: &SampledTrace,
    reference: &SampledTrace,
    frame_length: usize,
) -> Result<f64> {
    if processed.len() != reference.len() {
        return Err(Error::input(format!(
            "segmental SNR needs equal lengths, got {} and {}",
            processed.len(),
            reference.len()
        )));
    }
    if processed.sample_rate() != reference.sample_rate() {
        return Err(Error::input("segmental SNR needs equal sample rates"));
    }
    if frame_length == 0 || reference.is_empty() {
        return Err(Error::input(
            "segmental SNR needs a non-empty trace and frame",
        ));
    }
    let per_frame: Vec<f64> = reference
        .samples()
        .chunks(frame_length)
        .zip(processed.samples().chunks(frame_length))
        .map(|(r, p)| {
            let signal: f64 = r.iter().map(|v| v * v).sum();
            let error: f64 = r.iter().zip(p).map(|(a, b)| (a - b).powi(2)).sum();
            let snr = if error == 0.0 {
                SEGSNR_CEILING_DB
            } else if signal == 0.0 {
                SEGSNR_FLOOR_DB
            } else {
                10.0 * (signal / error).log10()
            };
            snr.clamp(SEGSNR_FLOOR_DB, SEGSNR_CEILING_DB)
        })
        .collect();
    Ok(per_frame.iter().sum::<f64>() / per_frame.len() as f64)
}
