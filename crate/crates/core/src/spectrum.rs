//! Windows and Welch power-spectral-density estimation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Periodic Hann window. With 50 % overlap the shifted copies sum to exactly one.
pub fn hann_periodic(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
        .collect()
}

/// One-sided PSD estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Psd {
    pub frequencies: Vec<f64>,
    /// units²/Hz
    pub density: Vec<f64>,
    pub segments: usize,
}

impl Psd {
    /// Indices of bins whose frequency lies in `[f_low, f_high]`.
    pub fn bins_in(&self, f_low: f64, f_high: f64) -> impl Iterator<Item = usize> + '_ {
        self.frequencies
            .iter()
            .enumerate()
            .filter(move |(_, f)| **f >= f_low && **f <= f_high)
            .map(|(i, _)| i)
    }
}

/// Welch's averaged periodogram with a periodic Hann window, per-segment mean
/// removal and `overlap` samples shared between consecutive segments.
pub fn welch(x: &[f64], sample_rate: f64, segment: usize, overlap: usize) -> Result<Psd> {
    if segment < 2 || overlap >= segment {
        return Err(Error::input(format!(
            "welch needs segment >= 2 and overlap < segment, got {segment}/{overlap}"
        )));
    }
    if x.len() < segment {
        return Err(Error::input(format!(
            "signal of {} samples is shorter than one segment ({segment})",
            x.len()
        )));
    }
    let window = hann_periodic(segment);
    let power: f64 = window.iter().map(|w| w * w).sum();
    let step = segment - overlap;
    let fft = FftPlanner::new().plan_fft_forward(segment);
    let bins = segment / 2 + 1;
    let mut acc = vec![0.0; bins];
    let mut buf = vec![Complex64::new(0.0, 0.0); segment];
    let mut segments = 0;
    let mut start = 0;
    while start + segment <= x.len() {
        let seg = &x[start..start + segment];
        let mean = seg.iter().sum::<f64>() / segment as f64;
        for ((b, &v), w) in buf.iter_mut().zip(seg).zip(&window) {
            *b = Complex64::new((v - mean) * w, 0.0);
        }
        fft.process(&mut buf);
        for (a, z) in acc.iter_mut().zip(&buf) {
            *a += z.norm_sqr();
        }
        segments += 1;
        start += step;
    }
    let scale = 1.0 / (sample_rate * power * segments as f64);
    let density = acc
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let one_sided = if k == 0 || (segment.is_multiple_of(2) && k == segment / 2) {
                1.0
            } else {
                2.0
            };
            a * scale * one_sided
        })
        .collect();
    let frequencies = (0..bins)
        .map(|k| k as f64 * sample_rate / segment as f64)
        .collect();
    Ok(Psd {
        frequencies,
        density,
        segments,
    })
}
