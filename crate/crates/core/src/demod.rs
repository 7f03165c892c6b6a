//! Phase recovery from the sampled beat note: complex mixing to baseband,
//! image-rejecting low-pass, phase unwrapping, the 500 Hz zero-phase
//! high-pass, and resampling to an audio rate.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::{convolve_same, kaiser_lowpass, Butterworth, FilterKind};
use crate::noise::AudioBand;
use crate::trace::{BasebandTrace, SampledTrace, TraceKind};

/// Stopband rejection of the baseband low-pass. The DC term of the photocurrent
/// lands at −f_beat after mixing and is (1+α²)/α times larger than the beat.
pub const DEFAULT_STOPBAND_DB: f64 = 140.0;

/// Stopband rejection of the anti-aliasing filter used for resampling.
pub const RESAMPLE_STOPBAND_DB: f64 = 80.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemodConfig {
    /// Hz; must match the synthesized intermediate frequency.
    pub beat_frequency: f64,
    /// Passband edge of the post-mixing low-pass, Hz.
    pub lowpass_cutoff: f64,
    /// Zero disables the high-pass.
    pub highpass_cutoff: f64,
    pub filter_order: usize,
    #[serde(default = "default_stopband")]
    pub stopband_attenuation_db: f64,
    /// Output rate of the recovered audio, Hz.
    #[serde(default = "default_audio_rate")]
    pub audio_rate: f64,
}

fn default_stopband() -> f64 {
    DEFAULT_STOPBAND_DB
}

fn default_audio_rate() -> f64 {
    40_000.0
}

impl DemodConfig {
    /// Low-pass at half the beat frequency, 500 Hz fourth-order high-pass.
    pub fn for_beat(beat_frequency: f64) -> Self {
        Self {
            beat_frequency,
            lowpass_cutoff: beat_frequency / 2.0,
            highpass_cutoff: 500.0,
            filter_order: 4,
            stopband_attenuation_db: DEFAULT_STOPBAND_DB,
            audio_rate: default_audio_rate(),
        }
    }

    pub fn validate(&self, sample_rate: f64) -> Result<()> {
        let nyquist = sample_rate / 2.0;
        if !(self.beat_frequency > 0.0 && self.beat_frequency < nyquist) {
            return Err(Error::Nyquist {
                keys: "demod.beat_frequency".into(),
                frequency: self.beat_frequency,
                nyquist,
            });
        }
        if !(self.lowpass_cutoff > 0.0 && self.lowpass_cutoff < self.beat_frequency) {
            return Err(Error::config(
                "demod.lowpass_cutoff",
                format!(
                    "must lie in (0, beat_frequency = {}), got {}",
                    self.beat_frequency, self.lowpass_cutoff
                ),
            ));
        }
        if self.lowpass_cutoff >= self.stop_edge(sample_rate) {
            return Err(Error::config(
                "demod.lowpass_cutoff",
                format!(
                    "the mixing image at {} Hz falls inside the {} Hz passband",
                    self.stop_edge(sample_rate),
                    self.lowpass_cutoff
                ),
            ));
        }
        if !(self.highpass_cutoff.is_finite() && self.highpass_cutoff >= 0.0) {
            return Err(Error::config(
                "demod.highpass_cutoff",
                "must be non-negative",
            ));
        }
        if self.highpass_cutoff >= nyquist {
            return Err(Error::Nyquist {
                keys: "demod.highpass_cutoff".into(),
                frequency: self.highpass_cutoff,
                nyquist,
            });
        }
        if !(1..=16).contains(&self.filter_order) {
            return Err(Error::config("demod.filter_order", "must be 1..=16"));
        }
        if !(self.stopband_attenuation_db > 20.0) {
            return Err(Error::config(
                "demod.stopband_attenuation_db",
                "must exceed 20 dB",
            ));
        }
        if !(self.audio_rate.is_finite() && self.audio_rate > 0.0) {
            return Err(Error::config("demod.audio_rate", "must be positive"));
        }
        Ok(())
    }

    /// Nearest unwanted component after mixing: the DC term at −f_beat, or
    /// the double-frequency image if it folds closer to zero.
    fn stop_edge(&self, sample_rate: f64) -> f64 {
        self.beat_frequency
            .min(sample_rate - 2.0 * self.beat_frequency)
    }
}

/// Mixes the beat note down with exp(−j·2π·f_beat·t) and low-passes it.
///
/// The result z has |z| ≈ α (the beat amplitude over two) and arg z equal to
/// the interferometric phase, wrapped to (−π, π]. The linear-phase filter is
/// applied without delay. Before filtering, the record is extended at each end
/// by repeating its first and last whole beat periods, so the filter sees an
/// unbroken carrier and the DC term and mixing image stay rejected up to the
/// edges.
pub fn iq_demodulate(het: &SampledTrace, cfg: &DemodConfig) -> Result<BasebandTrace> {
    het.expect_kind(TraceKind::Heterodyne)?;
    let fs = het.sample_rate();
    cfg.validate(fs)?;
    let lp = kaiser_lowpass(
        cfg.lowpass_cutoff,
        cfg.stop_edge(fs),
        cfg.stopband_attenuation_db,
        fs,
    )?;
    let x = het.samples();
    let n = x.len();
    let cycles_per_sample = cfg.beat_frequency / fs;
    let period = carrier_period(cycles_per_sample, MAX_EXTENSION_PERIOD);
    let pad = if n >= period { lp.taps.len() / 2 } else { 0 };
    let sample = |i: isize| -> f64 {
        if i < 0 {
            x[i.rem_euclid(period as isize) as usize]
        } else if i as usize >= n {
            x[n - period + (i as usize - n) % period]
        } else {
            x[i as usize]
        }
    };
    let mixed: Vec<Complex64> = (-(pad as isize)..(n + pad) as isize)
        .map(|i| {
            let theta = TAU * (cycles_per_sample * i as f64).fract();
            Complex64::from_polar(sample(i), -theta)
        })
        .collect();
    let filtered = convolve_same(&mixed, &lp.taps);
    BasebandTrace::baseband(fs, filtered[pad..pad + n].to_vec())
}

const MAX_EXTENSION_PERIOD: usize = 1024;

/// Shortest block length (at most `max_len`) closest to a whole number of cycles.
fn carrier_period(cycles_per_sample: f64, max_len: usize) -> usize {
    let miss = |m: usize| {
        let c = m as f64 * cycles_per_sample;
        (c - c.round()).abs()
    };
    (1..=max_len)
        .min_by(|&a, &b| miss(a).total_cmp(&miss(b)))
        .unwrap_or(1)
}

/// Unwraps a sequence of wrapped angles: every step is moved by a multiple
/// of 2π into [−π, π].
pub fn unwrap(wrapped: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(wrapped.len());
    let mut turns = 0.0f64;
    let mut prev = match wrapped.first() {
        Some(&v) => v,
        None => return out,
    };
    out.push(prev);
    for &v in &wrapped[1..] {
        let step = v - prev;
        turns -= (step / TAU).round();
        out.push(v + TAU * turns);
        prev = v;
    }
    out
}

/// Continuous phase arg z(t) of a baseband trace.
///
/// Correct whenever the true phase moves by less than π between samples;
/// faster phase produces 2π slips.
pub fn unwrap_phase(baseband: &BasebandTrace) -> Result<SampledTrace> {
    let wrapped: Vec<f64> = baseband.samples().iter().map(|z| z.arg()).collect();
    SampledTrace::phase(baseband.sample_rate(), unwrap(&wrapped))
}

/// Zero-phase Butterworth high-pass of the given order. Two passes put the
/// cutoff at −6 dB.
pub fn highpass(trace: &SampledTrace, cutoff: f64, order: usize) -> Result<SampledTrace> {
    let filt = Butterworth::design(FilterKind::Highpass, order, cutoff, trace.sample_rate())?;
    SampledTrace::new(
        trace.kind(),
        trace.sample_rate(),
        filt.filtfilt(trace.samples()),
    )
}

fn integral_rate(rate: f64) -> Option<u64> {
    let r = rate.round();
    ((rate - r).abs() < 1e-6 && r >= 1.0).then_some(r as u64)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Rational resampling to `target_rate`.
///
/// Both rates must be whole numbers of hertz. The anti-aliasing/anti-imaging
/// filter is flat to `pass_edge` and rejects by `atten_db` from half the lower
/// of the two rates. The filter is applied without delay, over a record
/// extended by odd reflection at both ends.
pub fn resample(
    trace: &SampledTrace,
    target_rate: f64,
    pass_edge: f64,
    atten_db: f64,
) -> Result<SampledTrace> {
    let fs = trace.sample_rate();
    let (Some(src), Some(dst)) = (integral_rate(fs), integral_rate(target_rate)) else {
        return Err(Error::config(
            "audio_rate",
            format!("resampling needs integral rates, got {fs} Hz -> {target_rate} Hz"),
        ));
    };
    if src == dst {
        return Ok(trace.clone());
    }
    let stop_edge = src.min(dst) as f64 / 2.0;
    if pass_edge >= stop_edge {
        return Err(Error::config(
            "audio_rate",
            format!(
                "{target_rate} Hz cannot carry content up to {pass_edge} Hz (Nyquist {stop_edge} Hz)"
            ),
        ));
    }
    let g = gcd(src, dst);
    let up = (dst / g) as usize;
    let down = (src / g) as usize;
    let lp = kaiser_lowpass(pass_edge, stop_edge, atten_db, (src * up as u64) as f64)?;
    let taps = &lp.taps;
    let center = lp.delay();
    let x = trace.samples();
    if x.is_empty() {
        return SampledTrace::new(trace.kind(), target_rate, Vec::new());
    }
    let pad = taps.len() / up + 1;
    let ext = odd_extend(x, pad);
    let out_len = (x.len() * up).div_ceil(down);
    let gain = up as f64;

    let y = (0..out_len)
        .map(|m| {
            // Extended sample n sits at index n·up of the zero-stuffed sequence
            // and meets tap k = m·down + center + pad·up − n·up.
            let pos = m * down + center + pad * up;
            let n_hi = (pos / up).min(ext.len() - 1);
            let n_lo = (pos + 1).saturating_sub(taps.len()).div_ceil(up);
            let mut acc = 0.0;
            for n in n_lo..=n_hi {
                acc += taps[pos - n * up] * ext[n];
            }
            acc * gain
        })
        .collect();
    SampledTrace::new(trace.kind(), target_rate, y)
}

/// `x` with `pad` samples of odd reflection about each end point, which
/// continues constants and straight lines without a step.
fn odd_extend(x: &[f64], pad: usize) -> Vec<f64> {
    let last = x.len() - 1;
    let (first_v, last_v) = (x[0], x[last]);
    let head = (1..=pad).rev().map(|k| 2.0 * first_v - x[k.min(last)]);
    let tail = (1..=pad).map(|k| 2.0 * last_v - x[last - k.min(last)]);
    head.chain(x.iter().copied()).chain(tail).collect()
}

/// Anti-alias filters and resamples a phase trace to `target_rate`,
/// preserving the 100 Hz – 10 kHz voice band.
pub fn decimate_to_audio(trace: &SampledTrace, target_rate: f64) -> Result<SampledTrace> {
    let band = AudioBand::default();
    if target_rate / 2.0 <= band.f_high {
        return Err(Error::config(
            "demod.audio_rate",
            format!(
                "{target_rate} Hz has Nyquist at or below the {} Hz voice band edge",
                band.f_high
            ),
        ));
    }
    resample(trace, target_rate, band.f_high, RESAMPLE_STOPBAND_DB)
}

/// Options for [`recover_audio`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoverOptions {
    pub highpass: bool,
    pub decimate: bool,
}

impl Default for RecoverOptions {
    fn default() -> Self {
        Self {
            highpass: true,
            decimate: true,
        }
    }
}

/// The full demodulation chain: IQ mixing, unwrapping, optional high-pass,
/// optional resampling to `cfg.audio_rate`.
pub fn recover_audio(
    het: &SampledTrace,
    cfg: &DemodConfig,
    opts: RecoverOptions,
) -> Result<SampledTrace> {
    let baseband = iq_demodulate(het, cfg)?;
    let mut phase = unwrap_phase(&baseband)?;
    if opts.highpass && cfg.highpass_cutoff > 0.0 {
        phase = highpass(&phase, cfg.highpass_cutoff, cfg.filter_order)?;
    }
    if opts.decimate {
        phase = decimate_to_audio(&phase, cfg.audio_rate)?;
    }
    Ok(phase)
}

/// Zero-mean Pearson correlation of two equally long slices.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len()) as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    sab / (saa * sbb).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const FS: f64 = 400e3;

    fn carrier(alpha: f64, phase: impl Fn(f64) -> f64, n: usize) -> SampledTrace {
        let s = (0..n)
            .map(|i| {
                let t = i as f64 / FS;
                1.0 + alpha * alpha + 2.0 * alpha * (2.0 * PI * 25e3 * t + phase(t)).cos()
            })
            .collect();
        SampledTrace::heterodyne(FS, s).unwrap()
    }

    fn tone(f: f64, fs: f64, n: usize) -> SampledTrace {
        SampledTrace::phase(
            fs,
            (0..n)
                .map(|i| (2.0 * PI * f * i as f64 / fs).sin())
                .collect(),
        )
        .unwrap()
    }

    fn trimmed_rms(x: &[f64], trim: usize) -> f64 {
        let s = &x[trim..x.len() - trim];
        (s.iter().map(|v| v * v).sum::<f64>() / s.len() as f64).sqrt()
    }

    #[test]
    fn unmodulated_carrier_has_constant_phase() {
        let cfg = DemodConfig::for_beat(25e3);
        let bb = iq_demodulate(&carrier(0.2, |_| 0.7, 20_000), &cfg).unwrap();
        let ph = unwrap_phase(&bb).unwrap();
        for &p in &ph.samples()[1000..19_000] {
            assert!((p - 0.7).abs() < 1e-6, "{p}");
        }
        for z in &bb.samples()[1000..19_000] {
            assert!((z.norm() - 0.2).abs() < 1e-6);
        }
    }

    #[test]
    fn dc_offset_does_not_leak_into_phase() {
        let cfg = DemodConfig::for_beat(25e3);
        let n = 20_000;
        let with_dc = carrier(0.2, |_| 0.0, n);
        let without: Vec<f64> = with_dc.samples().iter().map(|x| x - 1.04).collect();
        let without = SampledTrace::heterodyne(FS, without).unwrap();
        let a = unwrap_phase(&iq_demodulate(&with_dc, &cfg).unwrap()).unwrap();
        let b = unwrap_phase(&iq_demodulate(&without, &cfg).unwrap()).unwrap();
        for i in 0..n {
            assert!((a.samples()[i] - b.samples()[i]).abs() < 1e-6);
        }
    }

    #[test]
    fn constant_phase_holds_to_the_edges() {
        // A beat with no short whole-cycle block leaves a small edge error.
        for (beat, tol) in [(25e3, 1e-6), (23e3, 1e-6), (31_337.0, 2e-3)] {
            let cfg = DemodConfig::for_beat(beat);
            let het: Vec<f64> = (0..5000)
                .map(|i| 1.04 + 0.4 * (2.0 * PI * beat * i as f64 / FS + 0.7).cos())
                .collect();
            let het = SampledTrace::heterodyne(FS, het).unwrap();
            let phase = unwrap_phase(&iq_demodulate(&het, &cfg).unwrap()).unwrap();
            let worst = phase
                .samples()
                .iter()
                .map(|p| (p - 0.7).abs())
                .fold(0.0, f64::max);
            assert!(worst < tol, "{beat} Hz: {worst}");
        }
    }

    #[test]
    fn shorter_than_one_period_still_runs() {
        let het = carrier(0.2, |_| 0.0, 7);
        assert_eq!(
            iq_demodulate(&het, &DemodConfig::for_beat(25e3))
                .unwrap()
                .len(),
            7
        );
    }

    #[test]
    fn recovers_sinusoidal_phase() {
        let cfg = DemodConfig::for_beat(25e3);
        let n = 40_000;
        let inject = |t: f64| 0.5 * (2.0 * PI * 1000.0 * t).sin();
        let ph = unwrap_phase(&iq_demodulate(&carrier(0.2, inject, n), &cfg).unwrap()).unwrap();
        let err: Vec<f64> = (0..n)
            .map(|i| ph.samples()[i] - inject(i as f64 / FS))
            .collect();
        assert!(trimmed_rms(&err, 2000) < 1e-3);
    }

    #[test]
    fn demodulation_is_amplitude_invariant() {
        let cfg = DemodConfig::for_beat(25e3);
        let het = carrier(0.3, |t| 1.2 * (2.0 * PI * 700.0 * t).sin(), 20_000);
        let a = unwrap_phase(&iq_demodulate(&het, &cfg).unwrap()).unwrap();
        let b = unwrap_phase(&iq_demodulate(&het.scaled(37.5).unwrap(), &cfg).unwrap()).unwrap();
        for (x, y) in a.samples().iter().zip(b.samples()) {
            assert!((x - y).abs() < 1e-6);
        }
    }

    #[test]
    fn beat_outside_nyquist() {
        let cfg = DemodConfig::for_beat(250e3);
        let err = iq_demodulate(&carrier(0.2, |_| 0.0, 100), &cfg).unwrap_err();
        assert!(matches!(err, Error::Nyquist { .. }));
    }

    #[test]
    fn folded_image_is_caught() {
        let mut cfg = DemodConfig::for_beat(180e3);
        cfg.lowpass_cutoff = 90e3;
        assert!(cfg.validate(FS).is_err());
    }

    #[test]
    fn unwrap_constant_and_ramps() {
        assert_eq!(unwrap(&[1.0; 5]), vec![1.0; 5]);
        let wrap = |x: f64| (x + PI).rem_euclid(TAU) - PI;
        let ramp: Vec<f64> = (0..200).map(|i| 2.5 + 0.05 * i as f64).collect();
        let out = unwrap(&ramp.iter().map(|&x| wrap(x)).collect::<Vec<_>>());
        for (o, r) in out.iter().zip(&ramp) {
            assert!((o - r - (out[0] - ramp[0])).abs() < 1e-12);
        }
        for w in out.windows(2) {
            assert!((w[1] - w[0]).abs() <= PI);
        }
    }

    #[test]
    fn unwrap_twenty_pi_excursion() {
        let n = 10_001;
        let total = 20.0 * PI;
        let bb: Vec<Complex64> = (0..n)
            .map(|i| Complex64::from_polar(1.0, total * i as f64 / (n - 1) as f64))
            .collect();
        let ph = unwrap_phase(&BasebandTrace::baseband(FS, bb).unwrap()).unwrap();
        let s = ph.samples();
        assert!((s[n - 1] - s[0] - total).abs() < 1e-9);
    }

    #[test]
    fn highpass_kills_dc() {
        let dc = SampledTrace::phase(FS, vec![3.0; 50_000]).unwrap();
        let y = highpass(&dc, 500.0, 4).unwrap();
        assert!(
            y.samples().iter().all(|v| v.abs() < 3e-8),
            "{:?}",
            &y.samples()[..4]
        );
    }

    #[test]
    fn highpass_passband_and_stopband() {
        let n = 200_000;
        let trim = 40_000;
        let pass = highpass(&tone(5e3, FS, n), 500.0, 4).unwrap();
        let loss = 20.0 * (trimmed_rms(pass.samples(), trim) / (0.5f64).sqrt()).log10();
        assert!(loss.abs() < 0.1, "5 kHz: {loss} dB");
        let stop = highpass(&tone(100.0, FS, n), 500.0, 4).unwrap();
        let atten = 20.0 * (trimmed_rms(stop.samples(), trim) / (0.5f64).sqrt()).log10();
        assert!(atten <= -50.0, "100 Hz: {atten} dB");
    }

    #[test]
    fn highpass_designed_response() {
        let f = Butterworth::design(FilterKind::Highpass, 4, 500.0, FS).unwrap();
        let two_pass = |freq: f64| 20.0 * f.response(freq).norm_sqr().log10();
        assert!(two_pass(5e3) > -0.1);
        assert!(two_pass(100.0) <= -50.0);
        assert!((two_pass(500.0) + 6.02).abs() < 0.01);
    }

    #[test]
    fn highpass_preserves_in_band_phase() {
        let n = 200_000;
        let x = tone(2e3, FS, n);
        let y = highpass(&x, 500.0, 4).unwrap();
        // Estimate phase offset by projecting onto sin/cos over the settled middle.
        let (mut s, mut c) = (0.0, 0.0);
        for i in 40_000..160_000 {
            let w = 2.0 * PI * 2e3 * i as f64 / FS;
            s += y.samples()[i] * w.sin();
            c += y.samples()[i] * w.cos();
        }
        assert!(c.atan2(s).abs() < 0.01);
    }

    #[test]
    fn decimation_identity() {
        let x = tone(1e3, FS, 1000);
        assert_eq!(decimate_to_audio(&x, FS).unwrap(), x);
    }

    #[test]
    fn decimation_preserves_tone() {
        let n = 400_000;
        let y = decimate_to_audio(&tone(1e3, FS, n), 40e3).unwrap();
        assert_eq!(y.len(), 40_000);
        let gain = 20.0 * (trimmed_rms(y.samples(), 2000) / (0.5f64).sqrt()).log10();
        assert!(gain.abs() < 0.1, "{gain}");
    }

    #[test]
    fn decimation_band_edge() {
        let n = 400_000;
        for f in [100.0, 3e3, 9.9e3] {
            let y = decimate_to_audio(&tone(f, FS, n), 40e3).unwrap();
            let gain = 20.0 * (trimmed_rms(y.samples(), 2000) / (0.5f64).sqrt()).log10();
            assert!(gain.abs() < 0.5, "{f}: {gain}");
        }
    }

    #[test]
    fn decimation_rejects_alias() {
        let n = 400_000;
        let y = decimate_to_audio(&tone(30e3, FS, n), 40e3).unwrap();
        let level = 20.0 * (trimmed_rms(y.samples(), 2000) / (0.5f64).sqrt()).log10();
        assert!(level < -60.0, "{level}");
    }

    #[test]
    fn resampling_keeps_lines_at_the_edges() {
        let x =
            SampledTrace::phase(FS, (0..4000).map(|i| 0.3 + 1e-5 * i as f64).collect()).unwrap();
        let y = decimate_to_audio(&x, 40e3).unwrap();
        for (m, v) in y.samples().iter().enumerate() {
            let expected = 0.3 + 1e-5 * (10 * m) as f64;
            assert!((v - expected).abs() < 1e-6, "{m}: {v} vs {expected}");
        }
    }

    #[test]
    fn decimation_needs_room_for_band() {
        assert!(decimate_to_audio(&tone(1e3, FS, 100), 16e3).is_err());
    }

    #[test]
    fn rational_resampling_round_trip() {
        // 44.1 kHz -> 400 kHz -> 44.1 kHz keeps an in-band tone intact.
        let n = 44_100;
        let x = tone(1234.0, 44_100.0, n);
        let up = resample(&x, FS, 10e3, 80.0).unwrap();
        assert_eq!(up.len(), 400_000);
        let back = resample(&up, 44_100.0, 10e3, 80.0).unwrap();
        assert_eq!(back.len(), n);
        let err: Vec<f64> = x
            .samples()
            .iter()
            .zip(back.samples())
            .map(|(a, b)| a - b)
            .collect();
        assert!(trimmed_rms(&err, 2000) < 1e-3);
    }

    #[test]
    fn linearity_of_highpass() {
        let a = tone(700.0, FS, 8000);
        let b = tone(3300.0, FS, 8000);
        let mix: Vec<f64> = a
            .samples()
            .iter()
            .zip(b.samples())
            .map(|(x, y)| 2.0 * x - 0.5 * y)
            .collect();
        let lhs = highpass(&SampledTrace::phase(FS, mix).unwrap(), 500.0, 4).unwrap();
        let ha = highpass(&a, 500.0, 4).unwrap();
        let hb = highpass(&b, 500.0, 4).unwrap();
        for i in 0..8000 {
            let rhs = 2.0 * ha.samples()[i] - 0.5 * hb.samples()[i];
            assert!((lhs.samples()[i] - rhs).abs() < 1e-12);
        }
    }
}
