//! Uniformly sampled time series.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Physical meaning of a trace's samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceKind {
    /// Acoustic pressure in pascal.
    AudioPressure,
    /// Optical phase in radians.
    Phase,
    /// Photodiode intensity, arbitrary units (E₀² = 1).
    Heterodyne,
    /// Complex baseband after IQ mixing.
    Baseband,
}

impl TraceKind {
    pub fn name(self) -> &'static str {
        match self {
            TraceKind::AudioPressure => "audio_pressure",
            TraceKind::Phase => "phase",
            TraceKind::Heterodyne => "heterodyne",
            TraceKind::Baseband => "baseband",
        }
    }
}

/// Sample types a trace may carry.
pub trait Sample: Copy + Send + Sync + 'static {
    fn is_finite(&self) -> bool;
    fn is_complex() -> bool;
}

impl Sample for f64 {
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn is_complex() -> bool {
        false
    }
}

impl Sample for Complex64 {
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn is_complex() -> bool {
        true
    }
}

/// A uniformly sampled, immutable time series.
///
/// Construction checks that the sample rate is positive, every sample is
/// finite, and that the sample type agrees with the kind (only
/// [`TraceKind::Baseband`] is complex).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledTrace<T: Sample = f64> {
    sample_rate: f64,
    kind: TraceKind,
    samples: Vec<T>,
}

/// Complex baseband trace produced by IQ demodulation.
pub type BasebandTrace = SampledTrace<Complex64>;

impl<T: Sample> SampledTrace<T> {
    pub fn new(kind: TraceKind, sample_rate: f64, samples: Vec<T>) -> Result<Self> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::input(format!(
                "sample rate must be positive and finite, got {sample_rate}"
            )));
        }
        if T::is_complex() != (kind == TraceKind::Baseband) {
            return Err(Error::input(format!(
                "{} traces cannot hold {} samples",
                kind.name(),
                if T::is_complex() { "complex" } else { "real" }
            )));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::input(format!(
                "{} trace has a non-finite sample at index {i}",
                kind.name()
            )));
        }
        Ok(Self {
            sample_rate,
            kind,
            samples,
        })
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn kind(&self) -> TraceKind {
        self.kind
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    /// Time stamp of sample `i`, with the first sample at t = 0.
    pub fn time(&self, i: usize) -> f64 {
        i as f64 / self.sample_rate
    }

    pub(crate) fn expect_kind(&self, kind: TraceKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::input(format!(
                "expected a {} trace, got {}",
                kind.name(),
                self.kind.name()
            )))
        }
    }
}

impl SampledTrace<f64> {
    pub fn audio(sample_rate: f64, samples: Vec<f64>) -> Result<Self> {
        Self::new(TraceKind::AudioPressure, sample_rate, samples)
    }

    pub fn phase(sample_rate: f64, samples: Vec<f64>) -> Result<Self> {
        Self::new(TraceKind::Phase, sample_rate, samples)
    }

    pub fn heterodyne(sample_rate: f64, samples: Vec<f64>) -> Result<Self> {
        Self::new(TraceKind::Heterodyne, sample_rate, samples)
    }

    /// Same trace with each sample multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.kind,
            self.sample_rate,
            self.samples.iter().map(|x| x * factor).collect(),
        )
    }

    pub fn rms(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        (self.samples.iter().map(|x| x * x).sum::<f64>() / self.samples.len() as f64).sqrt()
    }
}

impl BasebandTrace {
    pub fn baseband(sample_rate: f64, samples: Vec<Complex64>) -> Result<Self> {
        Self::new(TraceKind::Baseband, sample_rate, samples)
    }
}
