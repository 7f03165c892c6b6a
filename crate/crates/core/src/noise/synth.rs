use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::trace::SampledTrace;

/// Gaussian phase noise with a prescribed one-sided PSD (rad²/Hz).
///
/// White Gaussian spectra are shaped bin by bin with √(S(f)·fs·N/2) and
/// transformed back, so the expected periodogram equals the target at every
/// bin. The DC bin is zero. Below `flatten_below` the target is held at
/// `S(flatten_below)` so 1/f sources keep finite power.
pub fn synthesize_colored_noise<F>(
    psd: F,
    n_samples: usize,
    sample_rate: f64,
    flatten_below: f64,
    seed: u64,
) -> Result<SampledTrace>
where
    F: Fn(f64) -> f64,
{
    if n_samples < 2 {
        return Err(Error::input(format!(
            "colored noise needs at least 2 samples, got {n_samples}"
        )));
    }
    if !(sample_rate.is_finite() && sample_rate > 0.0) {
        return Err(Error::input(format!("invalid sample rate {sample_rate}")));
    }
    if !(flatten_below.is_finite() && flatten_below >= 0.0) {
        return Err(Error::input(format!(
            "invalid flattening frequency {flatten_below}"
        )));
    }

    let n = n_samples;
    let df = sample_rate / n as f64;
    let scale = (sample_rate * n as f64 / 2.0).sqrt();
    let half = n / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spectrum = vec![Complex64::new(0.0, 0.0); n];

    for k in 1..=half {
        let f = (k as f64 * df).max(flatten_below);
        let s = psd(f);
        if !s.is_finite() || s < 0.0 {
            return Err(Error::Synthesis(format!(
                "target PSD is {s} at {f} Hz; it must be finite and non-negative"
            )));
        }
        let amp = scale * s.sqrt();
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        if 2 * k == n {
            // Nyquist bin is its own mirror and must stay real.
            spectrum[k] = Complex64::new(amp * re, 0.0);
        } else {
            let z = Complex64::new(re, im) * (amp / std::f64::consts::SQRT_2);
            spectrum[k] = z;
            spectrum[n - k] = z.conj();
        }
    }

    FftPlanner::new().plan_fft_inverse(n).process(&mut spectrum);
    let norm = 1.0 / n as f64;
    SampledTrace::phase(sample_rate, spectrum.iter().map(|z| z.re * norm).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_psd_gives_zero_trace() {
        let t = synthesize_colored_noise(|_| 0.0, 1024, 1e3, 0.0, 3).unwrap();
        assert!(t.samples().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn same_seed_same_trace() {
        let psd = |f: f64| 1e-6 / f;
        let a = synthesize_colored_noise(psd, 4096, 400e3, 10.0, 42).unwrap();
        let b = synthesize_colored_noise(psd, 4096, 400e3, 10.0, 42).unwrap();
        assert_eq!(a.samples(), b.samples());
    }

    #[test]
    fn flat_psd_variance_matches_parseval() {
        let (n, fs, s0) = (1usize << 20, 400e3, 2.5e-9);
        let t = synthesize_colored_noise(|_| s0, n, fs, 10.0, 7).unwrap();
        let mean = t.samples().iter().sum::<f64>() / n as f64;
        let var = t.samples().iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        // DC bin is empty; everything else carries S₀ over (0, fs/2].
        let expected = s0 * (fs / 2.0 - fs / n as f64);
        assert!((var / expected - 1.0).abs() < 0.05, "{var} vs {expected}");
    }

    #[test]
    fn odd_length_is_supported() {
        let t = synthesize_colored_noise(|_| 1.0, 1001, 1e3, 0.0, 1).unwrap();
        assert_eq!(t.len(), 1001);
    }

    #[test]
    fn non_finite_psd_is_rejected() {
        let err = synthesize_colored_noise(|f| 1.0 / (f - 500.0).max(0.0), 1000, 1e3, 0.0, 1)
            .unwrap_err();
        assert!(matches!(err, Error::Synthesis(_)));
        assert!(synthesize_colored_noise(|_| -1.0, 16, 1e3, 0.0, 1).is_err());
    }

    #[test]
    fn too_short() {
        assert!(synthesize_colored_noise(|_| 1.0, 1, 1e3, 0.0, 1).is_err());
    }

    #[test]
    fn independent_seeds_are_uncorrelated() {
        let n = 1usize << 20;
        let a = synthesize_colored_noise(|_| 1.0, n, 1e3, 0.0, 1).unwrap();
        let b = synthesize_colored_noise(|_| 1.0, n, 1e3, 0.0, 2).unwrap();
        let dot: f64 = a
            .samples()
            .iter()
            .zip(b.samples())
            .map(|(x, y)| x * y)
            .sum();
        let na: f64 = a.samples().iter().map(|x| x * x).sum();
        let nb: f64 = b.samples().iter().map(|x| x * x).sum();
        assert!((dot / (na * nb).sqrt()).abs() < 0.05);
    }
}
