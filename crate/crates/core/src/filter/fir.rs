use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Linear-phase low-pass FIR designed with the Kaiser window method.
#[derive(Debug, Clone, PartialEq)]
pub struct KaiserLowpass {
    pub taps: Vec<f64>,
    pub pass_edge: f64,
    pub stop_edge: f64,
    pub sample_rate: f64,
}

impl KaiserLowpass {
    /// Group delay in samples; taps are always odd in number.
    pub fn delay(&self) -> usize {
        (self.taps.len() - 1) / 2
    }

    /// Magnitude of the frequency response at `f` Hz.
    pub fn gain(&self, f: f64) -> f64 {
        let w = 2.0 * PI * f / self.sample_rate;
        let c = self.delay() as f64;
        // Symmetric taps: the response is real once the linear phase is removed.
        self.taps
            .iter()
            .enumerate()
            .map(|(k, h)| h * (w * (k as f64 - c)).cos())
            .sum::<f64>()
            .abs()
    }
}

fn bessel_i0(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    let q = x * x / 4.0;
    for k in 1..200 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

fn kaiser_beta(atten_db: f64) -> f64 {
    if atten_db > 50.0 {
        0.1102 * (atten_db - 8.7)
    } else if atten_db >= 21.0 {
        0.5842 * (atten_db - 21.0).powf(0.4) + 0.07886 * (atten_db - 21.0)
    } else {
        0.0
    }
}

/// Designs a unity-DC-gain low-pass with passband up to `pass_edge` and at
/// least `atten_db` of rejection from `stop_edge` to Nyquist.
pub fn kaiser_lowpass(
    pass_edge: f64,
    stop_edge: f64,
    atten_db: f64,
    sample_rate: f64,
) -> Result<KaiserLowpass> {
    if !(0.0 < pass_edge && pass_edge < stop_edge && stop_edge <= sample_rate / 2.0) {
        return Err(Error::config(
            "lowpass",
            format!(
                "need 0 < pass edge ({pass_edge}) < stop edge ({stop_edge}) <= fs/2 ({})",
                sample_rate / 2.0
            ),
        ));
    }
    if !(atten_db.is_finite() && atten_db > 0.0) {
        return Err(Error::config(
            "lowpass",
            format!("invalid attenuation {atten_db} dB"),
        ));
    }
    let transition = 2.0 * PI * (stop_edge - pass_edge) / sample_rate;
    let mut len = ((atten_db - 7.95) / (2.285 * transition)).ceil().max(1.0) as usize + 1;
    if len.is_multiple_of(2) {
        len += 1;
    }
    let beta = kaiser_beta(atten_db);
    let cutoff = 0.5 * (pass_edge + stop_edge) / sample_rate;
    let center = (len - 1) as f64 / 2.0;
    let i0_beta = bessel_i0(beta);
    let mut taps: Vec<f64> = (0..len)
        .map(|k| {
            let m = k as f64 - center;
            let sinc = if m == 0.0 {
                2.0 * cutoff
            } else {
                (2.0 * PI * cutoff * m).sin() / (PI * m)
            };
            let r = if center > 0.0 { m / center } else { 0.0 };
            let window = bessel_i0(beta * (1.0 - r * r).max(0.0).sqrt()) / i0_beta;
            sinc * window
        })
        .collect();
    let dc: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|h| *h /= dc);
    Ok(KaiserLowpass {
        taps,
        pass_edge,
        stop_edge,
        sample_rate,
    })
}

/// Convolves `x` with the odd-length kernel `h`, aligned on the kernel centre
/// so the output has the length of `x` and no delay. Samples beyond the ends
/// are taken as zero.
pub fn convolve_same(x: &[Complex64], h: &[f64]) -> Vec<Complex64> {
    if x.is_empty() || h.is_empty() {
        return vec![Complex64::new(0.0, 0.0); x.len()];
    }
    let full = x.len() + h.len() - 1;
    let size = full.next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);

    let mut a = vec![Complex64::new(0.0, 0.0); size];
    a[..x.len()].copy_from_slice(x);
    let mut b = vec![Complex64::new(0.0, 0.0); size];
    for (dst, &v) in b.iter_mut().zip(h) {
        *dst = Complex64::new(v, 0.0);
    }
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (u, v) in a.iter_mut().zip(&b) {
        *u *= v;
    }
    inv.process(&mut a);
    let norm = 1.0 / size as f64;
    let offset = (h.len() - 1) / 2;
    a[offset..offset + x.len()]
        .iter()
        .map(|z| z * norm)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn db(x: f64) -> f64 {
        20.0 * x.log10()
    }

    #[test]
    fn bessel_reference_values() {
        assert_eq!(bessel_i0(0.0), 1.0);
        assert!((bessel_i0(1.0) - 1.266_065_877_752_008_4).abs() < 1e-15);
        assert!((bessel_i0(5.0) - 27.239_871_823_604_45).abs() < 1e-11);
    }

    #[test]
    fn meets_band_edges() {
        let lp = kaiser_lowpass(10e3, 20e3, 80.0, 400e3).unwrap();
        assert_eq!(lp.taps.len() % 2, 1);
        assert!(db(lp.gain(0.0)).abs() < 1e-9);
        for f in [1e3, 5e3, 10e3] {
            assert!(db(lp.gain(f)).abs() < 0.01, "passband {f}");
        }
        for f in [20e3, 30e3, 100e3, 199e3] {
            assert!(db(lp.gain(f)) < -79.0, "stopband {f}: {}", db(lp.gain(f)));
        }
    }

    #[test]
    fn deep_stopband() {
        let lp = kaiser_lowpass(12.5e3, 25e3, 140.0, 400e3).unwrap();
        for f in [25e3, 50e3, 75e3] {
            assert!(db(lp.gain(f)) < -138.0, "{f}: {}", db(lp.gain(f)));
        }
    }

    #[test]
    fn invalid_edges() {
        assert!(kaiser_lowpass(20e3, 10e3, 60.0, 400e3).is_err());
        assert!(kaiser_lowpass(10e3, 300e3, 60.0, 400e3).is_err());
    }

    #[test]
    fn same_convolution_matches_direct_sum() {
        let x: Vec<Complex64> = (0..37)
            .map(|i| Complex64::new((i as f64 * 0.3).sin(), (i as f64 * 0.7).cos()))
            .collect();
        let h = [0.1, -0.2, 0.5, 0.25, 0.05];
        let y = convolve_same(&x, &h);
        for i in 0..x.len() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, hk) in h.iter().enumerate() {
                let j = i as isize + 2 - k as isize;
                if j >= 0 && (j as usize) < x.len() {
                    acc += x[j as usize] * hk;
                }
            }
            assert!((acc - y[i]).norm() < 1e-14);
        }
    }
}
