use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    Lowpass,
    Highpass,
}

/// One biquad, `b0 + b1 z⁻¹ + b2 z⁻²` over `1 + a1 z⁻¹ + a2 z⁻²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sos {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

impl Sos {
    fn response(&self, z_inv: Complex64) -> Complex64 {
        let z2 = z_inv * z_inv;
        (self.b[0] + self.b[1] * z_inv + self.b[2] * z2)
            / (1.0 + self.a[0] * z_inv + self.a[1] * z2)
    }

    fn dc_gain(&self) -> f64 {
        (self.b[0] + self.b[1] + self.b[2]) / (1.0 + self.a[0] + self.a[1])
    }

    /// Transposed direct-form II state after a constant input `x` forever.
    fn steady_state(&self, x: f64) -> [f64; 2] {
        let y = self.dc_gain() * x;
        let z2 = self.b[2] * x - self.a[1] * y;
        let z1 = self.b[1] * x - self.a[0] * y + z2;
        [z1, z2]
    }
}

/// Digital Butterworth filter from the bilinear transform of the analog
/// prototype, stored as cascaded second-order sections.
#[derive(Debug, Clone, PartialEq)]
pub struct Butterworth {
    sections: Vec<Sos>,
    kind: FilterKind,
    cutoff: f64,
    sample_rate: f64,
}

impl Butterworth {
    pub fn design(kind: FilterKind, order: usize, cutoff: f64, sample_rate: f64) -> Result<Self> {
        if !(1..=16).contains(&order) {
            return Err(Error::config(
                "filter_order",
                format!("must be 1..=16, got {order}"),
            ));
        }
        if !(cutoff > 0.0 && cutoff < sample_rate / 2.0) {
            return Err(Error::Nyquist {
                keys: "cutoff".into(),
                frequency: cutoff,
                nyquist: sample_rate / 2.0,
            });
        }
        let fs2 = 2.0 * sample_rate;
        let warped = fs2 * (PI * cutoff / sample_rate).tan();
        let bilinear = |s: Complex64| (fs2 + s) / (fs2 - s);
        let n = order as f64;

        let mut sections = Vec::with_capacity(order.div_ceil(2));
        for k in 0..order / 2 {
            let theta = PI * (2.0 * k as f64 + n + 1.0) / (2.0 * n);
            let proto = Complex64::from_polar(1.0, theta);
            let s = match kind {
                FilterKind::Lowpass => proto * warped,
                FilterKind::Highpass => warped / proto,
            };
            let p = bilinear(s);
            let b = match kind {
                FilterKind::Lowpass => [1.0, 2.0, 1.0],
                FilterKind::Highpass => [1.0, -2.0, 1.0],
            };
            sections.push(Sos {
                b,
                a: [-2.0 * p.re, p.norm_sqr()],
            });
        }
        if order % 2 == 1 {
            // The real prototype pole −1 maps to −ω_c for both kinds.
            let p = bilinear(Complex64::new(-warped, 0.0)).re;
            let b = match kind {
                FilterKind::Lowpass => [1.0, 1.0, 0.0],
                FilterKind::Highpass => [1.0, -1.0, 0.0],
            };
            sections.push(Sos { b, a: [-p, 0.0] });
        }
        // Unity gain in the passband, per section.
        let reference = match kind {
            FilterKind::Lowpass => Complex64::new(1.0, 0.0),
            FilterKind::Highpass => Complex64::new(-1.0, 0.0),
        };
        for sec in &mut sections {
            let g = sec.response(reference).norm();
            sec.b.iter_mut().for_each(|b| *b /= g);
        }
        Ok(Self {
            sections,
            kind,
            cutoff,
            sample_rate,
        })
    }

    pub fn sections(&self) -> &[Sos] {
        &self.sections
    }

    pub fn kind(&self) -> FilterKind {
        self.kind
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Complex response of a single pass at `f` Hz.
    pub fn response(&self, f: f64) -> Complex64 {
        let z_inv = Complex64::from_polar(1.0, -2.0 * PI * f / self.sample_rate);
        self.sections.iter().map(|s| s.response(z_inv)).product()
    }

    /// Causal filtering with the state primed as if `x[0]` had been applied forever.
    pub fn filter(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        let Some(&first) = x.first() else {
            return y;
        };
        let mut level = first;
        for sec in &self.sections {
            let [mut z1, mut z2] = sec.steady_state(level);
            level *= sec.dc_gain();
            for v in y.iter_mut() {
                let input = *v;
                let out = sec.b[0] * input + z1;
                z1 = sec.b[1] * input - sec.a[0] * out + z2;
                z2 = sec.b[2] * input - sec.a[1] * out;
                *v = out;
            }
        }
        y
    }

    /// Forward-backward (zero-phase) filtering. The magnitude response is the
    /// single-pass response squared; the ends are padded by odd reflection.
    pub fn filtfilt(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        if n < 2 {
            return self.filter(x);
        }
        let pad = (3 * (2 * self.sections.len() + 1)).min(n - 1);
        let mut ext = Vec::with_capacity(n + 2 * pad);
        ext.extend((1..=pad).rev().map(|i| 2.0 * x[0] - x[i]));
        ext.extend_from_slice(x);
        ext.extend((1..=pad).map(|i| 2.0 * x[n - 1] - x[n - 1 - i]));

        let mut y = self.filter(&ext);
        y.reverse();
        let mut y = self.filter(&y);
        y.reverse();
        y[pad..pad + n].to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn db(x: f64) -> f64 {
        20.0 * x.log10()
    }

    #[test]
    fn cutoff_is_minus_three_db() {
        for order in 1..=8 {
            for kind in [FilterKind::Lowpass, FilterKind::Highpass] {
                let f = Butterworth::design(kind, order, 500.0, 400e3).unwrap();
                let g = db(f.response(500.0).norm());
                assert!((g + 3.0103).abs() < 1e-3, "order {order} {kind:?}: {g}");
            }
        }
    }

    #[test]
    fn highpass_matches_analog_magnitude_far_below_nyquist() {
        let f = Butterworth::design(FilterKind::Highpass, 4, 500.0, 400e3).unwrap();
        for freq in [100.0, 250.0, 1000.0, 5000.0] {
            let analog = 1.0 / (1.0 + (500.0f64 / freq).powi(8)).sqrt();
            let digital = f.response(freq).norm();
            assert!((db(digital) - db(analog)).abs() < 0.05, "{freq}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Butterworth::design(FilterKind::Highpass, 0, 500.0, 400e3).is_err());
        assert!(Butterworth::design(FilterKind::Highpass, 4, 250e3, 400e3).is_err());
        assert!(Butterworth::design(FilterKind::Highpass, 4, 0.0, 400e3).is_err());
    }

    #[test]
    fn steady_state_start_has_no_step() {
        let f = Butterworth::design(FilterKind::Lowpass, 3, 1000.0, 48e3).unwrap();
        let y = f.filter(&[2.5; 100]);
        assert!(y.iter().all(|v| (v - 2.5).abs() < 1e-12));
    }
}
