//! Low-pass filter design and application.
//!
//! Three designs are provided, all parameterised for 1000 Hz gaze data by
//! default: an 11-point quadratic Savitzky-Golay smoother, a 7th-order
//! Butterworth and an 80-tap Hamming-windowed sinc. Filters are stored as
//! transfer-function coefficients `b / a` with `a[0] == 1`.

mod apply;
mod design;
mod stability;

pub use apply::{apply, apply_centered, apply_forward, apply_zero_phase, zero_phase_min_len};
pub use design::{
    design, design_butterworth_lowpass, design_fir_lowpass, design_savitzky_golay,
    estimate_fir_taps, FirTapParams,
};
pub use stability::{is_stable, poles};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterKind {
    SavitzkyGolay,
    ButterworthLowpass,
    WindowedSincFir,
}

impl FilterKind {
    pub fn short_name(self) -> &'static str {
        match self {
            FilterKind::SavitzkyGolay => "sg",
            FilterKind::ButterworthLowpass => "iir",
            FilterKind::WindowedSincFir => "fir",
        }
    }
}

impl std::str::FromStr for FilterKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sg" | "savgol" | "savitzky-golay" => Ok(FilterKind::SavitzkyGolay),
            "iir" | "butter" | "butterworth" => Ok(FilterKind::ButterworthLowpass),
            "fir" | "sinc" => Ok(FilterKind::WindowedSincFir),
            other => Err(invalid(format!("unknown filter kind `{other}`"))),
        }
    }
}

/// Design parameters. Only the fields relevant to `kind` are consulted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    pub kind: FilterKind,
    pub window_length: usize,
    pub poly_order: usize,
    pub order: usize,
    pub n_taps: usize,
    pub cutoff_hz: f64,
    pub fs_hz: f64,
}

impl FilterSpec {
    pub fn savitzky_golay(window_length: usize, poly_order: usize, fs_hz: f64) -> Self {
        FilterSpec {
            kind: FilterKind::SavitzkyGolay,
            window_length,
            poly_order,
            ..Self::defaults(fs_hz)
        }
    }

    pub fn butterworth(order: usize, cutoff_hz: f64, fs_hz: f64) -> Self {
        FilterSpec {
            kind: FilterKind::ButterworthLowpass,
            order,
            cutoff_hz,
            ..Self::defaults(fs_hz)
        }
    }

    pub fn fir(n_taps: usize, cutoff_hz: f64, fs_hz: f64) -> Self {
        FilterSpec {
            kind: FilterKind::WindowedSincFir,
            n_taps,
            cutoff_hz,
            ..Self::defaults(fs_hz)
        }
    }

    /// The table values: SG(11, 2), Butterworth order 7, 80 taps, 100 Hz cut-off.
    pub fn defaults(fs_hz: f64) -> Self {
        FilterSpec {
            kind: FilterKind::WindowedSincFir,
            window_length: 11,
            poly_order: 2,
            order: 7,
            n_taps: 80,
            cutoff_hz: 100.0,
            fs_hz,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fs_hz.is_finite() && self.fs_hz > 0.0) {
            return Err(invalid(format!("sampling rate must be positive, got {}", self.fs_hz)));
        }
        match self.kind {
            FilterKind::SavitzkyGolay => {
                if self.window_length.is_multiple_of(2) {
                    return Err(invalid(format!(
                        "Savitzky-Golay window length must be odd, got {}",
                        self.window_length
                    )));
                }
                if self.window_length <= self.poly_order {
                    return Err(invalid(format!(
                        "Savitzky-Golay window length {} must exceed polynomial order {}",
                        self.window_length, self.poly_order
                    )));
                }
            }
            FilterKind::ButterworthLowpass => {
                if self.order < 1 {
                    return Err(invalid("Butterworth order must be at least 1"));
                }
                self.check_cutoff()?;
            }
            FilterKind::WindowedSincFir => {
                if self.n_taps < 2 {
                    return Err(invalid(format!("FIR needs at least 2 taps, got {}", self.n_taps)));
                }
                self.check_cutoff()?;
            }
        }
        Ok(())
    }

    fn check_cutoff(&self) -> Result<()> {
        let nyquist = self.fs_hz / 2.0;
        if !(self.cutoff_hz > 0.0 && self.cutoff_hz < nyquist) {
            return Err(invalid(format!(
                "cut-off {} Hz must lie strictly between 0 and Nyquist ({nyquist} Hz)",
                self.cutoff_hz
            )));
        }
        Ok(())
    }
}

/// A rational transfer function `B(z) / A(z)` with its design metadata.
///
/// `zero_phase` records whether the filter is meant to be run forward and
/// backward; the analytic response then squares the single-pass magnitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DigitalFilter {
    pub b: Vec<f64>,
    pub a: Vec<f64>,
    pub spec: FilterSpec,
    pub zero_phase: bool,
}

impl DigitalFilter {
    /// Builds a filter from raw coefficients, normalising so that `a[0] == 1`.
    pub fn from_coefficients(b: Vec<f64>, a: Vec<f64>, spec: FilterSpec) -> Result<Self> {
        if b.is_empty() || a.is_empty() {
            return Err(invalid("filter coefficients must be non-empty"));
        }
        let a0 = a[0];
        if a0 == 0.0 || !a0.is_finite() {
            return Err(invalid("leading denominator coefficient must be finite and non-zero"));
        }
        let b = b.into_iter().map(|v| v / a0).collect();
        let a = a.into_iter().map(|v| v / a0).collect();
        Ok(DigitalFilter { b, a, spec, zero_phase: false })
    }

    /// `b = [1]`, `a = [1]`.
    pub fn identity(fs_hz: f64) -> Self {
        DigitalFilter {
            b: vec![1.0],
            a: vec![1.0],
            spec: FilterSpec::fir(2, fs_hz / 4.0, fs_hz),
            zero_phase: false,
        }
    }

    pub fn with_zero_phase(mut self, zero_phase: bool) -> Self {
        self.zero_phase = zero_phase;
        self
    }

    pub fn is_fir(&self) -> bool {
        self.a.len() == 1
    }

    pub fn dc_gain(&self) -> f64 {
        self.b.iter().sum::<f64>() / self.a.iter().sum::<f64>()
    }

    /// Single-pass `H(e^{jω})` at `freq_hz`, or `None` when `|A| < 1e-300`.
    pub fn response_at(&self, freq_hz: f64) -> Option<Complex64> {
        let omega = 2.0 * PI * freq_hz / self.spec.fs_hz;
        let num = eval_poly_on_circle(&self.b, omega);
        let den = eval_poly_on_circle(&self.a, omega);
        if den.norm() < 1e-300 {
            None
        } else {
            Some(num / den)
        }
    }
}

/// `Σ c[k] e^{-jωk}`
pub(crate) fn eval_poly_on_circle(coeffs: &[f64], omega: f64) -> Complex64 {
    let step = Complex64::from_polar(1.0, -omega);
    // Horner in z^{-1}
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * step + c)
}
