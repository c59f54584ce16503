use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::{is_stable, DigitalFilter, FilterKind, FilterSpec};
use crate::error::{invalid, Error, Result};

/// Inputs of the tap-count rule of thumb for a windowed FIR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirTapParams {
    /// Passband ripple.
    pub delta1: f64,
    /// Stopband suppression.
    pub delta2: f64,
    pub fs_hz: f64,
    pub transition_width_hz: f64,
}

/// `N ≈ (2/3) · log10(1 / (10 δ1 δ2)) · fs / Δf`, rounded, never below 2.
pub fn estimate_fir_taps(params: FirTapParams) -> Result<usize> {
    let FirTapParams { delta1, delta2, fs_hz, transition_width_hz } = params;
    for (name, v) in [
        ("delta1", delta1),
        ("delta2", delta2),
        ("fs_hz", fs_hz),
        ("transition_width_hz", transition_width_hz),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(invalid(format!("{name} must be positive and finite, got {v}")));
        }
    }
    let n = (2.0 / 3.0) * (1.0 / (10.0 * delta1 * delta2)).log10() * fs_hz / transition_width_hz;
    Ok(n.round().max(2.0) as usize)
}

/// Designs the filter described by `spec`.
pub fn design(spec: &FilterSpec, zero_phase: bool) -> Result<DigitalFilter> {
    let filter = match spec.kind {
        FilterKind::SavitzkyGolay => {
            let mut f = design_savitzky_golay(spec.window_length, spec.poly_order)?;
            f.spec.fs_hz = spec.fs_hz;
            f.spec.validate()?;
            f
        }
        FilterKind::ButterworthLowpass => {
            design_butterworth_lowpass(spec.order, spec.cutoff_hz, spec.fs_hz)?
        }
        FilterKind::WindowedSincFir => design_fir_lowpass(spec.n_taps, spec.cutoff_hz, spec.fs_hz)?,
    };
    Ok(filter.with_zero_phase(zero_phase))
}

/// Savitzky-Golay smoothing kernel: the centre row of the least-squares
/// polynomial projection over a window of `window_length` samples.
///
/// The sampling rate is set to 1000 Hz; override `spec.fs_hz` for other rates.
pub fn design_savitzky_golay(window_length: usize, poly_order: usize) -> Result<DigitalFilter> {
    let spec = FilterSpec::savitzky_golay(window_length, poly_order, 1000.0);
    spec.validate()?;

    let half = (window_length / 2) as f64;
    // scaled offsets in [-1, 1] keep the monomials well conditioned
    let t: Vec<f64> = (0..window_length)
        .map(|i| if half == 0.0 { 0.0 } else { (i as f64 - half) / half })
        .collect();

    // Discrete orthogonal polynomials on the window by modified Gram-Schmidt.
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(poly_order + 1);
    for degree in 0..=poly_order {
        let mut v: Vec<f64> = t.iter().map(|&x| x.powi(degree as i32)).collect();
        for q in &basis {
            let proj = dot(&v, q);
            v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= proj * qi);
        }
        let norm = dot(&v, &v).sqrt();
        if norm < 1e-12 {
            return Err(Error::Design(format!(
                "Savitzky-Golay basis is rank deficient at degree {degree}"
            )));
        }
        v.iter_mut().for_each(|vi| *vi /= norm);
        basis.push(v);
    }

    let centre = window_length / 2;
    let b: Vec<f64> = (0..window_length)
        .map(|i| basis.iter().map(|q| q[centre] * q[i]).sum())
        .collect();

    Ok(DigitalFilter { b, a: vec![1.0], spec, zero_phase: false })
}

/// Butterworth low-pass via the bilinear transform, prewarped so the
/// single-pass magnitude at `cutoff_hz` is exactly `1/√2`.
pub fn design_butterworth_lowpass(order: usize, cutoff_hz: f64, fs_hz: f64) -> Result<DigitalFilter> {
    let spec = FilterSpec::butterworth(order, cutoff_hz, fs_hz);
    spec.validate()?;

    let warped = (PI * cutoff_hz / fs_hz).tan();
    let n = order as f64;
    let poles: Vec<Complex64> = (1..=order)
        .map(|k| {
            let analog = Complex64::from_polar(1.0, PI * (2.0 * k as f64 + n - 1.0) / (2.0 * n));
            let s = analog * warped;
            (1.0 + s) / (1.0 - s)
        })
        .collect();

    let a: Vec<f64> = expand_roots(&poles).into_iter().map(|c| c.re).collect();
    // all zeros sit at z = -1
    let numerator: Vec<f64> = binomial_row(order);
    let gain = a.iter().sum::<f64>() / numerator.iter().sum::<f64>();
    let b: Vec<f64> = numerator.into_iter().map(|c| c * gain).collect();

    let filter = DigitalFilter { b, a, spec, zero_phase: false };
    if !is_stable(&filter) {
        return Err(Error::Design(format!(
            "Butterworth order {order} at {cutoff_hz} Hz / {fs_hz} Hz has poles on or outside the unit circle"
        )));
    }
    let at_cutoff = filter.response_at(cutoff_hz).map(|h| h.norm()).unwrap_or(f64::NAN);
    if !((20.0 * (at_cutoff / FRAC_1_SQRT_2).log10()).abs() < 0.01) {
        return Err(Error::Design(format!(
            "Butterworth magnitude at cut-off is {at_cutoff}, expected 1/sqrt(2)"
        )));
    }
    Ok(filter)
}

/// Hamming-windowed sinc with `n_taps` coefficients. The nominal sinc
/// cut-off is found by bisection so that the single-pass response is
/// −3.01 dB at `cutoff_hz`.
pub fn design_fir_lowpass(n_taps: usize, cutoff_hz: f64, fs_hz: f64) -> Result<DigitalFilter> {
    let spec = FilterSpec::fir(n_taps, cutoff_hz, fs_hz);
    spec.validate()?;

    let nyquist = fs_hz / 2.0;
    let excess = |nominal: f64| -> f64 {
        let b = windowed_sinc(n_taps, nominal / fs_hz);
        let probe = DigitalFilter { b, a: vec![1.0], spec: spec.clone(), zero_phase: false };
        probe.response_at(cutoff_hz).map(|h| h.norm()).unwrap_or(0.0) - FRAC_1_SQRT_2
    };

    let (mut lo, mut hi) = (1e-6 * fs_hz, nyquist * (1.0 - 1e-9));
    let (f_lo, f_hi) = (excess(lo), excess(hi));
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Design(format!(
            "{n_taps} taps cannot place the -3 dB point at {cutoff_hz} Hz"
        )));
    }
    let rising = f_lo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (excess(mid) < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * fs_hz {
            break;
        }
    }
    let nominal = 0.5 * (lo + hi);
    let miss = excess(nominal).abs();
    let b = windowed_sinc(n_taps, nominal / fs_hz);
    let filter = DigitalFilter { b, a: vec![1.0], spec, zero_phase: false };

    if miss > 1e-6 {
        return Err(Error::Design(format!(
            "FIR tuning did not converge (|H| off by {miss} at {cutoff_hz} Hz)"
        )));
    }
    Ok(filter)
}

/// Unit-DC-gain Hamming-windowed sinc; `cutoff` is in cycles per sample.
fn windowed_sinc(n_taps: usize, cutoff: f64) -> Vec<f64> {
    let centre = (n_taps as f64 - 1.0) / 2.0;
    let span = (n_taps - 1) as f64;
    let mut h: Vec<f64> = (0..n_taps)
        .map(|i| {
            let m = i as f64 - centre;
            let window = 0.54 - 0.46 * (2.0 * PI * i as f64 / span).cos();
            2.0 * cutoff * sinc(2.0 * cutoff * m) * window
        })
        .collect();
    let total: f64 = h.iter().sum();
    h.iter_mut().for_each(|v| *v /= total);
    h
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Coefficients (in powers of `z^{-1}`) of `Π (1 - r z^{-1})`.
pub(crate) fn expand_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        poly.push(Complex64::new(0.0, 0.0));
        for i in (1..poly.len()).rev() {
            let prev = poly[i - 1];
            poly[i] -= r * prev;
        }
    }
    poly
}

fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0];
    for k in 0..n {
        let next = row[k] * (n - k) as f64 / (k + 1) as f64;
        row.push(next);
    }
    row
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}
