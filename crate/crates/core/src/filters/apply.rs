use super::{DigitalFilter, FilterKind};
use crate::error::{invalid, Result};

/// Runs the filter the way it was designed to be used: forward-backward
/// when `zero_phase` is set, centred convolution for Savitzky-Golay
/// kernels, otherwise a causal single pass.
pub fn apply(filter: &DigitalFilter, signal: &[f64]) -> Result<Vec<f64>> {
    if filter.zero_phase {
        apply_zero_phase(filter, signal)
    } else if filter.spec.kind == FilterKind::SavitzkyGolay {
        apply_centered(filter, signal)
    } else {
        apply_forward(filter, signal)
    }
}

/// Direct-form difference equation with zero initial state:
/// `y[n] = Σ b[k] x[n-k] - Σ_{k≥1} a[k] y[n-k]`.
pub fn apply_forward(filter: &DigitalFilter, signal: &[f64]) -> Result<Vec<f64>> {
    if signal.is_empty() {
        return Err(invalid("cannot filter an empty signal"));
    }
    Ok(difference_equation(&filter.b, &filter.a, signal))
}

fn difference_equation(b: &[f64], a: &[f64], x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; x.len()];
    for n in 0..x.len() {
        let mut acc = 0.0;
        for (k, &bk) in b.iter().enumerate().take(n + 1) {
            acc += bk * x[n - k];
        }
        for (k, &ak) in a.iter().enumerate().skip(1).take(n) {
            acc -= ak * y[n - k];
        }
        y[n] = acc / a[0];
    }
    y
}

/// Shortest signal accepted by [`apply_zero_phase`].
pub fn zero_phase_min_len(filter: &DigitalFilter) -> usize {
    3 * filter.a.len().max(filter.b.len()) + 1
}

/// Forward pass, reverse, second pass, reverse. The signal is extended at
/// both ends by odd reflection over `3 (max(len a, len b) - 1)` samples so
/// that start-up transients fall outside the returned range.
pub fn apply_zero_phase(filter: &DigitalFilter, signal: &[f64]) -> Result<Vec<f64>> {
    let min_len = zero_phase_min_len(filter);
    if signal.len() < min_len {
        return Err(invalid(format!(
            "zero-phase filtering needs at least {min_len} samples, got {}",
            signal.len()
        )));
    }
    let n = signal.len();
    let pad = (3 * (filter.a.len().max(filter.b.len()) - 1)).min(n - 1);
    let extended = odd_extend(signal, pad);

    let mut y = difference_equation(&filter.b, &filter.a, &extended);
    y.reverse();
    let mut y = difference_equation(&filter.b, &filter.a, &y);
    y.reverse();
    Ok(y[pad..pad + n].to_vec())
}

/// Non-causal convolution centred on each sample, for odd-length symmetric
/// kernels. Edges use odd reflection.
pub fn apply_centered(filter: &DigitalFilter, signal: &[f64]) -> Result<Vec<f64>> {
    if !filter.is_fir() || filter.b.len().is_multiple_of(2) {
        return Err(invalid("centred application needs an odd-length FIR kernel"));
    }
    let half = filter.b.len() / 2;
    if signal.len() <= half {
        return Err(invalid(format!(
            "centred filtering with {} taps needs at least {} samples, got {}",
            filter.b.len(),
            half + 1,
            signal.len()
        )));
    }
    let extended = odd_extend(signal, half);
    let taps = &filter.b;
    Ok((0..signal.len())
        .map(|n| {
            // y[n] = Σ b[k] x[n + half - k]
            taps.iter()
                .enumerate()
                .map(|(k, &bk)| bk * extended[n + 2 * half - k])
                .sum()
        })
        .collect())
}

fn odd_extend(x: &[f64], pad: usize) -> Vec<f64> {
    let n = x.len();
    let mut out = Vec::with_capacity(n + 2 * pad);
    out.extend((1..=pad).rev().map(|i| 2.0 * x[0] - x[i]));
    out.extend_from_slice(x);
    out.extend((1..=pad).map(|i| 2.0 * x[n - 1] - x[n - 1 - i]));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::{design_butterworth_lowpass, design_fir_lowpass, design_savitzky_golay, FilterSpec};

    #[test]
    fn identity_filter_passes_through() {
        let id = DigitalFilter::identity(1000.0);
        let x: Vec<f64> = (0..50).map(|i| (i as f64 * 0.37).sin()).collect();
        assert_eq!(apply_forward(&id, &x).unwrap(), x);
        assert_eq!(apply_zero_phase(&id, &x).unwrap(), x);
    }

    #[test]
    fn empty_signal_is_rejected() {
        let id = DigitalFilter::identity(1000.0);
        assert!(apply_forward(&id, &[]).is_err());
    }

    #[test]
    fn zero_phase_reports_minimum_length() {
        let f = design_fir_lowpass(80, 100.0, 1000.0).unwrap();
        let err = apply_zero_phase(&f, &vec![0.0; 240]).unwrap_err().to_string();
        assert!(err.contains("241"), "{err}");
        assert!(apply_zero_phase(&f, &vec![0.0; 241]).is_ok());
    }

    #[test]
    fn sg_keeps_constants_and_quadratics() {
        let f = design_savitzky_golay(11, 2).unwrap();
        let c = vec![3.25; 40];
        for v in apply_forward(&f, &c).unwrap().iter().skip(10) {
            assert!((v - 3.25).abs() < 1e-12);
        }
        let q: Vec<f64> = (0..40).map(|i| 0.5 - 0.1 * i as f64 + 0.02 * (i * i) as f64).collect();
        let y = apply_centered(&f, &q).unwrap();
        for i in 5..35 {
            assert!((y[i] - q[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn butterworth_impulse_decays() {
        let f = design_butterworth_lowpass(7, 100.0, 1000.0).unwrap();
        let mut x = vec![0.0; 400];
        x[0] = 1.0;
        let h = apply_forward(&f, &x).unwrap();
        assert!((h.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(h[399].abs() < 1e-12);
    }

    #[test]
    fn apply_dispatches_by_mode() {
        let sg = design_savitzky_golay(5, 2).unwrap();
        let x: Vec<f64> = (0..30).map(|i| ((i * 7) % 5) as f64).collect();
        assert_eq!(apply(&sg, &x).unwrap(), apply_centered(&sg, &x).unwrap());
        let fir = DigitalFilter::from_coefficients(vec![0.5, 0.5], vec![1.0], FilterSpec::defaults(1000.0)).unwrap();
        assert_eq!(apply(&fir, &x).unwrap(), apply_forward(&fir, &x).unwrap());
        let zp = fir.clone().with_zero_phase(true);
        assert_eq!(apply(&zp, &x).unwrap(), apply_zero_phase(&zp, &x).unwrap());
    }

    #[test]
    fn centred_rejects_even_kernels() {
        let f = design_fir_lowpass(80, 100.0, 1000.0).unwrap();
        assert!(apply_centered(&f, &vec![0.0; 300]).is_err());
    }
}
