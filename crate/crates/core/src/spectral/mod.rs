//! Spectral analysis: FFT, averaged amplitude spectra of fixation blocks,
//! and analytic or ratio-method filter frequency responses.

mod fft;
mod response;

pub use fft::{fft, fft_real, ifft};
pub use response::{
    analytic_frequency_response, empirical_frequency_response, find_db_crossing, frequency_grid,
    FrequencyResponse, ResponseSource,
};

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Result};

/// Amplitude ratio to decibels, `20 log10(ratio)`.
pub fn to_db(ratio: f64) -> f64 {
    20.0 * ratio.log10()
}

/// Mean single-sided magnitude spectrum of a set of equal-length blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeSpectrum {
    /// Bin centres, `0, fs/N, ..., fs/2 - fs/N`.
    pub freqs_hz: Vec<f64>,
    /// Mean magnitude per bin, in the units of the input (degrees).
    pub amplitude_deg: Vec<f64>,
    pub n_blocks_averaged: usize,
}

impl AmplitudeSpectrum {
    pub fn resolution_hz(&self) -> f64 {
        self.freqs_hz.get(1).copied().unwrap_or(0.0) - self.freqs_hz[0]
    }

    /// Index and frequency of the largest bin.
    pub fn peak(&self) -> (usize, f64, f64) {
        let (i, &amp) = self
            .amplitude_deg
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("spectrum is never empty");
        (i, self.freqs_hz[i], amp)
    }
}

/// Removes the least-squares quadratic over the sample index.
pub fn detrend_poly2(signal: &[f64]) -> Result<Vec<f64>> {
    if signal.len() < 3 {
        return Err(invalid(format!(
            "quadratic detrending needs at least 3 samples, got {}",
            signal.len()
        )));
    }
    let n = signal.len();
    let mid = (n as f64 - 1.0) / 2.0;
    let t: Vec<f64> = (0..n).map(|i| (i as f64 - mid) / mid).collect();

    // orthonormal basis of {1, t, t²} on the sample grid
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(3);
    for degree in 0..3 {
        let mut v: Vec<f64> = t.iter().map(|&x| x.powi(degree)).collect();
        // twice for numerical orthogonality
        for _ in 0..2 {
            for q in &basis {
                let p = dot(&v, q);
                v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= p * qi);
            }
        }
        let norm = dot(&v, &v).sqrt();
        v.iter_mut().for_each(|vi| *vi /= norm);
        basis.push(v);
    }

    let mut residual = signal.to_vec();
    for q in &basis {
        let p = dot(&residual, q);
        residual.iter_mut().zip(q).for_each(|(r, qi)| *r -= p * qi);
    }
    Ok(residual)
}

/// Periodic Hann window, `w[k] = 0.5 (1 - cos(2πk/n))`.
pub fn hanning_window(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(invalid(format!("window length must be at least 2, got {n}")));
    }
    Ok((0..n)
        .map(|k| 0.5 * (1.0 - (2.0 * PI * k as f64 / n as f64).cos()))
        .collect())
}

/// Per block: quadratic detrend, Hann window, FFT, single-sided magnitude
/// scaled by `2 / Σw`. The magnitudes (not the complex spectra) are then
/// averaged across blocks, so an in-bin sinusoid of amplitude `A` reads `A`.
pub fn amplitude_spectrum<B: AsRef<[f64]>>(blocks: &[B], fs_hz: f64) -> Result<AmplitudeSpectrum> {
    let first = blocks.first().ok_or_else(|| invalid("need at least one block"))?;
    let n = first.as_ref().len();
    if n < 4 || !n.is_power_of_two() {
        return Err(invalid(format!("block length must be a power of two >= 4, got {n}")));
    }
    if !(fs_hz.is_finite() && fs_hz > 0.0) {
        return Err(invalid(format!("sampling rate must be positive, got {fs_hz}")));
    }
    let window = hanning_window(n)?;
    let scale = 2.0 / window.iter().sum::<f64>();
    let half = n / 2;

    let mut sum = vec![0.0; half];
    for (i, block) in blocks.iter().enumerate() {
        let block = block.as_ref();
        if block.len() != n {
            return Err(invalid(format!(
                "block {i} has length {}, expected {n}",
                block.len()
            )));
        }
        let windowed: Vec<f64> = detrend_poly2(block)?
            .iter()
            .zip(&window)
            .map(|(x, w)| x * w)
            .collect();
        let spectrum = fft_real(&windowed)?;
        sum.iter_mut()
            .zip(&spectrum[..half])
            .for_each(|(s, c)| *s += c.norm() * scale);
    }
    let count = blocks.len() as f64;
    Ok(AmplitudeSpectrum {
        freqs_hz: (0..half).map(|k| k as f64 * fs_hz / n as f64).collect(),
        amplitude_deg: sum.into_iter().map(|s| s / count).collect(),
        n_blocks_averaged: blocks.len(),
    })
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}
