use serde::{Deserialize, Serialize};

use super::{amplitude_spectrum, to_db};
use crate::error::{invalid, Result};
use crate::filters::DigitalFilter;

/// Smallest mean unfiltered magnitude for which a ratio is reported.
pub const RATIO_FLOOR: f64 = 1e-12;
/// Magnitudes are clamped here before conversion so exact nulls stay finite.
const MAGNITUDE_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResponseSource {
    Analytic,
    RatioMethod,
}

/// Magnitude response in dB (reference 1). Bins that could not be
/// evaluated hold `NaN`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyResponse {
    pub freqs_hz: Vec<f64>,
    pub magnitude_db: Vec<f64>,
    pub source: ResponseSource,
}

impl FrequencyResponse {
    pub fn is_defined(&self, bin: usize) -> bool {
        !self.magnitude_db[bin].is_nan()
    }

    pub fn undefined_bins(&self) -> Vec<usize> {
        (0..self.magnitude_db.len()).filter(|&i| !self.is_defined(i)).collect()
    }

    /// Frequencies of strict local maxima of the dB curve above `min_hz`.
    pub fn local_maxima_above(&self, min_hz: f64) -> Vec<f64> {
        let m = &self.magnitude_db;
        (1..m.len().saturating_sub(1))
            .filter(|&i| self.freqs_hz[i] > min_hz && m[i] > m[i - 1] && m[i] > m[i + 1])
            .map(|i| self.freqs_hz[i])
            .collect()
    }

    /// Linear interpolation of the dB curve at `freq_hz`.
    pub fn db_at(&self, freq_hz: f64) -> Option<f64> {
        let f = &self.freqs_hz;
        let i = f.partition_point(|&x| x < freq_hz);
        if i < f.len() && f[i] == freq_hz {
            return Some(self.magnitude_db[i]);
        }
        if i == 0 || i == f.len() {
            return None;
        }
        let w = (freq_hz - f[i - 1]) / (f[i] - f[i - 1]);
        Some(self.magnitude_db[i - 1] + w * (self.magnitude_db[i] - self.magnitude_db[i - 1]))
    }
}

/// `n_points` equally spaced frequencies from 0 to `fs/2` inclusive.
pub fn frequency_grid(fs_hz: f64, n_points: usize) -> Vec<f64> {
    let nyquist = fs_hz / 2.0;
    match n_points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n_points)
            .map(|i| nyquist * i as f64 / (n_points - 1) as f64)
            .collect(),
    }
}

/// Evaluates `B(e^{jω}) / A(e^{jω})` at each frequency. For zero-phase
/// filters the magnitude is squared before conversion to dB.
pub fn analytic_frequency_response(
    filter: &DigitalFilter,
    freqs_hz: &[f64],
    fs_hz: f64,
) -> Result<FrequencyResponse> {
    check_grid(freqs_hz)?;
    if let Some(f) = freqs_hz.iter().find(|&&f| !(0.0..=fs_hz / 2.0).contains(&f)) {
        return Err(invalid(format!("frequency {f} Hz outside [0, {}] Hz", fs_hz / 2.0)));
    }
    let mut at_rate = filter.clone();
    at_rate.spec.fs_hz = fs_hz;
    let passes = if filter.zero_phase { 2.0 } else { 1.0 };
    let magnitude_db = freqs_hz
        .iter()
        .map(|&f| match at_rate.response_at(f) {
            Some(h) => passes * to_db(h.norm().max(MAGNITUDE_FLOOR)),
            None => f64::NAN,
        })
        .collect();
    Ok(FrequencyResponse {
        freqs_hz: freqs_hz.to_vec(),
        magnitude_db,
        source: ResponseSource::Analytic,
    })
}

/// Ratio method: mean magnitude spectrum of the filtered blocks divided by
/// that of the unfiltered blocks, bin by bin. Bins whose unfiltered mean is
/// below [`RATIO_FLOOR`] are left undefined.
pub fn empirical_frequency_response<U, F>(
    unfiltered_blocks: &[U],
    filtered_blocks: &[F],
    fs_hz: f64,
) -> Result<FrequencyResponse>
where
    U: AsRef<[f64]>,
    F: AsRef<[f64]>,
{
    if unfiltered_blocks.len() != filtered_blocks.len() {
        return Err(invalid(format!(
            "{} unfiltered blocks but {} filtered blocks",
            unfiltered_blocks.len(),
            filtered_blocks.len()
        )));
    }
    let reference = amplitude_spectrum(unfiltered_blocks, fs_hz)?;
    let filtered = amplitude_spectrum(filtered_blocks, fs_hz)?;
    if reference.freqs_hz.len() != filtered.freqs_hz.len() {
        return Err(invalid("filtered and unfiltered blocks differ in length"));
    }
    let magnitude_db = reference
        .amplitude_deg
        .iter()
        .zip(&filtered.amplitude_deg)
        .map(|(&a, &b)| {
            if a < RATIO_FLOOR {
                f64::NAN
            } else {
                to_db((b / a).max(MAGNITUDE_FLOOR))
            }
        })
        .collect();
    Ok(FrequencyResponse {
        freqs_hz: reference.freqs_hz,
        magnitude_db,
        source: ResponseSource::RatioMethod,
    })
}

/// Lowest frequency at which the response first falls to `level_db` or
/// below, linearly interpolated between the neighbouring bins. Undefined
/// bins are skipped.
pub fn find_db_crossing(response: &FrequencyResponse, level_db: f64) -> Result<Option<f64>> {
    if response.freqs_hz.is_empty() {
        return Err(invalid("empty frequency response"));
    }
    if !(level_db < 0.0) {
        return Err(invalid(format!("crossing level must be negative, got {level_db}")));
    }
    let mut previous: Option<(f64, f64)> = None;
    for (&f, &db) in response.freqs_hz.iter().zip(&response.magnitude_db) {
        if db.is_nan() {
            continue;
        }
        if db <= level_db {
            return Ok(Some(match previous {
                None => f,
                Some((f0, db0)) => f0 + (level_db - db0) / (db - db0) * (f - f0),
            }));
        }
        previous = Some((f, db));
    }
    Ok(None)
}

fn check_grid(freqs_hz: &[f64]) -> Result<()> {
    if freqs_hz.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("frequencies must be strictly increasing"));
    }
    Ok(())
}
