//! Seeded synthetic gaze recordings for tests and demonstrations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::kinematics::Recording;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyntheticKind {
    /// Steady gaze with Gaussian noise on both channels.
    WhiteNoiseFixation,
    /// A single horizontal saccade half way through, plus noise.
    SaccadeWithNoise,
    /// Noise-free horizontal sinusoid.
    Sinusoid,
}

impl std::str::FromStr for SyntheticKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "noise" | "white-noise" | "fixation" => Ok(SyntheticKind::WhiteNoiseFixation),
            "saccade" => Ok(SyntheticKind::SaccadeWithNoise),
            "sinusoid" | "sine" => Ok(SyntheticKind::Sinusoid),
            other => Err(invalid(format!("unknown synthetic kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub kind: SyntheticKind,
    pub duration_s: f64,
    pub fs_hz: f64,
    pub noise_sigma_deg: f64,
    pub saccade_amplitude_deg: f64,
    pub frequency_hz: f64,
    pub amplitude_deg: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            kind: SyntheticKind::WhiteNoiseFixation,
            duration_s: 30.0,
            fs_hz: 1000.0,
            noise_sigma_deg: 0.01,
            saccade_amplitude_deg: 1.25,
            frequency_hz: 62.5,
            amplitude_deg: 1.0,
            seed: 0,
        }
    }
}

/// Vertical fixation position of the synthetic target, degrees.
const FIXATION_Y_DEG: f64 = 3.5;

pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Recording> {
    if !(spec.duration_s.is_finite() && spec.duration_s > 0.0) {
        return Err(invalid(format!("duration must be positive, got {}", spec.duration_s)));
    }
    if !(spec.fs_hz.is_finite() && spec.fs_hz > 0.0) {
        return Err(invalid(format!("sampling rate must be positive, got {}", spec.fs_hz)));
    }
    if !(spec.noise_sigma_deg.is_finite() && spec.noise_sigma_deg >= 0.0) {
        return Err(invalid(format!("noise sigma must be non-negative, got {}", spec.noise_sigma_deg)));
    }
    let n = (spec.duration_s * spec.fs_hz).round() as usize;
    if n == 0 {
        return Err(invalid("duration is shorter than one sample"));
    }
    let fs = spec.fs_hz;

    let (x, y) = match spec.kind {
        SyntheticKind::Sinusoid => {
            let x = (0..n)
                .map(|i| spec.amplitude_deg * (2.0 * PI * spec.frequency_hz * i as f64 / fs).sin())
                .collect();
            (x, vec![0.0; n])
        }
        SyntheticKind::WhiteNoiseFixation => (vec![0.0; n], vec![FIXATION_Y_DEG; n]),
        SyntheticKind::SaccadeWithNoise => {
            let amp = spec.saccade_amplitude_deg;
            // main-sequence duration in ms
            let dur_s = (2.2 * amp.abs() + 21.0) / 1000.0;
            let onset_s = 0.5 * spec.duration_s - 0.5 * dur_s;
            let x = (0..n)
                .map(|i| {
                    let tau = ((i as f64 / fs - onset_s) / dur_s).clamp(0.0, 1.0);
                    amp * minimum_jerk(tau)
                })
                .collect();
            (x, vec![FIXATION_Y_DEG; n])
        }
    };

    let (x, y) = if spec.kind != SyntheticKind::Sinusoid && spec.noise_sigma_deg > 0.0 {
        let noise = Normal::new(0.0, spec.noise_sigma_deg).map_err(|e| invalid(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut x = x;
        let mut y = y;
        for i in 0..n {
            x[i] += noise.sample(&mut rng);
            y[i] += noise.sample(&mut rng);
        }
        (x, y)
    } else {
        (x, y)
    };

    Recording::from_channels(fs, x, y)
}

/// Seeded standard-normal samples scaled by `sigma`.
pub fn white_noise(n: usize, sigma: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Normal::new(0.0, 1.0).expect("unit normal");
    (0..n).map(|_| sigma * dist.sample(&mut rng)).collect()
}

/// `10τ³ - 15τ⁴ + 6τ⁵`: smooth 0 → 1 on `[0, 1]`.
fn minimum_jerk(tau: f64) -> f64 {
    tau * tau * tau * (10.0 - 15.0 * tau + 6.0 * tau * tau)
}
