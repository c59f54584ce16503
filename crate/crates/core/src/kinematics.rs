//! Gaze recordings, velocity estimates and selection of saccade-free
//! fixation segments.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Uniformly sampled gaze position, in degrees of visual angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recording {
    pub fs_hz: f64,
    pub t_ms: Vec<f64>,
    pub x_deg: Vec<f64>,
    pub y_deg: Vec<f64>,
}

impl Recording {
    /// Validates channel lengths, finiteness and sampling uniformity
    /// (every step within half a sample period of `1000 / fs_hz` ms).
    pub fn new(fs_hz: f64, t_ms: Vec<f64>, x_deg: Vec<f64>, y_deg: Vec<f64>) -> Result<Self> {
        let rec = Recording { fs_hz, t_ms, x_deg, y_deg };
        rec.validate()?;
        Ok(rec)
    }

    /// Timestamps start at zero.
    pub fn from_channels(fs_hz: f64, x_deg: Vec<f64>, y_deg: Vec<f64>) -> Result<Self> {
        let period = 1000.0 / fs_hz;
        let t_ms = (0..x_deg.len()).map(|i| i as f64 * period).collect();
        Self::new(fs_hz, t_ms, x_deg, y_deg)
    }

    pub fn len(&self) -> usize {
        self.x_deg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_deg.is_empty()
    }

    pub fn period_ms(&self) -> f64 {
        1000.0 / self.fs_hz
    }

    pub fn channel(&self, channel: Channel) -> &[f64] {
        match channel {
            Channel::X => &self.x_deg,
            Channel::Y => &self.y_deg,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fs_hz.is_finite() && self.fs_hz > 0.0) {
            return Err(invalid(format!("sampling rate must be positive, got {}", self.fs_hz)));
        }
        if self.t_ms.len() != self.x_deg.len() || self.x_deg.len() != self.y_deg.len() {
            return Err(invalid(format!(
                "channel lengths differ: t={} x={} y={}",
                self.t_ms.len(),
                self.x_deg.len(),
                self.y_deg.len()
            )));
        }
        for (i, ((t, x), y)) in self.t_ms.iter().zip(&self.x_deg).zip(&self.y_deg).enumerate() {
            if !(t.is_finite() && x.is_finite() && y.is_finite()) {
                return Err(invalid(format!("sample {i} is not finite")));
            }
        }
        if let Some(i) = self.first_irregular_step() {
            return Err(invalid(format!(
                "sampling is not uniform between samples {} and {i}: step {} ms, expected {} ms",
                i - 1,
                self.t_ms[i] - self.t_ms[i - 1],
                self.period_ms()
            )));
        }
        Ok(())
    }

    /// Index of the first sample whose step from its predecessor deviates
    /// from the nominal period by half a period or more.
    pub fn first_irregular_step(&self) -> Option<usize> {
        let period = self.period_ms();
        (1..self.t_ms.len()).find(|&i| ((self.t_ms[i] - self.t_ms[i - 1]) - period).abs() >= 0.5 * period)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    X,
    Y,
}

impl std::str::FromStr for Channel {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Channel::X),
            "y" | "Y" => Ok(Channel::Y),
            other => Err(invalid(format!("unknown channel `{other}`"))),
        }
    }
}

/// `v[t] = (x[t+3] - x[t-3]) / (6 / fs)` for `t` in `3..=N-4`.
///
/// Element `i` of the result belongs to sample `i + 3`.
pub fn sixpoint_velocity(x: &[f64], fs_hz: f64) -> Result<Vec<f64>> {
    if x.len() < 7 {
        return Err(invalid(format!("six-point velocity needs at least 7 samples, got {}", x.len())));
    }
    let scale = fs_hz / 6.0;
    Ok(x.windows(7).map(|w| (w[6] - w[0]) * scale).collect())
}

/// `v[t] = (x[t] - x[t-1]) · fs` for `t ≥ 1`; element `i` belongs to sample `i + 1`.
pub fn instantaneous_velocity(x: &[f64], fs_hz: f64) -> Result<Vec<f64>> {
    if x.len() < 2 {
        return Err(invalid(format!("instantaneous velocity needs at least 2 samples, got {}", x.len())));
    }
    Ok(x.windows(2).map(|w| (w[1] - w[0]) * fs_hz).collect())
}

/// How the two channels are combined when screening for fast movement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VelocityScreen {
    /// Reject if either |vx| or |vy| exceeds the limit.
    #[default]
    EitherChannel,
    /// Reject if sqrt(vx² + vy²) exceeds the limit.
    Radial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuietSegmentOptions {
    pub seg_len: usize,
    pub vmax_deg_s: f64,
    pub screen: VelocityScreen,
}

impl Default for QuietSegmentOptions {
    fn default() -> Self {
        QuietSegmentOptions { seg_len: 2048, vmax_deg_s: 25.0, screen: VelocityScreen::EitherChannel }
    }
}

/// A window of consecutive samples taken from a recording.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start_index: usize,
    pub length: usize,
    pub x_deg: Vec<f64>,
    pub y_deg: Vec<f64>,
}

impl Segment {
    pub fn end_index(&self) -> usize {
        self.start_index + self.length
    }

    pub fn channel(&self, channel: Channel) -> &[f64] {
        match channel {
            Channel::X => &self.x_deg,
            Channel::Y => &self.y_deg,
        }
    }
}

/// Per-sample admissibility: six-point velocity defined and within the limit.
pub fn quiet_mask(recording: &Recording, vmax_deg_s: f64, screen: VelocityScreen) -> Result<Vec<bool>> {
    let n = recording.len();
    let mut mask = vec![false; n];
    if n < 7 {
        return Ok(mask);
    }
    let vx = sixpoint_velocity(&recording.x_deg, recording.fs_hz)?;
    let vy = sixpoint_velocity(&recording.y_deg, recording.fs_hz)?;
    for (i, (a, b)) in vx.iter().zip(&vy).enumerate() {
        mask[i + 3] = match screen {
            VelocityScreen::EitherChannel => a.abs() <= vmax_deg_s && b.abs() <= vmax_deg_s,
            VelocityScreen::Radial => a.hypot(*b) <= vmax_deg_s,
        };
    }
    Ok(mask)
}

/// Greedy left-to-right packing of non-overlapping `seg_len` windows in
/// which every sample passes the velocity screen. Samples whose six-point
/// velocity is undefined (three at each end) are never admitted. An empty
/// result is valid.
pub fn select_quiet_segments(recording: &Recording, options: &QuietSegmentOptions) -> Result<Vec<Segment>> {
    let seg_len = options.seg_len;
    if seg_len == 0 {
        return Err(invalid("segment length must be positive"));
    }
    if seg_len > recording.len() {
        return Err(invalid(format!(
            "segment length {seg_len} exceeds recording length {}",
            recording.len()
        )));
    }
    let mask = quiet_mask(recording, options.vmax_deg_s, options.screen)?;

    let mut segments = Vec::new();
    let mut run_start = 0;
    for (i, &ok) in mask.iter().enumerate() {
        if !ok {
            run_start = i + 1;
            continue;
        }
        if i + 1 - run_start == seg_len {
            segments.push(Segment {
                start_index: run_start,
                length: seg_len,
                x_deg: recording.x_deg[run_start..=i].to_vec(),
                y_deg: recording.y_deg[run_start..=i].to_vec(),
            });
            run_start = i + 1;
        }
    }
    Ok(segments)
}

/// Contiguous, non-overlapping blocks of `block_len` samples.
pub fn split_blocks(samples: &[f64], block_len: usize) -> Result<Vec<Vec<f64>>> {
    if block_len == 0 || !samples.len().is_multiple_of(block_len) {
        return Err(invalid(format!(
            "segment length {} is not divisible by block length {block_len}",
            samples.len()
        )));
    }
    Ok(samples.chunks(block_len).map(<[f64]>::to_vec).collect())
}
