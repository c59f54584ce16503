//! Pipeline defaults for 1000 Hz fixation recordings.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::filters::{design, DigitalFilter, FilterKind, FilterSpec};
use crate::kinematics::{QuietSegmentOptions, VelocityScreen};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub fs_hz: f64,
    pub cutoff_hz: f64,
    pub seg_len: usize,
    pub block_len: usize,
    pub vmax_deg_s: f64,
    pub max_lag: usize,
    pub alpha: f64,
    pub filters: Vec<FilterKind>,
    pub window_length: usize,
    pub poly_order: usize,
    pub order: usize,
    pub n_taps: usize,
    pub screen: VelocityScreen,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            fs_hz: 1000.0,
            cutoff_hz: 100.0,
            seg_len: 2048,
            block_len: 256,
            vmax_deg_s: 25.0,
            max_lag: 5,
            alpha: 0.05,
            filters: vec![
                FilterKind::SavitzkyGolay,
                FilterKind::ButterworthLowpass,
                FilterKind::WindowedSincFir,
            ],
            window_length: 11,
            poly_order: 2,
            order: 7,
            n_taps: 80,
            screen: VelocityScreen::EitherChannel,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.fs_hz.is_finite() && self.fs_hz > 0.0) {
            return Err(invalid(format!("sampling rate must be positive, got {}", self.fs_hz)));
        }
        if self.block_len < 4 || !self.block_len.is_power_of_two() {
            return Err(invalid(format!("block length must be a power of two >= 4, got {}", self.block_len)));
        }
        if self.seg_len == 0 || !self.seg_len.is_multiple_of(self.block_len) {
            return Err(invalid(format!(
                "segment length {} must be a positive multiple of block length {}",
                self.seg_len, self.block_len
            )));
        }
        if !(self.vmax_deg_s > 0.0) {
            return Err(invalid("velocity limit must be positive"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(invalid(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.max_lag < 1 {
            return Err(invalid("max lag must be at least 1"));
        }
        Ok(())
    }

    pub fn filter_spec(&self, kind: FilterKind) -> FilterSpec {
        FilterSpec {
            kind,
            window_length: self.window_length,
            poly_order: self.poly_order,
            order: self.order,
            n_taps: self.n_taps,
            cutoff_hz: self.cutoff_hz,
            fs_hz: self.fs_hz,
        }
    }

    /// Designs `kind` with this configuration's parameters.
    ///
    /// Savitzky-Golay kernels are symmetric, so their centred single pass is
    /// already zero-phase and `zero_phase` is ignored for them. Running the
    /// kernel twice would move its -3 dB point from 100 Hz to about 82 Hz.
    pub fn design(&self, kind: FilterKind, zero_phase: bool) -> Result<DigitalFilter> {
        let zero_phase = zero_phase && kind != FilterKind::SavitzkyGolay;
        design(&self.filter_spec(kind), zero_phase)
    }

    pub fn segment_options(&self) -> QuietSegmentOptions {
        QuietSegmentOptions { seg_len: self.seg_len, vmax_deg_s: self.vmax_deg_s, screen: self.screen }
    }
}
