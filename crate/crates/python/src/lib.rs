//! Python bindings for `eyefilt-core`.
//!
//! Arrays cross the boundary as lists of floats. Errors from the core
//! become `ValueError`, or `OSError` for file problems.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use eyefilt_core::config::RunConfig;
use eyefilt_core::filters::{self, DigitalFilter, FilterKind, FirTapParams};
use eyefilt_core::kinematics::{self, QuietSegmentOptions, Recording, VelocityScreen};
use eyefilt_core::spectral::{self, FrequencyResponse, ResponseSource};
use eyefilt_core::stats::{self, Condition};
use eyefilt_core::synth::{self, SyntheticKind, SyntheticSpec};
use eyefilt_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for eyefilt_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// A designed low-pass filter, `B(z) / A(z)`.
#[pyclass(name = "Filter", module = "eyefilt", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFilter {
    inner: DigitalFilter,
}

#[pymethods]
impl PyFilter {
    #[getter]
    fn b(&self) -> Vec<f64> {
        self.inner.b.clone()
    }

    #[getter]
    fn a(&self) -> Vec<f64> {
        self.inner.a.clone()
    }

    /// "sg", "iir" or "fir".
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.spec.kind.short_name()
    }

    #[getter]
    fn zero_phase(&self) -> bool {
        self.inner.zero_phase
    }

    #[getter]
    fn fs_hz(&self) -> f64 {
        self.inner.spec.fs_hz
    }

    /// Same coefficients with a different zero-phase flag.
    fn with_zero_phase(&self, zero_phase: bool) -> Self {
        PyFilter { inner: self.inner.clone().with_zero_phase(zero_phase) }
    }

    /// Filters `signal` the way the filter was designed to run.
    fn apply(&self, signal: Vec<f64>) -> PyResult<Vec<f64>> {
        filters::apply(&self.inner, &signal).py()
    }

    /// `(freqs_hz, magnitude_db)` on `n_freqs` points from 0 to Nyquist.
    #[pyo3(signature = (n_freqs=501))]
    fn freqz(&self, n_freqs: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let fs = self.inner.spec.fs_hz;
        let grid = spectral::frequency_grid(fs, n_freqs);
        let r = spectral::analytic_frequency_response(&self.inner, &grid, fs).py()?;
        Ok((r.freqs_hz, r.magnitude_db))
    }

    fn poles(&self) -> Vec<num_complex::Complex64> {
        filters::poles(&self.inner)
    }

    fn is_stable(&self) -> bool {
        filters::is_stable(&self.inner)
    }

    fn dc_gain(&self) -> f64 {
        self.inner.dc_gain()
    }

    fn __len__(&self) -> usize {
        self.inner.b.len().max(self.inner.a.len())
    }

    fn __repr__(&self) -> String {
        format!(
            "Filter(kind={:?}, taps={}, order={}, zero_phase={})",
            self.kind(),
            self.inner.b.len(),
            self.inner.a.len() - 1,
            if self.inner.zero_phase { "True" } else { "False" }
        )
    }
}

fn design(kind: FilterKind, config: RunConfig, zero_phase: bool) -> PyResult<PyFilter> {
    Ok(PyFilter { inner: config.design(kind, zero_phase).py()? })
}

/// Savitzky-Golay smoother, applied as a centred single pass.
#[pyfunction]
#[pyo3(signature = (window_length=11, poly_order=2, fs_hz=1000.0))]
fn design_savitzky_golay(window_length: usize, poly_order: usize, fs_hz: f64) -> PyResult<PyFilter> {
    let config = RunConfig { window_length, poly_order, fs_hz, ..RunConfig::default() };
    design(FilterKind::SavitzkyGolay, config, false)
}

#[pyfunction]
#[pyo3(signature = (order=7, cutoff_hz=100.0, fs_hz=1000.0, zero_phase=true))]
fn design_butterworth(order: usize, cutoff_hz: f64, fs_hz: f64, zero_phase: bool) -> PyResult<PyFilter> {
    let config = RunConfig { order, cutoff_hz, fs_hz, ..RunConfig::default() };
    design(FilterKind::ButterworthLowpass, config, zero_phase)
}

#[pyfunction]
#[pyo3(signature = (n_taps=80, cutoff_hz=100.0, fs_hz=1000.0, zero_phase=true))]
fn design_fir(n_taps: usize, cutoff_hz: f64, fs_hz: f64, zero_phase: bool) -> PyResult<PyFilter> {
    let config = RunConfig { n_taps, cutoff_hz, fs_hz, ..RunConfig::default() };
    design(FilterKind::WindowedSincFir, config, zero_phase)
}

#[pyfunction]
fn estimate_fir_taps(delta1: f64, delta2: f64, fs_hz: f64, transition_width_hz: f64) -> PyResult<usize> {
    filters::estimate_fir_taps(FirTapParams { delta1, delta2, fs_hz, transition_width_hz }).py()
}

/// Mean amplitude spectrum of equal-length blocks: `(freqs_hz, amplitude)`.
#[pyfunction]
#[pyo3(signature = (blocks, fs_hz=1000.0))]
fn amplitude_spectrum(blocks: Vec<Vec<f64>>, fs_hz: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let s = spectral::amplitude_spectrum(&blocks, fs_hz).py()?;
    Ok((s.freqs_hz, s.amplitude_deg))
}

/// Ratio-method response: `(freqs_hz, magnitude_db)`, NaN where undefined.
#[pyfunction]
#[pyo3(signature = (unfiltered_blocks, filtered_blocks, fs_hz=1000.0))]
fn empirical_frequency_response(
    unfiltered_blocks: Vec<Vec<f64>>,
    filtered_blocks: Vec<Vec<f64>>,
    fs_hz: f64,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let r = spectral::empirical_frequency_response(&unfiltered_blocks, &filtered_blocks, fs_hz).py()?;
    Ok((r.freqs_hz, r.magnitude_db))
}

/// First frequency where the response falls to `level_db`, or None.
#[pyfunction]
fn find_db_crossing(freqs_hz: Vec<f64>, magnitude_db: Vec<f64>, level_db: f64) -> PyResult<Option<f64>> {
    if freqs_hz.len() != magnitude_db.len() {
        return Err(PyValueError::new_err("freqs_hz and magnitude_db differ in length"));
    }
    let r = FrequencyResponse { freqs_hz, magnitude_db, source: ResponseSource::Analytic };
    spectral::find_db_crossing(&r, level_db).py()
}

/// Six-point velocity, deg/s. Element `i` belongs to sample `i + 3`.
#[pyfunction]
#[pyo3(signature = (x, fs_hz=1000.0))]
fn sixpoint_velocity(x: Vec<f64>, fs_hz: f64) -> PyResult<Vec<f64>> {
    kinematics::sixpoint_velocity(&x, fs_hz).py()
}

/// First-difference velocity, deg/s. Element `i` belongs to sample `i + 1`.
#[pyfunction]
#[pyo3(signature = (x, fs_hz=1000.0))]
fn instantaneous_velocity(x: Vec<f64>, fs_hz: f64) -> PyResult<Vec<f64>> {
    kinematics::instantaneous_velocity(&x, fs_hz).py()
}

/// Greedy quiet windows as `(start_index, length)` pairs.
#[pyfunction]
#[pyo3(signature = (x, y, fs_hz=1000.0, seg_len=2048, vmax_deg_s=25.0, radial=false))]
fn select_quiet_segments(
    x: Vec<f64>,
    y: Vec<f64>,
    fs_hz: f64,
    seg_len: usize,
    vmax_deg_s: f64,
    radial: bool,
) -> PyResult<Vec<(usize, usize)>> {
    let rec = Recording::from_channels(fs_hz, x, y).py()?;
    let screen = if radial { VelocityScreen::Radial } else { VelocityScreen::EitherChannel };
    let segs = kinematics::select_quiet_segments(&rec, &QuietSegmentOptions { seg_len, vmax_deg_s, screen }).py()?;
    Ok(segs.iter().map(|s| (s.start_index, s.length)).collect())
}

/// `(r, threshold, significant)` for lags `0..=max_lag`.
#[pyfunction]
#[pyo3(signature = (signal, max_lag=5, alpha=0.05))]
fn acf(signal: Vec<f64>, max_lag: usize, alpha: f64) -> PyResult<(Vec<f64>, f64, Vec<bool>)> {
    let a = stats::acf(&signal, max_lag, alpha).py()?;
    Ok((a.r, a.threshold, a.significant))
}

#[pyfunction]
fn fisher_z(r: f64) -> PyResult<f64> {
    stats::fisher_z(r).py()
}

/// `(chi2, df, p)` for an `n × k` table, rows are blocks.
#[pyfunction]
fn friedman_test(rows: Vec<Vec<f64>>) -> PyResult<(f64, usize, f64)> {
    let f = stats::friedman_test(&rows).py()?;
    Ok((f.chi2, f.df, f.p))
}

type PairRow = (usize, usize, f64, f64, f64);

/// `(i, j, mean-rank difference, q, p)` for every column pair.
#[pyfunction]
fn tukey_hsd_on_ranks(rows: Vec<Vec<f64>>) -> PyResult<Vec<PairRow>> {
    let cmp = stats::tukey_hsd_on_ranks(&rows).py()?;
    Ok(cmp.iter().map(|c| (c.pair.0, c.pair.1, c.difference, c.q, c.p)).collect())
}

#[pyfunction]
fn studentized_range_sf(q: f64, k: usize) -> PyResult<f64> {
    stats::studentized_range_sf(q, k).py()
}

/// Full ACF study over `{name: blocks}`, returned as a JSON string.
#[pyfunction]
#[pyo3(signature = (conditions, max_lag=5, alpha=0.05))]
fn acf_study_json(conditions: &Bound<'_, PyDict>, max_lag: usize, alpha: f64) -> PyResult<String> {
    let mut parsed = Vec::with_capacity(conditions.len());
    for (name, blocks) in conditions.iter() {
        parsed.push(Condition::new(name.extract::<String>()?, blocks.extract::<Vec<Vec<f64>>>()?));
    }
    let study = stats::run_acf_study(&parsed, max_lag, alpha).py()?;
    serde_json::to_string(&study).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Seeded synthetic recording as `(t_ms, x_deg, y_deg)`.
///
/// `kind` is "noise", "saccade" or "sinusoid". `amplitude` is the saccade
/// size or the sinusoid amplitude in degrees.
#[pyfunction]
#[pyo3(signature = (kind="noise", duration_s=30.0, fs_hz=1000.0, sigma=0.01, amplitude=None, frequency_hz=62.5, seed=0))]
fn generate_synthetic(
    kind: &str,
    duration_s: f64,
    fs_hz: f64,
    sigma: f64,
    amplitude: Option<f64>,
    frequency_hz: f64,
    seed: u64,
) -> PyResult<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let kind: SyntheticKind = kind.parse().py()?;
    let d = SyntheticSpec::default();
    let spec = SyntheticSpec {
        kind,
        duration_s,
        fs_hz,
        noise_sigma_deg: sigma,
        saccade_amplitude_deg: amplitude.unwrap_or(d.saccade_amplitude_deg),
        frequency_hz,
        amplitude_deg: amplitude.unwrap_or(d.amplitude_deg),
        seed,
    };
    let r = synth::generate_synthetic(&spec).py()?;
    Ok((r.t_ms, r.x_deg, r.y_deg))
}

#[pymodule]
fn eyefilt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFilter>()?;
    m.add_function(wrap_pyfunction!(design_savitzky_golay, m)?)?;
    m.add_function(wrap_pyfunction!(design_butterworth, m)?)?;
    m.add_function(wrap_pyfunction!(design_fir, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_fir_taps, m)?)?;
    m.add_function(wrap_pyfunction!(amplitude_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_frequency_response, m)?)?;
    m.add_function(wrap_pyfunction!(find_db_crossing, m)?)?;
    m.add_function(wrap_pyfunction!(sixpoint_velocity, m)?)?;
    m.add_function(wrap_pyfunction!(instantaneous_velocity, m)?)?;
    m.add_function(wrap_pyfunction!(select_quiet_segments, m)?)?;
    m.add_function(wrap_pyfunction!(acf, m)?)?;
    m.add_function(wrap_pyfunction!(fisher_z, m)?)?;
    m.add_function(wrap_pyfunction!(friedman_test, m)?)?;
    m.add_function(wrap_pyfunction!(tukey_hsd_on_ranks, m)?)?;
    m.add_function(wrap_pyfunction!(studentized_range_sf, m)?)?;
    m.add_function(wrap_pyfunction!(acf_study_json, m)?)?;
    m.add_function(wrap_pyfunction!(generate_synthetic, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
