//! `eyefilt` command-line front end.
//!
//! Every subcommand reads CSV from `--in` (or stdin) and writes CSV or JSON
//! to `--out` (or stdout). Files named with `--out` are replaced atomically.
//! Exit status is 0 on success, 1 for usage errors and 2 for bad data.

use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use eyefilt_core::config::RunConfig;
use eyefilt_core::filters::{apply, is_stable, poles, DigitalFilter, FilterKind};
use eyefilt_core::io::{read_recording, write_columns, write_recording, write_response, write_spectrum};
use eyefilt_core::kinematics::{
    instantaneous_velocity, select_quiet_segments, sixpoint_velocity, split_blocks, Channel, Recording,
    VelocityScreen,
};
use eyefilt_core::spectral::{
    amplitude_spectrum, analytic_frequency_response, empirical_frequency_response, frequency_grid,
};
use eyefilt_core::stats::{run_acf_study, Condition};
use eyefilt_core::synth::{generate_synthetic, SyntheticKind, SyntheticSpec};
use eyefilt_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "eyefilt", version, about = "Low-pass filtering, spectra and autocorrelation for eye-tracking data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print filter coefficients, poles and stability as JSON.
    Design(DesignArgs),
    /// Filter both channels of a recording.
    Filter(FilterArgs),
    /// Analytic frequency response as `freq_hz,mag_db`.
    Freqz(FreqzArgs),
    /// Ratio-method response from an unfiltered and a filtered recording.
    MeasureResponse(MeasureArgs),
    /// Averaged amplitude spectrum as `freq_hz,amplitude_deg`.
    Spectrum(SpectrumArgs),
    /// Quiet fixation segments as a JSON list.
    Segments(SegmentArgs),
    /// Velocity trace as `t_ms,v_deg_s`.
    Velocity(VelocityArgs),
    /// ACF medians, Friedman and Tukey HSD across unfiltered and filtered data.
    AcfStats(AcfArgs),
    /// Generate a seeded synthetic recording.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct Io {
    /// Input CSV, `-` for stdin.
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    /// Output file, `-` for stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Output {
    /// Output file, `-` for stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Rate {
    /// Sampling rate, Hz.
    #[arg(long, default_value_t = 1000.0)]
    fs: f64,
}

#[derive(Debug, Args)]
struct FilterOpts {
    #[arg(long, value_enum, default_value_t = FilterChoice::Fir)]
    filter: FilterChoice,
    /// -3 dB point of the single-pass IIR/FIR response, Hz.
    #[arg(long, default_value_t = 100.0)]
    cutoff: f64,
    /// Butterworth order.
    #[arg(long, default_value_t = 7)]
    order: usize,
    /// FIR tap count.
    #[arg(long, default_value_t = 80)]
    taps: usize,
    /// Savitzky-Golay window length.
    #[arg(long, default_value_t = 11)]
    window: usize,
    /// Savitzky-Golay polynomial order.
    #[arg(long, default_value_t = 2)]
    polyorder: usize,
    /// Run forward and backward. Savitzky-Golay is always a centred single pass.
    #[arg(long)]
    zero_phase: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FilterChoice {
    Sg,
    Iir,
    Fir,
}

impl From<FilterChoice> for FilterKind {
    fn from(c: FilterChoice) -> Self {
        match c {
            FilterChoice::Sg => FilterKind::SavitzkyGolay,
            FilterChoice::Iir => FilterKind::ButterworthLowpass,
            FilterChoice::Fir => FilterKind::WindowedSincFir,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChannelChoice {
    X,
    Y,
}

impl From<ChannelChoice> for Channel {
    fn from(c: ChannelChoice) -> Self {
        match c {
            ChannelChoice::X => Channel::X,
            ChannelChoice::Y => Channel::Y,
        }
    }
}

#[derive(Debug, Args)]
struct Screening {
    /// Segment length, samples.
    #[arg(long, default_value_t = 2048)]
    seg_len: usize,
    /// Velocity limit for quiet segments, deg/s.
    #[arg(long, default_value_t = 25.0)]
    vmax: f64,
    /// Screen on radial speed instead of each channel separately.
    #[arg(long)]
    radial: bool,
}

#[derive(Debug, Args)]
struct DesignArgs {
    #[command(flatten)]
    rate: Rate,
    #[command(flatten)]
    filter: FilterOpts,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct FilterArgs {
    #[command(flatten)]
    rate: Rate,
    #[command(flatten)]
    filter: FilterOpts,
    #[command(flatten)]
    io: Io,
}

#[derive(Debug, Args)]
struct FreqzArgs {
    #[command(flatten)]
    rate: Rate,
    #[command(flatten)]
    filter: FilterOpts,
    /// Number of frequencies from 0 to Nyquist inclusive.
    #[arg(long, default_value_t = 501)]
    n_freqs: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct MeasureArgs {
    #[command(flatten)]
    rate: Rate,
    #[command(flatten)]
    io: Io,
    /// The same recording after filtering.
    #[arg(long, value_name = "PATH")]
    filtered: PathBuf,
    #[arg(long, value_enum, default_value_t = ChannelChoice::X)]
    channel: ChannelChoice,
    /// Block length, samples (power of two).
    #[arg(long, default_value_t = 256)]
    block_len: usize,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    rate: Rate,
    #[command(flatten)]
    io: Io,
    #[arg(long, value_enum, default_value_t = ChannelChoice::X)]
    channel: ChannelChoice,
    /// Block length, samples (power of two).
    #[arg(long, default_value_t = 256)]
    block_len: usize,
    #[command(flatten)]
    screening: Screening,
    /// Use every complete block of the recording instead of quiet segments.
    #[arg(long)]
    no_screen: bool,
}

#[derive(Debug, Args)]
struct SegmentArgs {
    #[command(flatten)]
    rate: Rate,
    #[command(flatten)]
    io: Io,
    #[command(flatten)]
    screening: Screening,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Sixpoint,
    Instantaneous,
}

#[derive(Debug, Args)]
struct VelocityArgs {
    #[command(flatten)]
    rate: Rate,
    #[command(flatten)]
    io: Io,
    #[arg(long, value_enum, default_value_t = ChannelChoice::X)]
    channel: ChannelChoice,
    #[arg(long, value_enum, default_value_t = Method::Sixpoint)]
    method: Method,
    /// Constant added to every velocity, for stacked plots. deg/s.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    offset: f64,
}

#[derive(Debug, Args)]
struct AcfArgs {
    #[command(flatten)]
    rate: Rate,
    #[command(flatten)]
    io: Io,
    #[arg(long, value_enum, default_value_t = ChannelChoice::X)]
    channel: ChannelChoice,
    /// Filters compared against the unfiltered data, all run zero-phase.
    #[arg(long = "filters", value_enum, value_delimiter = ',', default_values_t = [FilterChoice::Sg, FilterChoice::Iir, FilterChoice::Fir])]
    filters: Vec<FilterChoice>,
    #[arg(long, default_value_t = 100.0)]
    cutoff: f64,
    #[arg(long, default_value_t = 7)]
    order: usize,
    #[arg(long, default_value_t = 80)]
    taps: usize,
    #[arg(long, default_value_t = 11)]
    window: usize,
    #[arg(long, default_value_t = 2)]
    polyorder: usize,
    #[arg(long, default_value_t = 256)]
    block_len: usize,
    #[command(flatten)]
    screening: Screening,
    /// Use every complete block of the recording instead of quiet segments.
    #[arg(long)]
    no_screen: bool,
    #[arg(long, default_value_t = 5)]
    max_lag: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindChoice {
    Noise,
    Saccade,
    Sinusoid,
}

impl From<KindChoice> for SyntheticKind {
    fn from(k: KindChoice) -> Self {
        match k {
            KindChoice::Noise => SyntheticKind::WhiteNoiseFixation,
            KindChoice::Saccade => SyntheticKind::SaccadeWithNoise,
            KindChoice::Sinusoid => SyntheticKind::Sinusoid,
        }
    }
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[command(flatten)]
    rate: Rate,
    #[arg(long, value_enum, default_value_t = KindChoice::Noise)]
    kind: KindChoice,
    /// Seconds.
    #[arg(long, default_value_t = 30.0)]
    duration: f64,
    /// Noise standard deviation, deg.
    #[arg(long, default_value_t = 0.01)]
    sigma: f64,
    /// Saccade or sinusoid amplitude, deg.
    #[arg(long)]
    amplitude: Option<f64>,
    /// Sinusoid frequency, Hz.
    #[arg(long, default_value_t = 62.5)]
    freq: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

/// Failure of one command, split by exit status.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

/// Standard streams, replaceable in tests.
pub struct Streams<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, streams: &mut Streams<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { streams.stderr } else { streams.stdout };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    match execute(cli.command, streams) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(streams.stderr, "error: {msg}");
            EXIT_USAGE
        }
        // a closed pipe (`| head`) is not worth reporting
        Err(Failure::Data(Error::Io(e))) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Data(e)) => {
            let _ = writeln!(streams.stderr, "error: {e}");
            EXIT_DATA
        }
    }
}

/// Runs with the process's own arguments and standard streams.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let (mut i, mut o, mut e) = (stdin.lock(), stdout.lock(), stderr.lock());
    run(args, &mut Streams { stdin: &mut i, stdout: &mut o, stderr: &mut e })
}

fn execute(command: Command, s: &mut Streams<'_>) -> Outcome {
    match command {
        Command::Design(a) => design_cmd(a, s),
        Command::Filter(a) => filter_cmd(a, s),
        Command::Freqz(a) => freqz_cmd(a, s),
        Command::MeasureResponse(a) => measure_cmd(a, s),
        Command::Spectrum(a) => spectrum_cmd(a, s),
        Command::Segments(a) => segments_cmd(a, s),
        Command::Velocity(a) => velocity_cmd(a, s),
        Command::AcfStats(a) => acf_cmd(a, s),
        Command::Synth(a) => synth_cmd(a, s),
    }
}

fn is_std(path: Option<&Path>) -> bool {
    path.is_none_or(|p| p == Path::new("-"))
}

fn read_input(path: Option<&Path>, fs_hz: f64, s: &mut Streams<'_>) -> Outcome<Recording> {
    if is_std(path) {
        let mut buf = Vec::new();
        s.stdin.read_to_end(&mut buf).map_err(Error::from)?;
        Ok(read_recording(buf.as_slice(), fs_hz)?)
    } else {
        let path = path.unwrap();
        let file = File::open(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot open {}: {e}", path.display())))?;
        Ok(read_recording(file, fs_hz)?)
    }
}

fn emit(
    path: Option<&Path>,
    s: &mut Streams<'_>,
    write: impl FnOnce(&mut dyn Write) -> eyefilt_core::Result<()>,
) -> Outcome {
    if is_std(path) {
        write(s.stdout)?;
    } else {
        eyefilt_core::io::write_atomic(path.unwrap(), |f| write(f))?;
    }
    Ok(())
}

fn emit_json(path: Option<&Path>, s: &mut Streams<'_>, value: &serde_json::Value) -> Outcome {
    emit(path, s, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

fn check_rate(fs: f64) -> Outcome<RunConfig> {
    let config = RunConfig { fs_hz: fs, ..RunConfig::default() };
    if !(fs.is_finite() && fs > 0.0) {
        return Err(Failure::Usage(format!("--fs must be positive, got {fs}")));
    }
    Ok(config)
}

fn design_from(rate: &Rate, opts: &FilterOpts) -> Outcome<DigitalFilter> {
    let config = RunConfig {
        cutoff_hz: opts.cutoff,
        order: opts.order,
        n_taps: opts.taps,
        window_length: opts.window,
        poly_order: opts.polyorder,
        ..check_rate(rate.fs)?
    };
    config.design(opts.filter.into(), opts.zero_phase).map_err(usage)
}

fn design_cmd(a: DesignArgs, s: &mut Streams<'_>) -> Outcome {
    let filter = design_from(&a.rate, &a.filter)?;
    let poles: Vec<[f64; 2]> = poles(&filter).iter().map(|p| [p.re, p.im]).collect();
    let value = json!({
        "filter": filter,
        "stable": is_stable(&filter),
        "dc_gain": filter.dc_gain(),
        "poles": poles,
    });
    emit_json(a.output.out.as_deref(), s, &value)
}

fn filter_cmd(a: FilterArgs, s: &mut Streams<'_>) -> Outcome {
    let filter = design_from(&a.rate, &a.filter)?;
    let rec = read_input(a.io.input.as_deref(), a.rate.fs, s)?;
    let out = Recording {
        fs_hz: rec.fs_hz,
        t_ms: rec.t_ms.clone(),
        x_deg: apply(&filter, &rec.x_deg)?,
        y_deg: apply(&filter, &rec.y_deg)?,
    };
    emit(a.io.out.as_deref(), s, |w| write_recording(w, &out))
}

fn freqz_cmd(a: FreqzArgs, s: &mut Streams<'_>) -> Outcome {
    let filter = design_from(&a.rate, &a.filter)?;
    if a.n_freqs < 2 {
        return Err(Failure::Usage(format!("--n-freqs must be at least 2, got {}", a.n_freqs)));
    }
    let grid = frequency_grid(a.rate.fs, a.n_freqs);
    let response = analytic_frequency_response(&filter, &grid, a.rate.fs)?;
    emit(a.output.out.as_deref(), s, |w| write_response(w, &response))
}

fn check_block_len(block_len: usize) -> Outcome {
    if block_len < 4 || !block_len.is_power_of_two() {
        return Err(Failure::Usage(format!("--block-len must be a power of two >= 4, got {block_len}")));
    }
    Ok(())
}

fn whole_blocks(x: &[f64], block_len: usize) -> Outcome<Vec<Vec<f64>>> {
    let usable = x.len() / block_len * block_len;
    if usable == 0 {
        return Err(Error::InvalidArgument(format!(
            "recording of {} samples is shorter than one {block_len}-sample block",
            x.len()
        ))
        .into());
    }
    Ok(split_blocks(&x[..usable], block_len)?)
}

fn measure_cmd(a: MeasureArgs, s: &mut Streams<'_>) -> Outcome {
    check_rate(a.rate.fs)?;
    check_block_len(a.block_len)?;
    if is_std(a.io.input.as_deref()) && a.filtered == Path::new("-") {
        return Err(Failure::Usage("only one of --in and --filtered can read stdin".into()));
    }
    let unfiltered = read_input(a.io.input.as_deref(), a.rate.fs, s)?;
    let filtered = read_input(Some(&a.filtered), a.rate.fs, s)?;
    if unfiltered.len() != filtered.len() {
        return Err(Error::InvalidArgument(format!(
            "recordings differ in length ({} vs {} samples)",
            unfiltered.len(),
            filtered.len()
        ))
        .into());
    }
    let channel = a.channel.into();
    let u = whole_blocks(unfiltered.channel(channel), a.block_len)?;
    let f = whole_blocks(filtered.channel(channel), a.block_len)?;
    let response = empirical_frequency_response(&u, &f, a.rate.fs)?;
    let undefined = response.undefined_bins().len();
    if undefined > 0 {
        let _ = writeln!(s.stderr, "warning: {undefined} bins have no input energy and are written as NaN");
    }
    emit(a.io.out.as_deref(), s, |w| write_response(w, &response))
}

fn screening_config(fs: f64, block_len: usize, sc: &Screening) -> Outcome<RunConfig> {
    let config = RunConfig {
        block_len,
        seg_len: sc.seg_len,
        vmax_deg_s: sc.vmax,
        screen: if sc.radial { VelocityScreen::Radial } else { VelocityScreen::EitherChannel },
        ..check_rate(fs)?
    };
    config.validate().map_err(usage)?;
    Ok(config)
}

/// Sample ranges to analyse: quiet segments, or the whole recording when
/// unscreened.
fn analysis_windows(
    rec: &Recording,
    config: &RunConfig,
    screened: bool,
    s: &mut Streams<'_>,
) -> Outcome<Vec<std::ops::Range<usize>>> {
    if !screened {
        let usable = rec.len() / config.block_len * config.block_len;
        if usable == 0 {
            return Err(Error::InvalidArgument(format!(
                "recording of {} samples is shorter than one {}-sample block",
                rec.len(),
                config.block_len
            ))
            .into());
        }
        return Ok(std::iter::once(0..usable).collect());
    }
    let segments = select_quiet_segments(rec, &config.segment_options())?;
    if segments.is_empty() {
        return Err(Error::Degenerate(format!(
            "no {}-sample segment stays below {} deg/s (try --no-screen)",
            config.seg_len, config.vmax_deg_s
        ))
        .into());
    }
    let _ = writeln!(s.stderr, "using {} quiet segments", segments.len());
    Ok(segments.iter().map(|seg| seg.start_index..seg.end_index()).collect())
}

fn cut_blocks(data: &[f64], windows: &[std::ops::Range<usize>], block_len: usize) -> Outcome<Vec<Vec<f64>>> {
    let mut blocks = Vec::new();
    for w in windows {
        blocks.extend(split_blocks(&data[w.clone()], block_len)?);
    }
    Ok(blocks)
}

fn spectrum_cmd(a: SpectrumArgs, s: &mut Streams<'_>) -> Outcome {
    check_block_len(a.block_len)?;
    let config = if a.no_screen {
        RunConfig { block_len: a.block_len, ..check_rate(a.rate.fs)? }
    } else {
        screening_config(a.rate.fs, a.block_len, &a.screening)?
    };
    let rec = read_input(a.io.input.as_deref(), a.rate.fs, s)?;
    let windows = analysis_windows(&rec, &config, !a.no_screen, s)?;
    let blocks = cut_blocks(rec.channel(a.channel.into()), &windows, config.block_len)?;
    let spectrum = amplitude_spectrum(&blocks, a.rate.fs)?;
    emit(a.io.out.as_deref(), s, |w| write_spectrum(w, &spectrum))
}

fn segments_cmd(a: SegmentArgs, s: &mut Streams<'_>) -> Outcome {
    let config = screening_config(a.rate.fs, RunConfig::default().block_len.min(a.screening.seg_len), &a.screening)?;
    let rec = read_input(a.io.input.as_deref(), a.rate.fs, s)?;
    let segments = select_quiet_segments(&rec, &config.segment_options())?;
    if segments.is_empty() {
        let _ = writeln!(
            s.stderr,
            "warning: no {}-sample segment stays below {} deg/s",
            config.seg_len, config.vmax_deg_s
        );
    }
    let list: Vec<serde_json::Value> = segments
        .iter()
        .map(|seg| {
            json!({
                "start_index": seg.start_index,
                "length": seg.length,
                "start_ms": rec.t_ms[seg.start_index],
                "end_ms": rec.t_ms[seg.end_index() - 1],
            })
        })
        .collect();
    emit_json(a.io.out.as_deref(), s, &serde_json::Value::Array(list))
}

fn velocity_cmd(a: VelocityArgs, s: &mut Streams<'_>) -> Outcome {
    check_rate(a.rate.fs)?;
    let rec = read_input(a.io.input.as_deref(), a.rate.fs, s)?;
    let x = rec.channel(a.channel.into());
    // first output sample belongs to this input sample
    let (v, lead) = match a.method {
        Method::Sixpoint => (sixpoint_velocity(x, a.rate.fs)?, 3),
        Method::Instantaneous => (instantaneous_velocity(x, a.rate.fs)?, 1),
    };
    let t = &rec.t_ms[lead..lead + v.len()];
    let v: Vec<f64> = v.iter().map(|v| v + a.offset).collect();
    emit(a.io.out.as_deref(), s, |w| write_columns(w, &["t_ms", "v_deg_s"], &[t, &v]))
}

fn acf_cmd(a: AcfArgs, s: &mut Streams<'_>) -> Outcome {
    check_block_len(a.block_len)?;
    let base = if a.no_screen {
        RunConfig { block_len: a.block_len, ..check_rate(a.rate.fs)? }
    } else {
        screening_config(a.rate.fs, a.block_len, &a.screening)?
    };
    let config = RunConfig {
        cutoff_hz: a.cutoff,
        order: a.order,
        n_taps: a.taps,
        window_length: a.window,
        poly_order: a.polyorder,
        max_lag: a.max_lag,
        alpha: a.alpha,
        ..base
    };
    if a.max_lag < 1 || a.max_lag >= config.block_len {
        return Err(Failure::Usage(format!("--max-lag must lie in 1..{}", config.block_len)));
    }
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(Failure::Usage(format!("--alpha must lie in (0, 1), got {}", a.alpha)));
    }
    if a.filters.is_empty() {
        return Err(Failure::Usage("--filters needs at least one filter".into()));
    }
    let filters = a
        .filters
        .iter()
        .map(|&c| config.design(c.into(), true))
        .collect::<eyefilt_core::Result<Vec<_>>>()
        .map_err(usage)?;

    let rec = read_input(a.io.input.as_deref(), a.rate.fs, s)?;
    let raw = rec.channel(a.channel.into());
    let windows = analysis_windows(&rec, &config, !a.no_screen, s)?;
    let mut conditions = vec![Condition::new("unfiltered", cut_blocks(raw, &windows, config.block_len)?)];
    for (choice, filter) in a.filters.iter().zip(&filters) {
        // filter the whole trace, then cut the same windows
        let blocks = cut_blocks(&apply(filter, raw)?, &windows, config.block_len)?;
        let name = FilterKind::from(*choice).short_name().to_uppercase();
        conditions.push(Condition::new(name, blocks));
    }
    let study = run_acf_study(&conditions, config.max_lag, config.alpha)?;
    emit_json(a.io.out.as_deref(), s, &serde_json::to_value(&study).map_err(Error::from)?)
}

fn synth_cmd(a: SynthArgs, s: &mut Streams<'_>) -> Outcome {
    let defaults = SyntheticSpec::default();
    let spec = SyntheticSpec {
        kind: a.kind.into(),
        duration_s: a.duration,
        fs_hz: a.rate.fs,
        noise_sigma_deg: a.sigma,
        saccade_amplitude_deg: a.amplitude.unwrap_or(defaults.saccade_amplitude_deg),
        frequency_hz: a.freq,
        amplitude_deg: a.amplitude.unwrap_or(defaults.amplitude_deg),
        seed: a.seed,
    };
    let rec = generate_synthetic(&spec).map_err(usage)?;
    emit(a.output.out.as_deref(), s, |w| write_recording(w, &rec))
}
