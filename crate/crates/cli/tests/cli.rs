use std::io::Write;
use std::process::{Command, Stdio};

use eyefilt_cli::{run, Streams, EXIT_DATA, EXIT_OK, EXIT_USAGE};
use eyefilt_core::io::{read_recording, read_response, read_series};
use eyefilt_core::spectral::{find_db_crossing, ResponseSource};
use eyefilt_core::synth::{generate_synthetic, SyntheticKind, SyntheticSpec};

struct Run {
    code: i32,
    stdout: Vec<u8>,
    stderr: String,
}

fn eyefilt(args: &[&str], input: &[u8]) -> Run {
    let mut stdin = input;
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let mut argv = vec!["eyefilt"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut Streams { stdin: &mut stdin, stdout: &mut stdout, stderr: &mut stderr });
    Run { code, stdout, stderr: String::from_utf8(stderr).unwrap() }
}

fn constant_recording(n: usize, spikes: &[usize]) -> Vec<u8> {
    let mut s = String::from("t_ms,x_deg,y_deg\n");
    for t in 0..n {
        let x = if spikes.contains(&t) { 1.0 } else { 0.0 };
        s.push_str(&format!("{t},{x},3.5\n"));
    }
    s.into_bytes()
}

#[test]
fn freqz_fir_zero_phase_reaches_minus_30_db_near_110_hz() {
    let r = eyefilt(&["freqz", "--filter", "fir", "--taps", "80", "--cutoff", "100", "--fs", "1000", "--zero-phase"], b"");
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let resp = read_response(r.stdout.as_slice(), ResponseSource::Analytic).unwrap();
    assert_eq!(resp.freqs_hz.len(), 501);
    let f = find_db_crossing(&resp, -30.0).unwrap().unwrap();
    assert!((f - 110.0).abs() < 5.0, "{f}");
}

#[test]
fn synth_then_spectrum_finds_the_sinusoid() {
    let synth = eyefilt(&["synth", "--kind", "sinusoid", "--freq", "62.5", "--amplitude", "1", "--duration", "1.024"], b"");
    assert_eq!(synth.code, EXIT_OK);
    let spec = eyefilt(&["spectrum", "--no-screen"], &synth.stdout);
    assert_eq!(spec.code, EXIT_OK, "{}", spec.stderr);
    let s = read_series(spec.stdout.as_slice()).unwrap();
    assert_eq!(s.header, ["freq_hz", "amplitude_deg"]);
    let (i, peak) = s.y.iter().enumerate().fold((0, 0.0), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
    assert_eq!(s.x[i], 62.5);
    assert!((peak - 1.0).abs() < 0.02, "{peak}");
}

#[test]
fn screened_spectrum_without_quiet_segments_is_a_data_error() {
    let synth = eyefilt(&["synth", "--kind", "sinusoid", "--duration", "5"], b"");
    let r = eyefilt(&["spectrum"], &synth.stdout);
    assert_eq!(r.code, EXIT_DATA);
    assert!(r.stderr.contains("--no-screen"), "{}", r.stderr);
}

#[test]
fn segments_on_spiky_file_is_empty_with_warning() {
    let spikes: Vec<usize> = (500..10_000).step_by(1000).collect();
    let r = eyefilt(&["segments"], &constant_recording(10_000, &spikes));
    assert_eq!(r.code, EXIT_OK);
    let list: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(list, serde_json::json!([]));
    assert!(r.stderr.contains("warning"), "{}", r.stderr);
}

#[test]
fn segments_lists_windows() {
    let r = eyefilt(&["segments", "--seg-len", "1024"], &constant_recording(5000, &[]));
    assert_eq!(r.code, EXIT_OK);
    let list: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    let list = list.as_array().unwrap();
    assert_eq!(list.len(), 4);
    assert_eq!(list[0]["start_index"], 3);
    assert_eq!(list[0]["length"], 1024);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(eyefilt(&["bogus"], b"").code, EXIT_USAGE);
    assert_eq!(eyefilt(&["freqz", "--no-such-flag"], b"").code, EXIT_USAGE);
    assert_eq!(eyefilt(&["freqz", "--filter", "median"], b"").code, EXIT_USAGE);
    assert_eq!(eyefilt(&["freqz", "--cutoff", "700"], b"").code, EXIT_USAGE);
    assert_eq!(eyefilt(&["spectrum", "--block-len", "100"], b"").code, EXIT_USAGE);
    assert_eq!(eyefilt(&["measure-response", "--filtered", "-"], b"").code, EXIT_USAGE);
    assert_eq!(eyefilt(&[], b"").code, EXIT_USAGE);
    let help = eyefilt(&["--help"], b"");
    assert_eq!(help.code, EXIT_OK);
    assert!(String::from_utf8(help.stdout).unwrap().contains("acf-stats"));
}

#[test]
fn data_errors_exit_2() {
    let gap = b"t_ms,x_deg,y_deg\n0,0,0\n1,0,0\n3,0,0\n";
    let r = eyefilt(&["velocity"], gap);
    assert_eq!(r.code, EXIT_DATA);
    assert!(r.stderr.contains("line 4"), "{}", r.stderr);
    assert_eq!(eyefilt(&["velocity"], b"t_ms,x_deg,y_deg\n").code, EXIT_DATA);
    assert_eq!(eyefilt(&["velocity", "--in", "/nonexistent/file.csv"], b"").code, EXIT_DATA);
}

#[test]
fn synth_is_deterministic_and_round_trips() {
    let a = eyefilt(&["synth", "--duration", "2", "--seed", "42"], b"");
    let b = eyefilt(&["synth", "--duration", "2", "--seed", "42"], b"");
    let c = eyefilt(&["synth", "--duration", "2", "--seed", "43"], b"");
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let loaded = read_recording(a.stdout.as_slice(), 1000.0).unwrap();
    let spec = SyntheticSpec { kind: SyntheticKind::WhiteNoiseFixation, duration_s: 2.0, seed: 42, ..Default::default() };
    assert_eq!(loaded, generate_synthetic(&spec).unwrap());
}

#[test]
fn velocity_is_aligned_and_offset() {
    let mut s = String::from("t_ms,x_deg,y_deg\n");
    for t in 0..20 {
        s.push_str(&format!("{t},{},0\n", 0.002 * t as f64));
    }
    let r = eyefilt(&["velocity", "--offset", "50"], s.as_bytes());
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let v = read_series(r.stdout.as_slice()).unwrap();
    assert_eq!(v.header, ["t_ms", "v_deg_s"]);
    assert_eq!(v.x.first(), Some(&3.0));
    assert_eq!(v.x.last(), Some(&16.0));
    assert!(v.y.iter().all(|&y| (y - 52.0).abs() < 1e-9));

    let r = eyefilt(&["velocity", "--method", "instantaneous", "--offset", "-2"], s.as_bytes());
    let v = read_series(r.stdout.as_slice()).unwrap();
    assert_eq!(v.x.len(), 19);
    assert_eq!(v.x[0], 1.0);
    assert!(v.y.iter().all(|&y| y.abs() < 1e-9));
}

#[test]
fn filter_keeps_timestamps_and_smooths() {
    let synth = eyefilt(&["synth", "--duration", "1", "--seed", "5"], b"");
    let r = eyefilt(&["filter", "--filter", "iir", "--zero-phase"], &synth.stdout);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let raw = read_recording(synth.stdout.as_slice(), 1000.0).unwrap();
    let out = read_recording(r.stdout.as_slice(), 1000.0).unwrap();
    assert_eq!(raw.t_ms, out.t_ms);
    let energy = |v: &[f64]| v.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>();
    assert!(energy(&out.x_deg) < 0.1 * energy(&raw.x_deg));
}

#[test]
fn design_reports_stable_filter() {
    let r = eyefilt(&["design", "--filter", "iir", "--order", "7"], b"");
    assert_eq!(r.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["stable"], true);
    assert_eq!(v["filter"]["a"].as_array().unwrap().len(), 8);
    assert_eq!(v["poles"].as_array().unwrap().len(), 7);
    assert!((v["dc_gain"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn acf_stats_reports_every_condition_and_lag() {
    let synth = eyefilt(&["synth", "--duration", "20", "--seed", "7"], b"");
    let r = eyefilt(&["acf-stats"], &synth.stdout);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    let names: Vec<&str> = v["conditions"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["unfiltered", "SG", "IIR", "FIR"]);
    let lags = v["lags"].as_array().unwrap();
    assert_eq!(lags.len(), 3);
    assert_eq!(lags[0]["comparisons"].as_array().unwrap().len(), 6);
    assert!(lags[0]["friedman"]["p"].as_f64().unwrap() < 1e-6);

    let two = eyefilt(&["acf-stats", "--filters", "fir", "--no-screen"], &synth.stdout);
    let v: serde_json::Value = serde_json::from_slice(&two.stdout).unwrap();
    assert_eq!(v["conditions"].as_array().unwrap().len(), 2);
    assert_eq!(v["n_blocks"], 78);
}

#[test]
fn out_file_is_written_and_replaced() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("resp.csv");
    std::fs::write(&path, "stale").unwrap();
    let p = path.to_str().unwrap();
    let r = eyefilt(&["freqz", "--filter", "sg", "--n-freqs", "11", "--out", p], b"");
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("freq_hz,mag_db\n0,"));
    assert_eq!(text.lines().count(), 12);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn binary_pipes_through_stdin_and_stdout() {
    let exe = env!("CARGO_BIN_EXE_eyefilt");
    let synth = Command::new(exe).args(["synth", "--duration", "0.5"]).output().unwrap();
    assert!(synth.status.success());
    let mut child = Command::new(exe)
        .args(["velocity", "--in", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&synth.stdout).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1 + 500 - 6);

    let bad = Command::new(exe).arg("nope").output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}
