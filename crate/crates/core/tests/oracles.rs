//! Cross-checks against independent reference computations.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

use eyefilt_core::filters::{
    apply_forward, apply_zero_phase, design_butterworth_lowpass, design_fir_lowpass,
    design_savitzky_golay, DigitalFilter, FilterSpec,
};
use eyefilt_core::spectral::{
    amplitude_spectrum, analytic_frequency_response, empirical_frequency_response, fft,
    find_db_crossing, frequency_grid,
};
use eyefilt_core::stats::{acf, friedman_test, median, studentized_range_sf};
use eyefilt_core::synth::white_noise;

fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(t, &v)| v * Complex64::from_polar(1.0, -2.0 * PI * ((k * t) % n) as f64 / n as f64))
                .sum()
        })
        .collect()
}

#[test]
fn savitzky_golay_matches_pseudoinverse() {
    for (window, order) in [(11, 2), (5, 2), (7, 3), (21, 4), (31, 6), (91, 9)] {
        let half = (window / 2) as i64;
        // offsets scaled to [-1, 1]; the constant term is unaffected
        let vander = DMatrix::from_fn(window, order + 1, |i, j| {
            ((i as i64 - half) as f64 / half as f64).powi(j as i32)
        });
        let pinv = vander.clone().pseudo_inverse(1e-14).unwrap();
        let got = design_savitzky_golay(window, order).unwrap().b;
        for i in 0..window {
            // the fitted polynomial's value at offset 0 is its constant term
            assert!(
                (got[i] - pinv[(0, i)]).abs() < 1e-10,
                "({window},{order}) coefficient {i}: {} vs {}",
                got[i],
                pinv[(0, i)]
            );
        }
    }
}

#[test]
fn fft_matches_naive_dft() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in 1..=8 {
        let n = 1usize << p;
        let x: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.random(), rng.random())).collect();
        let want = naive_dft(&x);
        let got = fft(&x).unwrap();
        let scale = want.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).norm() / scale < 1e-9);
        }
    }
}

/// Impulse response by partial fractions over the poles recomputed here
/// from the analog prototype.
#[test]
fn butterworth_impulse_response_matches_partial_fractions() {
    let (order, fc, fs) = (7usize, 100.0, 1000.0);
    let warped = (PI * fc / fs).tan();
    let poles: Vec<Complex64> = (0..order)
        .map(|k| {
            let theta = PI / 2.0 + PI * (2 * k + 1) as f64 / (2 * order) as f64;
            let s = Complex64::from_polar(warped, theta);
            (1.0 + s) / (1.0 - s)
        })
        .collect();
    // DC gain 1: g · 2^N / Π(1 - p) = 1
    let gain = poles.iter().fold(Complex64::new(1.0, 0.0), |acc, p| acc * (1.0 - p)).re / 2f64.powi(order as i32);
    // H(z) = g (1 + z^{-1})^N / Π(1 - p z^{-1}) = d + Σ r_k / (1 - p_k z^{-1})
    let residues: Vec<Complex64> = poles
        .iter()
        .enumerate()
        .map(|(k, &pk)| {
            let num = gain * (1.0 + 1.0 / pk).powi(order as i32);
            let den = poles
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .fold(Complex64::new(1.0, 0.0), |acc, (_, &pj)| acc * (1.0 - pj / pk));
            num / den
        })
        .collect();
    let direct = gain - residues.iter().sum::<Complex64>().re;

    let filter = design_butterworth_lowpass(order, fc, fs).unwrap();
    let mut impulse = vec![0.0; 300];
    impulse[0] = 1.0;
    let h = apply_forward(&filter, &impulse).unwrap();
    for (n, &v) in h.iter().enumerate() {
        let mut want: f64 = residues.iter().zip(&poles).map(|(r, p)| (r * p.powi(n as i32)).re).sum();
        if n == 0 {
            want += direct;
        }
        assert!((v - want).abs() < 1e-9, "n={n}: {v} vs {want}");
    }
}

#[test]
fn zero_phase_equals_delay_compensated_autoconvolution() {
    // forward-backward with h equals one pass of h * reverse(h) centred
    let h = design_savitzky_golay(11, 2).unwrap();
    let auto: Vec<f64> = (0..21)
        .map(|m| {
            (0..11)
                .filter_map(|i| {
                    let j = i as i64 + m as i64 - 10;
                    (0..11).contains(&j).then(|| h.b[i] * h.b[j as usize])
                })
                .sum()
        })
        .collect();
    let combined = DigitalFilter::from_coefficients(auto, vec![1.0], h.spec.clone()).unwrap();
    let x = white_noise(600, 1.0, 3);
    let zp = apply_zero_phase(&h, &x).unwrap();
    let single = apply_forward(&combined, &x).unwrap();
    for n in 40..560 {
        assert!((zp[n] - single[n + 10]).abs() < 1e-9);
    }
}

fn sine_fit(y: &[f64], freq: f64, fs: f64) -> (f64, f64) {
    let basis = DMatrix::from_fn(y.len(), 2, |t, j| {
        let w = 2.0 * PI * freq * t as f64 / fs;
        if j == 0 { w.sin() } else { w.cos() }
    });
    let coef = basis.svd(true, true).solve(&DVector::from_column_slice(y), 1e-12).unwrap();
    (coef[0].hypot(coef[1]), coef[1].atan2(coef[0]))
}

#[test]
fn fifty_hz_sine_keeps_amplitude_and_phase() {
    let fs = 1000.0;
    let x: Vec<f64> = (0..2000).map(|t| (2.0 * PI * 50.0 * t as f64 / fs).sin()).collect();
    let filters = [
        design_butterworth_lowpass(7, 100.0, fs).unwrap(),
        design_fir_lowpass(80, 100.0, fs).unwrap(),
    ];
    for f in filters {
        let y = apply_zero_phase(&f.with_zero_phase(true), &x).unwrap();
        let (amp, phase) = sine_fit(&y[300..1700], 50.0, fs);
        let (_, phase_in) = sine_fit(&x[300..1700], 50.0, fs);
        assert!((amp - 1.0).abs() < 0.01, "{amp}");
        assert!((phase - phase_in).abs() < 1e-6);
    }
}

#[test]
fn white_noise_spectrum_is_flat() {
    let blocks: Vec<Vec<f64>> = (0..200).map(|b| white_noise(256, 1.0, 1000 + b)).collect();
    let s = amplitude_spectrum(&blocks, 1000.0).unwrap();
    let band: Vec<f64> = s
        .freqs_hz
        .iter()
        .zip(&s.amplitude_deg)
        .filter(|(&f, _)| (20.0..=480.0).contains(&f))
        .map(|(_, &a)| a)
        .collect();
    let med = median(band.clone());
    for a in band {
        assert!((a / med - 1.0).abs() < 0.25);
    }
}

fn rms_db_error(n_blocks: usize, filter: &DigitalFilter, seed: u64) -> f64 {
    let x = white_noise(256 * n_blocks, 1.0, seed);
    let y = eyefilt_core::filters::apply(filter, &x).unwrap();
    let xb: Vec<&[f64]> = x.chunks(256).collect();
    let yb: Vec<&[f64]> = y.chunks(256).collect();
    let emp = empirical_frequency_response(&xb, &yb, 1000.0).unwrap();
    let ana = analytic_frequency_response(filter, &emp.freqs_hz, 1000.0).unwrap();
    let errs: Vec<f64> = emp
        .freqs_hz
        .iter()
        .enumerate()
        .filter(|&(_, &f)| f <= 400.0)
        .map(|(i, _)| emp.magnitude_db[i] - ana.magnitude_db[i])
        .collect();
    (errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64).sqrt()
}

#[test]
fn ratio_method_converges_for_a_gentle_filter() {
    // three-point binomial smoother: -20 dB at 400 Hz, no nulls below Nyquist
    let smoother =
        DigitalFilter::from_coefficients(vec![0.25, 0.5, 0.25], vec![1.0], FilterSpec::defaults(1000.0)).unwrap();
    let e200 = rms_db_error(200, &smoother, 11);
    let e1000 = rms_db_error(1000, &smoother, 11);
    assert!(e200 < 1.0, "{e200}");
    assert!(e1000 < 0.5, "{e1000}");
    assert!(e1000 < e200);
}

#[test]
fn ratio_method_finds_sg_cutoff_near_100_hz() {
    let sg = design_savitzky_golay(11, 2).unwrap();
    let x = white_noise(256 * 200, 1.0, 5);
    let y = eyefilt_core::filters::apply(&sg, &x).unwrap();
    let xb: Vec<&[f64]> = x.chunks(256).collect();
    let yb: Vec<&[f64]> = y.chunks(256).collect();
    let emp = empirical_frequency_response(&xb, &yb, 1000.0).unwrap();
    let f3 = find_db_crossing(&emp, -3.0).unwrap().unwrap();
    assert!((f3 - 100.0).abs() < 5.0, "{f3}");
}

#[test]
fn analytic_crossings_against_closed_form_butterworth() {
    // single-pass |H|² = 1 / (1 + r^{14}), r = tan(πf/fs) / tan(πfc/fs);
    // two passes reach L dB where r^{14} = 10^{-L/20} - 1
    let f = design_butterworth_lowpass(7, 100.0, 1000.0).unwrap().with_zero_phase(true);
    let resp = analytic_frequency_response(&f, &frequency_grid(1000.0, 50001), 1000.0).unwrap();
    for level in [-30.0f64, -40.0] {
        let r = (10f64.powf(-level / 20.0) - 1.0).powf(1.0 / 14.0);
        let want = (r * (PI * 0.1).tan()).atan() / PI * 1000.0;
        let got = find_db_crossing(&resp, level).unwrap().unwrap();
        assert!((got - want).abs() < 0.01, "{level}: {got} vs {want}");
    }
}

#[test]
fn ar1_lag_one_autocorrelation() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut x = vec![0.0f64; 10000];
    for t in 1..x.len() {
        let e: f64 = StandardNormal.sample(&mut rng);
        x[t] = 0.6 * x[t - 1] + e;
    }
    let r = acf(&x, 5, 0.05).unwrap().r;
    assert!((r[1] - 0.6).abs() < 0.03, "{}", r[1]);
}

#[test]
fn bartlett_bound_false_positive_rate() {
    let trials = 10000;
    let flagged = (0..trials)
        .filter(|&i| acf(&white_noise(256, 1.0, 50_000 + i), 1, 0.05).unwrap().significant[1])
        .count();
    let rate = flagged as f64 / trials as f64;
    assert!((rate - 0.05).abs() < 0.01, "{rate}");
}

#[test]
fn studentized_range_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let samples = 10_000_000;
    let mut exceed = 0usize;
    for _ in 0..samples {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for _ in 0..6 {
            let z: f64 = StandardNormal.sample(&mut rng);
            lo = lo.min(z);
            hi = hi.max(z);
        }
        if hi - lo > 4.03 {
            exceed += 1;
        }
    }
    let mc = exceed as f64 / samples as f64;
    let p = studentized_range_sf(4.03, 6).unwrap();
    assert!((p - mc).abs() / mc < 2e-2, "{p} vs {mc}");
}

#[test]
fn friedman_null_p_values_are_uniform() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut ps: Vec<f64> = (0..1000)
        .map(|_| {
            let m: Vec<Vec<f64>> = (0..216).map(|_| (0..6).map(|_| rng.random::<f64>()).collect()).collect();
            friedman_test(&m).unwrap().p
        })
        .collect();
    ps.sort_by(f64::total_cmp);
    let n = ps.len() as f64;
    let d = ps
        .iter()
        .enumerate()
        .map(|(i, &p)| (p - i as f64 / n).abs().max(((i + 1) as f64 / n - p).abs()))
        .fold(0.0, f64::max);
    // Kolmogorov critical value at α = 0.01
    assert!(d < 1.628 / n.sqrt(), "D = {d}");
}

#[test]
fn filtering_white_noise_raises_lag_one_autocorrelation() {
    let fs = 1000.0;
    let x = white_noise(256 * 120, 1.0, 77);
    let raw: Vec<f64> = x.chunks(256).map(|b| acf(b, 5, 0.05).unwrap().r[1]).collect();
    let raw_median = median(raw);
    let designs = [
        design_savitzky_golay(11, 2).unwrap(),
        design_butterworth_lowpass(7, 100.0, fs).unwrap().with_zero_phase(true),
        design_fir_lowpass(80, 100.0, fs).unwrap().with_zero_phase(true),
    ];
    for f in designs {
        let y = eyefilt_core::filters::apply(&f, &x).unwrap();
        let filtered: Vec<f64> = y.chunks(256).map(|b| acf(b, 5, 0.05).unwrap().r[1]).collect();
        assert!(median(filtered) > raw_median + 0.2);
    }
}
