//! Iterative radix-2 Cooley-Tukey FFT.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{invalid, Result};

/// Unnormalised forward DFT, `X[k] = Σ x[n] e^{-2πikn/N}`.
pub fn fft(samples: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut data = samples.to_vec();
    transform(&mut data, false)?;
    Ok(data)
}

/// Inverse of [`fft`], including the `1/N` factor.
pub fn ifft(spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut data = spectrum.to_vec();
    transform(&mut data, true)?;
    let scale = 1.0 / data.len() as f64;
    data.iter_mut().for_each(|v| *v *= scale);
    Ok(data)
}

/// FFT of a real signal.
pub fn fft_real(samples: &[f64]) -> Result<Vec<Complex64>> {
    let mut data: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    transform(&mut data, false)?;
    Ok(data)
}

fn transform(data: &mut [Complex64], inverse: bool) -> Result<()> {
    let n = data.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(invalid(format!("FFT length must be a power of two >= 2, got {n}")));
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }

    let sign = if inverse { 1.0 } else { -1.0 };
    // twiddles for the largest stage; smaller stages stride through it
    let twiddles: Vec<Complex64> = (0..n / 2)
        .map(|k| Complex64::from_polar(1.0, sign * 2.0 * PI * k as f64 / n as f64))
        .collect();

    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = twiddles[k * stride];
                let u = data[start + k];
                let v = data[start + k + half] * w;
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
    Ok(())
}
