use nalgebra::DMatrix;
use num_complex::Complex64;

use super::DigitalFilter;

/// Roots of the denominator `z^n + a1 z^{n-1} + ... + an`, from the
/// eigenvalues of its companion matrix.
pub fn poles(filter: &DigitalFilter) -> Vec<Complex64> {
    let mut a = filter.a.clone();
    while a.len() > 1 && a[a.len() - 1] == 0.0 {
        a.pop();
    }
    let degree = a.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    let lead = a[0];
    let companion = DMatrix::from_fn(degree, degree, |i, j| {
        if i == 0 {
            -a[j + 1] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    companion
        .complex_eigenvalues()
        .iter()
        .map(|c| Complex64::new(c.re, c.im))
        .collect()
}

/// Unit-circle test: every pole strictly inside `|z| < 1 - 1e-10`.
pub fn is_stable(filter: &DigitalFilter) -> bool {
    if filter.a.iter().any(|v| !v.is_finite()) {
        return false;
    }
    filter.is_fir() || poles(filter).iter().all(|p| p.norm() < 1.0 - 1e-10)
}
