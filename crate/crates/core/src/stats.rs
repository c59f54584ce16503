//! Autocorrelation and the nonparametric comparison chain used to judge how
//! much temporal autocorrelation each filter introduces: ACF per block,
//! Fisher-Z, Friedman test across conditions, Tukey HSD on mean ranks.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};
use statrs::function::erf::erfc;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfResult {
    /// Autocorrelation for lags `0..=max_lag`; `r[0] == 1`.
    pub r: Vec<f64>,
    pub n: usize,
    /// Per lag, `|r| > z_{α/2} / √n`.
    pub significant: Vec<bool>,
    pub threshold: f64,
}

/// Sample autocorrelation with Bartlett white-noise significance bounds.
pub fn acf(signal: &[f64], max_lag: usize, alpha: f64) -> Result<AcfResult> {
    let n = signal.len();
    if n < max_lag + 2 {
        return Err(invalid(format!(
            "ACF to lag {max_lag} needs at least {} samples, got {n}",
            max_lag + 2
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let mean = signal.iter().sum::<f64>() / n as f64;
    let centred: Vec<f64> = signal.iter().map(|x| x - mean).collect();
    let denom: f64 = centred.iter().map(|v| v * v).sum();
    if !(denom > 0.0) || !denom.is_finite() {
        return Err(Error::Degenerate("signal has zero variance".into()));
    }
    let r: Vec<f64> = (0..=max_lag)
        .map(|k| {
            if k == 0 {
                1.0
            } else {
                centred.iter().zip(&centred[k..]).map(|(a, b)| a * b).sum::<f64>() / denom
            }
        })
        .collect();
    let threshold = normal_quantile(1.0 - alpha / 2.0) / (n as f64).sqrt();
    let significant = r.iter().map(|v| v.abs() > threshold).collect();
    Ok(AcfResult { r, n, significant, threshold })
}

/// `atanh(r)`.
pub fn fisher_z(r: f64) -> Result<f64> {
    if !(r.abs() < 1.0) {
        return Err(invalid(format!("Fisher-Z needs |r| < 1, got {r}")));
    }
    Ok(r.atanh())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FriedmanResult {
    pub chi2: f64,
    pub df: usize,
    pub p: f64,
    pub mean_ranks: Vec<f64>,
}

/// Friedman test on an `n × k` matrix (rows are blocks, columns are
/// treatments). Ties get average ranks and the statistic is divided by the
/// usual tie-correction factor.
pub fn friedman_test<R: AsRef<[f64]>>(values: &[R]) -> Result<FriedmanResult> {
    let (n, k) = check_matrix(values)?;
    let mut rank_sums = vec![0.0; k];
    let mut tie_sum = 0.0;
    for row in values {
        let (ranks, ties) = rank_row(row.as_ref());
        rank_sums.iter_mut().zip(&ranks).for_each(|(s, r)| *s += r);
        tie_sum += ties;
    }
    let (nf, kf) = (n as f64, k as f64);
    let mean_ranks: Vec<f64> = rank_sums.iter().map(|s| s / nf).collect();

    let correction = 1.0 - tie_sum / (nf * kf * (kf * kf - 1.0));
    let df = k - 1;
    if correction <= 1e-12 {
        // every row fully tied
        return Ok(FriedmanResult { chi2: 0.0, df, p: 1.0, mean_ranks });
    }
    let raw = 12.0 / (nf * kf * (kf + 1.0)) * rank_sums.iter().map(|s| s * s).sum::<f64>()
        - 3.0 * nf * (kf + 1.0);
    let chi2 = (raw / correction).max(0.0);
    let p = ChiSquared::new(df as f64)
        .map_err(|e| invalid(e.to_string()))?
        .sf(chi2)
        .clamp(0.0, 1.0);
    Ok(FriedmanResult { chi2, df, p, mean_ranks })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TukeyComparison {
    /// Treatment (column) indices.
    pub pair: (usize, usize),
    /// `mean_rank[first] - mean_rank[second]`.
    pub difference: f64,
    /// Studentized range statistic `|difference| / SE`.
    pub q: f64,
    pub p: f64,
}

/// All pairwise comparisons of Friedman mean ranks, with
/// `SE = √(k (k+1) / (12 n))` and p-values from the studentized range
/// distribution with infinite degrees of freedom.
pub fn tukey_hsd_on_ranks<R: AsRef<[f64]>>(values: &[R]) -> Result<Vec<TukeyComparison>> {
    let (n, k) = check_matrix(values)?;
    let friedman = friedman_test(values)?;
    let se = ((k * (k + 1)) as f64 / (12.0 * n as f64)).sqrt();
    let mut out = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            let difference = friedman.mean_ranks[i] - friedman.mean_ranks[j];
            let q = difference.abs() / se;
            out.push(TukeyComparison { pair: (i, j), difference, q, p: studentized_range_sf(q, k)? });
        }
    }
    Ok(out)
}

/// Upper tail of the range of `k` independent standard normals:
/// `1 - k ∫ φ(z) [Φ(z) - Φ(z - q)]^{k-1} dz`.
pub fn studentized_range_sf(q: f64, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(invalid(format!("studentized range needs k >= 2, got {k}")));
    }
    if q.is_nan() || q < 0.0 {
        return Err(invalid(format!("studentized range needs q >= 0, got {q}")));
    }
    if q == 0.0 {
        return Ok(1.0);
    }
    if q.is_infinite() {
        return Ok(0.0);
    }
    let power = (k - 1) as i32;
    let integrand = |z: f64| normal_pdf(z) * (normal_cdf(z) - normal_cdf(z - q)).powi(power);
    // φ(z) < 1e-18 beyond |z| = 9; split at the integrand's bulk
    let knots = [-9.0, -3.0, 0.0, q.min(6.0), 9.0 + q.min(3.0)];
    let mut integral = 0.0;
    for w in knots.windows(2) {
        if w[1] > w[0] {
            integral += adaptive_simpson(&integrand, w[0], w[1], 1e-12, 40);
        }
    }
    Ok((1.0 - k as f64 * integral).clamp(0.0, 1.0))
}

/// Fisher-Z, Friedman and Tukey results for one lag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagComparison {
    pub lag: usize,
    pub friedman: FriedmanResult,
    pub comparisons: Vec<NamedComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedComparison {
    pub first: String,
    pub second: String,
    pub difference: f64,
    pub q: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionSummary {
    pub name: String,
    /// Median ACF across blocks, lags `0..=max_lag`.
    pub median_acf: Vec<f64>,
    /// Number of blocks significant at `alpha`, lags `0..=max_lag`.
    pub significant_counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfStudy {
    pub n_blocks: usize,
    pub max_lag: usize,
    pub alpha: f64,
    pub conditions: Vec<ConditionSummary>,
    pub lags: Vec<LagComparison>,
}

/// Blocks recorded under one condition (unfiltered, or one filter).
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub name: String,
    pub blocks: Vec<Vec<f64>>,
}

impl Condition {
    pub fn new(name: impl Into<String>, blocks: Vec<Vec<f64>>) -> Self {
        Condition { name: name.into(), blocks }
    }
}

/// Number of lags that go through the Friedman / Tukey chain.
pub const TESTED_LAGS: usize = 3;

/// ACF for every block in every condition, medians and significance counts
/// per condition, then for lags `1..=min(3, max_lag)` the Fisher-Z matrix
/// (blocks × conditions) is tested with Friedman and Tukey HSD.
pub fn run_acf_study(conditions: &[Condition], max_lag: usize, alpha: f64) -> Result<AcfStudy> {
    if conditions.len() < 2 {
        return Err(invalid(format!("need at least 2 conditions, got {}", conditions.len())));
    }
    if max_lag < 1 {
        return Err(invalid("max_lag must be at least 1"));
    }
    let n_blocks = conditions[0].blocks.len();
    if n_blocks < 2 {
        return Err(invalid(format!("need at least 2 blocks per condition, got {n_blocks}")));
    }
    for c in conditions {
        if c.blocks.len() != n_blocks {
            return Err(invalid(format!(
                "condition `{}` has {} blocks, expected {n_blocks}",
                c.name,
                c.blocks.len()
            )));
        }
    }

    // acfs[condition][block]
    let acfs: Vec<Vec<AcfResult>> = conditions
        .iter()
        .map(|c| c.blocks.iter().map(|b| acf(b, max_lag, alpha)).collect::<Result<_>>())
        .collect::<Result<_>>()?;

    let summaries = conditions
        .iter()
        .zip(&acfs)
        .map(|(c, results)| ConditionSummary {
            name: c.name.clone(),
            median_acf: (0..=max_lag)
                .map(|lag| median(results.iter().map(|a| a.r[lag]).collect()))
                .collect(),
            significant_counts: (0..=max_lag)
                .map(|lag| results.iter().filter(|a| a.significant[lag]).count())
                .collect(),
        })
        .collect();

    let mut lags = Vec::new();
    for lag in 1..=max_lag.min(TESTED_LAGS) {
        let matrix: Vec<Vec<f64>> = (0..n_blocks)
            .map(|b| acfs.iter().map(|per_cond| fisher_z(per_cond[b].r[lag])).collect())
            .collect::<Result<_>>()?;
        let friedman = friedman_test(&matrix)?;
        let comparisons = tukey_hsd_on_ranks(&matrix)?
            .into_iter()
            .map(|t| NamedComparison {
                first: conditions[t.pair.0].name.clone(),
                second: conditions[t.pair.1].name.clone(),
                difference: t.difference,
                q: t.q,
                p: t.p,
            })
            .collect();
        lags.push(LagComparison { lag, friedman, comparisons });
    }

    Ok(AcfStudy { n_blocks, max_lag, alpha, conditions: summaries, lags })
}

pub fn median(mut values: Vec<f64>) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len().is_multiple_of(2) {
        0.5 * (values[mid - 1] + values[mid])
    } else {
        values[mid]
    }
}

fn check_matrix<R: AsRef<[f64]>>(values: &[R]) -> Result<(usize, usize)> {
    let n = values.len();
    if n < 2 {
        return Err(invalid(format!("need at least 2 rows, got {n}")));
    }
    let k = values[0].as_ref().len();
    if k < 2 {
        return Err(invalid(format!("need at least 2 treatments, got {k}")));
    }
    for (i, row) in values.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != k {
            return Err(invalid(format!("row {i} has {} values, expected {k}", row.len())));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(invalid(format!("row {i} contains a non-finite value")));
        }
    }
    Ok((n, k))
}

/// Average ranks (1-based) and the row's `Σ (t³ - t)` over tie groups.
fn rank_row(row: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| row[a].total_cmp(&row[b]));
    let mut ranks = vec![0.0; row.len()];
    let mut ties = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && row[order[j]] == row[order[i]] {
            j += 1;
        }
        let avg = (i + j + 1) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = avg;
        }
        let t = (j - i) as f64;
        ties += t * t * t - t;
        i = j;
    }
    (ranks, ties)
}

fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

fn normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}
