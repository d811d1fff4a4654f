//! Augmented Dickey–Fuller unit-root test, constant-only case.
//!
//! Regression: `Δs_t = α + γ s_{t−1} + Σ_{i=1..k} δ_i Δs_{t−i} + e_t`; the
//! statistic is the t-ratio of γ. The augmentation order `k` is the AIC
//! minimiser over `0..=max_lag` on a common sample, after which the chosen
//! model is refit on its own maximal sample.
//!
//! Critical values are read off a table in `1/n` with linear interpolation.
//! The table rows are MacKinnon's (2010) constant-only response surface
//! `τ(n) = β∞ + β1/n + β2/n² + β3/n³` evaluated at each tabulated `n`:
//!
//! | level | β∞        | β1      | β2      | β3      |
//! |-------|-----------|---------|---------|---------|
//! | 1%    | −3.43035  | −6.5393 | −16.786 | −79.433 |
//! | 5%    | −2.86154  | −2.8903 | −4.234  | −40.040 |
//! | 10%   | −2.56677  | −1.5384 | −2.809  | 0       |

use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regression::{ols_fit, Matrix};
use crate::timeseries::DatedSeries;

pub const MIN_ADF_OBSERVATIONS: usize = 20;

/// `(n, 1%, 5%, 10%)`; `n = ∞` is the last row.
const CRITICAL_TABLE: [(f64, [f64; 3]); 7] = [
    (25.0, [-3.723_863_31, -2.986_488_96, -2.632_800_40]),
    (50.0, [-3.568_485_86, -2.921_359_92, -2.598_661_60]),
    (100.0, [-3.497_501_03, -2.890_906_44, -2.582_434_90]),
    (250.0, [-3.456_780_86, -2.873_171_51, -2.572_968_54]),
    (500.0, [-3.443_496_38, -2.867_337_86, -2.569_858_04]),
    (1000.0, [-3.436_906_17, -2.864_434_57, -2.568_311_21]),
    (f64::INFINITY, [-3.430_35, -2.861_54, -2.566_77]),
];

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CriticalValues {
    pub one_pct: f64,
    pub five_pct: f64,
    pub ten_pct: f64,
}

impl CriticalValues {
    /// Interpolated linearly in `1/n`; below the first row the first segment
    /// is extended.
    pub fn for_sample_size(n: usize) -> Self {
        let inv = 1.0 / n as f64;
        let inv_of = |row: &(f64, [f64; 3])| 1.0 / row.0;
        let mut seg = 0;
        while seg + 2 < CRITICAL_TABLE.len() && inv < inv_of(&CRITICAL_TABLE[seg + 1]) {
            seg += 1;
        }
        let (hi, lo) = (&CRITICAL_TABLE[seg], &CRITICAL_TABLE[seg + 1]);
        let (u_hi, u_lo) = (inv_of(hi), inv_of(lo));
        let w = (inv - u_lo) / (u_hi - u_lo);
        let at = |i: usize| lo.1[i] + w * (hi.1[i] - lo.1[i]);
        Self {
            one_pct: at(0),
            five_pct: at(1),
            ten_pct: at(2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum AdfVerdict {
    RejectUnitRoot,
    FailToReject,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct AdfResult {
    pub test_stat: f64,
    pub lags_used: usize,
    /// Rows in the final regression.
    pub n_obs: usize,
    pub critical_values: CriticalValues,
    /// Decision at the 5% level.
    pub verdict: AdfVerdict,
}

/// Schwert's rule `ceil(12·(n/100)^{1/4})`, capped so the largest model
/// still leaves residual degrees of freedom.
pub fn adf_default_max_lag(n: usize) -> usize {
    let rule = libm::ceil(12.0 * libm::pow(n as f64 / 100.0, 0.25)) as usize;
    rule.min((n / 2).saturating_sub(2))
}

pub fn adf_test(series: &DatedSeries, max_lag: usize) -> Result<AdfResult> {
    adf_test_values(&series.values(), max_lag)
}

/// ADF on raw values. See the module docs for the regression.
pub fn adf_test_values(values: &[f64], max_lag: usize) -> Result<AdfResult> {
    let n = values.len();
    if n < MIN_ADF_OBSERVATIONS {
        return Err(Error::SeriesTooShort {
            len: n,
            required: MIN_ADF_OBSERVATIONS,
        });
    }
    if values.iter().all(|v| *v == values[0]) {
        return Err(Error::ConstantSeries);
    }
    if max_lag > (n / 2).saturating_sub(2) {
        return Err(Error::DomainError("ADF max_lag too large for the sample"));
    }
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();

    let lags_used = if max_lag == 0 {
        0
    } else {
        let common = diffs.len() - max_lag;
        let mut best = (f64::INFINITY, 0);
        for k in 0..=max_lag {
            let (x, y) = adf_design(values, &diffs, k, common);
            let fit = ols_fit(&x, &y)?;
            let m = y.len() as f64;
            let aic = m * libm::log(fit.rss / m) + 2.0 * x.cols() as f64;
            if aic < best.0 {
                best = (aic, k);
            }
        }
        best.1
    };

    let (x, y) = adf_design(values, &diffs, lags_used, diffs.len() - lags_used);
    let fit = ols_fit(&x, &y)?;
    let sigma2 = fit.rss / fit.df_resid() as f64;
    let se = libm::sqrt(sigma2 * fit.unscaled_variance(1));
    let test_stat = fit.coefficients[1] / se;
    let critical_values = CriticalValues::for_sample_size(y.len());
    let verdict = if test_stat < critical_values.five_pct {
        AdfVerdict::RejectUnitRoot
    } else {
        AdfVerdict::FailToReject
    };
    Ok(AdfResult {
        test_stat,
        lags_used,
        n_obs: y.len(),
        critical_values,
        verdict,
    })
}

/// Last `rows` observations of `[1, s_{t−1}, Δs_{t−1}, …, Δs_{t−k}] → Δs_t`.
fn adf_design(levels: &[f64], diffs: &[f64], k: usize, rows: usize) -> (Matrix, Vec<f64>) {
    let start = diffs.len() - rows;
    let width = 2 + k;
    let mut data = Vec::with_capacity(rows * width);
    let mut target = Vec::with_capacity(rows);
    for t in start..diffs.len() {
        // diffs[t] = levels[t+1] − levels[t]
        data.push(1.0);
        data.push(levels[t]);
        data.extend((1..=k).map(|i| diffs[t - i]));
        target.push(diffs[t]);
    }
    (Matrix::from_row_major(rows, width, data), target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::GaussianSampler;

    #[test]
    fn critical_values_hit_table_rows_and_order() {
        let cv = CriticalValues::for_sample_size(100);
        assert!((cv.five_pct - (-2.890_906_44)).abs() < 1e-12);
        for n in [10usize, 20, 25, 37, 80, 300, 499, 5000, 1_000_000] {
            let cv = CriticalValues::for_sample_size(n);
            assert!(cv.one_pct < cv.five_pct && cv.five_pct < cv.ten_pct, "n={n}");
        }
        let big = CriticalValues::for_sample_size(usize::MAX);
        assert!((big.one_pct + 3.430_35).abs() < 1e-9);
    }

    #[test]
    fn interpolation_tracks_response_surface() {
        let surface = |n: f64| -2.861_54 - 2.8903 / n - 4.234 / (n * n) - 40.040 / (n * n * n);
        for n in [30usize, 75, 180, 400, 750, 2000] {
            let cv = CriticalValues::for_sample_size(n);
            assert!((cv.five_pct - surface(n as f64)).abs() < 2e-3, "n={n}");
        }
    }

    #[test]
    fn constant_and_short_series_rejected() {
        assert_eq!(adf_test_values(&[5.0; 40], 2), Err(Error::ConstantSeries));
        assert!(matches!(
            adf_test_values(&[1.0; 10], 0),
            Err(Error::SeriesTooShort { len: 10, required: 20 })
        ));
        let v: alloc::vec::Vec<f64> = (0..30).map(|i| libm::sin(f64::from(i))).collect();
        assert!(matches!(adf_test_values(&v, 14), Err(Error::DomainError(_))));
    }

    #[test]
    fn noise_rejects_walk_does_not() {
        let mut g = GaussianSampler::new(11);
        let noise: alloc::vec::Vec<f64> = (0..500).map(|_| g.sample()).collect();
        let walk: alloc::vec::Vec<f64> = noise
            .iter()
            .scan(0.0, |acc, e| {
                *acc += e;
                Some(*acc)
            })
            .collect();
        let lag = adf_default_max_lag(500);
        assert_eq!(adf_test_values(&noise, lag).unwrap().verdict, AdfVerdict::RejectUnitRoot);
        assert_eq!(adf_test_values(&walk, lag).unwrap().verdict, AdfVerdict::FailToReject);
    }

    #[test]
    fn default_max_lag_rule() {
        assert_eq!(adf_default_max_lag(100), 12);
        assert_eq!(adf_default_max_lag(500), 18);
        assert_eq!(adf_default_max_lag(20), 8);
    }
}
