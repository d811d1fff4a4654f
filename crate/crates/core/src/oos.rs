//! One-step-ahead out-of-sample comparison of the restricted and
//! unrestricted Granger regressions.

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regression::ols_fit;
use crate::timeseries::{build_lag_design, train_len, AlignedPair};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct OosComparison {
    pub lag: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub rmse_restricted: f64,
    pub rmse_unrestricted: f64,
}

/// Fits both models on the first `floor(ratio·n)` observations and scores
/// one-step predictions on the rest, feeding realised lags (which may reach
/// back into the training segment).
pub fn oos_compare(pair: &AlignedPair, lag: usize, split_ratio: f64) -> Result<OosComparison> {
    let n = pair.len();
    let n_train = train_len(n, split_ratio)?;
    if n_train == 0 {
        return Err(Error::EmptyTrain);
    }
    if n_train == n {
        return Err(Error::EmptyTestSegment);
    }
    let train = pair.slice(0..n_train)?;
    let fit_design = build_lag_design(&train, lag)?;
    let restricted = ols_fit(&fit_design.restricted, &fit_design.target)?;
    let unrestricted = ols_fit(&fit_design.unrestricted, &fit_design.target)?;

    // Rows of the full-sample design whose target lies in the test segment.
    let full = build_lag_design(pair, lag)?.skip_rows(n_train - lag);
    let restricted_pred = full.restricted.mul_vec(&restricted.coefficients);
    let unrestricted_pred = full.unrestricted.mul_vec(&unrestricted.coefficients);
    let rmse = |pred: &[f64]| {
        let sse: f64 = pred.iter().zip(&full.target).map(|(p, y)| (y - p) * (y - p)).sum();
        libm::sqrt(sse / pred.len() as f64)
    };
    Ok(OosComparison {
        lag,
        n_train,
        n_test: n - n_train,
        rmse_restricted: rmse(&restricted_pred),
        rmse_unrestricted: rmse(&unrestricted_pred),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::gen_synthetic;

    #[test]
    fn causal_data_favours_unrestricted() {
        let pair = gen_synthetic(500, 0.8, 0.1, 42).unwrap();
        let c = oos_compare(&pair, 1, 0.8).unwrap();
        assert_eq!((c.n_train, c.n_test), (400, 100));
        assert!(c.rmse_unrestricted < c.rmse_restricted);
        // Unrestricted error should sit near the innovation scale.
        assert!((c.rmse_unrestricted - 0.1).abs() < 0.03);
    }

    #[test]
    fn empty_test_segment() {
        let pair = gen_synthetic(100, 0.8, 0.1, 1).unwrap();
        assert_eq!(oos_compare(&pair, 1, 1.0), Err(Error::EmptyTestSegment));
    }

    #[test]
    fn test_rows_match_manual_prediction() {
        let pair = gen_synthetic(60, 0.5, 1.0, 8).unwrap();
        let c = oos_compare(&pair, 2, 0.5).unwrap();
        let train = pair.slice(0..30).unwrap();
        let d = build_lag_design(&train, 2).unwrap();
        let b = ols_fit(&d.unrestricted, &d.target).unwrap().coefficients;
        let (y, x) = (pair.y(), pair.x());
        let sse: f64 = (30..60)
            .map(|t| {
                let p = b[0] + b[1] * y[t - 1] + b[2] * y[t - 2] + b[3] * x[t - 1] + b[4] * x[t - 2];
                (y[t] - p) * (y[t] - p)
            })
            .sum();
        assert!((c.rmse_unrestricted - libm::sqrt(sse / 30.0)).abs() < 1e-12);
    }
}
