use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regression::ols_fit;
use crate::timeseries::{build_lag_design, AlignedPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Criterion {
    #[default]
    Aic,
    Bic,
}

impl Criterion {
    fn evaluate(self, rss: f64, rows: usize, params: usize) -> f64 {
        let m = rows as f64;
        let k = params as f64;
        let fit = m * libm::log(rss / m);
        match self {
            Criterion::Aic => fit + 2.0 * k,
            Criterion::Bic => fit + k * libm::log(m),
        }
    }
}

/// Criterion value of the unrestricted model at each lag `1..=max_lag`,
/// every lag fit on the rows available at `max_lag`.
pub fn lag_criteria(pair: &AlignedPair, max_lag: usize, criterion: Criterion) -> Result<Vec<f64>> {
    if max_lag == 0 {
        return Err(Error::DomainError("max_lag must be at least 1"));
    }
    // Validates the sample size once at the largest lag.
    let widest = build_lag_design(pair, max_lag)?;
    let mut values = Vec::with_capacity(max_lag);
    for lag in 1..=max_lag {
        let design = if lag == max_lag {
            widest.clone()
        } else {
            build_lag_design(pair, lag)?.skip_rows(max_lag - lag)
        };
        let fit = ols_fit(&design.unrestricted, &design.target)?;
        values.push(criterion.evaluate(fit.rss, design.rows(), design.unrestricted.cols()));
    }
    Ok(values)
}

/// Index of the smallest value, first one on ties.
pub(crate) fn first_argmin(values: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some((_, b)) if !(v < b) => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

/// Criterion-minimising lag in `1..=max_lag`; ties go to the smaller lag.
pub fn select_lag(pair: &AlignedPair, max_lag: usize, criterion: Criterion) -> Result<usize> {
    let values = lag_criteria(pair, max_lag, criterion)?;
    Ok(first_argmin(&values).map_or(1, |i| i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::gen_synthetic;

    #[test]
    fn single_candidate() {
        let pair = gen_synthetic(60, 0.3, 1.0, 5).unwrap();
        assert_eq!(select_lag(&pair, 1, Criterion::Aic).unwrap(), 1);
        assert_eq!(select_lag(&pair, 1, Criterion::Bic).unwrap(), 1);
    }

    #[test]
    fn ties_break_to_smaller_lag() {
        assert_eq!(first_argmin(&[3.0, 1.0, 1.0, 2.0]), Some(1));
        assert_eq!(first_argmin(&[1.0, 1.0]), Some(0));
        assert_eq!(first_argmin(&[]), None);
    }

    #[test]
    fn criteria_share_a_sample() {
        let pair = gen_synthetic(80, 0.6, 1.0, 2).unwrap();
        let aic = lag_criteria(&pair, 4, Criterion::Aic).unwrap();
        let bic = lag_criteria(&pair, 4, Criterion::Bic).unwrap();
        // Same rows and RSS: the two criteria differ only in the penalty.
        let m = (80 - 4) as f64;
        for (lag, (a, b)) in aic.iter().zip(&bic).enumerate() {
            let k = (1 + 2 * (lag + 1)) as f64;
            assert!(((b - a) - k * (libm::log(m) - 2.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn too_short_for_max_lag() {
        let pair = gen_synthetic(50, 0.3, 1.0, 5).unwrap().slice(0..10).unwrap();
        assert!(matches!(
            select_lag(&pair, 4, Criterion::Aic),
            Err(Error::InsufficientObservations { .. })
        ));
    }
}
