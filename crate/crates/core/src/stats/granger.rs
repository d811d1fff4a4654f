use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regression::ols_fit;
use crate::timeseries::{build_lag_design, min_observations_for_design, AlignedPair};

use super::special::f_sf;

/// Which series is tested as the cause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Direction {
    /// Sentiment (x) → close price (y).
    XtoY,
    /// Close price (y) → sentiment (x).
    YtoX,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::XtoY, Direction::YtoX];
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct GrangerResult {
    pub direction: Direction,
    pub lag: usize,
    pub f_stat: f64,
    pub df_num: usize,
    pub df_den: usize,
    pub p_value: f64,
    /// Rows in the regression, `n − lag`.
    pub n_used: usize,
    pub rss_restricted: f64,
    pub rss_unrestricted: f64,
}

/// F-form Granger test at a single lag on the pair's own maximal sample.
///
/// `F = ((RSS_r − RSS_u)/p) / (RSS_u/(m − 1 − 2p))`, with the p-value taken
/// from the upper tail of F(p, m − 1 − 2p).
pub fn granger_test(pair: &AlignedPair, direction: Direction, lag: usize) -> Result<GrangerResult> {
    let oriented;
    let pair = match direction {
        Direction::XtoY => pair,
        Direction::YtoX => {
            oriented = pair.swapped();
            &oriented
        }
    };
    let design = build_lag_design(pair, lag)?;
    let m = design.rows();
    let df_num = lag;
    let df_den = m - 1 - 2 * lag;
    if df_den == 0 {
        return Err(Error::InsufficientObservations {
            n: pair.len(),
            lag,
            required: min_observations_for_design(lag) + 1,
        });
    }

    let unrestricted = ols_fit(&design.unrestricted, &design.target)?;
    let restricted = ols_fit(&design.restricted, &design.target)?;
    let target_sq: f64 = design.target.iter().map(|v| v * v).sum();
    if unrestricted.rss <= 1e-14 * target_sq {
        return Err(Error::DegenerateResiduals);
    }

    let mut gain = restricted.rss - unrestricted.rss;
    if gain < 0.0 {
        if gain >= -1e-12 * restricted.rss {
            gain = 0.0;
        } else {
            return Err(Error::NestingViolation {
                restricted: restricted.rss,
                unrestricted: unrestricted.rss,
            });
        }
    }
    let f_stat = (gain / df_num as f64) / (unrestricted.rss / df_den as f64);
    let p_value = f_sf(f_stat, df_num as u32, df_den as u32)?.clamp(0.0, 1.0);

    Ok(GrangerResult {
        direction,
        lag,
        f_stat,
        df_num,
        df_den,
        p_value,
        n_used: m,
        rss_restricted: restricted.rss,
        rss_unrestricted: unrestricted.rss,
    })
}

/// One cell of a sweep: the test outcome for a (direction, lag) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub direction: Direction,
    pub lag: usize,
    pub outcome: Result<GrangerResult>,
}

/// Both directions at lags `1..=max_lag`, ordered XtoY ascending then YtoX
/// ascending. Cells that fail keep their error in place.
pub fn granger_sweep(pair: &AlignedPair, max_lag: usize) -> Result<Vec<SweepCell>> {
    if max_lag == 0 {
        return Err(Error::DomainError("max_lag must be at least 1"));
    }
    let mut cells = Vec::with_capacity(2 * max_lag);
    for direction in Direction::BOTH {
        for lag in 1..=max_lag {
            cells.push(SweepCell {
                direction,
                lag,
                outcome: granger_test(pair, direction, lag),
            });
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::gen_synthetic;
    use alloc::vec;
    use chrono::NaiveDate;

    fn pair_from(y: Vec<f64>, x: Vec<f64>) -> AlignedPair {
        let start = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        let dates = (0..y.len() as i64).map(|i| start + chrono::Duration::days(i)).collect();
        AlignedPair::new(dates, y, x).unwrap()
    }

    #[test]
    fn duplicated_lag_column_is_rank_deficient() {
        let y: Vec<f64> = (0..30).map(|i| libm::sin(f64::from(i) * 0.7) + f64::from(i % 3)).collect();
        let pair = pair_from(y.clone(), y);
        assert!(matches!(
            granger_test(&pair, Direction::XtoY, 1),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn exact_fit_is_degenerate() {
        // y follows its own lag exactly; x is noise-like.
        let mut y = vec![1.0];
        for _ in 0..29 {
            let prev = *y.last().unwrap();
            y.push(0.5 * prev + 1.0);
        }
        let x: Vec<f64> = (0..30).map(|i| libm::cos(f64::from(i) * 1.3)).collect();
        let r = granger_test(&pair_from(y, x), Direction::XtoY, 1);
        assert!(matches!(r, Err(Error::DegenerateResiduals) | Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn zero_residual_dof_is_insufficient() {
        let pair = gen_synthetic(50, 0.8, 0.1, 1).unwrap().slice(0..4).unwrap();
        assert!(matches!(
            granger_test(&pair, Direction::XtoY, 1),
            Err(Error::InsufficientObservations { n: 4, lag: 1, required: 5 })
        ));
    }

    #[test]
    fn detects_planted_direction() {
        let pair = gen_synthetic(500, 0.8, 0.1, 42).unwrap();
        let fwd = granger_test(&pair, Direction::XtoY, 1).unwrap();
        let back = granger_test(&pair, Direction::YtoX, 1).unwrap();
        assert!(fwd.p_value < 1e-3);
        assert!(back.p_value > 0.05);
        assert_eq!(fwd.df_num, 1);
        assert_eq!(fwd.df_den, 499 - 3);
        assert_eq!(fwd.n_used, 499);
    }

    #[test]
    fn p_value_falls_as_coupling_rises() {
        let p = |c| {
            let pair = gen_synthetic(200, c, 1.0, 9).unwrap();
            granger_test(&pair, Direction::XtoY, 2).unwrap().p_value
        };
        let (p0, p4, p8) = (p(0.0), p(0.4), p(0.8));
        assert!(p0 > p4 && p4 > p8, "{p0} {p4} {p8}");
    }

    #[test]
    fn sweep_shape_and_order() {
        let pair = gen_synthetic(120, 0.5, 1.0, 3).unwrap();
        let cells = granger_sweep(&pair, 4).unwrap();
        assert_eq!(cells.len(), 8);
        let keys: Vec<_> = cells.iter().map(|c| (c.direction, c.lag)).collect();
        assert_eq!(keys[0], (Direction::XtoY, 1));
        assert_eq!(keys[3], (Direction::XtoY, 4));
        assert_eq!(keys[4], (Direction::YtoX, 1));
        assert_eq!(keys[7], (Direction::YtoX, 4));
        assert_eq!(granger_sweep(&pair, 1).unwrap().len(), 2);
        assert!(granger_sweep(&pair, 0).is_err());
    }

    #[test]
    fn sweep_keeps_failed_cells() {
        // n = 12 supports lag 3; the lag-4 design needs 13 observations.
        let pair = gen_synthetic(50, 0.5, 1.0, 3).unwrap().slice(0..12).unwrap();
        let cells = granger_sweep(&pair, 4).unwrap();
        assert_eq!(cells.len(), 8);
        let failed: Vec<_> = cells.iter().filter(|c| c.outcome.is_err()).map(|c| c.lag).collect();
        assert_eq!(failed, vec![4, 4]);
    }

    #[test]
    fn f_stat_nonnegative_and_p_in_unit_interval() {
        for seed in 0..30 {
            let pair = gen_synthetic(60, 0.0, 1.0, seed).unwrap();
            for cell in granger_sweep(&pair, 4).unwrap() {
                let r = cell.outcome.unwrap();
                assert!(r.f_stat >= 0.0);
                assert!((0.0..=1.0).contains(&r.p_value));
                assert!(r.df_den >= 1);
            }
        }
    }
}
