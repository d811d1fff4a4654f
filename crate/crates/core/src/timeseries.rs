//! Dated observation series: validation, alignment, differencing,
//! chronological splitting and lag design construction.
//!
//! Lags are positional over the aligned sample. Missing trading days are
//! simply absent rows; no calendar arithmetic happens here.

use alloc::vec::Vec;
use core::ops::Range;

use chrono::NaiveDate;
#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regression::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum SeriesKind {
    ClosePrice,
    SentimentScore,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Observation {
    pub date: NaiveDate,
    pub value: f64,
}

impl Observation {
    pub fn new(date: NaiveDate, value: f64) -> Self {
        Self { date, value }
    }
}

/// A non-empty, strictly date-ordered series of finite observations.
#[derive(Debug, Clone, PartialEq)]
pub struct DatedSeries {
    kind: SeriesKind,
    observations: Vec<Observation>,
}

impl DatedSeries {
    /// Validates an already-ordered list of observations.
    pub fn new(kind: SeriesKind, observations: Vec<Observation>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::EmptySeries);
        }
        for (i, obs) in observations.iter().enumerate() {
            if !obs.value.is_finite() {
                return Err(Error::NonFiniteValue(i));
            }
            if i > 0 {
                let prev = observations[i - 1].date;
                if obs.date == prev {
                    return Err(Error::DuplicateDate(obs.date));
                }
                if obs.date < prev {
                    return Err(Error::UnorderedDates(i));
                }
            }
        }
        Ok(Self { kind, observations })
    }

    /// Sorts by date (stable) and then validates; repeated dates are an error.
    pub fn from_unsorted(kind: SeriesKind, mut observations: Vec<Observation>) -> Result<Self> {
        observations.sort_by_key(|o| o.date);
        Self::new(kind, observations)
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn dates(&self) -> impl ExactSizeIterator<Item = NaiveDate> + '_ {
        self.observations.iter().map(|o| o.date)
    }

    pub fn values(&self) -> Vec<f64> {
        self.observations.iter().map(|o| o.value).collect()
    }

    pub fn first_date(&self) -> NaiveDate {
        self.observations[0].date
    }

    pub fn last_date(&self) -> NaiveDate {
        self.observations[self.observations.len() - 1].date
    }
}

/// Close price `y` and sentiment `x` observed on the same dates.
///
/// Granger tests on this pair ask whether lags of `x` help predict `y`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct AlignedPair {
    dates: Vec<NaiveDate>,
    y: Vec<f64>,
    x: Vec<f64>,
}

impl AlignedPair {
    pub fn new(dates: Vec<NaiveDate>, y: Vec<f64>, x: Vec<f64>) -> Result<Self> {
        if dates.len() != y.len() {
            return Err(Error::LengthMismatch {
                what: "dates vs y",
                left: dates.len(),
                right: y.len(),
            });
        }
        if dates.len() != x.len() {
            return Err(Error::LengthMismatch {
                what: "dates vs x",
                left: dates.len(),
                right: x.len(),
            });
        }
        if dates.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(i) = dates.windows(2).position(|w| w[1] <= w[0]) {
            return Err(if dates[i + 1] == dates[i] {
                Error::DuplicateDate(dates[i])
            } else {
                Error::UnorderedDates(i + 1)
            });
        }
        if let Some(i) = y.iter().zip(&x).position(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(Error::NonFiniteValue(i));
        }
        Ok(Self { dates, y, x })
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// The same observations with the roles of `y` and `x` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            dates: self.dates.clone(),
            y: self.x.clone(),
            x: self.y.clone(),
        }
    }

    /// Contiguous sub-sample. Panics if the range is out of bounds.
    pub fn slice(&self, range: Range<usize>) -> Result<Self> {
        Self::new(
            self.dates[range.clone()].to_vec(),
            self.y[range.clone()].to_vec(),
            self.x[range].to_vec(),
        )
    }

    /// Applies `order`-th differencing to both columns.
    pub fn difference(&self, order: usize) -> Result<Self> {
        if self.len() <= order {
            return Err(Error::SeriesTooShort {
                len: self.len(),
                required: order + 1,
            });
        }
        Ok(Self {
            dates: self.dates[order..].to_vec(),
            y: difference_values(&self.y, order),
            x: difference_values(&self.x, order),
        })
    }

    pub fn y_series(&self) -> DatedSeries {
        self.column_series(SeriesKind::ClosePrice, &self.y)
    }

    pub fn x_series(&self) -> DatedSeries {
        self.column_series(SeriesKind::SentimentScore, &self.x)
    }

    fn column_series(&self, kind: SeriesKind, values: &[f64]) -> DatedSeries {
        DatedSeries {
            kind,
            observations: self
                .dates
                .iter()
                .zip(values)
                .map(|(&date, &value)| Observation { date, value })
                .collect(),
        }
    }
}

/// Inner join on exact calendar-day equality.
pub fn align(y: &DatedSeries, x: &DatedSeries) -> Result<AlignedPair> {
    let (a, b) = (y.observations(), x.observations());
    let (mut i, mut j) = (0, 0);
    let mut dates = Vec::new();
    let mut ys = Vec::new();
    let mut xs = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].date.cmp(&b[j].date) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                dates.push(a[i].date);
                ys.push(a[i].value);
                xs.push(b[j].value);
                i += 1;
                j += 1;
            }
        }
    }
    if dates.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    Ok(AlignedPair { dates, y: ys, x: xs })
}

fn difference_values(values: &[f64], order: usize) -> Vec<f64> {
    let mut out = values.to_vec();
    for _ in 0..order {
        out = out.windows(2).map(|w| w[1] - w[0]).collect();
    }
    out
}

/// `order`-th difference; each output observation carries the later date of
/// its differenced pair.
pub fn difference(series: &DatedSeries, order: usize) -> Result<DatedSeries> {
    if series.len() <= order {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            required: order + 1,
        });
    }
    let values = difference_values(&series.values(), order);
    let observations = series.observations[order..]
        .iter()
        .zip(values)
        .map(|(o, value)| Observation { date: o.date, value })
        .collect();
    Ok(DatedSeries {
        kind: series.kind,
        observations,
    })
}

/// Target and nested regressor matrices for a Granger regression at one lag.
///
/// Column layout, most recent lag first:
/// `[1, y(t-1), …, y(t-p), x(t-1), …, x(t-p)]`. The restricted matrix is the
/// first `1 + p` columns of the unrestricted one.
#[derive(Debug, Clone, PartialEq)]
pub struct LagDesign {
    pub lag: usize,
    pub target: Vec<f64>,
    pub restricted: Matrix,
    pub unrestricted: Matrix,
}

impl LagDesign {
    pub fn rows(&self) -> usize {
        self.target.len()
    }

    /// Drops the first `rows` observations; used to put several lags on a
    /// common sample.
    pub fn skip_rows(&self, rows: usize) -> LagDesign {
        LagDesign {
            lag: self.lag,
            target: self.target[rows..].to_vec(),
            restricted: self.restricted.skip_rows(rows),
            unrestricted: self.unrestricted.skip_rows(rows),
        }
    }
}

/// Smallest sample size for which [`build_lag_design`] accepts `lag`.
pub fn min_observations_for_design(lag: usize) -> usize {
    1 + 3 * lag
}

pub fn build_lag_design(pair: &AlignedPair, lag: usize) -> Result<LagDesign> {
    if lag == 0 {
        return Err(Error::DomainError("lag order must be at least 1"));
    }
    let n = pair.len();
    let required = min_observations_for_design(lag);
    if n < required {
        return Err(Error::InsufficientObservations { n, lag, required });
    }
    let m = n - lag;
    let width = 1 + 2 * lag;
    let mut data = Vec::with_capacity(m * width);
    for t in 0..m {
        let now = lag + t;
        data.push(1.0);
        data.extend((1..=lag).map(|k| pair.y[now - k]));
        data.extend((1..=lag).map(|k| pair.x[now - k]));
    }
    let unrestricted = Matrix::from_row_major(m, width, data);
    let restricted = unrestricted.leading_columns(1 + lag);
    Ok(LagDesign {
        lag,
        target: pair.y[lag..].to_vec(),
        restricted,
        unrestricted,
    })
}

/// Chronological train/test partition of an aligned pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPair {
    pub train: AlignedPair,
    /// `None` when the split keeps every observation for training.
    pub test: Option<AlignedPair>,
    pub ratio: f64,
}

/// `floor(ratio * n)` with a tolerance of 1e-9 so that products such as
/// `0.29 * 100` land on the intended integer.
pub fn train_len(n: usize, ratio: f64) -> Result<usize> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::InvalidRatio(ratio));
    }
    let raw = libm::floor(ratio * n as f64 + 1e-9) as usize;
    Ok(raw.min(n))
}

/// First `floor(ratio·n)` observations train, the remainder test. No shuffling.
pub fn chrono_split(pair: &AlignedPair, ratio: f64) -> Result<SplitPair> {
    let n = pair.len();
    let n_train = train_len(n, ratio)?;
    if n_train == 0 {
        return Err(Error::EmptyTrain);
    }
    let train = pair.slice(0..n_train)?;
    let test = if n_train < n {
        Some(pair.slice(n_train..n)?)
    } else {
        None
    };
    Ok(SplitPair { train, test, ratio })
}
