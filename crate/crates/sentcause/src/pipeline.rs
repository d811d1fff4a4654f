//! End-to-end run: ingest → score → align → difference → split → ADF →
//! lag selection → Granger sweep → decisions → report.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use sentcause_core::oos::oos_compare;
use sentcause_core::sentiment::{train, SentimentModel, TrainConfig};
use sentcause_core::stats::{
    adf_default_max_lag, adf_test_values, conclude, granger_sweep, lag_criteria, select_lag, AdfVerdict, Criterion,
    Direction, DEFAULT_ALPHA,
};
use sentcause_core::synth::MIN_SYNTHETIC_LEN;
use sentcause_core::timeseries::{align, chrono_split, AlignedPair, DatedSeries, SeriesKind};
use sentcause_core::Error as CoreError;

use crate::bundled::demo_corpus;
use crate::csv_io::{parse_csv, parse_headlines, ColumnSpec, DEFAULT_DATE_FORMAT};
use crate::error::{Error, Result};
use crate::model_io::read_model;
use crate::report::{
    narrative, AdfDiagnostics, AdfEntry, CausalityReport, ConfigSummary, DirectionTable, ErrorEntry, LagSelection,
    Metadata, OutputFormat, Sample, TableRow, TestSegment, SCHEMA_VERSION,
};

/// Below this many tested observations the report carries a warning.
pub const SMALL_SAMPLE_WARNING: usize = MIN_SYNTHETIC_LEN;

#[derive(Debug, Clone, PartialEq)]
pub enum SentimentInput {
    /// `date,score` rows; repeated dates are averaged.
    Scores(PathBuf),
    /// `date,text` headlines scored by `model`, or by a model trained on the
    /// bundled corpus with the run seed when `model` is `None`.
    Headlines { path: PathBuf, model: Option<PathBuf> },
}

impl SentimentInput {
    fn path(&self) -> &Path {
        match self {
            SentimentInput::Scores(p) | SentimentInput::Headlines { path: p, .. } => p,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub price_csv: PathBuf,
    pub sentiment: SentimentInput,
    pub price_column: String,
    pub score_column: String,
    pub date_format: String,
    pub max_lag: usize,
    pub alpha: f64,
    pub split_ratio: f64,
    pub test_segment: TestSegment,
    pub difference_order: usize,
    pub criterion: Criterion,
    pub rng_seed: u64,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn new(price_csv: impl Into<PathBuf>, sentiment: SentimentInput) -> Self {
        Self {
            price_csv: price_csv.into(),
            sentiment,
            price_column: "close".into(),
            score_column: "score".into(),
            date_format: DEFAULT_DATE_FORMAT.into(),
            max_lag: 4,
            alpha: DEFAULT_ALPHA,
            split_ratio: 0.8,
            test_segment: TestSegment::Train,
            difference_order: 0,
            criterion: Criterion::Aic,
            rng_seed: TrainConfig::default().seed,
            format: OutputFormat::Markdown,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_lag == 0 {
            return Err(Error::Config("max_lag must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if !(self.split_ratio > 0.0 && self.split_ratio <= 1.0) {
            return Err(Error::Config(format!(
                "split_ratio must lie in (0, 1], got {}",
                self.split_ratio
            )));
        }
        Ok(())
    }

    pub fn summary(&self) -> ConfigSummary {
        ConfigSummary {
            max_lag: self.max_lag,
            alpha: self.alpha,
            split_ratio: self.split_ratio,
            test_segment: self.test_segment,
            difference_order: self.difference_order,
            criterion: self.criterion,
            rng_seed: self.rng_seed,
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::from(e).in_file(path))
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

pub fn load_series(path: &Path, kind: SeriesKind, spec: &ColumnSpec) -> Result<DatedSeries> {
    parse_csv(open(path)?, kind, spec).map_err(|e| e.in_file(path))
}

pub fn load_model(path: &Path) -> Result<SentimentModel> {
    read_model(open(path)?).map_err(|e| e.in_file(path))
}

/// Model trained on the bundled corpus with the default hyperparameters.
pub fn bundled_model(seed: u64) -> Result<SentimentModel> {
    let config = TrainConfig {
        seed,
        ..TrainConfig::default()
    };
    Ok(train(&demo_corpus(), &config)?)
}

/// Reads or scores the sentiment input; also returns a description of the
/// source for the report.
pub fn load_sentiment(config: &RunConfig) -> Result<(DatedSeries, String)> {
    match &config.sentiment {
        SentimentInput::Scores(path) => {
            let spec = ColumnSpec::new("date", &config.score_column, &config.date_format);
            Ok((load_series(path, SeriesKind::SentimentScore, &spec)?, "daily scores".into()))
        }
        SentimentInput::Headlines { path, model } => {
            let headlines = parse_headlines(open(path)?, &config.date_format, false).map_err(|e| e.in_file(path))?;
            let (model, source) = match model {
                Some(m) => (load_model(m)?, format!("headlines scored with `{}`", file_name(m))),
                None => (
                    bundled_model(config.rng_seed)?,
                    format!("headlines scored with the bundled model, seed {}", config.rng_seed),
                ),
            };
            let scored: Vec<_> = headlines.iter().map(|h| (h.date, model.score(&h.text))).collect();
            let series = sentcause_core::sentiment::daily_aggregate(&scored).map_err(|e| Error::from(e).in_file(path))?;
            Ok((series, source))
        }
    }
}

pub fn run_pipeline(config: &RunConfig) -> Result<CausalityReport> {
    config.validate()?;
    let price_spec = ColumnSpec::new("date", &config.price_column, &config.date_format);
    let price = load_series(&config.price_csv, SeriesKind::ClosePrice, &price_spec)?;
    let (sentiment, source) = load_sentiment(config)?;
    let pair = align(&price, &sentiment)?;
    analyze(
        &pair,
        config,
        Inputs {
            price: file_name(&config.price_csv),
            sentiment: file_name(config.sentiment.path()),
            sentiment_source: source,
        },
    )
}

/// Names recorded in the report metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inputs {
    pub price: String,
    pub sentiment: String,
    pub sentiment_source: String,
}

fn sample(pair: &AlignedPair) -> Sample {
    Sample {
        n: pair.len(),
        first_date: pair.dates()[0],
        last_date: pair.dates()[pair.len() - 1],
    }
}

/// Everything after alignment, on an already aligned pair.
pub fn analyze(pair: &AlignedPair, config: &RunConfig, inputs: Inputs) -> Result<CausalityReport> {
    config.validate()?;
    let pair = if config.difference_order > 0 {
        pair.difference(config.difference_order)?
    } else {
        pair.clone()
    };
    let split = chrono_split(&pair, config.split_ratio)?;
    let n_test = split.test.as_ref().map_or(0, AlignedPair::len);
    let tested = match config.test_segment {
        TestSegment::Train => &split.train,
        TestSegment::Full => &pair,
    };

    let max_lag = config.max_lag;
    let required = 3 * max_lag + 2;
    if tested.len() < required {
        return Err(CoreError::InsufficientObservations {
            n: tested.len(),
            lag: max_lag,
            required,
        }
        .into());
    }

    let mut warnings = Vec::new();
    if tested.len() < SMALL_SAMPLE_WARNING {
        warnings.push(format!(
            "only {} observations are tested; results below {SMALL_SAMPLE_WARNING} are fragile",
            tested.len()
        ));
    }

    let adf_lag = adf_default_max_lag(tested.len());
    let adf_entry = |values: &[f64], name: &str, warnings: &mut Vec<String>| match adf_test_values(values, adf_lag) {
        Ok(a) => {
            if a.verdict == AdfVerdict::FailToReject {
                warnings.push(format!(
                    "{name}: ADF does not reject a unit root at 5%; the series may be non-stationary \
                     (consider a higher differencing order)"
                ));
            }
            AdfEntry::Computed(a)
        }
        Err(e) => {
            warnings.push(format!("{name}: ADF not available ({e})"));
            AdfEntry::Failed(ErrorEntry::from_core(&e))
        }
    };
    let adf = AdfDiagnostics {
        close_price: adf_entry(tested.y(), "close price", &mut warnings),
        sentiment: adf_entry(tested.x(), "sentiment score", &mut warnings),
    };

    let selection = lag_criteria(tested, max_lag, config.criterion)
        .and_then(|values| Ok((select_lag(tested, max_lag, config.criterion)?, values)));
    let lag_selection = match selection {
        Ok((selected, values)) => {
            Some(LagSelection {
                criterion: config.criterion,
                values,
                selected,
            })
        }
        Err(e) => {
            warnings.push(format!("lag selection failed ({e})"));
            None
        }
    };

    let cells = granger_sweep(tested, max_lag)?;
    let mut tables = Vec::with_capacity(2);
    for direction in Direction::BOTH {
        let rows = cells
            .iter()
            .filter(|c| c.direction == direction)
            .map(|c| match &c.outcome {
                Ok(r) => TableRow::from_result(r, config.alpha),
                Err(e) => Ok(TableRow::failed(c.lag, e)),
            })
            .collect::<Result<Vec<_>>>()?;
        tables.push(DirectionTable::new(direction, rows));
    }
    let conclusion = conclude(&tables[0].p_values(), &tables[1].p_values(), config.alpha);

    let oos = if n_test > 0 {
        let lag = lag_selection.as_ref().map_or(1, |l| l.selected);
        match oos_compare(&pair, lag, config.split_ratio) {
            Ok(o) => Some(o),
            Err(e) => {
                warnings.push(format!("out-of-sample comparison failed ({e})"));
                None
            }
        }
    } else {
        None
    };

    Ok(CausalityReport {
        schema_version: SCHEMA_VERSION,
        metadata: Some(Metadata {
            price_input: inputs.price,
            sentiment_input: inputs.sentiment,
            sentiment_source: inputs.sentiment_source,
            config: config.summary(),
            aligned: sample(&pair),
            tested: sample(tested),
            n_train: split.train.len(),
            n_test,
        }),
        alpha: config.alpha,
        adf: Some(adf),
        lag_selection,
        tables,
        oos,
        conclusion,
        narrative: narrative(conclusion, max_lag, config.alpha),
        warnings,
    })
}
