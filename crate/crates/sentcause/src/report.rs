//! Causality reports and their Markdown / JSON renderings.
//!
//! The JSON form is the serde representation of [`CausalityReport`] with
//! full-precision floats; `schema_version` changes whenever a field is
//! renamed or removed.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use sentcause_core::oos::OosComparison;
use sentcause_core::stats::{
    conclude, decide, AdfResult, AdfVerdict, Conclusion, Criterion, Direction, GrangerResult, Verdict,
};
use sentcause_core::NaiveDate;

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Markdown,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestSegment {
    /// Test on the chronological training segment only.
    #[default]
    Train,
    /// Test on every aligned observation.
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorEntry {
    pub kind: String,
    pub message: String,
}

impl ErrorEntry {
    pub fn from_core(e: &sentcause_core::Error) -> Self {
        Self {
            kind: e.kind().to_owned(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigSummary {
    pub max_lag: usize,
    pub alpha: f64,
    pub split_ratio: f64,
    pub test_segment: TestSegment,
    pub difference_order: usize,
    pub criterion: Criterion,
    pub rng_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub n: usize,
    pub first_date: NaiveDate,
    pub last_date: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    /// File names of the inputs, without directories.
    pub price_input: String,
    pub sentiment_input: String,
    /// How the sentiment series was obtained, e.g. `scores` or
    /// `headlines (bundled model, seed 2015)`.
    pub sentiment_source: String,
    pub config: ConfigSummary,
    /// After alignment and differencing.
    pub aligned: Sample,
    /// The segment the Granger tests ran on.
    pub tested: Sample,
    pub n_train: usize,
    pub n_test: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum AdfEntry {
    Computed(AdfResult),
    Failed(ErrorEntry),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdfDiagnostics {
    pub close_price: AdfEntry,
    pub sentiment: AdfEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagSelection {
    pub criterion: Criterion,
    /// Criterion value at lags `1..=max_lag`.
    pub values: Vec<f64>,
    pub selected: usize,
}

/// One lag of a direction table. A failed test keeps `error` and leaves the
/// numeric fields empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub lag: usize,
    pub f_stat: Option<f64>,
    pub df_num: Option<usize>,
    pub df_den: Option<usize>,
    pub n_used: Option<usize>,
    pub p_value: Option<f64>,
    pub verdict: Option<Verdict>,
    pub error: Option<ErrorEntry>,
}

impl TableRow {
    pub fn from_result(r: &GrangerResult, alpha: f64) -> Result<Self> {
        Ok(Self {
            lag: r.lag,
            f_stat: Some(r.f_stat),
            df_num: Some(r.df_num),
            df_den: Some(r.df_den),
            n_used: Some(r.n_used),
            p_value: Some(r.p_value),
            verdict: Some(decide(r.p_value, alpha)?.verdict),
            error: None,
        })
    }

    /// A row known only by its p-value.
    pub fn from_p_value(lag: usize, p_value: f64, alpha: f64) -> Result<Self> {
        Ok(Self {
            lag,
            f_stat: None,
            df_num: None,
            df_den: None,
            n_used: None,
            p_value: Some(p_value),
            verdict: Some(decide(p_value, alpha)?.verdict),
            error: None,
        })
    }

    pub fn failed(lag: usize, error: &sentcause_core::Error) -> Self {
        Self {
            lag,
            f_stat: None,
            df_num: None,
            df_den: None,
            n_used: None,
            p_value: None,
            verdict: None,
            error: Some(ErrorEntry::from_core(error)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionTable {
    pub direction: Direction,
    pub null_hypothesis: String,
    pub rows: Vec<TableRow>,
}

impl DirectionTable {
    pub fn new(direction: Direction, rows: Vec<TableRow>) -> Self {
        Self {
            direction,
            null_hypothesis: null_hypothesis(direction).to_owned(),
            rows,
        }
    }

    pub fn p_values(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.p_value).collect()
    }
}

pub fn null_hypothesis(direction: Direction) -> &'static str {
    match direction {
        Direction::XtoY => "Sentiment score does not Granger-cause close price.",
        Direction::YtoX => "Close price does not Granger-cause sentiment score.",
    }
}

fn direction_title(direction: Direction) -> &'static str {
    match direction {
        Direction::XtoY => "Part 1: sentiment score → close price",
        Direction::YtoX => "Part 2: close price → sentiment score",
    }
}

pub fn narrative(conclusion: Conclusion, max_lag: usize, alpha: f64) -> String {
    let lags = if max_lag == 1 {
        "lag 1".to_owned()
    } else {
        format!("lags 1-{max_lag}")
    };
    match conclusion {
        Conclusion::XCausesY => format!(
            "Sentiment score Granger-causes close price: the null is rejected at {lags} (alpha {alpha}) \
             and the reverse null is rejected at none."
        ),
        Conclusion::YCausesX => format!(
            "Close price Granger-causes sentiment score: the null is rejected at {lags} (alpha {alpha}) \
             and the reverse null is rejected at none."
        ),
        Conclusion::Inconclusive => format!(
            "Inconclusive/bidirectional: neither direction rejects at all of {lags} (alpha {alpha}) \
             while the other rejects at none."
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalityReport {
    pub schema_version: u32,
    pub metadata: Option<Metadata>,
    pub alpha: f64,
    pub adf: Option<AdfDiagnostics>,
    pub lag_selection: Option<LagSelection>,
    /// XtoY first, then YtoX.
    pub tables: Vec<DirectionTable>,
    pub oos: Option<OosComparison>,
    pub conclusion: Conclusion,
    pub narrative: String,
    pub warnings: Vec<String>,
}

impl CausalityReport {
    /// Report holding only the two tables; everything else is "not computed".
    pub fn from_tables(x_to_y: DirectionTable, y_to_x: DirectionTable, alpha: f64) -> Self {
        let conclusion = conclude(&x_to_y.p_values(), &y_to_x.p_values(), alpha);
        let max_lag = x_to_y.rows.len().max(y_to_x.rows.len());
        Self {
            schema_version: SCHEMA_VERSION,
            metadata: None,
            alpha,
            adf: None,
            lag_selection: None,
            tables: vec![x_to_y, y_to_x],
            oos: None,
            conclusion,
            narrative: narrative(conclusion, max_lag, alpha),
            warnings: Vec::new(),
        }
    }

    /// Tables built from p-values alone, one per lag starting at 1.
    pub fn from_p_values(x_to_y: &[f64], y_to_x: &[f64], alpha: f64) -> Result<Self> {
        let table = |direction, ps: &[f64]| -> Result<DirectionTable> {
            let rows = ps
                .iter()
                .enumerate()
                .map(|(i, p)| TableRow::from_p_value(i + 1, *p, alpha))
                .collect::<Result<_>>()?;
            Ok(DirectionTable::new(direction, rows))
        };
        Ok(Self::from_tables(
            table(Direction::XtoY, x_to_y)?,
            table(Direction::YtoX, y_to_x)?,
            alpha,
        ))
    }
}

pub fn render_report(report: &CausalityReport, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Markdown => Ok(render_markdown(report).into_bytes()),
        OutputFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report)?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

pub fn parse_json_report(bytes: &[u8]) -> Result<CausalityReport> {
    Ok(serde_json::from_slice(bytes)?)
}

fn fmt_p(p: f64) -> String {
    if p < 0.0001 {
        "< 0.0001".to_owned()
    } else {
        format!("{p:.4}")
    }
}

fn verdict_text(v: Verdict) -> &'static str {
    match v {
        Verdict::RejectNull => "Reject",
        Verdict::FailToRejectNull => "Fail to reject",
    }
}

fn criterion_name(c: Criterion) -> &'static str {
    match c {
        Criterion::Aic => "AIC",
        Criterion::Bic => "BIC",
    }
}

fn segment_name(s: TestSegment) -> &'static str {
    match s {
        TestSegment::Train => "train segment",
        TestSegment::Full => "full sample",
    }
}

fn render_markdown(r: &CausalityReport) -> String {
    let mut s = String::new();
    s.push_str("# Granger causality report\n\n");

    if let Some(m) = &r.metadata {
        let c = &m.config;
        s.push_str("## Data\n\n");
        let _ = writeln!(s, "- Close price: `{}`", m.price_input);
        let _ = writeln!(s, "- Sentiment: `{}` ({})", m.sentiment_input, m.sentiment_source);
        let _ = writeln!(
            s,
            "- Aligned observations: {} ({} to {}), differencing order {}",
            m.aligned.n, m.aligned.first_date, m.aligned.last_date, c.difference_order
        );
        let _ = writeln!(
            s,
            "- Split ratio {}: {} train / {} test; tests run on the {} ({} observations, {} to {})",
            c.split_ratio,
            m.n_train,
            m.n_test,
            segment_name(c.test_segment),
            m.tested.n,
            m.tested.first_date,
            m.tested.last_date
        );
        let _ = writeln!(
            s,
            "- Max lag {}, alpha {}, criterion {}, seed {}\n",
            c.max_lag,
            c.alpha,
            criterion_name(c.criterion),
            c.rng_seed
        );
    }

    s.push_str("## Stationarity (ADF, constant only)\n\n");
    match &r.adf {
        None => s.push_str("Not computed.\n\n"),
        Some(adf) => {
            s.push_str("| Series | Statistic | Lags | Obs | 1% | 5% | 10% | Unit root at 5% |\n");
            s.push_str("|---|---|---|---|---|---|---|---|\n");
            for (name, entry) in [("Close price", &adf.close_price), ("Sentiment score", &adf.sentiment)] {
                match entry {
                    AdfEntry::Computed(a) => {
                        let cv = &a.critical_values;
                        let verdict = match a.verdict {
                            AdfVerdict::RejectUnitRoot => "Rejected",
                            AdfVerdict::FailToReject => "Not rejected",
                        };
                        let _ = writeln!(
                            s,
                            "| {name} | {:.4} | {} | {} | {:.4} | {:.4} | {:.4} | {verdict} |",
                            a.test_stat, a.lags_used, a.n_obs, cv.one_pct, cv.five_pct, cv.ten_pct
                        );
                    }
                    AdfEntry::Failed(e) => {
                        let _ = writeln!(s, "| {name} | error: {} | | | | | | |", e.kind);
                    }
                }
            }
            s.push('\n');
        }
    }

    s.push_str("## Lag selection\n\n");
    match &r.lag_selection {
        None => s.push_str("Not computed.\n\n"),
        Some(l) => {
            let values: Vec<String> = l
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| format!("{}: {v:.4}", i + 1))
                .collect();
            let _ = writeln!(
                s,
                "{} selects lag {} ({}).\n",
                criterion_name(l.criterion),
                l.selected,
                values.join(", ")
            );
        }
    }

    for table in &r.tables {
        let _ = writeln!(s, "## {}\n", direction_title(table.direction));
        let _ = writeln!(s, "Null hypothesis: {}\n", table.null_hypothesis);
        s.push_str("| Lag | F | df | p value | Decision |\n");
        s.push_str("|---|---|---|---|---|\n");
        for row in &table.rows {
            if let Some(e) = &row.error {
                let _ = writeln!(s, "| Lag {} | - | - | - | Error: {} |", row.lag, e.kind);
                continue;
            }
            let f = row.f_stat.map_or("-".to_owned(), |f| format!("{f:.4}"));
            let df = match (row.df_num, row.df_den) {
                (Some(a), Some(b)) => format!("({a}, {b})"),
                _ => "-".to_owned(),
            };
            let p = row.p_value.map_or("-".to_owned(), fmt_p);
            let v = row.verdict.map_or("-", verdict_text);
            let _ = writeln!(s, "| Lag {} | {f} | {df} | {p} | {v} |", row.lag);
        }
        s.push('\n');
    }

    if let Some(o) = &r.oos {
        s.push_str("## Out-of-sample check\n\n");
        let _ = writeln!(
            s,
            "One-step RMSE at lag {} over {} test observations: restricted {:.6}, unrestricted {:.6}.\n",
            o.lag, o.n_test, o.rmse_restricted, o.rmse_unrestricted
        );
    }

    s.push_str("## Conclusion\n\n");
    s.push_str(&r.narrative);
    s.push('\n');

    if !r.warnings.is_empty() {
        s.push_str("\n## Warnings\n\n");
        for w in &r.warnings {
            let _ = writeln!(s, "- {w}");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_value_only_tables() {
        let r = CausalityReport::from_p_values(&[0.01, 0.02], &[0.5, 0.6], 0.05).unwrap();
        assert_eq!(r.conclusion, Conclusion::XCausesY);
        let md = String::from_utf8(render_report(&r, OutputFormat::Markdown).unwrap()).unwrap();
        assert!(md.contains("| Lag 1 | - | - | 0.0100 | Reject |\n"));
        assert!(md.contains("| Lag 2 | - | - | 0.6000 | Fail to reject |\n"));
        assert!(md.contains("## Stationarity (ADF, constant only)\n\nNot computed."));
        assert!(md.contains("lags 1-2"));
    }

    #[test]
    fn tiny_p_values_are_bounded() {
        assert_eq!(fmt_p(1e-9), "< 0.0001");
        assert_eq!(fmt_p(0.0001), "0.0001");
        assert_eq!(fmt_p(0.03856), "0.0386");
    }

    #[test]
    fn failed_rows_render_and_block_conclusion() {
        let err = sentcause_core::Error::DegenerateResiduals;
        let x = DirectionTable::new(
            Direction::XtoY,
            vec![TableRow::from_p_value(1, 0.01, 0.05).unwrap(), TableRow::failed(2, &err)],
        );
        let y = DirectionTable::new(
            Direction::YtoX,
            vec![TableRow::from_p_value(1, 0.5, 0.05).unwrap(), TableRow::from_p_value(2, 0.5, 0.05).unwrap()],
        );
        let r = CausalityReport::from_tables(x, y, 0.05);
        assert_eq!(r.conclusion, Conclusion::Inconclusive);
        let md = String::from_utf8(render_report(&r, OutputFormat::Markdown).unwrap()).unwrap();
        assert!(md.contains("| Lag 2 | - | - | - | Error: DegenerateResiduals |"));
        assert!(md.contains("Inconclusive/bidirectional"));
    }

    #[test]
    fn json_round_trip() {
        let mut r = CausalityReport::from_p_values(&[0.0184, 0.0074], &[0.1737, 0.1810], 0.05).unwrap();
        r.warnings.push("sample is short".into());
        let bytes = render_report(&r, OutputFormat::Json).unwrap();
        let back = parse_json_report(&bytes).unwrap();
        assert_eq!(back, r);
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(v["schema_version"], 1);
    }
}
