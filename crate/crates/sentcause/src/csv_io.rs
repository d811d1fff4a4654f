//! CSV readers and writers for price, sentiment, headline and score files.
//!
//! All files are UTF-8, comma separated, with a header row. Dates use a
//! configurable `chrono` format (ISO `%Y-%m-%d` by default); values use `.`
//! as the decimal point and no thousands separators.

use std::io::{Read, Write};

use chrono::NaiveDate;
use sentcause_core::sentiment::{daily_aggregate, Headline, Label};
use sentcause_core::timeseries::{DatedSeries, Observation, SeriesKind};

use crate::error::{Error, Result};

pub const DEFAULT_DATE_FORMAT: &str = "%Y-%m-%d";

/// Which columns hold the date and the value, and how dates are written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSpec {
    pub date_column: String,
    pub value_column: String,
    pub date_format: String,
}

impl ColumnSpec {
    pub fn new(date_column: &str, value_column: &str, date_format: &str) -> Self {
        Self {
            date_column: date_column.to_owned(),
            value_column: value_column.to_owned(),
            date_format: date_format.to_owned(),
        }
    }

    /// `date,close`
    pub fn price() -> Self {
        Self::new("date", "close", DEFAULT_DATE_FORMAT)
    }

    /// `date,score`
    pub fn sentiment() -> Self {
        Self::new("date", "score", DEFAULT_DATE_FORMAT)
    }

    pub fn default_for(kind: SeriesKind) -> Self {
        match kind {
            SeriesKind::ClosePrice => Self::price(),
            SeriesKind::SentimentScore => Self::sentiment(),
        }
    }
}

fn column_index(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::MissingColumn(name.to_owned()))
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

pub fn parse_date(raw: &str, format: &str, line: u64) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(raw.trim(), format).map_err(|_| Error::UnparsableDate {
        line,
        value: raw.to_owned(),
    })
}

fn parse_value(raw: &str, line: u64) -> Result<f64> {
    match raw.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::UnparsableValue {
            line,
            value: raw.to_owned(),
        }),
    }
}

fn reader<R: Read>(source: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(true).from_reader(source)
}

/// Reads a dated series and sorts it by date.
///
/// A close-price file may hold each date once. A sentiment file may repeat a
/// date (one row per headline); repeated days are averaged.
pub fn parse_csv<R: Read>(source: R, kind: SeriesKind, spec: &ColumnSpec) -> Result<DatedSeries> {
    let mut rdr = reader(source);
    let headers = rdr.headers()?.clone();
    let date_idx = column_index(&headers, &spec.date_column)?;
    let value_idx = column_index(&headers, &spec.value_column)?;

    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record_line(&record);
        let date = parse_date(record.get(date_idx).unwrap_or(""), &spec.date_format, line)?;
        let value = parse_value(record.get(value_idx).unwrap_or(""), line)?;
        rows.push((date, value));
    }
    if rows.is_empty() {
        return Err(sentcause_core::Error::EmptySeries.into());
    }
    match kind {
        SeriesKind::ClosePrice => {
            let obs = rows.into_iter().map(|(d, v)| Observation::new(d, v)).collect();
            Ok(DatedSeries::from_unsorted(kind, obs)?)
        }
        SeriesKind::SentimentScore => Ok(daily_aggregate(&rows)?),
    }
}

/// Writes `spec.date_column,spec.value_column` rows. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn write_csv<W: Write>(sink: W, series: &DatedSeries, spec: &ColumnSpec) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(sink);
    wtr.write_record([&spec.date_column, &spec.value_column])?;
    for o in series.observations() {
        wtr.write_record([o.date.format(&spec.date_format).to_string(), o.value.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads `date,text[,label]`. With `require_label`, every row needs a
/// `pos`/`neg` label; otherwise a label column is optional and ignored if
/// empty.
pub fn parse_headlines<R: Read>(source: R, date_format: &str, require_label: bool) -> Result<Vec<Headline>> {
    let mut rdr = reader(source);
    let headers = rdr.headers()?.clone();
    let date_idx = column_index(&headers, "date")?;
    let text_idx = column_index(&headers, "text")?;
    let label_idx = match column_index(&headers, "label") {
        Ok(i) => Some(i),
        Err(e) if require_label => return Err(e),
        Err(_) => None,
    };

    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record_line(&record);
        let date = parse_date(record.get(date_idx).unwrap_or(""), date_format, line)?;
        let text = record.get(text_idx).unwrap_or("");
        let raw_label = label_idx.and_then(|i| record.get(i)).map(str::trim).unwrap_or("");
        let label = match raw_label.to_ascii_lowercase().as_str() {
            "pos" => Some(Label::Positive),
            "neg" => Some(Label::Negative),
            "" if !require_label => None,
            _ => {
                return Err(Error::UnparsableLabel {
                    line,
                    value: raw_label.to_owned(),
                })
            }
        };
        let headline = Headline::new(date, text, label).map_err(|source| Error::AtLine { line, source })?;
        out.push(headline);
    }
    Ok(out)
}

/// Writes per-headline `date,score` rows in input order.
pub fn write_scores<W: Write>(sink: W, scored: &[(NaiveDate, f64)], date_format: &str) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(sink);
    wtr.write_record(["date", "score"])?;
    for (date, s) in scored {
        wtr.write_record([date.format(date_format).to_string(), s.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn price(src: &str) -> Result<DatedSeries> {
        parse_csv(src.as_bytes(), SeriesKind::ClosePrice, &ColumnSpec::price())
    }

    #[test]
    fn parses_and_sorts() {
        let s = price("date,close\n2015-05-04,27490.59\n2015-05-05,27430.30\n").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.values(), vec![27490.59, 27430.30]);

        let rev = price("date,close\n2015-05-05,27430.30\n2015-05-04,27490.59\n").unwrap();
        assert_eq!(rev, s);
    }

    #[test]
    fn duplicate_price_date_is_an_error() {
        let err = price("date,close\n2015-05-04,1\n2015-05-04,2\n").unwrap_err();
        assert_eq!(err.kind(), "DuplicateDate");
    }

    #[test]
    fn sentiment_duplicates_are_averaged() {
        let src = "date,score\n2015-05-04,0.2\n2015-05-04,0.8\n2015-05-05,0.4\n";
        let s = parse_csv(src.as_bytes(), SeriesKind::SentimentScore, &ColumnSpec::sentiment()).unwrap();
        assert_eq!(s.values(), vec![0.5, 0.4]);
    }

    #[test]
    fn reports_bad_rows() {
        assert!(matches!(price("day,close\n2015-05-04,1\n"), Err(Error::MissingColumn(c)) if c == "date"));
        assert!(matches!(price("date,value\n2015-05-04,1\n"), Err(Error::MissingColumn(c)) if c == "close"));
        assert!(matches!(
            price("date,close\n2015-05-04,1\n04/05/2015,2\n"),
            Err(Error::UnparsableDate { line: 3, .. })
        ));
        assert!(matches!(
            price("date,close\n2015-05-04,\"27,490.59\"\n"),
            Err(Error::UnparsableValue { line: 2, .. })
        ));
        assert!(matches!(price("date,close\n2015-05-04,NaN\n"), Err(Error::UnparsableValue { .. })));
        assert_eq!(price("date,close\n").unwrap_err().kind(), "EmptySeries");
    }

    #[test]
    fn custom_columns_and_format() {
        let spec = ColumnSpec::new("Day", "Close Price", "%d/%m/%Y");
        let s = parse_csv(
            "Day,Open,Close Price\n05/05/2015,1,2.5\n04/05/2015,1,2.0\n".as_bytes(),
            SeriesKind::ClosePrice,
            &spec,
        )
        .unwrap();
        assert_eq!(s.values(), vec![2.0, 2.5]);
        let mut out = Vec::new();
        write_csv(&mut out, &s, &spec).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "Day,Close Price\n04/05/2015,2\n05/05/2015,2.5\n");
    }

    #[test]
    fn headlines_with_and_without_labels() {
        let src = "date,text,label\n2015-05-04,\"Sensex up, banks rally\",pos\n2015-05-05,Markets fall,NEG\n";
        let h = parse_headlines(src.as_bytes(), DEFAULT_DATE_FORMAT, true).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h[0].text, "Sensex up, banks rally");
        assert_eq!(h[1].label, Some(Label::Negative));

        let plain = parse_headlines("date,text\n2015-05-04,Hello\n".as_bytes(), DEFAULT_DATE_FORMAT, false).unwrap();
        assert_eq!(plain[0].label, None);
        assert!(matches!(
            parse_headlines("date,text\n2015-05-04,x\n".as_bytes(), DEFAULT_DATE_FORMAT, true),
            Err(Error::MissingColumn(_))
        ));
        assert!(matches!(
            parse_headlines("date,text,label\n2015-05-04,x,maybe\n".as_bytes(), DEFAULT_DATE_FORMAT, true),
            Err(Error::UnparsableLabel { line: 2, .. })
        ));
        let blank = parse_headlines("date,text\n2015-05-04,  \n".as_bytes(), DEFAULT_DATE_FORMAT, false);
        assert_eq!(blank.unwrap_err().kind(), "EmptyHeadline");
    }

    fn arb_series() -> impl Strategy<Value = DatedSeries> {
        let base = NaiveDate::from_ymd_opt(2000, 1, 1).unwrap();
        proptest::collection::btree_map(0i64..20_000, proptest::num::f64::NORMAL | proptest::num::f64::ZERO, 1..80)
            .prop_map(move |m| {
                let obs = m
                    .into_iter()
                    .map(|(d, v)| Observation::new(base + chrono::Duration::days(d), v))
                    .collect();
                DatedSeries::new(SeriesKind::ClosePrice, obs).unwrap()
            })
    }

    proptest! {
        #[test]
        fn csv_round_trip(s in arb_series()) {
            let mut buf = Vec::new();
            write_csv(&mut buf, &s, &ColumnSpec::price()).unwrap();
            let back = parse_csv(buf.as_slice(), SeriesKind::ClosePrice, &ColumnSpec::price()).unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
