//! Plain-text model files.
//!
//! ```text
//! sentcause-model 1
//! feature_dim 65536
//! hash_seed 0x5eed20150504f1a1
//! bias -1.2e-2
//! epochs 30
//! learning_rate 1e0
//! batch_size 8
//! seed 2015
//! n_train 80
//! n_test 20
//! train_accuracy 1e0
//! test_accuracy 9.5e-1
//! nonzero 2
//! 5782 -1.3e0
//! 57888 1.3e0
//! ```
//!
//! Floats are written in shortest round-trip exponent form, so a load gives
//! back bit-identical weights. The training block (`epochs` through
//! `test_accuracy`) is omitted for an untrained model; `test_accuracy` may be
//! `none`. Only nonzero weights are listed, by ascending index.

use std::io::{BufRead, Write};

use sentcause_core::sentiment::{SentimentModel, TrainingMeta, FEATURE_DIM, HASH_SEED};

use crate::error::{Error, Result};

pub const MAGIC: &str = "sentcause-model";
pub const FORMAT_VERSION: u32 = 1;

pub fn write_model<W: Write>(mut sink: W, model: &SentimentModel) -> Result<()> {
    writeln!(sink, "{MAGIC} {FORMAT_VERSION}")?;
    writeln!(sink, "feature_dim {}", model.feature_dim())?;
    writeln!(sink, "hash_seed {:#x}", model.hash_seed())?;
    writeln!(sink, "bias {:e}", model.bias())?;
    if let Some(m) = model.meta() {
        writeln!(sink, "epochs {}", m.epochs)?;
        writeln!(sink, "learning_rate {:e}", m.learning_rate)?;
        writeln!(sink, "batch_size {}", m.batch_size)?;
        writeln!(sink, "seed {}", m.seed)?;
        writeln!(sink, "n_train {}", m.n_train)?;
        writeln!(sink, "n_test {}", m.n_test)?;
        writeln!(sink, "train_accuracy {:e}", m.train_accuracy)?;
        match m.test_accuracy {
            Some(a) => writeln!(sink, "test_accuracy {a:e}")?,
            None => writeln!(sink, "test_accuracy none")?,
        }
    }
    let nonzero: Vec<(usize, f64)> = model
        .weights()
        .iter()
        .enumerate()
        .filter(|(_, w)| **w != 0.0)
        .map(|(i, w)| (i, *w))
        .collect();
    writeln!(sink, "nonzero {}", nonzero.len())?;
    for (i, w) in nonzero {
        writeln!(sink, "{i} {w:e}")?;
    }
    sink.flush()?;
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::ModelFormat {
            line: self.line,
            message: message.into(),
        })
    }

    fn next_line(&mut self) -> Result<Option<String>> {
        match self.inner.next() {
            Some(l) => {
                self.line += 1;
                Ok(Some(l?))
            }
            None => Ok(None),
        }
    }

    fn pair(&mut self) -> Result<(String, String)> {
        let Some(l) = self.next_line()? else {
            return self.fail("unexpected end of file");
        };
        match l.trim().split_once(' ') {
            Some((k, v)) => Ok((k.to_owned(), v.trim().to_owned())),
            None => self.fail(format!("expected `key value`, found `{l}`")),
        }
    }

    fn keyed(&mut self, key: &str) -> Result<String> {
        let (k, v) = self.pair()?;
        if k != key {
            return self.fail(format!("expected `{key}`, found `{k}`"));
        }
        Ok(v)
    }

    fn parse<T: std::str::FromStr>(&self, raw: &str, what: &str) -> Result<T> {
        raw.parse().or_else(|_| self.fail(format!("bad {what} `{raw}`")))
    }
}

pub fn read_model<R: BufRead>(source: R) -> Result<SentimentModel> {
    let mut lines = Lines {
        inner: source.lines(),
        line: 0,
    };
    let version = lines.keyed(MAGIC)?;
    if version != FORMAT_VERSION.to_string() {
        return lines.fail(format!("unsupported format version `{version}`"));
    }
    let dim: usize = {
        let raw = lines.keyed("feature_dim")?;
        lines.parse(&raw, "feature_dim")?
    };
    if dim != FEATURE_DIM {
        return lines.fail(format!("feature_dim {dim} does not match {FEATURE_DIM}"));
    }
    let raw_seed = lines.keyed("hash_seed")?;
    let seed = raw_seed
        .strip_prefix("0x")
        .and_then(|h| u64::from_str_radix(h, 16).ok());
    if seed != Some(HASH_SEED) {
        return lines.fail(format!("hash_seed {raw_seed} does not match {HASH_SEED:#x}"));
    }
    let bias: f64 = {
        let raw = lines.keyed("bias")?;
        lines.parse(&raw, "bias")?
    };

    let (mut key, mut value) = lines.pair()?;
    let meta = if key == "epochs" {
        let epochs = lines.parse(&value, "epochs")?;
        let mut field = |name: &str| lines.keyed(name);
        let lr = field("learning_rate")?;
        let batch = field("batch_size")?;
        let seed = field("seed")?;
        let n_train = field("n_train")?;
        let n_test = field("n_test")?;
        let train_acc = field("train_accuracy")?;
        let test_acc = field("test_accuracy")?;
        let meta = TrainingMeta {
            epochs,
            learning_rate: lines.parse(&lr, "learning_rate")?,
            batch_size: lines.parse(&batch, "batch_size")?,
            seed: lines.parse(&seed, "seed")?,
            n_train: lines.parse(&n_train, "n_train")?,
            n_test: lines.parse(&n_test, "n_test")?,
            train_accuracy: lines.parse(&train_acc, "train_accuracy")?,
            test_accuracy: match test_acc.as_str() {
                "none" => None,
                raw => Some(lines.parse(raw, "test_accuracy")?),
            },
        };
        (key, value) = lines.pair()?;
        Some(meta)
    } else {
        None
    };

    if key != "nonzero" {
        return lines.fail(format!("expected `nonzero`, found `{key}`"));
    }
    let count: usize = lines.parse(&value, "nonzero count")?;
    let mut weights = vec![0.0; FEATURE_DIM];
    let mut last: Option<usize> = None;
    for _ in 0..count {
        let (idx, w) = lines.pair()?;
        let idx: usize = lines.parse(&idx, "index")?;
        let w: f64 = lines.parse(&w, "weight")?;
        if idx >= FEATURE_DIM || last.is_some_and(|l| idx <= l) {
            return lines.fail(format!("index {idx} out of range or out of order"));
        }
        weights[idx] = w;
        last = Some(idx);
    }
    while let Some(rest) = lines.next_line()? {
        if !rest.trim().is_empty() {
            return lines.fail("trailing content after weights");
        }
    }
    Ok(SentimentModel::from_parts(weights, bias, meta)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sentcause_core::sentiment::{train, Headline, Label, TrainConfig};
    use sentcause_core::NaiveDate;

    fn toy_model() -> SentimentModel {
        let d = NaiveDate::from_ymd_opt(2015, 5, 4).unwrap();
        let mut corpus = Vec::new();
        for _ in 0..10 {
            corpus.push(Headline::new(d, "shares gain", Some(Label::Positive)).unwrap());
            corpus.push(Headline::new(d, "shares slump", Some(Label::Negative)).unwrap());
        }
        train(&corpus, &TrainConfig::default()).unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let model = toy_model();
        let mut buf = Vec::new();
        write_model(&mut buf, &model).unwrap();
        let back = read_model(buf.as_slice()).unwrap();
        assert_eq!(back, model);
        for (a, b) in back.weights().iter().zip(model.weights()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn zero_model_round_trip() {
        let mut buf = Vec::new();
        write_model(&mut buf, &SentimentModel::zero()).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.ends_with("nonzero 0\n"));
        assert_eq!(read_model(buf.as_slice()).unwrap(), SentimentModel::zero());
    }

    #[test]
    fn rejects_mismatched_header() {
        let good = {
            let mut buf = Vec::new();
            write_model(&mut buf, &toy_model()).unwrap();
            String::from_utf8(buf).unwrap()
        };
        let cases = [
            good.replace("sentcause-model 1", "sentcause-model 2"),
            good.replace("feature_dim 65536", "feature_dim 1024"),
            good.replace("hash_seed 0x5eed20150504f1a1", "hash_seed 0x1"),
            good.replace("nonzero ", "nonzero 9999"),
            format!("{good}junk\n"),
        ];
        for bad in cases {
            assert!(matches!(read_model(bad.as_bytes()), Err(Error::ModelFormat { .. })), "{bad:.80}");
        }
        let bias_line = good.lines().nth(3).unwrap();
        let nan = good.replace(bias_line, "bias NaN");
        assert_eq!(read_model(nan.as_bytes()).unwrap_err().kind(), "DomainError");
    }
}
