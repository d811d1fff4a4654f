use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sentcause::bundled::demo_corpus;
use sentcause::csv_io::{parse_csv, parse_headlines, write_csv, write_scores, ColumnSpec, DEFAULT_DATE_FORMAT};
use sentcause::model_io::write_model;
use sentcause::pipeline::{bundled_model, load_model};
use sentcause::report::parse_json_report;
use sentcause::{render_report, run_pipeline, Error, OutputFormat, Result, RunConfig, SentimentInput, TestSegment};
use sentcause_core::sentiment::{daily_aggregate, train, TrainConfig};
use sentcause_core::stats::{Criterion, DEFAULT_ALPHA};
use sentcause_core::synth::gen_synthetic;
use sentcause_core::timeseries::SeriesKind;

#[derive(Parser)]
#[command(name = "sentcause", version, about = "News sentiment vs close price Granger causality")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Price,
    Sentiment,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Markdown,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Markdown => OutputFormat::Markdown,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SegmentArg {
    Train,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    Aic,
    Bic,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a price or sentiment CSV and write it sorted (sentiment days averaged).
    Ingest {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "price")]
        kind: KindArg,
        #[arg(long, default_value = "date")]
        date_column: String,
        /// Defaults to `close` for prices and `score` for sentiment.
        #[arg(long)]
        value_column: Option<String>,
        #[arg(long, default_value = DEFAULT_DATE_FORMAT)]
        date_format: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Score `date,text` headlines.
    Score {
        headlines: PathBuf,
        /// Model file; without it a model is trained on the bundled corpus.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, default_value_t = TrainConfig::default().seed)]
        seed: u64,
        /// Write one averaged score per day instead of one per headline.
        #[arg(long)]
        daily: bool,
        #[arg(long, default_value = DEFAULT_DATE_FORMAT)]
        date_format: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Train a sentiment model on a `date,text,label` corpus.
    TrainSentiment {
        /// Defaults to the bundled demonstration corpus.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = TrainConfig::default().train_ratio)]
        train_ratio: f64,
        #[arg(long, default_value_t = TrainConfig::default().epochs)]
        epochs: usize,
        #[arg(long, default_value_t = TrainConfig::default().learning_rate)]
        learning_rate: f64,
        #[arg(long, default_value_t = TrainConfig::default().batch_size)]
        batch_size: usize,
        #[arg(long, default_value_t = TrainConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value = DEFAULT_DATE_FORMAT)]
        date_format: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run the full causality pipeline and print the report.
    Causality {
        #[arg(long)]
        price: PathBuf,
        /// Precomputed `date,score` file.
        #[arg(long, conflicts_with = "headlines", required_unless_present = "headlines")]
        sentiment: Option<PathBuf>,
        /// `date,text` headlines to score.
        #[arg(long)]
        headlines: Option<PathBuf>,
        #[arg(long, requires = "headlines")]
        model: Option<PathBuf>,
        #[arg(long, default_value = "close")]
        price_column: String,
        #[arg(long, default_value = "score")]
        score_column: String,
        #[arg(long, default_value = DEFAULT_DATE_FORMAT)]
        date_format: String,
        #[arg(long, default_value_t = 4)]
        max_lag: usize,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long, default_value_t = 0.8)]
        split_ratio: f64,
        #[arg(long, value_enum, default_value = "train")]
        test_segment: SegmentArg,
        #[arg(long, default_value_t = 0)]
        difference: usize,
        #[arg(long, value_enum, default_value = "aic")]
        criterion: CriterionArg,
        #[arg(long, default_value_t = TrainConfig::default().seed)]
        seed: u64,
        #[arg(long, value_enum, default_value = "markdown")]
        format: FormatArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a seeded synthetic pair as `close.csv` and `sentiment.csv`.
    Synth {
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 0.8)]
        coupling: f64,
        #[arg(long, default_value_t = 0.1)]
        noise_sd: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Re-render a JSON report.
    Report {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "markdown")]
        format: FormatArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::from(e).in_file(path))
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::from(e).in_file(path))
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match output {
        Some(p) => {
            let mut w = create(p)?;
            w.write_all(bytes)?;
            w.flush()?;
        }
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest {
            input,
            kind,
            date_column,
            value_column,
            date_format,
            output,
        } => {
            let kind = match kind {
                KindArg::Price => SeriesKind::ClosePrice,
                KindArg::Sentiment => SeriesKind::SentimentScore,
            };
            let default = ColumnSpec::default_for(kind);
            let spec = ColumnSpec::new(
                &date_column,
                value_column.as_deref().unwrap_or(&default.value_column),
                &date_format,
            );
            let series = parse_csv(open(&input)?, kind, &spec).map_err(|e| e.in_file(&input))?;
            let mut buf = Vec::new();
            write_csv(&mut buf, &series, &spec)?;
            emit(output.as_deref(), &buf)?;
            eprintln!(
                "{} observations, {} to {}",
                series.len(),
                series.first_date(),
                series.last_date()
            );
        }
        Command::Score {
            headlines,
            model,
            seed,
            daily,
            date_format,
            output,
        } => {
            let items = parse_headlines(open(&headlines)?, &date_format, false).map_err(|e| e.in_file(&headlines))?;
            let model = match model {
                Some(p) => load_model(&p)?,
                None => bundled_model(seed)?,
            };
            let scored: Vec<_> = items.iter().map(|h| (h.date, model.score(&h.text))).collect();
            let mut buf = Vec::new();
            if daily {
                let series = daily_aggregate(&scored)?;
                write_csv(&mut buf, &series, &ColumnSpec::new("date", "score", &date_format))?;
            } else {
                write_scores(&mut buf, &scored, &date_format)?;
            }
            emit(output.as_deref(), &buf)?;
        }
        Command::TrainSentiment {
            corpus,
            train_ratio,
            epochs,
            learning_rate,
            batch_size,
            seed,
            date_format,
            output,
        } => {
            let corpus = match corpus {
                Some(p) => parse_headlines(open(&p)?, &date_format, true).map_err(|e| e.in_file(&p))?,
                None => demo_corpus(),
            };
            let config = TrainConfig {
                train_ratio,
                epochs,
                learning_rate,
                batch_size,
                seed,
            };
            let model = train(&corpus, &config)?;
            write_model(create(&output)?, &model)?;
            if let Some(m) = model.meta() {
                let test = m.test_accuracy.map_or("n/a".to_owned(), |a| format!("{a:.4}"));
                eprintln!(
                    "trained on {} headlines ({} held out): train accuracy {:.4}, test accuracy {test}",
                    m.n_train, m.n_test, m.train_accuracy
                );
            }
        }
        Command::Causality {
            price,
            sentiment,
            headlines,
            model,
            price_column,
            score_column,
            date_format,
            max_lag,
            alpha,
            split_ratio,
            test_segment,
            difference,
            criterion,
            seed,
            format,
            output,
        } => {
            let input = match (sentiment, headlines) {
                (Some(s), _) => SentimentInput::Scores(s),
                (None, Some(h)) => SentimentInput::Headlines { path: h, model },
                (None, None) => return Err(Error::Config("need --sentiment or --headlines".into())),
            };
            let mut config = RunConfig::new(price, input);
            config.price_column = price_column;
            config.score_column = score_column;
            config.date_format = date_format;
            config.max_lag = max_lag;
            config.alpha = alpha;
            config.split_ratio = split_ratio;
            config.test_segment = match test_segment {
                SegmentArg::Train => TestSegment::Train,
                SegmentArg::Full => TestSegment::Full,
            };
            config.difference_order = difference;
            config.criterion = match criterion {
                CriterionArg::Aic => Criterion::Aic,
                CriterionArg::Bic => Criterion::Bic,
            };
            config.rng_seed = seed;
            config.format = format.into();
            let report = run_pipeline(&config)?;
            emit(output.as_deref(), &render_report(&report, config.format)?)?;
        }
        Command::Synth {
            n,
            coupling,
            noise_sd,
            seed,
            out_dir,
        } => {
            let pair = gen_synthetic(n, coupling, noise_sd, seed)?;
            fs::create_dir_all(&out_dir).map_err(|e| Error::from(e).in_file(&out_dir))?;
            let close = out_dir.join("close.csv");
            let sentiment = out_dir.join("sentiment.csv");
            write_csv(create(&close)?, &pair.y_series(), &ColumnSpec::price())?;
            write_csv(create(&sentiment)?, &pair.x_series(), &ColumnSpec::sentiment())?;
            eprintln!("wrote {} and {}", close.display(), sentiment.display());
        }
        Command::Report { input, format, output } => {
            let mut bytes = Vec::new();
            open(&input)?.read_to_end(&mut bytes)?;
            let report = parse_json_report(&bytes).map_err(|e| e.in_file(&input))?;
            emit(output.as_deref(), &render_report(&report, format.into())?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let body = serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            eprintln!("{body}");
            ExitCode::FAILURE
        }
    }
}
