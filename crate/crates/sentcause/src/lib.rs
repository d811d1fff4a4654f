//! File formats, reports, the end-to-end pipeline and the `sentcause` CLI
//! built on [`sentcause_core`].

pub mod bundled;
pub mod csv_io;
pub mod error;
pub mod model_io;
pub mod pipeline;
pub mod report;

pub use error::{Error, Result};
pub use pipeline::{analyze, run_pipeline, Inputs, RunConfig, SentimentInput};
pub use report::{render_report, CausalityReport, OutputFormat, TestSegment};
