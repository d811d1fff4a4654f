//! Numerical core for sentiment/price Granger causality analysis.
//!
//! Everything in this crate is a pure function of its inputs and builds
//! without `std`: dated series and their alignment, Householder least
//! squares, the F and incomplete-beta special functions, Granger and
//! augmented Dickey–Fuller tests, lag-order selection, a hashed
//! bag-of-words sentiment scorer, and a seeded synthetic-data generator.
//!
//! Floating-point transcendental functions go through [`libm`], so results
//! are bit-identical across platforms. File formats, IO and the CLI live in
//! the companion `sentcause` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod oos;
pub mod regression;
pub mod sentiment;
pub mod stats;
pub mod synth;
pub mod timeseries;

pub use chrono::NaiveDate;
pub use error::{Error, Result};
