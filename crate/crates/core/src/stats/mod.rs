//! Special functions, hypothesis tests and lag-order selection.

mod adf;
mod decision;
mod granger;
mod lag;
pub mod special;

pub use adf::{adf_default_max_lag, adf_test, adf_test_values, AdfResult, AdfVerdict, CriticalValues};
pub use decision::{conclude, decide, Conclusion, Decision, Verdict, DEFAULT_ALPHA};
pub use granger::{granger_sweep, granger_test, Direction, GrangerResult, SweepCell};
pub use lag::{lag_criteria, select_lag, Criterion};
pub use special::{f_cdf, f_sf, ln_gamma, reg_inc_beta};
