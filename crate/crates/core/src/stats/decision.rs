#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Verdict {
    RejectNull,
    FailToRejectNull,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Decision {
    pub verdict: Verdict,
    pub alpha: f64,
    pub p_value: f64,
}

/// Rejects the null iff `p_value < alpha` (strict).
pub fn decide(p_value: f64, alpha: f64) -> Result<Decision> {
    if !(0.0..=1.0).contains(&p_value) {
        return Err(Error::DomainError("p-value must lie in [0, 1]"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::DomainError("alpha must lie in (0, 1)"));
    }
    let verdict = if p_value < alpha {
        Verdict::RejectNull
    } else {
        Verdict::FailToRejectNull
    };
    Ok(Decision {
        verdict,
        alpha,
        p_value,
    })
}

/// Overall reading of the two per-lag tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Conclusion {
    /// Sentiment Granger-causes price; price does not Granger-cause sentiment.
    XCausesY,
    /// Price Granger-causes sentiment; sentiment does not Granger-cause price.
    YCausesX,
    Inconclusive,
}

/// A direction is supported only when it rejects at every lag while the
/// reverse direction rejects at none. `None` marks a failed cell, which
/// always yields [`Conclusion::Inconclusive`].
pub fn conclude(x_to_y: &[Option<f64>], y_to_x: &[Option<f64>], alpha: f64) -> Conclusion {
    let all = |ps: &[Option<f64>], reject: bool| {
        !ps.is_empty() && ps.iter().all(|p| matches!(p, Some(p) if (*p < alpha) == reject))
    };
    if all(x_to_y, true) && all(y_to_x, false) {
        Conclusion::XCausesY
    } else if all(y_to_x, true) && all(x_to_y, false) {
        Conclusion::YCausesX
    } else {
        Conclusion::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    #[test]
    fn decide_examples() {
        assert_eq!(decide(0.0184, 0.05).unwrap().verdict, Verdict::RejectNull);
        assert_eq!(decide(0.1737, 0.05).unwrap().verdict, Verdict::FailToRejectNull);
        assert_eq!(decide(0.05, 0.05).unwrap().verdict, Verdict::FailToRejectNull);
        assert!(decide(1.2, 0.05).is_err());
        assert!(decide(0.5, 0.0).is_err());
        assert!(decide(0.5, 1.0).is_err());
        assert!(decide(f64::NAN, 0.05).is_err());
    }

    #[test]
    fn conclude_patterns() {
        let low = [Some(0.01), Some(0.02)];
        let high = [Some(0.3), Some(0.4)];
        assert_eq!(conclude(&low, &high, 0.05), Conclusion::XCausesY);
        assert_eq!(conclude(&high, &low, 0.05), Conclusion::YCausesX);
        assert_eq!(conclude(&low, &low, 0.05), Conclusion::Inconclusive);
        assert_eq!(conclude(&high, &high, 0.05), Conclusion::Inconclusive);
        let mixed = [Some(0.01), Some(0.2)];
        assert_eq!(conclude(&mixed, &high, 0.05), Conclusion::Inconclusive);
        assert_eq!(conclude(&[Some(0.01), None], &high, 0.05), Conclusion::Inconclusive);
        assert_eq!(conclude(&[], &[], 0.05), Conclusion::Inconclusive);
    }

    proptest! {
        #[test]
        fn verdict_matches_strict_rule(p in 0.0f64..=1.0, alpha in 0.001f64..0.999) {
            let d = decide(p, alpha).unwrap();
            prop_assert_eq!(d.verdict == Verdict::RejectNull, p < alpha);
        }

        #[test]
        fn conclusion_depends_only_on_verdict_pattern(
            a in proptest::collection::vec(0.0f64..1.0, 1..6),
            b in proptest::collection::vec(0.0f64..1.0, 1..6),
            alpha in 0.01f64..0.2,
        ) {
            let xa: Vec<_> = a.iter().copied().map(Some).collect();
            let xb: Vec<_> = b.iter().copied().map(Some).collect();
            let c = conclude(&xa, &xb, alpha);
            let ra: Vec<bool> = a.iter().map(|p| *p < alpha).collect();
            let rb: Vec<bool> = b.iter().map(|p| *p < alpha).collect();
            let expected = if ra.iter().all(|r| *r) && rb.iter().all(|r| !*r) {
                Conclusion::XCausesY
            } else if rb.iter().all(|r| *r) && ra.iter().all(|r| !*r) {
                Conclusion::YCausesX
            } else {
                Conclusion::Inconclusive
            };
            prop_assert_eq!(c, expected);
        }
    }
}
