//! Demonstration training corpus shipped with the crate.

use sentcause_core::sentiment::Headline;

use crate::csv_io::{parse_headlines, DEFAULT_DATE_FORMAT};

/// `date,text,label` CSV: 100 finance headlines, half labelled `pos`.
pub const DEMO_CORPUS_CSV: &str = include_str!("../data/demo_corpus.csv");

pub fn demo_corpus() -> Vec<Headline> {
    parse_headlines(DEMO_CORPUS_CSV.as_bytes(), DEFAULT_DATE_FORMAT, true).expect("bundled corpus parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use sentcause_core::sentiment::Label;

    #[test]
    fn corpus_is_balanced() {
        let c = demo_corpus();
        assert_eq!(c.len(), 100);
        let pos = c.iter().filter(|h| h.label == Some(Label::Positive)).count();
        assert_eq!(pos, 50);
    }
}
