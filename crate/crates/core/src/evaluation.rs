//! Partial-credit precision/recall/F1 over token-token links or over MWE
//! token membership, micro-averaged across sentences.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sentence::{AnnotatedSentence, MweSpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Consecutive-member links within each MWE.
    Link,
    /// Membership of tokens in any MWE.
    Token,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Link => "link",
            Scheme::Token => "token",
        })
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "link" => Ok(Scheme::Link),
            "token" => Ok(Scheme::Token),
            other => Err(format!("unknown scheme {other:?}")),
        }
    }
}

/// Mergeable raw counts behind an [`EvalReport`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalCounts {
    pub correct: u64,
    pub predicted: u64,
    pub gold: u64,
}

impl EvalCounts {
    pub fn add(&mut self, other: EvalCounts) {
        self.correct += other.correct;
        self.predicted += other.predicted;
        self.gold += other.gold;
    }

    /// Counts for one sentence under `scheme`.
    pub fn sentence(scheme: Scheme, gold: &[MweSpan], predicted: &[MweSpan]) -> Self {
        match scheme {
            Scheme::Link => compare(&links_of(gold), &links_of(predicted)),
            Scheme::Token => compare(&tokens_of(gold), &tokens_of(predicted)),
        }
    }
}

fn compare<T: Ord>(gold: &BTreeSet<T>, predicted: &BTreeSet<T>) -> EvalCounts {
    EvalCounts {
        correct: gold.intersection(predicted).count() as u64,
        predicted: predicted.len() as u64,
        gold: gold.len() as u64,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub scheme: Scheme,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub counts: EvalCounts,
}

fn ratio(num: u64, den: u64, other_den: u64) -> f64 {
    match (den, other_den) {
        (0, 0) => 1.0,
        (0, _) => 0.0,
        _ => num as f64 / den as f64,
    }
}

impl EvalReport {
    pub fn from_counts(scheme: Scheme, counts: EvalCounts) -> Self {
        let precision = ratio(counts.correct, counts.predicted, counts.gold);
        let recall = ratio(counts.correct, counts.gold, counts.predicted);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        EvalReport {
            scheme,
            precision,
            recall,
            f1,
            counts,
        }
    }

    /// Machine-readable `key<TAB>value` lines.
    pub fn to_kv_lines(&self) -> String {
        format!(
            "scheme\t{}\nP\t{:.6}\nR\t{:.6}\nF1\t{:.6}\nn_correct\t{}\nn_predicted\t{}\nn_gold\t{}\n",
            self.scheme,
            self.precision,
            self.recall,
            self.f1,
            self.counts.correct,
            self.counts.predicted,
            self.counts.gold
        )
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scheme: {}", self.scheme)?;
        writeln!(f, "P: {:.4}", self.precision)?;
        writeln!(f, "R: {:.4}", self.recall)?;
        writeln!(f, "F1: {:.4}", self.f1)?;
        write!(
            f,
            "correct/predicted/gold: {}/{}/{}",
            self.counts.correct, self.counts.predicted, self.counts.gold
        )
    }
}

/// Consecutive member pairs of every span.
pub fn links_of(spans: &[MweSpan]) -> BTreeSet<(usize, usize)> {
    spans
        .iter()
        .flat_map(|s| s.indices().windows(2).map(|w| (w[0], w[1])))
        .collect()
}

/// Tokens belonging to any span.
pub fn tokens_of(spans: &[MweSpan]) -> BTreeSet<usize> {
    spans.iter().flat_map(|s| s.indices().iter().copied()).collect()
}

/// Scores predicted against gold sentences, which must agree in number and
/// in per-sentence token counts.
pub fn evaluate(scheme: Scheme, gold: &[AnnotatedSentence], predicted: &[AnnotatedSentence]) -> Result<EvalReport> {
    if gold.len() != predicted.len() {
        return Err(Error::LengthMismatch(format!(
            "{} gold sentences vs {} predicted",
            gold.len(),
            predicted.len()
        )));
    }
    let mut counts = EvalCounts::default();
    for (i, (g, p)) in gold.iter().zip(predicted).enumerate() {
        if g.len() != p.len() {
            return Err(Error::LengthMismatch(format!(
                "sentence {}: {} gold tokens vs {} predicted",
                i + 1,
                g.len(),
                p.len()
            )));
        }
        counts.add(EvalCounts::sentence(scheme, &g.mwes, &p.mwes));
    }
    Ok(EvalReport::from_counts(scheme, counts))
}

pub fn eval_links(gold: &[AnnotatedSentence], predicted: &[AnnotatedSentence]) -> Result<EvalReport> {
    evaluate(Scheme::Link, gold, predicted)
}

pub fn eval_tokens(gold: &[AnnotatedSentence], predicted: &[AnnotatedSentence]) -> Result<EvalReport> {
    evaluate(Scheme::Token, gold, predicted)
}
