//! Readers and writers for the annotated corpus formats and support data.

pub mod dimsum;
pub mod parseme;
pub mod spaces;
pub mod support;

use std::fmt;
use std::str::FromStr;

pub use dimsum::{read_dimsum, write_dimsum};
pub use parseme::{attach_conllu_pos, read_parseme, write_parseme};
pub use spaces::infer_spaces;
pub use support::{read_support, SupportData, SupportKind};

use crate::error::Result;
use crate::sentence::AnnotatedSentence;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Dimsum,
    Parseme,
}

impl CorpusFormat {
    pub fn parse(self, text: &str) -> Result<Vec<AnnotatedSentence>> {
        match self {
            CorpusFormat::Dimsum => dimsum::parse_dimsum(text),
            CorpusFormat::Parseme => parseme::parse_parseme(text),
        }
    }

    pub fn render(self, sentences: &[AnnotatedSentence]) -> Result<String> {
        match self {
            CorpusFormat::Dimsum => dimsum::dimsum_string(sentences),
            CorpusFormat::Parseme => parseme::parseme_string(sentences),
        }
    }
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorpusFormat::Dimsum => "dimsum",
            CorpusFormat::Parseme => "parseme",
        })
    }
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "dimsum" => Ok(CorpusFormat::Dimsum),
            "parseme" => Ok(CorpusFormat::Parseme),
            other => Err(format!("unknown corpus format {other:?}")),
        }
    }
}

/// One sentence per line of whitespace-separated tokens; spaces are inferred.
pub fn parse_raw(text: &str) -> Vec<AnnotatedSentence> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut s = AnnotatedSentence::from_forms(l.split_whitespace());
            s.boundaries = infer_spaces(&l.split_whitespace().collect::<Vec<_>>());
            s
        })
        .collect()
}

/// Groups non-blank lines into blank-line separated blocks of
/// `(line number, line)`.
pub(crate) fn blocks(text: &str) -> impl Iterator<Item = Vec<(usize, &str)>> {
    let mut lines = crate::tsv::lines(text).peekable();
    std::iter::from_fn(move || {
        while lines.next_if(|(_, l)| l.is_empty()).is_some() {}
        let mut block = Vec::new();
        while let Some(item) = lines.next_if(|(_, l)| !l.is_empty()) {
            block.push(item);
        }
        (!block.is_empty()).then_some(block)
    })
}
