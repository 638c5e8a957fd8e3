//! Pre-extracted support data: bare lexicon entries, one per line, and
//! sentences with `[[...]]` around each MWE occurrence.

use std::io::Read;

use crate::corpus::spaces::infer_spaces;
use crate::error::{Error, Result};
use crate::sentence::{AnnotatedSentence, MweSpan, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportKind {
    Lexicon,
    Context,
}

/// Support entries. `forms` only ever reach the lexicon; `sentences` are
/// also counted as training observations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SupportData {
    pub forms: Vec<Vec<String>>,
    pub sentences: Vec<AnnotatedSentence>,
}

impl SupportData {
    pub fn is_empty(&self) -> bool {
        self.forms.is_empty() && self.sentences.is_empty()
    }

    pub fn extend(&mut self, other: SupportData) {
        self.forms.extend(other.forms);
        self.sentences.extend(other.sentences);
    }
}

pub fn read_support<R: Read>(mut r: R, kind: SupportKind) -> Result<SupportData> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    parse_support(&text, kind)
}

pub fn parse_support(text: &str, kind: SupportKind) -> Result<SupportData> {
    let mut data = SupportData::default();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        match kind {
            SupportKind::Lexicon => {
                data.forms.push(line.split_whitespace().map(str::to_owned).collect());
            }
            SupportKind::Context => data.sentences.push(parse_context_line(line, line_no)?),
        }
    }
    Ok(data)
}

fn parse_context_line(line: &str, line_no: usize) -> Result<AnnotatedSentence> {
    let mut tokens: Vec<String> = Vec::new();
    let mut spans = Vec::new();
    let mut open: Option<usize> = None;
    let mut current = String::new();

    let flush = |current: &mut String, tokens: &mut Vec<String>| {
        if !current.is_empty() {
            tokens.push(std::mem::take(current));
        }
    };

    let mut rest = line;
    while let Some(c) = rest.chars().next() {
        if rest.starts_with("[[") {
            flush(&mut current, &mut tokens);
            if open.is_some() {
                return Err(Error::parse(line_no, "nested [[ markup"));
            }
            open = Some(tokens.len());
            rest = &rest[2..];
        } else if rest.starts_with("]]") {
            flush(&mut current, &mut tokens);
            let start = open
                .take()
                .ok_or_else(|| Error::parse(line_no, "]] without matching [["))?;
            if tokens.len() == start {
                return Err(Error::parse(line_no, "empty [[ ]] markup"));
            }
            spans.push(MweSpan::contiguous(start..tokens.len())?);
            rest = &rest[2..];
        } else {
            if c.is_whitespace() {
                flush(&mut current, &mut tokens);
            } else {
                current.push(c);
            }
            rest = &rest[c.len_utf8()..];
        }
    }
    flush(&mut current, &mut tokens);
    if open.is_some() {
        return Err(Error::parse(line_no, "unclosed [[ markup"));
    }
    if tokens.is_empty() {
        return Err(Error::parse(line_no, "no tokens"));
    }
    let boundaries = infer_spaces(&tokens);
    AnnotatedSentence::new(tokens.into_iter().map(Token::new).collect(), boundaries, spans)
}
