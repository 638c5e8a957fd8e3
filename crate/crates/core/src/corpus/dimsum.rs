//! Nine-column BIO format with lowercase tags for tokens inside gaps.
//!
//! Columns: offset, token, lemma, POS, MWE tag, parent offset, strength,
//! supersense, sentence id. An `I`/`i` token points at the previous member of
//! its expression through the parent offset.

use std::io::{Read, Write};

use crate::corpus::{blocks, spaces::infer_spaces};
use crate::error::{Error, Result};
use crate::sentence::{check_nesting, AnnotatedSentence, DimsumExtras, FormatExtras, MweSpan, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Outside,
    Begin,
    Inside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Tag {
    kind: Kind,
    lower: bool,
}

fn parse_tag(tag: &str) -> Option<Tag> {
    let (kind, lower) = match tag {
        "O" => (Kind::Outside, false),
        "o" => (Kind::Outside, true),
        "B" => (Kind::Begin, false),
        "b" => (Kind::Begin, true),
        "I" | "Ī" | "Ĩ" => (Kind::Inside, false),
        "i" | "ī" | "ĩ" => (Kind::Inside, true),
        _ => return None,
    };
    Some(Tag { kind, lower })
}

fn canonical_tag(tag: Tag) -> &'static str {
    match (tag.kind, tag.lower) {
        (Kind::Outside, false) => "O",
        (Kind::Outside, true) => "o",
        (Kind::Begin, false) => "B",
        (Kind::Begin, true) => "b",
        (Kind::Inside, false) => "I",
        (Kind::Inside, true) => "i",
    }
}

pub fn read_dimsum<R: Read>(mut r: R) -> Result<Vec<AnnotatedSentence>> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    parse_dimsum(&text)
}

pub fn parse_dimsum(text: &str) -> Result<Vec<AnnotatedSentence>> {
    blocks(text).map(|block| parse_block(&block)).collect()
}

fn parse_block(rows: &[(usize, &str)]) -> Result<AnnotatedSentence> {
    let mut tokens = Vec::with_capacity(rows.len());
    let mut tags = Vec::with_capacity(rows.len());
    let mut parents = Vec::with_capacity(rows.len());
    let mut extras = DimsumExtras::default();

    for (i, &(line, row)) in rows.iter().enumerate() {
        let cols: Vec<&str> = row.split('\t').collect();
        if cols.len() != 9 {
            return Err(Error::parse(line, format!("expected 9 columns, found {}", cols.len())));
        }
        let offset: usize = cols[0]
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid offset {:?}", cols[0])))?;
        if offset != i + 1 {
            return Err(Error::parse(line, format!("expected offset {}, found {offset}", i + 1)));
        }
        let tag = parse_tag(cols[4]).ok_or_else(|| Error::parse(line, format!("unknown MWE tag {:?}", cols[4])))?;
        let parent: usize = cols[5]
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid parent offset {:?}", cols[5])))?;
        tokens.push(Token {
            form: cols[1].to_owned(),
            lemma: Some(cols[2].to_owned()),
            pos: Some(cols[3].to_owned()),
        });
        tags.push(tag);
        parents.push(parent);
        extras.tags.push(cols[4].to_owned());
        extras.strength.push(cols[6].to_owned());
        extras.supersense.push(cols[7].to_owned());
        extras.sentence_id.push(cols[8].to_owned());
    }

    // Link each Inside token to its predecessor.
    let mut next: Vec<Option<usize>> = vec![None; rows.len()];
    for (i, (&tag, &parent)) in tags.iter().zip(&parents).enumerate() {
        let line = rows[i].0;
        if tag.kind != Kind::Inside {
            if parent != 0 {
                return Err(Error::parse(line, "only I/i tokens may have a parent offset"));
            }
            continue;
        }
        if parent == 0 || parent > i {
            return Err(Error::parse(line, format!("dangling parent offset {parent}")));
        }
        let p = parent - 1;
        if tags[p].kind == Kind::Outside || tags[p].lower != tag.lower {
            return Err(Error::parse(line, format!("parent offset {parent} is not a matching B/I token")));
        }
        if next[p].replace(i).is_some() {
            return Err(Error::parse(line, format!("parent offset {parent} already has a continuation")));
        }
    }

    let mut spans = Vec::new();
    for (i, tag) in tags.iter().enumerate() {
        if tag.kind != Kind::Begin {
            continue;
        }
        let mut members = vec![i];
        let mut cur = i;
        while let Some(n) = next[cur] {
            members.push(n);
            cur = n;
        }
        if members.len() < 2 {
            return Err(Error::parse(rows[i].0, "B tag without continuation"));
        }
        spans.push((tag.lower, MweSpan::new(members)?));
    }

    // Lowercase tokens must sit inside a gap of an uppercase expression, and
    // uppercase tokens must not.
    let upper: Vec<&MweSpan> = spans.iter().filter(|(l, _)| !l).map(|(_, s)| s).collect();
    for (i, tag) in tags.iter().enumerate() {
        let in_gap = upper.iter().any(|s| s.gaps().any(|(a, b)| a < i && i < b));
        if tag.lower && !in_gap {
            return Err(Error::parse(rows[i].0, "lowercase tag outside of a gap"));
        }
        if !tag.lower && in_gap {
            return Err(Error::parse(rows[i].0, "uppercase tag inside a gap"));
        }
    }

    let boundaries = infer_spaces(&tokens.iter().map(|t| t.form.as_str()).collect::<Vec<_>>());
    let mut mwes: Vec<MweSpan> = spans.into_iter().map(|(_, s)| s).collect();
    mwes.sort_by_key(|s| s.first());
    let sentence = AnnotatedSentence {
        tokens,
        boundaries,
        mwes,
        extras: FormatExtras::Dimsum(extras),
    };
    check_nesting(&sentence.mwes).map_err(|e| Error::parse(rows[0].0, e.to_string()))?;
    Ok(sentence)
}

fn inexpressible(message: impl Into<String>) -> Error {
    Error::Inexpressible {
        format: "DIMSUM",
        message: message.into(),
    }
}

/// Per-token tag and parent offset for a sentence's spans.
fn encode(sentence: &AnnotatedSentence) -> Result<Vec<(Tag, usize)>> {
    sentence.validate()?;
    let spans = &sentence.mwes;
    check_nesting(spans)?;
    let n = sentence.len();
    let nested: Vec<bool> = spans
        .iter()
        .map(|s| spans.iter().any(|o| o.encloses(s)))
        .collect();
    for (i, s) in spans.iter().enumerate() {
        if s.len() < 2 {
            return Err(inexpressible(format!("single-token span at {}", s.first())));
        }
        if nested[i] && spans.iter().enumerate().any(|(j, o)| nested[j] && o.encloses(s)) {
            return Err(inexpressible("more than one level of gap nesting"));
        }
    }
    let mut in_gap = vec![false; n];
    for (s, _) in spans.iter().zip(&nested).filter(|(_, &nested)| !nested) {
        for (a, b) in s.gaps() {
            in_gap[a + 1..b].iter_mut().for_each(|g| *g = true);
        }
    }
    let mut out: Vec<(Tag, usize)> = in_gap
        .iter()
        .map(|&lower| (Tag { kind: Kind::Outside, lower }, 0))
        .collect();
    for s in spans {
        let lower = in_gap[s.first()];
        for (k, &t) in s.indices().iter().enumerate() {
            out[t] = if k == 0 {
                (Tag { kind: Kind::Begin, lower }, 0)
            } else {
                (Tag { kind: Kind::Inside, lower }, s.indices()[k - 1] + 1)
            };
        }
    }
    Ok(out)
}

pub fn write_dimsum<W: Write>(sentences: &[AnnotatedSentence], mut w: W) -> Result<()> {
    for sentence in sentences {
        let encoded = encode(sentence)?;
        let extras = match &sentence.extras {
            FormatExtras::Dimsum(e) if e.tags.len() == sentence.len() => Some(e),
            _ => None,
        };
        for (i, (token, (tag, parent))) in sentence.tokens.iter().zip(&encoded).enumerate() {
            let original = extras.map(|e| e.tags[i].as_str());
            let tag_text = match original {
                Some(t) if parse_tag(t) == Some(*tag) => t,
                _ => canonical_tag(*tag),
            };
            let col = |f: fn(&DimsumExtras) -> &Vec<String>| extras.map_or("", |e| f(e)[i].as_str());
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                i + 1,
                token.form,
                token.lemma.as_deref().unwrap_or(""),
                token.pos.as_deref().unwrap_or(""),
                tag_text,
                parent,
                col(|e| &e.strength),
                col(|e| &e.supersense),
                col(|e| &e.sentence_id),
            )?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn dimsum_string(sentences: &[AnnotatedSentence]) -> Result<String> {
    let mut buf = Vec::new();
    write_dimsum(sentences, &mut buf)?;
    Ok(String::from_utf8(buf).expect("utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(i: usize, tok: &str, tag: &str, parent: usize) -> String {
        format!("{i}\t{tok}\t{tok}\tNOUN\t{tag}\t{parent}\t\t\ts1\n")
    }

    fn block(rows: &[(&str, &str, usize)]) -> String {
        let mut s: String = rows
            .iter()
            .enumerate()
            .map(|(i, (tok, tag, p))| row(i + 1, tok, tag, *p))
            .collect();
        s.push('\n');
        s
    }

    fn spans(text: &str) -> Vec<Vec<usize>> {
        parse_dimsum(text).unwrap()[0]
            .mwes
            .iter()
            .map(|s| s.indices().to_vec())
            .collect()
    }

    #[test]
    fn minimal_pair() {
        assert_eq!(spans(&block(&[("oil", "B", 0), ("change", "I", 1)])), vec![vec![0, 1]]);
    }

    #[test]
    fn gap_with_lowercase_outside() {
        let text = block(&[("taken", "B", 0), ("her", "o", 0), ("in", "I", 1)]);
        assert_eq!(spans(&text), vec![vec![0, 2]]);
        assert_eq!(dimsum_string(&parse_dimsum(&text).unwrap()).unwrap(), text);
    }

    #[test]
    fn all_outside() {
        assert!(spans(&block(&[("a", "O", 0), ("b", "O", 0)])).is_empty());
    }

    #[test]
    fn nested_span_in_gap() {
        let text = block(&[
            ("taken", "B", 0),
            ("her", "o", 0),
            ("Ford", "b", 0),
            ("Fusion", "i", 3),
            ("in", "I", 1),
        ]);
        assert_eq!(spans(&text), vec![vec![0, 4], vec![2, 3]]);
        assert_eq!(dimsum_string(&parse_dimsum(&text).unwrap()).unwrap(), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let skip = "1\ta\ta\tX\tO\t0\t\t\ts\n3\tb\tb\tX\tO\t0\t\t\ts\n\n";
        assert!(matches!(parse_dimsum(skip), Err(Error::Parse { line: 2, .. })));
        let dangling = block(&[("a", "B", 0), ("b", "I", 5)]);
        assert!(matches!(parse_dimsum(&dangling), Err(Error::Parse { line: 2, .. })));
        let stray_lower = block(&[("a", "O", 0), ("b", "o", 0)]);
        assert!(matches!(parse_dimsum(&stray_lower), Err(Error::Parse { line: 2, .. })));
        let upper_in_gap = block(&[("a", "B", 0), ("b", "O", 0), ("c", "I", 1)]);
        assert!(parse_dimsum(&upper_in_gap).is_err());
        let lonely_b = block(&[("a", "B", 0), ("b", "O", 0)]);
        assert!(parse_dimsum(&lonely_b).is_err());
        assert!(parse_dimsum("1\ttoo\tfew\n\n").is_err());
    }

    #[test]
    fn preserves_strength_variants() {
        let text = block(&[("a", "B", 0), ("b", "Ī", 1), ("c", "Ĩ", 2)]);
        assert_eq!(dimsum_string(&parse_dimsum(&text).unwrap()).unwrap(), text);
    }

    #[test]
    fn writes_fresh_spans() {
        let mut s = AnnotatedSentence::from_forms(["a", "b", "c"]);
        s.mwes = vec![MweSpan::new(vec![0, 2]).unwrap()];
        let out = dimsum_string(&[s.clone()]).unwrap();
        assert_eq!(out, "1\ta\t\t\tB\t0\t\t\t\n2\tb\t\t\to\t0\t\t\t\n3\tc\t\t\tI\t1\t\t\t\n\n");
        s.mwes = vec![MweSpan::new(vec![1]).unwrap()];
        assert!(matches!(dimsum_string(&[s]), Err(Error::Inexpressible { .. })));
    }

    #[test]
    fn rejects_double_nesting() {
        let mut s = AnnotatedSentence::from_forms(["a", "b", "c", "d", "e", "f", "g"]);
        s.mwes = vec![
            MweSpan::new(vec![0, 6]).unwrap(),
            MweSpan::new(vec![1, 5]).unwrap(),
            MweSpan::new(vec![2, 3]).unwrap(),
        ];
        assert!(matches!(dimsum_string(&[s]), Err(Error::Inexpressible { .. })));
    }
}
