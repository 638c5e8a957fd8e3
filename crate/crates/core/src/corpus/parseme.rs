//! Four-column format with indexed MWE codes and no-space flags.
//!
//! Columns: rank, surface, `nsp` or `_`, and `_` or a `;`-joined list of MWE
//! codes. The first token of expression `k` carries `k:CATEGORY`, later ones
//! a bare `k`.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use crate::corpus::blocks;
use crate::error::{Error, Result};
use crate::sentence::{AnnotatedSentence, FormatExtras, MweSpan, ParsemeExtras, Token};

/// Category written for spans that have none.
pub const DEFAULT_CATEGORY: &str = "OTH";

pub fn read_parseme<R: Read>(mut r: R) -> Result<Vec<AnnotatedSentence>> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    parse_parseme(&text)
}

pub fn parse_parseme(text: &str) -> Result<Vec<AnnotatedSentence>> {
    blocks(text).map(|block| parse_block(&block)).collect()
}

fn parse_block(rows: &[(usize, &str)]) -> Result<AnnotatedSentence> {
    let mut extras = ParsemeExtras::default();
    let mut tokens = Vec::new();
    let mut nsp = Vec::new();
    let mut mwes: BTreeMap<usize, (Vec<usize>, Option<String>)> = BTreeMap::new();

    for &(line, row) in rows {
        if row.starts_with('#') {
            if !tokens.is_empty() {
                return Err(Error::parse(line, "comment after the first token"));
            }
            extras.comments.push(row.to_owned());
            continue;
        }
        let cols: Vec<&str> = row.split('\t').collect();
        if cols.len() != 4 {
            return Err(Error::parse(line, format!("expected 4 columns, found {}", cols.len())));
        }
        if cols[0].contains('-') {
            extras.range_rows.push((tokens.len(), row.to_owned()));
            continue;
        }
        let rank: usize = cols[0]
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid rank {:?}", cols[0])))?;
        if rank != tokens.len() + 1 {
            return Err(Error::parse(line, format!("expected rank {}, found {rank}", tokens.len() + 1)));
        }
        let index = tokens.len();
        tokens.push(Token::new(cols[1]));
        nsp.push(match cols[2] {
            "nsp" => true,
            "_" => false,
            other => return Err(Error::parse(line, format!("invalid space flag {other:?}"))),
        });
        if cols[3] == "_" {
            continue;
        }
        for code in cols[3].split(';') {
            let (id, category) = match code.split_once(':') {
                Some((id, cat)) => (id, Some(cat)),
                None => (code, None),
            };
            let id: usize = id
                .parse()
                .ok()
                .filter(|&k| k > 0)
                .ok_or_else(|| Error::parse(line, format!("invalid MWE code {code:?}")))?;
            match (mwes.get_mut(&id), category) {
                (None, Some(cat)) => {
                    mwes.insert(id, (vec![index], Some(cat.to_owned())));
                }
                (None, None) => {
                    return Err(Error::parse(line, format!("MWE {id} used before it is introduced")));
                }
                (Some(_), Some(_)) => {
                    return Err(Error::parse(line, format!("MWE {id} introduced twice")));
                }
                (Some((members, _)), None) => {
                    if members.last() == Some(&index) {
                        return Err(Error::parse(line, format!("MWE {id} repeated on one token")));
                    }
                    members.push(index);
                }
            }
        }
    }
    let Some(&(first_line, _)) = rows.first() else {
        return Err(Error::parse(0, "empty block"));
    };
    if tokens.is_empty() {
        return Err(Error::parse(first_line, "sentence has no tokens"));
    }
    extras.last_nsp = *nsp.last().expect("non-empty");
    let boundaries = nsp[..nsp.len() - 1]
        .iter()
        .map(|&n| if n { String::new() } else { " ".to_owned() })
        .collect();
    let mwes = mwes
        .into_values()
        .map(|(members, cat)| {
            let span = MweSpan::new(members)?;
            Ok(match cat {
                Some(c) => span.with_category(c),
                None => span,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AnnotatedSentence {
        tokens,
        boundaries,
        mwes,
        extras: FormatExtras::Parseme(extras),
    })
}

pub fn write_parseme<W: Write>(sentences: &[AnnotatedSentence], mut w: W) -> Result<()> {
    for sentence in sentences {
        sentence.validate()?;
        let n = sentence.len();
        let mut codes: Vec<Vec<String>> = vec![Vec::new(); n];
        for (k, span) in sentence.mwes.iter().enumerate() {
            for (j, &t) in span.indices().iter().enumerate() {
                codes[t].push(if j == 0 {
                    format!("{}:{}", k + 1, span.category.as_deref().unwrap_or(DEFAULT_CATEGORY))
                } else {
                    (k + 1).to_string()
                });
            }
        }
        let extras = match &sentence.extras {
            FormatExtras::Parseme(e) => Some(e),
            _ => None,
        };
        if let Some(e) = extras {
            for c in &e.comments {
                writeln!(w, "{c}")?;
            }
        }
        let mut ranges = extras.map(|e| e.range_rows.iter().peekable());
        for (i, token) in sentence.tokens.iter().enumerate() {
            if let Some(ranges) = ranges.as_mut() {
                while let Some((_, row)) = ranges.next_if(|(at, _)| *at == i) {
                    writeln!(w, "{row}")?;
                }
            }
            let nsp = if i + 1 < n {
                sentence.boundaries[i].is_empty()
            } else {
                extras.is_some_and(|e| e.last_nsp)
            };
            let mwe = if codes[i].is_empty() {
                "_".to_owned()
            } else {
                codes[i].join(";")
            };
            writeln!(
                w,
                "{}\t{}\t{}\t{}",
                i + 1,
                token.form,
                if nsp { "nsp" } else { "_" },
                mwe
            )?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn parseme_string(sentences: &[AnnotatedSentence]) -> Result<String> {
    let mut buf = Vec::new();
    write_parseme(sentences, &mut buf)?;
    Ok(String::from_utf8(buf).expect("utf-8"))
}

/// Attaches UPOS tags (and lemmas where missing) from a CoNLL-U companion
/// file. Multiword-token ranges and empty nodes are skipped; sentence and
/// token counts must line up.
pub fn attach_conllu_pos(sentences: &mut [AnnotatedSentence], conllu: &str) -> Result<()> {
    let mut count = 0;
    for (si, block) in blocks(conllu).enumerate() {
        let Some(sentence) = sentences.get_mut(si) else {
            return Err(Error::LengthMismatch(format!(
                "POS file has more sentences than the corpus ({})",
                sentences.len()
            )));
        };
        let mut ti = 0;
        for &(line, row) in &block {
            if row.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = row.split('\t').collect();
            if cols.len() < 4 {
                return Err(Error::parse(line, "expected at least 4 CoNLL-U columns"));
            }
            if cols[0].contains('-') || cols[0].contains('.') {
                continue;
            }
            let Some(token) = sentence.tokens.get_mut(ti) else {
                return Err(Error::LengthMismatch(format!(
                    "sentence {}: POS file has more tokens than the corpus",
                    si + 1
                )));
            };
            token.pos = Some(cols[3].to_owned());
            if token.lemma.is_none() {
                token.lemma = Some(cols[2].to_owned());
            }
            ti += 1;
        }
        if ti != sentence.len() {
            return Err(Error::LengthMismatch(format!(
                "sentence {}: corpus has {} tokens, POS file {ti}",
                si + 1,
                sentence.len()
            )));
        }
        count += 1;
    }
    if count != sentences.len() {
        return Err(Error::LengthMismatch(format!(
            "corpus has {} sentences, POS file {count}",
            sentences.len()
        )));
    }
    Ok(())
}
