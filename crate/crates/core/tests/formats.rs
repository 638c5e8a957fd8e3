mod common;

use std::fs;

use mwe_partition::corpus::dimsum::{dimsum_string, parse_dimsum};
use mwe_partition::corpus::parseme::{parse_parseme, parseme_string};
use mwe_partition::corpus::support::parse_support;
use mwe_partition::corpus::{parse_raw, CorpusFormat, SupportKind};
use mwe_partition::{AnnotatedSentence, Error, MweSpan};
use proptest::prelude::*;

use common::fixture;

fn spans(s: &AnnotatedSentence) -> Vec<Vec<usize>> {
    s.mwes.iter().map(|m| m.indices().to_vec()).collect()
}

#[test]
fn dimsum_fixture_contents() {
    let s = parse_dimsum(&fs::read_to_string(fixture("sample.dimsum")).unwrap()).unwrap();
    assert_eq!(s.len(), 3);
    assert_eq!(spans(&s[0]), vec![vec![3, 8], vec![5, 6, 7], vec![12, 13]]);
    assert_eq!(spans(&s[1]), vec![vec![1, 3]]);
    assert_eq!(s[0].boundaries[13], "");
    assert_eq!(s[0].tokens[3].pos.as_deref(), Some("VERB"));
}

#[test]
fn parseme_fixture_contents() {
    let s = parse_parseme(&fs::read_to_string(fixture("sample.parseme")).unwrap()).unwrap();
    assert_eq!(spans(&s[0]), vec![vec![2, 3, 4, 5]]);
    assert_eq!(s[0].boundaries[0], "");
    assert_eq!(spans(&s[1]), vec![vec![1, 2, 3], vec![1, 3]]);
    assert_eq!(s[1].mwes[0].category.as_deref(), Some("LVC.full"));
    assert_eq!(s[1].len(), 8);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let text = "1\ta\ta\tX\tO\t0\t\t\t\n2\tb\tb\tX\tI\t0\t\t\t\n\n";
    assert!(matches!(parse_dimsum(text), Err(Error::Parse { line: 2, .. })));
    let text = "1\ta\t_\t_\n\n1\tb\t_\t2\n\n";
    assert!(matches!(parse_parseme(text), Err(Error::Parse { line: 3, .. })));
}

#[test]
fn dimsum_cannot_express_overlaps() {
    let mut s = AnnotatedSentence::from_forms(["a", "b", "c"]);
    s.mwes = vec![MweSpan::new(vec![0, 1]).unwrap(), MweSpan::new(vec![1, 2]).unwrap()];
    assert!(dimsum_string(&[s]).is_err());
}

#[test]
fn raw_and_support_inputs() {
    let raw = parse_raw("He said \" hi \" .\n\nOk\n");
    assert_eq!(raw.len(), 2);
    assert_eq!(raw[0].boundaries, vec![" ", " ", "", "", ""]);

    let lex = parse_support("oil change\nNew York City\n", SupportKind::Lexicon).unwrap();
    assert_eq!(lex.forms.len(), 2);
    let ctx = parse_support("I got an [[oil change]] today.\n", SupportKind::Context).unwrap();
    assert_eq!(spans(&ctx.sentences[0]), vec![vec![3, 4]]);
    assert!(matches!(
        parse_support("fine\n[[open\n", SupportKind::Context),
        Err(Error::Parse { line: 2, .. })
    ));
}

/// Sentences whose MWEs are contiguous, disjoint and at least two long, with
/// optional gappy spans enclosing nothing else.
fn expressible() -> impl Strategy<Value = Vec<AnnotatedSentence>> {
    let sentence = (2usize..10, prop::collection::vec(0u8..4, 10), any::<bool>()).prop_map(|(n, marks, gappy)| {
        let mut s = AnnotatedSentence::from_forms((0..n).map(|i| format!("w{}", marks[i] as usize + i)));
        let mut i = 0;
        while i + 1 < n {
            if marks[i] == 0 {
                let end = (i + 2 + marks[i + 1] as usize % 2).min(n);
                s.mwes.push(MweSpan::contiguous(i..end).unwrap());
                i = end;
            } else if gappy && marks[i] == 1 && i + 2 < n && marks[i + 1] != 0 {
                s.mwes.push(MweSpan::new(vec![i, i + 2]).unwrap());
                i += 3;
            } else {
                i += 1;
            }
        }
        s
    });
    prop::collection::vec(sentence, 1..4)
}

proptest! {
    #[test]
    fn written_corpora_read_back(sentences in expressible()) {
        for format in [CorpusFormat::Dimsum, CorpusFormat::Parseme] {
            let text = format.render(&sentences).unwrap();
            let back = format.parse(&text).unwrap();
            prop_assert_eq!(back.len(), sentences.len());
            for (a, b) in sentences.iter().zip(&back) {
                prop_assert_eq!(spans(a), spans(b));
            }
            prop_assert_eq!(format.render(&back).unwrap(), text);
        }
    }
}

#[test]
fn parseme_output_reparses_identically() {
    let text = fs::read_to_string(fixture("sample.parseme")).unwrap();
    let once = parseme_string(&parse_parseme(&text).unwrap()).unwrap();
    assert_eq!(parseme_string(&parse_parseme(&once).unwrap()).unwrap(), once);
}
