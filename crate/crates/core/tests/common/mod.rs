#![allow(dead_code)]

use std::path::PathBuf;

use mwe_partition::{AnnotatedSentence, MweSpan, Token};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn sentence(forms: &[&str], spans: &[&[usize]]) -> AnnotatedSentence {
    let mut s = AnnotatedSentence::from_forms(forms.iter().copied());
    s.mwes = spans.iter().map(|ix| MweSpan::new(ix.to_vec()).unwrap()).collect();
    s
}

/// Tags every token with a POS derived from its first letter.
pub fn with_pos(mut s: AnnotatedSentence) -> AnnotatedSentence {
    for t in &mut s.tokens {
        let tag = format!("T{}", t.form.chars().next().unwrap_or('x').to_ascii_uppercase());
        *t = Token::with_pos(t.form.clone(), tag);
    }
    s
}

/// The gappy example: "taken ... in", "07' Ford Fusion", "oil change".
pub fn ford_fusion() -> AnnotatedSentence {
    let forms = [
        "My", "wife", "had", "taken", "her", "07'", "Ford", "Fusion", "in", "for", "a", "routine", "oil", "change", ".",
    ];
    let mut s = sentence(&forms, &[&[3, 8], &[5, 6, 7], &[12, 13]]);
    s.boundaries[13] = String::new();
    s
}

const MWES: [[&str; 2]; 5] = [
    ["oil", "change"],
    ["New", "York"],
    ["take", "off"],
    ["hot", "dog"],
    ["ice", "cream"],
];

/// Twenty sentences whose boundary statistics never conflict: every MWE pair
/// is always bound, every other triple always broken.
pub fn unambiguous_corpus() -> Vec<AnnotatedSentence> {
    let subjects = ["Ann", "Bob", "Cid", "Dee"];
    let mut out = Vec::new();
    for (i, subject) in subjects.iter().enumerate() {
        for (j, [a, b]) in MWES.iter().enumerate() {
            if (i + j) % 2 == 0 {
                out.push(sentence(&[subject, "saw", "the", a, b, "today"], &[&[3, 4]]));
            } else {
                out.push(sentence(&[a, b, "for", subject], &[&[0, 1]]));
            }
        }
    }
    out
}

/// Random sentences over a small vocabulary with contiguous MWEs drawn from a
/// fixed pair list, plus POS tags. A quarter of pair occurrences are left
/// unannotated so the threshold surface has an interior optimum.
pub fn synthetic_corpus(n_sentences: usize, seed: u64) -> Vec<AnnotatedSentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab: Vec<String> = (0..40).map(|i| format!("w{i}")).collect();
    let pairs: Vec<[String; 2]> = (0..8).map(|i| [format!("m{i}a"), format!("m{i}b")]).collect();
    (0..n_sentences)
        .map(|_| {
            let mut forms: Vec<String> = Vec::new();
            let mut spans = Vec::new();
            let len = rng.gen_range(4..12);
            while forms.len() < len {
                if rng.gen_bool(0.2) {
                    let [a, b] = pairs.choose(&mut rng).unwrap().clone();
                    if rng.gen_bool(0.75) {
                        spans.push(MweSpan::contiguous(forms.len()..forms.len() + 2).unwrap());
                    }
                    forms.push(a);
                    forms.push(b);
                } else {
                    forms.push(vocab.choose(&mut rng).unwrap().clone());
                }
            }
            let mut s = AnnotatedSentence::from_forms(forms);
            s.mwes = spans;
            with_pos(s)
        })
        .collect()
}

/// Sentences with about `n_tokens` tokens in total, vocabulary scaled so the
/// model sees unseen triples as often as seen ones.
pub fn sized_corpus(n_tokens: usize, seed: u64) -> Vec<AnnotatedSentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut total = 0;
    while total < n_tokens {
        let len = 20.min(n_tokens - total).max(1);
        let forms: Vec<String> = (0..len).map(|_| format!("v{}", rng.gen_range(0..2000))).collect();
        total += len;
        out.push(AnnotatedSentence::from_forms(forms));
    }
    out
}
