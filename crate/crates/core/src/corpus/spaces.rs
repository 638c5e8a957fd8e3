//! Space inference for corpora that do not record whitespace.
//!
//! Every token is assumed to have a space on both sides, except:
//! openers and odd-numbered quotes keep only their left space, while
//! punctuation, closers and even-numbered quotes keep only their right space.
//! A boundary is empty as soon as either neighbour suppresses it.

use std::collections::HashMap;

use unicode_general_category::{get_general_category, GeneralCategory};

const STRAIGHT_QUOTES: [char; 2] = ['"', '\''];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Both,
    /// Space on the left only: suppresses the boundary to its right.
    LeftOnly,
    /// Space on the right only: suppresses the boundary to its left.
    RightOnly,
}

fn all_in(token: &str, pred: impl Fn(GeneralCategory) -> bool) -> bool {
    !token.is_empty() && token.chars().all(|c| pred(get_general_category(c)))
}

fn is_punctuation(cat: GeneralCategory) -> bool {
    use GeneralCategory::*;
    matches!(
        cat,
        ConnectorPunctuation
            | DashPunctuation
            | OpenPunctuation
            | ClosePunctuation
            | InitialPunctuation
            | FinalPunctuation
            | OtherPunctuation
    )
}

/// The straight quote a token consists of, if any.
fn quote_char(token: &str) -> Option<char> {
    let first = token.chars().next()?;
    (STRAIGHT_QUOTES.contains(&first) && token.chars().all(|c| c == first)).then_some(first)
}

fn classify(token: &str, parity: &mut HashMap<char, usize>) -> Side {
    use GeneralCategory::*;
    if let Some(q) = quote_char(token) {
        let n = parity.entry(q).or_insert(0);
        *n += 1;
        return if *n % 2 == 1 { Side::LeftOnly } else { Side::RightOnly };
    }
    if all_in(token, |c| matches!(c, OpenPunctuation | InitialPunctuation)) {
        Side::LeftOnly
    } else if all_in(token, is_punctuation) {
        Side::RightOnly
    } else {
        Side::Both
    }
}

/// Returns `tokens.len() - 1` boundary surfaces, each `" "` or `""`.
/// Quote parity is counted per quote character within this token list.
pub fn infer_spaces<S: AsRef<str>>(tokens: &[S]) -> Vec<String> {
    let mut parity = HashMap::new();
    let sides: Vec<Side> = tokens.iter().map(|t| classify(t.as_ref(), &mut parity)).collect();
    sides
        .windows(2)
        .map(|w| {
            let suppressed = w[0] == Side::LeftOnly || w[1] == Side::RightOnly;
            if suppressed { "" } else { " " }.to_owned()
        })
        .collect()
}

/// Concatenates tokens with their boundary surfaces.
pub fn render<S: AsRef<str>>(tokens: &[S], boundaries: &[String]) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            out.push_str(&boundaries[i - 1]);
        }
        out.push_str(t.as_ref());
    }
    out
}
