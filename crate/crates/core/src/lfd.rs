//! Longest-first-defined pruning over a lexicon of known multiword forms.

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};
use std::ops::Range;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tsv;

pub const LEXICON_HEADER: &str = "#boundary-seg-lexicon v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Gold,
    Support,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Gold => "GOLD",
            Provenance::Support => "SUPPORT",
        })
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "GOLD" => Ok(Provenance::Gold),
            "SUPPORT" => Ok(Provenance::Support),
            other => Err(format!("unknown provenance {other:?}")),
        }
    }
}

/// Set of multiword forms, each stored as the single-space join of its
/// tokens. Single-token forms are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    forms: HashMap<String, Provenance>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a form. Returns `false` (and stores nothing) for fewer than two
    /// tokens. Gold provenance wins over support.
    pub fn insert<S: AsRef<str>>(&mut self, tokens: &[S], provenance: Provenance) -> bool {
        if tokens.len() < 2 {
            return false;
        }
        let form = join(tokens);
        let entry = self.forms.entry(form).or_insert(provenance);
        if provenance == Provenance::Gold {
            *entry = Provenance::Gold;
        }
        true
    }

    pub fn contains(&self, form: &str) -> bool {
        self.forms.contains_key(form)
    }

    pub fn contains_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> bool {
        tokens.len() >= 2 && self.forms.contains_key(&join(tokens))
    }

    pub fn provenance(&self, form: &str) -> Option<Provenance> {
        self.forms.get(form).copied()
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// Forms in lexicographic order.
    pub fn entries(&self) -> Vec<(&str, Provenance)> {
        let mut entries: Vec<_> = self.forms.iter().map(|(f, p)| (f.as_str(), *p)).collect();
        entries.sort_unstable();
        entries
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{LEXICON_HEADER}")?;
        for (form, provenance) in self.entries() {
            writeln!(w, "{provenance}\t{}", tsv::escape(form))?;
        }
        Ok(())
    }

    pub fn to_tsv(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("utf-8")
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        Self::from_tsv(&text)
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut lines = tsv::lines(text);
        match lines.next() {
            Some((_, LEXICON_HEADER)) => {}
            _ => return Err(Error::parse(1, format!("expected header {LEXICON_HEADER:?}"))),
        }
        let mut lexicon = Lexicon::new();
        for (n, line) in lines {
            let (provenance, form) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(n, "expected provenance<TAB>form"))?;
            let provenance: Provenance = provenance.parse().map_err(|e| Error::parse(n, e))?;
            let form = tsv::unescape(form, n)?;
            if form.split(' ').count() < 2 {
                return Err(Error::parse(n, "lexicon forms need at least two tokens"));
            }
            if lexicon.forms.insert(form, provenance).is_some() {
                return Err(Error::parse(n, "duplicate form"));
            }
        }
        Ok(lexicon)
    }
}

fn join<S: AsRef<str>>(tokens: &[S]) -> String {
    let mut form = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            form.push(' ');
        }
        form.push_str(t.as_ref());
    }
    form
}

/// Builds a lexicon from gold and support forms. Returns the lexicon and the
/// number of entries skipped for having fewer than two tokens.
pub fn build_lexicon<S: AsRef<str>>(gold: &[Vec<S>], support: &[Vec<S>]) -> (Lexicon, usize) {
    let mut lexicon = Lexicon::new();
    let mut skipped = 0;
    for form in gold {
        if !lexicon.insert(form, Provenance::Gold) {
            skipped += 1;
        }
    }
    for form in support {
        if !lexicon.insert(form, Provenance::Support) {
            skipped += 1;
        }
    }
    (lexicon, skipped)
}

/// Splits `tokens` left to right, each time clipping off the longest prefix
/// whose joined form is in `lex`, or the first token alone when no prefix is.
/// Returned ranges are contiguous and cover `tokens`.
pub fn lfd_ranges<S: AsRef<str>>(tokens: &[S], lex: &Lexicon) -> Vec<Range<usize>> {
    let mut pieces = Vec::new();
    let mut start = 0;
    while start < tokens.len() {
        let remaining = tokens.len() - start;
        let take = (2..=remaining)
            .rev()
            .find(|&len| lex.contains_tokens(&tokens[start..start + len]))
            .unwrap_or(1);
        pieces.push(start..start + take);
        start += take;
    }
    pieces
}

/// [`lfd_ranges`] rendered as space-joined forms.
pub fn lfd_prune<S: AsRef<str>>(tokens: &[S], lex: &Lexicon) -> Vec<String> {
    lfd_ranges(tokens, lex)
        .into_iter()
        .map(|r| join(&tokens[r]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex(forms: &[&str]) -> Lexicon {
        let gold: Vec<Vec<&str>> = forms.iter().map(|f| f.split(' ').collect()).collect();
        build_lexicon::<&str>(&gold, &[]).0
    }

    #[test]
    fn take_out_there() {
        let l = lex(&["take out", "out there"]);
        assert_eq!(lfd_prune(&["take", "out", "there"], &l), ["take out", "there"]);
    }

    #[test]
    fn fallbacks() {
        assert_eq!(lfd_prune(&["hello"], &lex(&["a b"])), ["hello"]);
        assert_eq!(lfd_prune(&["a", "b", "c"], &Lexicon::new()), ["a", "b", "c"]);
        assert_eq!(lfd_prune(&["a", "b", "c"], &lex(&["a b c"])), ["a b c"]);
        assert!(lfd_prune::<&str>(&[], &lex(&["a b"])).is_empty());
    }

    #[test]
    fn longest_prefix_wins_over_shorter() {
        let l = lex(&["a b", "a b c", "c d"]);
        assert_eq!(lfd_prune(&["a", "b", "c", "d"], &l), ["a b c", "d"]);
    }

    #[test]
    fn build_lexicon_rules() {
        let (l, skipped) = build_lexicon(&[vec!["oil", "change"]], &[]);
        assert_eq!(l.provenance("oil change"), Some(Provenance::Gold));
        assert_eq!(skipped, 0);

        let (l, skipped) = build_lexicon(&[vec!["taken"], vec!["in"]], &[]);
        assert!(l.is_empty());
        assert_eq!(skipped, 2);

        let (l, _) = build_lexicon(&[vec!["a", "b"]], &[vec!["a", "b"]]);
        assert_eq!(l.len(), 1);
        assert_eq!(l.provenance("a b"), Some(Provenance::Gold));

        let (l, _) = build_lexicon(&[], &[vec!["x", "y"]]);
        assert_eq!(l.provenance("x y"), Some(Provenance::Support));
    }

    #[test]
    fn persistence_round_trip() {
        let (l, _) = build_lexicon(&[vec!["oil", "change"], vec!["take", "out"]], &[vec!["New", "York"]]);
        let text = l.to_tsv();
        assert_eq!(
            text,
            "#boundary-seg-lexicon v1\nSUPPORT\tNew York\nGOLD\toil change\nGOLD\ttake out\n"
        );
        let back = Lexicon::from_tsv(&text).unwrap();
        assert_eq!(back, l);
        assert_eq!(back.to_tsv(), text);
        assert!(Lexicon::from_tsv("#boundary-seg-lexicon v1\nGOLD\tsingle\n").is_err());
        assert!(Lexicon::from_tsv("nope\n").is_err());
    }
}
