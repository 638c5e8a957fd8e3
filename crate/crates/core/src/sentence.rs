//! Annotated sentences and multiword spans, shared by the readers, the
//! segmenter and the scorers.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::partition::BoundaryState;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Token {
    pub form: String,
    pub lemma: Option<String>,
    pub pos: Option<String>,
}

impl Token {
    pub fn new(form: impl Into<String>) -> Self {
        Token {
            form: form.into(),
            lemma: None,
            pos: None,
        }
    }

    pub fn with_pos(form: impl Into<String>, pos: impl Into<String>) -> Self {
        Token {
            form: form.into(),
            lemma: None,
            pos: Some(pos.into()),
        }
    }
}

/// A multiword expression as a strictly increasing list of 0-based token
/// indices. Gaps are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MweSpan {
    indices: Vec<usize>,
    /// Corpus category label (e.g. `LVC`); carried through I/O, otherwise unused.
    pub category: Option<String>,
}

impl MweSpan {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidSpans("empty span".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpans(format!(
                "span indices {indices:?} are not strictly increasing"
            )));
        }
        Ok(MweSpan {
            indices,
            category: None,
        })
    }

    pub fn with_category(mut self, category: impl Into<String>) -> Self {
        self.category = Some(category.into());
        self
    }

    /// Contiguous span `range`.
    pub fn contiguous(range: Range<usize>) -> Result<Self> {
        Self::new(range.collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn first(&self) -> usize {
        self.indices[0]
    }

    pub fn last(&self) -> usize {
        *self.indices.last().expect("non-empty")
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_gappy(&self) -> bool {
        self.last() - self.first() + 1 != self.indices.len()
    }

    /// Maximal contiguous runs of the span.
    pub fn runs(&self) -> Vec<Range<usize>> {
        let mut runs = Vec::new();
        let mut start = self.indices[0];
        let mut prev = start;
        for &i in &self.indices[1..] {
            if i != prev + 1 {
                runs.push(start..prev + 1);
                start = i;
            }
            prev = i;
        }
        runs.push(start..prev + 1);
        runs
    }

    /// Consecutive member pairs separated by at least one non-member token.
    pub fn gaps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.indices
            .windows(2)
            .filter(|w| w[1] > w[0] + 1)
            .map(|w| (w[0], w[1]))
    }

    /// True when `other` lies strictly inside one of this span's gaps.
    pub fn encloses(&self, other: &MweSpan) -> bool {
        self.gaps()
            .any(|(a, b)| a < other.first() && other.last() < b)
    }
}

/// Format-specific columns kept so that writers can reproduce their input.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum FormatExtras {
    #[default]
    None,
    Dimsum(DimsumExtras),
    Parseme(ParsemeExtras),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DimsumExtras {
    /// Original MWE tag per token, e.g. `B` or `Ī`.
    pub tags: Vec<String>,
    pub strength: Vec<String>,
    pub supersense: Vec<String>,
    pub sentence_id: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParsemeExtras {
    /// Comment lines preceding the first token, verbatim.
    pub comments: Vec<String>,
    /// Multiword-token range rows (`3-4 ...`), keyed by the index of the token
    /// they precede.
    pub range_rows: Vec<(usize, String)>,
    /// Whether the final token carried `nsp`.
    pub last_nsp: bool,
}

/// A tokenised sentence with its inter-token boundary surfaces and its MWEs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AnnotatedSentence {
    pub tokens: Vec<Token>,
    /// `boundaries[i]` separates `tokens[i]` from `tokens[i + 1]`.
    pub boundaries: Vec<String>,
    pub mwes: Vec<MweSpan>,
    pub extras: FormatExtras,
}

impl AnnotatedSentence {
    pub fn new(tokens: Vec<Token>, boundaries: Vec<String>, mwes: Vec<MweSpan>) -> Result<Self> {
        let s = AnnotatedSentence {
            tokens,
            boundaries,
            mwes,
            extras: FormatExtras::None,
        };
        s.validate()?;
        Ok(s)
    }

    /// Tokens separated by single spaces, no MWEs.
    pub fn from_forms<S: Into<String>>(forms: impl IntoIterator<Item = S>) -> Self {
        let tokens: Vec<Token> = forms.into_iter().map(Token::new).collect();
        let boundaries = vec![" ".to_owned(); tokens.len().saturating_sub(1)];
        AnnotatedSentence {
            tokens,
            boundaries,
            mwes: Vec::new(),
            extras: FormatExtras::None,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn forms(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.form.as_str())
    }

    /// Checks the boundary count and that span indices are in range.
    pub fn validate(&self) -> Result<()> {
        if self.tokens.is_empty() {
            return Err(Error::Malformed("sentence has no tokens".into()));
        }
        if self.boundaries.len() + 1 != self.tokens.len() {
            return Err(Error::Malformed(format!(
                "{} tokens need {} boundaries, got {}",
                self.tokens.len(),
                self.tokens.len() - 1,
                self.boundaries.len()
            )));
        }
        for span in &self.mwes {
            if span.last() >= self.tokens.len() {
                return Err(Error::InvalidSpans(format!(
                    "span {:?} exceeds sentence length {}",
                    span.indices(),
                    self.tokens.len()
                )));
            }
        }
        Ok(())
    }
}

/// Checks that spans are pairwise disjoint, except that a span may sit
/// entirely inside a gap of another.
pub fn check_nesting(spans: &[MweSpan]) -> Result<()> {
    for (i, a) in spans.iter().enumerate() {
        for b in &spans[i + 1..] {
            let (a, b) = if a.first() <= b.first() { (a, b) } else { (b, a) };
            if a.indices().iter().any(|&t| b.contains(t)) {
                return Err(Error::InvalidSpans(format!(
                    "spans {:?} and {:?} share a token",
                    a.indices(),
                    b.indices()
                )));
            }
            if b.first() < a.last() && !a.encloses(b) {
                return Err(Error::InvalidSpans(format!(
                    "spans {:?} and {:?} cross",
                    a.indices(),
                    b.indices()
                )));
            }
        }
    }
    Ok(())
}

/// Boundary-level view of a set of spans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryView {
    pub states: Vec<BoundaryState>,
    /// Links between non-adjacent consecutive members of a span.
    pub gaps: Vec<(usize, usize)>,
}

/// Adjacent span members bind the boundary between them; every other
/// boundary is broken. Non-adjacent links are reported as gap attachments.
pub fn spans_to_boundary_states(n_tokens: usize, spans: &[MweSpan]) -> Result<BoundaryView> {
    if n_tokens == 0 {
        return Err(Error::Malformed("sentence has no tokens".into()));
    }
    if let Some(s) = spans.iter().find(|s| s.last() >= n_tokens) {
        return Err(Error::InvalidSpans(format!(
            "span {:?} exceeds sentence length {n_tokens}",
            s.indices()
        )));
    }
    check_nesting(spans)?;
    let mut states = vec![BoundaryState::Broken; n_tokens - 1];
    let mut gaps = Vec::new();
    for span in spans {
        for w in span.indices().windows(2) {
            if w[1] == w[0] + 1 {
                states[w[0]] = BoundaryState::Bound;
            } else {
                gaps.push((w[0], w[1]));
            }
        }
    }
    gaps.sort_unstable();
    Ok(BoundaryView { states, gaps })
}

/// Inverse of [`spans_to_boundary_states`]: connected components of bound
/// boundaries and gap links with two or more members.
pub fn spans_from_boundary_states(view: &BoundaryView) -> Vec<MweSpan> {
    let n = view.states.len() + 1;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut union = |a: usize, b: usize| {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    };
    for (i, s) in view.states.iter().enumerate() {
        if s.is_bound() {
            union(i, i + 1);
        }
    }
    for &(a, b) in &view.gaps {
        union(a, b);
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    groups
        .into_iter()
        .filter(|g| g.len() >= 2)
        .map(|g| MweSpan::new(g).expect("indices are increasing"))
        .collect()
}
