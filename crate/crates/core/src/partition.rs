//! The word/boundary sequence model for a single symbol channel.
//!
//! A sentence is an alternating sequence `w0 b0 w1 b1 ... wn` where each
//! boundary `bi` is either bound (glues its neighbours together) or broken.
//! [`BindingStats`] counts how often each `(left, boundary, right)` triple was
//! seen in each state; the ratio of bound observations is the triple's
//! binding probability, and [`partition`] binds every boundary whose
//! probability strictly exceeds a [`Threshold`].

use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::io::{Read, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tsv;

/// Reserved boundary surface standing for "some tokens were skipped here".
pub const GAP: &str = "__GAP__";

/// The ordinary inter-word boundary.
pub const SPACE: &str = " ";

pub const MODEL_HEADER: &str = "#boundary-seg-model v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Channel {
    Surface,
    Pos,
}

impl Channel {
    pub fn as_str(self) -> &'static str {
        match self {
            Channel::Surface => "surface",
            Channel::Pos => "pos",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Channel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "surface" => Ok(Channel::Surface),
            "pos" => Ok(Channel::Pos),
            other => Err(format!("unknown channel {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryState {
    /// `s = 1`: the boundary joins its neighbours.
    Bound,
    /// `s = 0`: the boundary separates its neighbours.
    Broken,
}

impl BoundaryState {
    pub fn from_bound(bound: bool) -> Self {
        if bound {
            BoundaryState::Bound
        } else {
            BoundaryState::Broken
        }
    }

    pub fn is_bound(self) -> bool {
        self == BoundaryState::Bound
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boundary {
    pub surface: String,
    pub state: Option<BoundaryState>,
}

impl Boundary {
    pub fn new(surface: impl Into<String>) -> Self {
        Boundary {
            surface: surface.into(),
            state: None,
        }
    }

    pub fn with_state(surface: impl Into<String>, state: BoundaryState) -> Self {
        Boundary {
            surface: surface.into(),
            state: Some(state),
        }
    }

    pub fn is_gap(&self) -> bool {
        self.surface == GAP
    }
}

/// One element of an alternating sequence, used to build a
/// [`SymbolSequence`] from a flat list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Word(String),
    Boundary(Boundary),
}

/// Alternating word/boundary sequence. Always holds at least one word and
/// exactly one boundary between each pair of consecutive words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSequence {
    channel: Channel,
    words: Vec<String>,
    boundaries: Vec<Boundary>,
}

impl SymbolSequence {
    pub fn new(channel: Channel, words: Vec<String>, boundaries: Vec<Boundary>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::Malformed("sequence has no words".into()));
        }
        if boundaries.len() + 1 != words.len() {
            return Err(Error::Malformed(format!(
                "{} words need {} boundaries, got {}",
                words.len(),
                words.len() - 1,
                boundaries.len()
            )));
        }
        Ok(SymbolSequence {
            channel,
            words,
            boundaries,
        })
    }

    /// Builds a sequence from a flat alternating list that must start and end
    /// with a word.
    pub fn from_items(channel: Channel, items: Vec<Item>) -> Result<Self> {
        let mut words = Vec::with_capacity(items.len() / 2 + 1);
        let mut boundaries = Vec::with_capacity(items.len() / 2);
        for (i, item) in items.into_iter().enumerate() {
            match (i % 2, item) {
                (0, Item::Word(w)) => words.push(w),
                (1, Item::Boundary(b)) => boundaries.push(b),
                (0, Item::Boundary(_)) => {
                    return Err(Error::Malformed(format!("expected a word at position {i}")))
                }
                _ => return Err(Error::Malformed(format!("expected a boundary at position {i}"))),
            }
        }
        if words.len() == boundaries.len() && !words.is_empty() {
            return Err(Error::Malformed("sequence ends with a boundary".into()));
        }
        Self::new(channel, words, boundaries)
    }

    /// Words joined by unassigned single spaces.
    pub fn spaced<S: Into<String>>(channel: Channel, words: impl IntoIterator<Item = S>) -> Result<Self> {
        let words: Vec<String> = words.into_iter().map(Into::into).collect();
        let boundaries = vec![Boundary::new(SPACE); words.len().saturating_sub(1)];
        Self::new(channel, words, boundaries)
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn boundaries(&self) -> &[Boundary] {
        &self.boundaries
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn set_state(&mut self, boundary: usize, state: BoundaryState) {
        self.boundaries[boundary].state = Some(state);
    }

    pub fn states(&self) -> Vec<Option<BoundaryState>> {
        self.boundaries.iter().map(|b| b.state).collect()
    }

    /// Indices of boundaries currently in the bound state.
    pub fn bound_indices(&self) -> Vec<usize> {
        self.boundaries
            .iter()
            .enumerate()
            .filter(|(_, b)| b.state == Some(BoundaryState::Bound))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn into_items(self) -> Vec<Item> {
        let mut items = Vec::with_capacity(self.words.len() * 2 - 1);
        let mut boundaries = self.boundaries.into_iter();
        for (i, w) in self.words.into_iter().enumerate() {
            if i > 0 {
                items.push(Item::Boundary(boundaries.next().expect("alternation")));
            }
            items.push(Item::Word(w));
        }
        items
    }
}

/// Lookup key for one boundary observation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BoundaryKey {
    pub left: String,
    pub boundary: String,
    pub right: String,
}

impl BoundaryKey {
    pub fn new(left: impl Into<String>, boundary: impl Into<String>, right: impl Into<String>) -> Self {
        BoundaryKey {
            left: left.into(),
            boundary: boundary.into(),
            right: right.into(),
        }
    }
}

// Borrowed view so lookups by `(&str, &str, &str)` avoid allocating a key.
trait KeyView {
    fn view(&self) -> (&str, &str, &str);
}

impl KeyView for BoundaryKey {
    fn view(&self) -> (&str, &str, &str) {
        (&self.left, &self.boundary, &self.right)
    }
}

impl KeyView for (&str, &str, &str) {
    fn view(&self) -> (&str, &str, &str) {
        *self
    }
}

impl<'a> Borrow<dyn KeyView + 'a> for BoundaryKey {
    fn borrow(&self) -> &(dyn KeyView + 'a) {
        self
    }
}

impl Hash for BoundaryKey {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.view().hash(state)
    }
}

impl Hash for dyn KeyView + '_ {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.view().hash(state)
    }
}

impl PartialEq for dyn KeyView + '_ {
    fn eq(&self, other: &Self) -> bool {
        self.view() == other.view()
    }
}

impl Eq for dyn KeyView + '_ {}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Counts {
    pub bound: u64,
    pub broken: u64,
}

impl Counts {
    pub fn new(bound: u64, broken: u64) -> Self {
        Counts { bound, broken }
    }

    pub fn total(&self) -> u64 {
        self.bound + self.broken
    }

    /// `bound / (bound + broken)`, or 0 when nothing was observed.
    pub fn probability(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            total => self.bound as f64 / total as f64,
        }
    }

    fn add(&mut self, state: BoundaryState, n: u64) {
        match state {
            BoundaryState::Bound => self.bound += n,
            BoundaryState::Broken => self.broken += n,
        }
    }
}

/// Frequency table of boundary observations for one channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingStats {
    channel: Channel,
    counts: HashMap<BoundaryKey, Counts>,
}

impl BindingStats {
    pub fn new(channel: Channel) -> Self {
        BindingStats {
            channel,
            counts: HashMap::new(),
        }
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    /// Number of distinct keys.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Total number of boundary observations ingested.
    pub fn total(&self) -> u64 {
        self.counts.values().map(Counts::total).sum()
    }

    /// Adds one observation per boundary of `seq`. Every boundary must carry
    /// a state.
    pub fn observe(&mut self, seq: &SymbolSequence) -> Result<()> {
        self.check_channel(seq.channel())?;
        if let Some(i) = seq.boundaries.iter().position(|b| b.state.is_none()) {
            return Err(Error::UnassignedState(i));
        }
        for (i, b) in seq.boundaries.iter().enumerate() {
            let state = b.state.expect("checked above");
            self.record(&seq.words[i], &b.surface, &seq.words[i + 1], state);
        }
        Ok(())
    }

    pub fn record(&mut self, left: &str, boundary: &str, right: &str, state: BoundaryState) {
        self.record_n(left, boundary, right, state, 1);
    }

    fn record_n(&mut self, left: &str, boundary: &str, right: &str, state: BoundaryState, n: u64) {
        let key: &dyn KeyView = &(left, boundary, right);
        if let Some(c) = self.counts.get_mut(key) {
            c.add(state, n);
            return;
        }
        let mut c = Counts::default();
        c.add(state, n);
        self.counts.insert(BoundaryKey::new(left, boundary, right), c);
    }

    pub fn counts(&self, left: &str, boundary: &str, right: &str) -> Counts {
        let key: &dyn KeyView = &(left, boundary, right);
        self.counts.get(key).copied().unwrap_or_default()
    }

    /// Fraction of observations of the triple that were bound; unseen
    /// triples have probability 0.
    pub fn binding_probability(&self, left: &str, boundary: &str, right: &str) -> f64 {
        self.counts(left, boundary, right).probability()
    }

    /// Entry-wise sum.
    pub fn merge(&mut self, other: &BindingStats) -> Result<()> {
        self.check_channel(other.channel)?;
        for (k, c) in &other.counts {
            let entry = self.counts.entry(k.clone()).or_default();
            entry.bound += c.bound;
            entry.broken += c.broken;
        }
        Ok(())
    }

    /// Entries in lexicographic key order.
    pub fn entries(&self) -> Vec<(&BoundaryKey, Counts)> {
        let mut entries: Vec<_> = self.counts.iter().map(|(k, c)| (k, *c)).collect();
        entries.sort_unstable_by(|a, b| a.0.cmp(b.0));
        entries
    }

    fn check_channel(&self, found: Channel) -> Result<()> {
        if found != self.channel {
            return Err(Error::ChannelMismatch {
                expected: self.channel,
                found,
            });
        }
        Ok(())
    }

    /// Writes the table as tab-separated records, sorted by key.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{MODEL_HEADER}")?;
        for (k, c) in self.entries() {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}\t{}",
                self.channel,
                tsv::escape(&k.left),
                tsv::escape(&k.boundary),
                tsv::escape(&k.right),
                c.bound,
                c.broken
            )?;
        }
        Ok(())
    }

    pub fn to_tsv(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("utf-8")
    }

    /// Reads a table written by [`BindingStats::write_to`]. All records must
    /// belong to `channel`.
    pub fn read_from<R: Read>(mut r: R, channel: Channel) -> Result<Self> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        Self::from_tsv(&text, channel)
    }

    pub fn from_tsv(text: &str, channel: Channel) -> Result<Self> {
        let mut lines = tsv::lines(text);
        match lines.next() {
            Some((_, MODEL_HEADER)) => {}
            _ => return Err(Error::parse(1, format!("expected header {MODEL_HEADER:?}"))),
        }
        let mut stats = BindingStats::new(channel);
        for (n, line) in lines {
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 6 {
                return Err(Error::parse(n, format!("expected 6 fields, found {}", fields.len())));
            }
            let found: Channel = fields[0].parse().map_err(|e| Error::parse(n, e))?;
            if found != channel {
                return Err(Error::ChannelMismatch {
                    expected: channel,
                    found,
                });
            }
            let parse_count = |s: &str| {
                s.parse::<u64>()
                    .map_err(|_| Error::parse(n, format!("invalid count {s:?}")))
            };
            let key = BoundaryKey::new(
                tsv::unescape(fields[1], n)?,
                tsv::unescape(fields[2], n)?,
                tsv::unescape(fields[3], n)?,
            );
            let counts = Counts::new(parse_count(fields[4])?, parse_count(fields[5])?);
            if stats.counts.insert(key, counts).is_some() {
                return Err(Error::parse(n, "duplicate key"));
            }
        }
        Ok(stats)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Threshold(f64);

impl Threshold {
    pub const ZERO: Threshold = Threshold(0.0);
    pub const ONE: Threshold = Threshold(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Threshold(value))
        } else {
            Err(Error::InvalidThreshold(value))
        }
    }

    /// `hundredths / 100`, the grid used by the tuner.
    pub fn from_hundredths(hundredths: u8) -> Self {
        assert!(hundredths <= 100, "threshold grid index out of range");
        Threshold(f64::from(hundredths) / 100.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Strict comparison: ties stay broken.
    pub fn binds(self, probability: f64) -> bool {
        probability > self.0
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sets every boundary of `seq` from the binding probabilities in `stats`.
/// Input states are ignored.
pub fn partition(stats: &BindingStats, seq: &SymbolSequence, q: Threshold) -> Result<SymbolSequence> {
    stats.check_channel(seq.channel())?;
    let mut out = seq.clone();
    for (i, b) in out.boundaries.iter_mut().enumerate() {
        let p = stats.binding_probability(&seq.words[i], &b.surface, &seq.words[i + 1]);
        b.state = Some(BoundaryState::from_bound(q.binds(p)));
    }
    Ok(out)
}

/// The unsupervised variant: each boundary draws `u ~ U[0, 1)` from a
/// ChaCha8 stream seeded with `seed` and binds iff `u > q`.
pub fn stochastic_partition(seq: &SymbolSequence, q: Threshold, seed: u64) -> SymbolSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = seq.clone();
    for b in out.boundaries.iter_mut() {
        let u: f64 = rng.gen();
        b.state = Some(BoundaryState::from_bound(q.binds(u)));
    }
    out
}

/// A maximal run of words joined by bound boundaries. `end` is exclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub text: String,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// Splits `seq` at its broken boundaries.
pub fn segments_of(seq: &SymbolSequence) -> Result<Vec<Segment>> {
    if let Some(i) = seq.boundaries.iter().position(|b| b.state.is_none()) {
        return Err(Error::UnassignedState(i));
    }
    let mut segments = Vec::new();
    let mut start = 0;
    let mut text = seq.words[0].clone();
    for (i, b) in seq.boundaries.iter().enumerate() {
        if b.state == Some(BoundaryState::Bound) {
            text.push_str(&b.surface);
            text.push_str(&seq.words[i + 1]);
        } else {
            segments.push(Segment {
                start,
                end: i + 1,
                text: std::mem::replace(&mut text, seq.words[i + 1].clone()),
            });
            start = i + 1;
        }
    }
    segments.push(Segment {
        start,
        end: seq.words.len(),
        text,
    });
    Ok(segments)
}
