//! End-to-end MWE segmentation: surface and POS channels, gap linking,
//! lexicon pruning and the single-token fallback.

use std::borrow::Cow;
use std::collections::HashMap;
use std::fs;
use std::io::Read;
use std::ops::Range;
use std::path::Path;

use rayon::prelude::*;

use crate::corpus::SupportData;
use crate::error::{Error, Result};
use crate::lfd::{lfd_ranges, Lexicon, Provenance};
use crate::partition::{
    stochastic_partition, BindingStats, BoundaryState, Channel, SymbolSequence, Threshold, GAP,
};
use crate::sentence::{AnnotatedSentence, MweSpan};
use crate::tsv;

pub use crate::sentence::{spans_to_boundary_states, BoundaryView};

/// POS-channel symbol standing for a space boundary.
pub const SPACE_TAG: &str = "SP";

pub const ANOMALOUS_HEADER: &str = "#boundary-seg-anomalous v1";
pub const META_HEADER: &str = "#boundary-seg-meta v1";

pub const DEFAULT_GAP_WINDOW: usize = 3;

const SURFACE_FILE: &str = "surface.tsv";
const POS_FILE: &str = "pos.tsv";
const LEXICON_FILE: &str = "lexicon.tsv";
const ANOMALOUS_FILE: &str = "anomalous.tsv";
pub const META_FILE: &str = "meta.txt";

/// Maps a boundary surface onto its POS-channel symbol.
pub fn pos_boundary(surface: &str) -> &str {
    if !surface.is_empty() && surface != GAP && surface.chars().all(char::is_whitespace) {
        SPACE_TAG
    } else {
        surface
    }
}

/// Per token type: how often it was annotated as an MWE on its own, out of
/// all its occurrences. Tokens never seen alone carry no information and
/// compare equal to absent ones.
#[derive(Debug, Clone, Default)]
pub struct AnomalousTable {
    counts: HashMap<String, (u64, u64)>,
}

impl PartialEq for AnomalousTable {
    fn eq(&self, other: &Self) -> bool {
        self.entries() == other.entries()
    }
}

impl Eq for AnomalousTable {}

impl AnomalousTable {
    pub fn get(&self, token: &str) -> (u64, u64) {
        self.counts.get(token).copied().unwrap_or((0, 0))
    }

    /// True when the token was a lone MWE in at least half of its occurrences.
    pub fn is_anomalous(&self, token: &str) -> bool {
        let (anomalous, total) = self.get(token);
        anomalous > 0 && 2 * anomalous >= total
    }

    pub fn is_empty(&self) -> bool {
        self.counts.values().all(|&(a, _)| a == 0)
    }

    fn observe(&mut self, token: &str, anomalous: bool) {
        let entry = self.counts.entry(token.to_owned()).or_default();
        entry.1 += 1;
        if anomalous {
            entry.0 += 1;
        }
    }

    /// Entries with at least one anomalous occurrence, sorted by token.
    pub fn entries(&self) -> Vec<(&str, u64, u64)> {
        let mut e: Vec<_> = self
            .counts
            .iter()
            .filter(|(_, &(a, _))| a > 0)
            .map(|(t, &(a, n))| (t.as_str(), a, n))
            .collect();
        e.sort_unstable();
        e
    }

    pub fn to_tsv(&self) -> String {
        let mut out = format!("{ANOMALOUS_HEADER}\n");
        for (token, a, n) in self.entries() {
            out.push_str(&format!("{}\t{a}\t{n}\n", tsv::escape(token)));
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut lines = tsv::lines(text);
        match lines.next() {
            Some((_, ANOMALOUS_HEADER)) => {}
            _ => return Err(Error::parse(1, format!("expected header {ANOMALOUS_HEADER:?}"))),
        }
        let mut table = AnomalousTable::default();
        for (n, line) in lines {
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 3 {
                return Err(Error::parse(n, "expected token<TAB>n_anom<TAB>n_total"));
            }
            let num = |s: &str| s.parse::<u64>().map_err(|_| Error::parse(n, format!("invalid count {s:?}")));
            let (a, total) = (num(f[1])?, num(f[2])?);
            if a > total {
                return Err(Error::parse(n, "anomalous count exceeds total"));
            }
            table.counts.insert(tsv::unescape(f[0], n)?, (a, total));
        }
        Ok(table)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub use_pos: bool,
    pub lowercase: bool,
    pub gap_window: usize,
    pub q_tok: Threshold,
    /// Used only when `use_pos` is set.
    pub q_pos: Threshold,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            use_pos: false,
            lowercase: false,
            gap_window: DEFAULT_GAP_WINDOW,
            q_tok: Threshold::new(0.5).expect("in range"),
            q_pos: Threshold::new(0.5).expect("in range"),
        }
    }
}

/// Threshold settings for one segmentation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentOptions {
    pub q_tok: Threshold,
    pub q_pos: Option<Threshold>,
    pub use_lfd: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmenterModel {
    surface: BindingStats,
    pos: Option<BindingStats>,
    q_tok: Threshold,
    q_pos: Option<Threshold>,
    lexicon: Lexicon,
    anomalous: AnomalousTable,
    gap_window: usize,
    lowercase: bool,
    use_lfd: bool,
}

impl SegmenterModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        surface: BindingStats,
        pos: Option<(BindingStats, Threshold)>,
        q_tok: Threshold,
        lexicon: Lexicon,
        anomalous: AnomalousTable,
        gap_window: usize,
        lowercase: bool,
    ) -> Result<Self> {
        if surface.channel() != Channel::Surface {
            return Err(Error::ChannelMismatch {
                expected: Channel::Surface,
                found: surface.channel(),
            });
        }
        if let Some((stats, _)) = &pos {
            if stats.channel() != Channel::Pos {
                return Err(Error::ChannelMismatch {
                    expected: Channel::Pos,
                    found: stats.channel(),
                });
            }
        }
        if gap_window == 0 {
            return Err(Error::Config("gap window must be at least 1".into()));
        }
        let (pos, q_pos) = match pos {
            Some((s, q)) => (Some(s), Some(q)),
            None => (None, None),
        };
        Ok(SegmenterModel {
            surface,
            pos,
            q_tok,
            q_pos,
            lexicon,
            anomalous,
            gap_window,
            lowercase,
            use_lfd: false,
        })
    }

    pub fn surface_stats(&self) -> &BindingStats {
        &self.surface
    }

    pub fn pos_stats(&self) -> Option<&BindingStats> {
        self.pos.as_ref()
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn anomalous(&self) -> &AnomalousTable {
        &self.anomalous
    }

    pub fn q_tok(&self) -> Threshold {
        self.q_tok
    }

    pub fn q_pos(&self) -> Option<Threshold> {
        self.q_pos
    }

    pub fn gap_window(&self) -> usize {
        self.gap_window
    }

    pub fn lowercase(&self) -> bool {
        self.lowercase
    }

    /// Whether the bundle was tuned for lexicon pruning.
    pub fn use_lfd(&self) -> bool {
        self.use_lfd
    }

    pub fn set_use_lfd(&mut self, use_lfd: bool) {
        self.use_lfd = use_lfd;
    }

    /// Replaces the thresholds. `q_pos` must be given iff the model has a POS
    /// channel.
    pub fn set_thresholds(&mut self, q_tok: Threshold, q_pos: Option<Threshold>) -> Result<()> {
        if q_pos.is_some() != self.pos.is_some() {
            return Err(Error::Config(if self.pos.is_some() {
                "model has a POS channel and needs a POS threshold".into()
            } else {
                "model has no POS channel".into()
            }));
        }
        self.q_tok = q_tok;
        self.q_pos = q_pos;
        Ok(())
    }

    pub fn set_gap_window(&mut self, gap_window: usize) -> Result<()> {
        if gap_window == 0 {
            return Err(Error::Config("gap window must be at least 1".into()));
        }
        self.gap_window = gap_window;
        Ok(())
    }

    pub fn options(&self, use_lfd: bool) -> SegmentOptions {
        SegmentOptions {
            q_tok: self.q_tok,
            q_pos: self.q_pos,
            use_lfd,
        }
    }

    fn norm<'a>(&self, token: &'a str) -> Cow<'a, str> {
        normalize(token, self.lowercase)
    }

    /// Precomputes the threshold-independent part of segmentation.
    pub fn score(&self, sentence: &AnnotatedSentence, index: usize) -> Result<ScoredSentence> {
        sentence.validate()?;
        let tokens: Vec<String> = sentence.forms().map(|t| self.norm(t).into_owned()).collect();
        let surface = (0..tokens.len() - 1)
            .map(|i| {
                self.surface
                    .binding_probability(&tokens[i], &sentence.boundaries[i], &tokens[i + 1])
            })
            .collect();
        let pos = match &self.pos {
            None => None,
            Some(stats) => {
                let tags = pos_tags(sentence, index)?;
                Some(
                    (0..tags.len() - 1)
                        .map(|i| {
                            stats.binding_probability(tags[i], pos_boundary(&sentence.boundaries[i]), tags[i + 1])
                        })
                        .collect(),
                )
            }
        };
        Ok(ScoredSentence { tokens, surface, pos })
    }

    /// Segments one sentence with the model's thresholds.
    pub fn segment(&self, sentence: &AnnotatedSentence, use_lfd: bool) -> Result<Vec<MweSpan>> {
        let scored = self.score(sentence, 0)?;
        Ok(self.segment_scored(&scored, &self.options(use_lfd)))
    }

    /// Segments many sentences on `workers` threads (0 = all cores). Output
    /// order follows input order.
    pub fn segment_all(
        &self,
        sentences: &[AnnotatedSentence],
        use_lfd: bool,
        workers: usize,
    ) -> Result<Vec<Vec<MweSpan>>> {
        let opts = self.options(use_lfd);
        with_workers(workers, || {
            sentences
                .par_iter()
                .enumerate()
                .map(|(i, s)| Ok(self.segment_scored(&self.score(s, i)?, &opts)))
                .collect()
        })
    }

    /// Segments a precomputed sentence under explicit thresholds.
    pub fn segment_scored(&self, scored: &ScoredSentence, opts: &SegmentOptions) -> Vec<MweSpan> {
        let n = scored.tokens.len();
        let bound: Vec<bool> = (0..n.saturating_sub(1))
            .map(|i| {
                opts.q_tok.binds(scored.surface[i])
                    || match (&scored.pos, opts.q_pos) {
                        (Some(p), Some(q)) => q.binds(p[i]),
                        _ => false,
                    }
            })
            .collect();

        let mut segments = Vec::new();
        let mut start = 0;
        for (i, &b) in bound.iter().enumerate() {
            if !b {
                segments.push(start..i + 1);
                start = i + 1;
            }
        }
        segments.push(start..n);

        let candidates = self.link_gaps(&scored.tokens, &segments, opts.q_tok);

        let mut spans: Vec<MweSpan> = Vec::new();
        for runs in &candidates {
            let groups = if opts.use_lfd {
                self.prune_candidate(&scored.tokens, runs)
            } else {
                vec![runs.iter().flat_map(Clone::clone).collect()]
            };
            spans.extend(
                groups
                    .into_iter()
                    .filter(|g| g.len() >= 2)
                    .map(|g| MweSpan::new(g).expect("increasing")),
            );
        }

        if !self.anomalous.is_empty() {
            let mut covered = vec![false; n];
            for s in &spans {
                for &i in s.indices() {
                    covered[i] = true;
                }
            }
            for (i, tok) in scored.tokens.iter().enumerate() {
                if !covered[i] && self.anomalous.is_anomalous(tok) {
                    spans.push(MweSpan::new(vec![i]).expect("single index"));
                }
            }
        }
        spans.sort_by_key(|s| s.first());
        spans
    }

    /// Greedy left-to-right gap linking. A segment links to the first later
    /// free segment, at most `gap_window` segments away, whose `__GAP__`
    /// probability exceeds `q_tok`; linking continues from the newly attached
    /// segment. Segments inside a gap never open gaps of their own.
    fn link_gaps(&self, tokens: &[String], segments: &[Range<usize>], q_tok: Threshold) -> Vec<Vec<Range<usize>>> {
        let mut taken = vec![false; segments.len()];
        let mut in_gap = vec![false; segments.len()];
        let mut candidates = Vec::new();
        for s in 0..segments.len() {
            if taken[s] {
                continue;
            }
            taken[s] = true;
            let mut runs = vec![segments[s].clone()];
            if !in_gap[s] {
                let mut cur = s;
                'chain: loop {
                    let last = &tokens[segments[cur].end - 1];
                    let reach = (cur + 1 + self.gap_window).min(segments.len() - 1);
                    for j in cur + 2..=reach {
                        if taken[j] {
                            continue;
                        }
                        let first = &tokens[segments[j].start];
                        if q_tok.binds(self.surface.binding_probability(last, GAP, first)) {
                            in_gap[cur + 1..j].iter_mut().for_each(|g| *g = true);
                            taken[j] = true;
                            runs.push(segments[j].clone());
                            cur = j;
                            continue 'chain;
                        }
                    }
                    break;
                }
            }
            candidates.push(runs);
        }
        candidates
    }

    /// Runs lexicon pruning on each contiguous run of a candidate. A gap link
    /// survives only between pieces that are either multi-token after pruning
    /// or were single tokens to begin with.
    fn prune_candidate(&self, tokens: &[String], runs: &[Range<usize>]) -> Vec<Vec<usize>> {
        let pieces: Vec<Vec<Range<usize>>> = runs
            .iter()
            .map(|run| {
                if run.len() < 2 {
                    return vec![run.clone()];
                }
                lfd_ranges(&tokens[run.clone()], &self.lexicon)
                    .into_iter()
                    .map(|r| run.start + r.start..run.start + r.end)
                    .collect()
            })
            .collect();
        let attachable = |run: &Range<usize>, piece: &Range<usize>| piece.len() >= 2 || run.len() == 1;
        let linked: Vec<bool> = (0..runs.len().saturating_sub(1))
            .map(|k| {
                attachable(&runs[k], pieces[k].last().expect("non-empty"))
                    && attachable(&runs[k + 1], &pieces[k + 1][0])
            })
            .collect();

        let mut groups = Vec::new();
        let mut open: Option<Vec<usize>> = None;
        for (k, run_pieces) in pieces.iter().enumerate() {
            let last = run_pieces.len() - 1;
            for (pi, piece) in run_pieces.iter().enumerate() {
                let mut members = if pi == 0 { open.take().unwrap_or_default() } else { Vec::new() };
                members.extend(piece.clone());
                if pi == last && linked.get(k).copied().unwrap_or(false) {
                    open = Some(members);
                } else {
                    groups.push(members);
                }
            }
        }
        groups
    }

    /// Writes the model as a bundle directory.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(SURFACE_FILE), self.surface.to_tsv())?;
        let pos_path = dir.join(POS_FILE);
        match &self.pos {
            Some(stats) => fs::write(pos_path, stats.to_tsv())?,
            None if pos_path.exists() => fs::remove_file(pos_path)?,
            None => {}
        }
        fs::write(dir.join(LEXICON_FILE), self.lexicon.to_tsv())?;
        fs::write(dir.join(ANOMALOUS_FILE), self.anomalous.to_tsv())?;
        fs::write(dir.join(META_FILE), self.meta_text())?;
        Ok(())
    }

    fn meta_text(&self) -> String {
        let q_pos = self.q_pos.map_or_else(|| "none".to_owned(), |q| q.to_string());
        format!(
            "{META_HEADER}\nq_tok={}\nq_pos={q_pos}\ngap_window={}\nlowercase={}\nuse_lfd={}\n",
            self.q_tok, self.gap_window, self.lowercase, self.use_lfd
        )
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let read = |name: &str| -> Result<String> {
            let mut text = String::new();
            fs::File::open(dir.join(name))
                .map_err(|e| Error::Model(format!("{}: {e}", dir.join(name).display())))?
                .read_to_string(&mut text)?;
            Ok(text)
        };
        let in_file = |name: &'static str| move |e: Error| Error::Model(format!("{name}: {e}"));
        let meta = parse_meta(&read(META_FILE)?).map_err(in_file(META_FILE))?;
        let surface = BindingStats::from_tsv(&read(SURFACE_FILE)?, Channel::Surface).map_err(in_file(SURFACE_FILE))?;
        let pos = if dir.join(POS_FILE).exists() {
            Some(BindingStats::from_tsv(&read(POS_FILE)?, Channel::Pos).map_err(in_file(POS_FILE))?)
        } else {
            None
        };
        let lexicon = Lexicon::from_tsv(&read(LEXICON_FILE)?).map_err(in_file(LEXICON_FILE))?;
        let anomalous = AnomalousTable::from_tsv(&read(ANOMALOUS_FILE)?).map_err(in_file(ANOMALOUS_FILE))?;
        let pos = match (pos, meta.q_pos) {
            (Some(stats), Some(q)) => Some((stats, q)),
            (None, None) => None,
            _ => return Err(Error::Model("POS statistics and q_pos must be present together".into())),
        };
        let mut model = SegmenterModel::new(surface, pos, meta.q_tok, lexicon, anomalous, meta.gap_window, meta.lowercase)?;
        model.use_lfd = meta.use_lfd;
        Ok(model)
    }
}

struct Meta {
    q_tok: Threshold,
    q_pos: Option<Threshold>,
    gap_window: usize,
    lowercase: bool,
    use_lfd: bool,
}

fn parse_meta(text: &str) -> Result<Meta> {
    let mut lines = tsv::lines(text);
    match lines.next() {
        Some((_, META_HEADER)) => {}
        _ => return Err(Error::parse(1, format!("expected header {META_HEADER:?}"))),
    }
    let mut values = HashMap::new();
    for (n, line) in lines {
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(n, "expected key=value"))?;
        values.insert(k.to_owned(), (n, v.to_owned()));
    }
    let get = |key: &str| {
        values
            .get(key)
            .cloned()
            .ok_or_else(|| Error::parse(0, format!("missing key {key}")))
    };
    let threshold = |(n, v): (usize, String)| -> Result<Threshold> {
        let x: f64 = v.parse().map_err(|_| Error::parse(n, format!("invalid threshold {v:?}")))?;
        Threshold::new(x)
    };
    let boolean = |(n, v): (usize, String)| -> Result<bool> {
        v.parse().map_err(|_| Error::parse(n, format!("invalid flag {v:?}")))
    };
    let (n, gw) = get("gap_window")?;
    let q_pos = match get("q_pos")? {
        (_, v) if v == "none" => None,
        other => Some(threshold(other)?),
    };
    Ok(Meta {
        q_tok: threshold(get("q_tok")?)?,
        q_pos,
        gap_window: gw.parse().map_err(|_| Error::parse(n, format!("invalid gap window {gw:?}")))?,
        lowercase: boolean(get("lowercase")?)?,
        use_lfd: boolean(get("use_lfd")?)?,
    })
}

/// Threshold-independent probabilities for one sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredSentence {
    tokens: Vec<String>,
    surface: Vec<f64>,
    pos: Option<Vec<f64>>,
}

impl ScoredSentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

fn normalize(token: &str, lowercase: bool) -> Cow<'_, str> {
    if lowercase {
        Cow::Owned(token.to_lowercase())
    } else {
        Cow::Borrowed(token)
    }
}

fn pos_tags(sentence: &AnnotatedSentence, index: usize) -> Result<Vec<&str>> {
    sentence
        .tokens
        .iter()
        .enumerate()
        .map(|(t, tok)| {
            tok.pos
                .as_deref()
                .ok_or(Error::MissingPos { sentence: index + 1, token: t + 1 })
        })
        .collect()
}

/// Gold boundary states: bound iff both neighbours are consecutive members
/// of the same span.
fn gold_states(sentence: &AnnotatedSentence) -> Vec<BoundaryState> {
    let mut bound = vec![false; sentence.len() - 1];
    for span in &sentence.mwes {
        for w in span.indices().windows(2) {
            if w[1] == w[0] + 1 {
                bound[w[0]] = true;
            }
        }
    }
    bound.into_iter().map(BoundaryState::from_bound).collect()
}

fn observe_channel(
    stats: &mut BindingStats,
    symbols: &[&str],
    boundaries: impl Iterator<Item = String>,
    states: &[BoundaryState],
    gaps: &[(usize, usize)],
) {
    for (i, surface) in boundaries.enumerate() {
        stats.record(symbols[i], &surface, symbols[i + 1], states[i]);
    }
    for &(a, b) in gaps {
        stats.record(symbols[a], GAP, symbols[b], BoundaryState::Bound);
    }
}

/// Trains a model from gold sentences plus support data.
pub fn train(corpus: &[AnnotatedSentence], config: &TrainConfig, support: &SupportData) -> Result<SegmenterModel> {
    if config.gap_window == 0 {
        return Err(Error::Config("gap window must be at least 1".into()));
    }
    for s in corpus.iter().chain(&support.sentences) {
        s.validate()?;
    }
    if config.use_pos {
        for (i, s) in corpus.iter().enumerate() {
            pos_tags(s, i)?;
        }
    }

    let mut surface = BindingStats::new(Channel::Surface);
    let mut pos = config.use_pos.then(|| BindingStats::new(Channel::Pos));
    let mut anomalous = AnomalousTable::default();
    let mut lexicon = Lexicon::new();

    let sources = corpus
        .iter()
        .map(|s| (s, Provenance::Gold))
        .chain(support.sentences.iter().map(|s| (s, Provenance::Support)));
    for (sentence, provenance) in sources {
        let forms: Vec<Cow<str>> = sentence.forms().map(|t| normalize(t, config.lowercase)).collect();
        let symbols: Vec<&str> = forms.iter().map(AsRef::as_ref).collect();
        let states = gold_states(sentence);
        let gaps: Vec<(usize, usize)> = sentence.mwes.iter().flat_map(|s| s.gaps()).collect();
        observe_channel(&mut surface, &symbols, sentence.boundaries.iter().cloned(), &states, &gaps);

        if let Some(pos) = pos.as_mut() {
            if let Ok(tags) = pos_tags(sentence, 0) {
                let boundaries = sentence.boundaries.iter().map(|b| pos_boundary(b).to_owned());
                observe_channel(pos, &tags, boundaries, &states, &gaps);
            }
        }

        let mut lone = vec![false; sentence.len()];
        for span in sentence.mwes.iter().filter(|s| s.len() == 1) {
            lone[span.first()] = true;
        }
        for (t, form) in symbols.iter().enumerate() {
            anomalous.observe(form, lone[t]);
        }

        for span in &sentence.mwes {
            for run in span.runs() {
                lexicon.insert(&symbols[run], provenance);
            }
        }
    }
    for form in &support.forms {
        let form: Vec<Cow<str>> = form.iter().map(|t| normalize(t, config.lowercase)).collect();
        lexicon.insert(&form, Provenance::Support);
    }

    let pos = pos.map(|stats| (stats, config.q_pos));
    SegmenterModel::new(surface, pos, config.q_tok, lexicon, anomalous, config.gap_window, config.lowercase)
}

/// Unsupervised baseline: random binding at threshold `q`, seeded per call.
/// Multi-token segments become spans.
pub fn segment_stochastic(sentence: &AnnotatedSentence, q: Threshold, seed: u64) -> Result<Vec<MweSpan>> {
    sentence.validate()?;
    let seq = SymbolSequence::new(
        Channel::Surface,
        sentence.forms().map(str::to_owned).collect(),
        sentence
            .boundaries
            .iter()
            .map(|b| crate::partition::Boundary::new(b.clone()))
            .collect(),
    )?;
    let out = stochastic_partition(&seq, q, seed);
    Ok(crate::partition::segments_of(&out)?
        .into_iter()
        .filter(|s| s.len() >= 2)
        .map(|s| MweSpan::contiguous(s.start..s.end).expect("non-empty"))
        .collect())
}

/// Runs `f` on a rayon pool with `workers` threads; 0 uses the global pool.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Writes `spans` back into copies of the sentences.
pub fn with_predictions(sentences: &[AnnotatedSentence], predictions: Vec<Vec<MweSpan>>) -> Vec<AnnotatedSentence> {
    sentences
        .iter()
        .zip(predictions)
        .map(|(s, spans)| AnnotatedSentence {
            mwes: spans,
            ..s.clone()
        })
        .collect()
}

impl std::fmt::Display for SegmenterModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "surface entries {}, pos entries {}, lexicon {}, q_tok {}, q_pos {}",
            self.surface.len(),
            self.pos.as_ref().map_or(0, BindingStats::len),
            self.lexicon.len(),
            self.q_tok,
            self.q_pos.map_or_else(|| "none".into(), |q| q.to_string())
        )
    }
}
