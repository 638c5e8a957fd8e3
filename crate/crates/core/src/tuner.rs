//! Cross-validated F1 scan over the threshold grid.
//!
//! Each fold is trained and scored once; grid points only re-threshold the
//! cached binding probabilities, so a full scan costs one training pass per
//! fold plus cheap per-point segmentation.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::corpus::SupportData;
use crate::error::{Error, Result};
use crate::evaluation::{EvalCounts, EvalReport, Scheme};
use crate::partition::Threshold;
use crate::segmenter::{train, with_workers, ScoredSentence, SegmentOptions, SegmenterModel, TrainConfig};
use crate::sentence::{AnnotatedSentence, MweSpan};

pub const DEFAULT_FOLDS: usize = 8;

/// Highest grid index; the grid is `0..=GRID_MAX` hundredths.
pub const GRID_MAX: u8 = 100;

/// A grid point in hundredths. `q_pos` is absent for surface-only models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridPoint {
    pub q_tok: u8,
    pub q_pos: Option<u8>,
}

impl GridPoint {
    pub fn q_tok(&self) -> Threshold {
        Threshold::from_hundredths(self.q_tok)
    }

    pub fn q_pos(&self) -> Option<Threshold> {
        self.q_pos.map(Threshold::from_hundredths)
    }

    /// True when `self` is componentwise at least `other`.
    pub fn dominates(&self, other: &GridPoint) -> bool {
        self.q_tok >= other.q_tok
            && match (self.q_pos, other.q_pos) {
                (Some(a), Some(b)) => a >= b,
                (None, None) => true,
                _ => false,
            }
    }
}

/// Settings shared by every fold of a tuning run.
#[derive(Debug, Clone)]
pub struct TuneConfig {
    pub train: TrainConfig,
    pub scheme: Scheme,
    pub folds: usize,
    /// Rayon threads; 0 uses the global pool.
    pub workers: usize,
    pub support: SupportData,
}

impl TuneConfig {
    pub fn new(train: TrainConfig, scheme: Scheme) -> Self {
        TuneConfig {
            train,
            scheme,
            folds: DEFAULT_FOLDS,
            workers: 0,
            support: SupportData::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub points: BTreeMap<GridPoint, f64>,
    pub best: GridPoint,
    pub folds: usize,
    pub use_lfd: bool,
}

impl GridResult {
    pub fn best_f1(&self) -> f64 {
        self.points[&self.best]
    }

    /// `q_tok<TAB>q_pos<TAB>F1` lines; `q_pos` is `-` without POS.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("q_tok\tq_pos\tF1\n");
        for (p, f1) in &self.points {
            let q_pos = p.q_pos.map_or_else(|| "-".to_owned(), |q| format!("{:.2}", f64::from(q) / 100.0));
            let _ = writeln!(out, "{:.2}\t{}\t{:.6}", f64::from(p.q_tok) / 100.0, q_pos, f1);
        }
        out
    }
}

struct Fold {
    model: SegmenterModel,
    held_out: Vec<(ScoredSentence, Vec<MweSpan>)>,
}

/// Round-robin fold index of each sentence.
pub fn fold_assignment(n_sentences: usize, folds: usize) -> Vec<usize> {
    (0..n_sentences).map(|i| i % folds).collect()
}

/// Trained folds with cached held-out scores, reusable across threshold settings.
pub struct CrossValidation {
    folds: Vec<Fold>,
    scheme: Scheme,
    use_pos: bool,
    workers: usize,
}

impl CrossValidation {
    pub fn prepare(corpus: &[AnnotatedSentence], config: &TuneConfig) -> Result<Self> {
        if config.folds < 2 {
            return Err(Error::Config(format!("need at least 2 folds, got {}", config.folds)));
        }
        if corpus.len() < config.folds {
            return Err(Error::Config(format!(
                "{} sentences cannot fill {} folds",
                corpus.len(),
                config.folds
            )));
        }
        let assignment = fold_assignment(corpus.len(), config.folds);
        let folds = with_workers(config.workers, || {
            (0..config.folds)
                .into_par_iter()
                .map(|k| {
                    let train_set: Vec<AnnotatedSentence> = corpus
                        .iter()
                        .zip(&assignment)
                        .filter(|&(_, &f)| f != k)
                        .map(|(s, _)| s.clone())
                        .collect();
                    let model = train(&train_set, &config.train, &config.support)?;
                    let held_out = corpus
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| assignment[i] == k)
                        .map(|(i, s)| Ok((model.score(s, i)?, s.mwes.clone())))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Fold { model, held_out })
                })
                .collect::<Result<Vec<_>>>()
        })?;
        Ok(CrossValidation {
            folds,
            scheme: config.scheme,
            use_pos: config.train.use_pos,
            workers: config.workers,
        })
    }

    pub fn folds(&self) -> usize {
        self.folds.len()
    }

    /// Number of held-out sentences in each fold.
    pub fn fold_sizes(&self) -> Vec<usize> {
        self.folds.iter().map(|f| f.held_out.len()).collect()
    }

    /// Mean F1 over folds at one threshold setting.
    pub fn mean_f1(&self, opts: &SegmentOptions) -> f64 {
        let total: f64 = self
            .folds
            .iter()
            .map(|fold| {
                let mut counts = EvalCounts::default();
                for (scored, gold) in &fold.held_out {
                    let predicted = fold.model.segment_scored(scored, opts);
                    counts.add(EvalCounts::sentence(self.scheme, gold, &predicted));
                }
                EvalReport::from_counts(self.scheme, counts).f1
            })
            .sum();
        total / self.folds.len() as f64
    }

    fn options(&self, p: GridPoint, use_lfd: bool) -> SegmentOptions {
        SegmentOptions {
            q_tok: p.q_tok(),
            q_pos: p.q_pos(),
            use_lfd,
        }
    }

    fn scan(&self, points: Vec<GridPoint>, use_lfd: bool) -> GridResult {
        let scored: Vec<(GridPoint, f64)> = with_workers(self.workers, || {
            points
                .into_par_iter()
                .map(|p| (p, self.mean_f1(&self.options(p, use_lfd))))
                .collect()
        });
        let points: BTreeMap<GridPoint, f64> = scored.into_iter().collect();
        // Ascending key order, so `>=` lets later (larger) points win ties.
        let mut best = None;
        for (p, &f1) in &points {
            if best.is_none_or(|(_, b)| f1 >= b) {
                best = Some((*p, f1));
            }
        }
        GridResult {
            best: best.expect("grid is never empty").0,
            points,
            folds: self.folds.len(),
            use_lfd,
        }
    }

    /// Full grid without LFD.
    pub fn grid_search(&self) -> GridResult {
        self.scan(region(&GridPoint { q_tok: 0, q_pos: self.use_pos.then_some(0) }), false)
    }

    /// LFD rescan of the region componentwise at least `base.best`.
    pub fn grid_search_lfd(&self, base: &GridResult) -> Result<GridResult> {
        if base.use_lfd {
            return Err(Error::Config("base grid must be computed without LFD".into()));
        }
        if base.best.q_pos.is_some() != self.use_pos {
            return Err(Error::Config("base grid POS setting does not match".into()));
        }
        Ok(self.scan(region(&base.best), true))
    }
}

fn region(from: &GridPoint) -> Vec<GridPoint> {
    let tok = from.q_tok..=GRID_MAX;
    match from.q_pos {
        None => tok.map(|q_tok| GridPoint { q_tok, q_pos: None }).collect(),
        Some(lo) => tok
            .flat_map(|q_tok| (lo..=GRID_MAX).map(move |q| GridPoint { q_tok, q_pos: Some(q) }))
            .collect(),
    }
}

/// Mean held-out F1 at fixed thresholds.
pub fn cross_validate(
    corpus: &[AnnotatedSentence],
    config: &TuneConfig,
    q_tok: Threshold,
    q_pos: Option<Threshold>,
    use_lfd: bool,
) -> Result<f64> {
    let cv = CrossValidation::prepare(corpus, config)?;
    Ok(cv.mean_f1(&SegmentOptions { q_tok, q_pos, use_lfd }))
}

pub fn grid_search(corpus: &[AnnotatedSentence], config: &TuneConfig) -> Result<GridResult> {
    Ok(CrossValidation::prepare(corpus, config)?.grid_search())
}

pub fn grid_search_lfd(corpus: &[AnnotatedSentence], config: &TuneConfig, base: &GridResult) -> Result<GridResult> {
    CrossValidation::prepare(corpus, config)?.grid_search_lfd(base)
}
