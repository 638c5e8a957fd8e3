//! Boundary-partition segmentation of text into multiword expressions.
//!
//! Boundaries between words are bound or broken according to binding
//! probabilities learned from annotated corpora. Bound runs, linked across
//! short gaps and optionally pruned against a lexicon of known forms, become
//! MWE predictions.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod lfd;
pub mod partition;
pub mod segmenter;
pub mod sentence;
pub mod tuner;
mod tsv;

pub use error::{Error, Result};
pub use evaluation::{eval_links, eval_tokens, EvalReport, Scheme};
pub use lfd::{lfd_prune, Lexicon, Provenance};
pub use partition::{partition, BindingStats, Boundary, BoundaryState, Channel, SymbolSequence, Threshold};
pub use segmenter::{train, SegmenterModel, TrainConfig};
pub use sentence::{AnnotatedSentence, MweSpan, Token};
pub use tuner::{cross_validate, grid_search, grid_search_lfd, GridPoint, GridResult, TuneConfig};
