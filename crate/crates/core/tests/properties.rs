mod common;

use std::collections::BTreeSet;

use mwe_partition::corpus::SupportData;
use mwe_partition::evaluation::{evaluate, Scheme};
use mwe_partition::lfd::lfd_ranges;
use mwe_partition::sentence::{spans_from_boundary_states, spans_to_boundary_states};
use mwe_partition::{
    lfd_prune, partition, train, AnnotatedSentence, BindingStats, BoundaryState, Channel, Lexicon, MweSpan,
    Provenance, SymbolSequence, Threshold, TrainConfig,
};
use proptest::prelude::*;

fn word() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "c", "d", "e"]).prop_map(str::to_owned)
}

fn words(max: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(word(), 1..=max)
}

/// A sequence with every boundary assigned.
fn labelled() -> impl Strategy<Value = SymbolSequence> {
    words(8).prop_flat_map(|w| {
        let n = w.len() - 1;
        (Just(w), prop::collection::vec(any::<bool>(), n)).prop_map(|(w, states)| {
            let mut seq = SymbolSequence::spaced(Channel::Surface, w).unwrap();
            for (i, b) in states.into_iter().enumerate() {
                seq.set_state(i, BoundaryState::from_bound(b));
            }
            seq
        })
    })
}

fn stats_of(seqs: &[SymbolSequence]) -> BindingStats {
    let mut stats = BindingStats::new(Channel::Surface);
    for s in seqs {
        stats.observe(s).unwrap();
    }
    stats
}

/// Disjoint contiguous spans of length at least two.
fn sentence_with_spans() -> impl Strategy<Value = AnnotatedSentence> {
    (words(12), prop::collection::vec(any::<bool>(), 12)).prop_map(|(w, cuts)| {
        let n = w.len();
        let mut s = AnnotatedSentence::from_forms(w);
        let mut start = 0;
        for i in 1..=n {
            if i == n || cuts[i - 1] {
                if i - start >= 2 && cuts[start % cuts.len()] {
                    s.mwes.push(MweSpan::contiguous(start..i).unwrap());
                }
                start = i;
            }
        }
        s
    })
}

proptest! {
    #[test]
    fn observation_counts_are_conserved(seqs in prop::collection::vec(labelled(), 1..10)) {
        let stats = stats_of(&seqs);
        let boundaries: usize = seqs.iter().map(|s| s.len() - 1).sum();
        let bound: usize = seqs.iter().map(|s| s.bound_indices().len()).sum();
        prop_assert_eq!(stats.total(), boundaries as u64);
        let counted: u64 = stats.entries().iter().map(|(_, c)| c.bound).sum();
        prop_assert_eq!(counted, bound as u64);
    }

    #[test]
    fn merge_is_commutative_and_matches_joint_training(
        a in prop::collection::vec(labelled(), 0..6),
        b in prop::collection::vec(labelled(), 0..6),
    ) {
        let (sa, sb) = (stats_of(&a), stats_of(&b));
        let mut ab = sa.clone();
        ab.merge(&sb).unwrap();
        let mut ba = sb.clone();
        ba.merge(&sa).unwrap();
        prop_assert_eq!(&ab, &ba);
        let joint: Vec<SymbolSequence> = a.iter().chain(&b).cloned().collect();
        prop_assert_eq!(&ab, &stats_of(&joint));
    }

    #[test]
    fn stats_survive_tsv(seqs in prop::collection::vec(labelled(), 0..6)) {
        let stats = stats_of(&seqs);
        prop_assert_eq!(BindingStats::from_tsv(&stats.to_tsv(), Channel::Surface).unwrap(), stats);
    }

    #[test]
    fn raising_the_threshold_only_breaks(
        seqs in prop::collection::vec(labelled(), 1..6),
        sentence in words(10),
        lo in 0u8..=100,
        step in 0u8..=100,
    ) {
        let stats = stats_of(&seqs);
        let hi = lo.saturating_add(step).min(100);
        let seq = SymbolSequence::spaced(Channel::Surface, sentence).unwrap();
        let at = |q| -> BTreeSet<usize> {
            partition(&stats, &seq, Threshold::from_hundredths(q)).unwrap().bound_indices().into_iter().collect()
        };
        prop_assert!(at(hi).is_subset(&at(lo)));
    }

    #[test]
    fn lfd_preserves_tokens(tokens in words(8), forms in prop::collection::vec(words(4), 0..6)) {
        let mut lex = Lexicon::default();
        for f in &forms {
            lex.insert(f, Provenance::Support);
        }
        let pieces = lfd_prune(&tokens, &lex);
        prop_assert!(pieces.len() <= tokens.len());
        prop_assert_eq!(pieces.join(" "), tokens.join(" "));
        for r in lfd_ranges(&tokens, &lex) {
            let longer_known = (r.end + 1..=tokens.len()).any(|e| lex.contains_tokens(&tokens[r.start..e]));
            prop_assert!(!longer_known);
            prop_assert!(r.len() == 1 || lex.contains_tokens(&tokens[r.clone()]));
        }
    }

    #[test]
    fn boundary_view_round_trips(s in sentence_with_spans()) {
        let view = spans_to_boundary_states(s.len(), &s.mwes).unwrap();
        prop_assert_eq!(spans_from_boundary_states(&view), s.mwes.clone());
    }

    #[test]
    fn metrics_are_symmetric(gold in sentence_with_spans(), pred in sentence_with_spans()) {
        // both sentences need the same length
        let n = gold.len().min(pred.len());
        let cut = |s: &AnnotatedSentence| {
            let mut t = AnnotatedSentence::from_forms(s.forms().take(n));
            t.mwes = s.mwes.iter().filter(|m| m.last() < n).cloned().collect();
            t
        };
        let (g, p) = ([cut(&gold)], [cut(&pred)]);
        for scheme in [Scheme::Link, Scheme::Token] {
            let fwd = evaluate(scheme, &g, &p).unwrap();
            let rev = evaluate(scheme, &p, &g).unwrap();
            prop_assert_eq!(fwd.precision, rev.recall);
            prop_assert_eq!(fwd.recall, rev.precision);
            prop_assert_eq!(fwd.f1, rev.f1);
            prop_assert!((0.0..=1.0).contains(&fwd.f1));
        }
    }

    #[test]
    fn segmentation_output_is_well_formed(
        corpus in prop::collection::vec(sentence_with_spans(), 1..8),
        q in 0u8..=100,
        use_lfd in any::<bool>(),
    ) {
        let mut model = train(&corpus, &TrainConfig::default(), &SupportData::default()).unwrap();
        model.set_thresholds(Threshold::from_hundredths(q), None).unwrap();
        for s in &corpus {
            let spans = model.segment(s, use_lfd).unwrap();
            let mut seen = BTreeSet::new();
            for span in &spans {
                prop_assert!(span.last() < s.len());
                for &i in span.indices() {
                    prop_assert!(seen.insert(i), "token {} in two spans", i);
                }
            }
        }
    }

    #[test]
    fn worker_count_does_not_change_output(corpus in prop::collection::vec(sentence_with_spans(), 1..12)) {
        let model = train(&corpus, &TrainConfig::default(), &SupportData::default()).unwrap();
        let one = model.segment_all(&corpus, true, 1).unwrap();
        prop_assert_eq!(&one, &model.segment_all(&corpus, true, 4).unwrap());
        prop_assert_eq!(one, model.segment_all(&corpus, true, 0).unwrap());
    }
}
