mod common;

use mipvu_core::adapters::TokenLabels;
use mipvu_core::corpus::{AnnotatedToken, Register, Sentence};
use mipvu_core::metrics::{
    aggregate_seeds, confusion, per_register, score, ConfusionCounts, MetricsError,
};
use proptest::prelude::*;

fn flip(labels: &[TokenLabels]) -> Vec<TokenLabels> {
    labels
        .iter()
        .map(|l| TokenLabels {
            sent_id: l.sent_id.clone(),
            labels: l.labels.iter().map(|b| !b).collect(),
        })
        .collect()
}

proptest! {
    #[test]
    fn scores_match_elementwise_oracle(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let corpus = common::random_corpus(&mut rng, 50, 40);
        let pred = common::random_predictions(&mut rng, &corpus);
        let gold = corpus.gold_labels();

        let c = confusion(&gold, &pred).unwrap();
        let pairs: Vec<(&str, &[bool])> = gold.iter().map(|g| (g.sent_id.as_str(), g.labels.as_slice())).collect();
        let (tp, fp, fneg, tn) = common::oracle_counts(pairs, &pred);
        prop_assert_eq!((c.tp, c.fp, c.fn_, c.tn), (tp, fp, fneg, tn));

        let s = score(&c);
        let (p, r, pos, neg, mac) = common::oracle_scores(tp, fp, fneg, tn);
        prop_assert_eq!((s.pos_precision, s.pos_recall, s.pos_f1, s.neg_f1, s.macro_f1), (p, r, pos, neg, mac));
        prop_assert!((s.pos_f1 - common::harmonic_f1(p, r)).abs() <= 1e-12);
    }

    #[test]
    fn polarity_swap_swaps_class_scores(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let corpus = common::random_corpus(&mut rng, 20, 20);
        let pred = common::random_predictions(&mut rng, &corpus);
        let gold = corpus.gold_labels();
        let s = score(&confusion(&gold, &pred).unwrap());
        let f = score(&confusion(&flip(&gold), &flip(&pred)).unwrap());
        prop_assert_eq!(s.pos_f1, f.neg_f1);
        prop_assert_eq!(s.neg_f1, f.pos_f1);
        prop_assert_eq!(s.macro_f1, f.macro_f1);
    }

    #[test]
    fn register_counts_sum_to_overall(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let corpus = common::random_corpus(&mut rng, 30, 15);
        let pred = common::random_predictions(&mut rng, &corpus);
        let overall = confusion(&corpus.gold_labels(), &pred).unwrap();
        let by_register = per_register(&corpus, &pred).unwrap();
        let mut sum = ConfusionCounts::default();
        for c in by_register.counts.values() {
            sum.merge(c);
        }
        prop_assert_eq!(sum, overall);

        for register in Register::ALL {
            let gold = common::gold_for_register(&corpus, register);
            let Some(c) = by_register.counts.get(&register) else {
                prop_assert!(gold.is_empty());
                continue;
            };
            let pairs = gold.iter().map(|(id, l)| (id.as_str(), l.as_slice()));
            prop_assert_eq!((c.tp, c.fp, c.fn_, c.tn), common::oracle_counts(pairs, &pred));
        }
    }

    #[test]
    fn correct_positive_never_lowers_pos_f1(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let mut corpus = common::random_corpus(&mut rng, 20, 10);
        let mut pred = common::random_predictions(&mut rng, &corpus);
        let before = score(&confusion(&corpus.gold_labels(), &pred).unwrap()).pos_f1;

        corpus.documents[0].sentences.push(Sentence {
            sent_id: "extra".into(),
            tokens: vec![AnnotatedToken { surface: "火".into(), metaphor: true }],
        });
        pred.push(TokenLabels { sent_id: "extra".into(), labels: vec![true] });
        let after = score(&confusion(&corpus.gold_labels(), &pred).unwrap()).pos_f1;
        prop_assert!(after >= before, "{} -> {}", before, after);
    }

    #[test]
    fn aggregation_ignores_order(values in proptest::collection::vec(0.0f64..1.0, 1..12), rot in 0usize..12) {
        let a = aggregate_seeds(&values).unwrap();
        let mut moved = values.clone();
        moved.rotate_left(rot % values.len());
        moved.reverse();
        let b = aggregate_seeds(&moved).unwrap();
        prop_assert_eq!(a.mean, b.mean);
        prop_assert_eq!(a.std, b.std);

        let (mean, std) = common::two_pass(&values);
        prop_assert!((a.mean - mean).abs() <= 1e-12);
        prop_assert!((a.std - std).abs() <= 1e-12);
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(a.std >= 0.0 && a.mean >= lo && a.mean <= hi);
    }
}

#[test]
fn zero_denominators_score_zero() {
    let s = score(&ConfusionCounts {
        tp: 0,
        fp: 0,
        fn_: 0,
        tn: 5,
    });
    assert_eq!((s.pos_precision, s.pos_recall, s.pos_f1), (0.0, 0.0, 0.0));
    assert_eq!(s.neg_f1, 1.0);
    assert_eq!(s.macro_f1, 0.5);
    let empty = score(&ConfusionCounts::default());
    assert_eq!(empty.macro_f1, 0.0);
}

#[test]
fn misaligned_predictions_are_errors() {
    let gold = vec![TokenLabels {
        sent_id: "a".into(),
        labels: vec![true, false],
    }];
    let short = vec![TokenLabels {
        sent_id: "a".into(),
        labels: vec![true],
    }];
    assert!(matches!(
        confusion(&gold, &short),
        Err(MetricsError::LengthMismatch { .. })
    ));
    assert!(matches!(
        confusion(&gold, &[]),
        Err(MetricsError::MissingSentence(_))
    ));
    let extra = vec![
        gold[0].clone(),
        TokenLabels {
            sent_id: "b".into(),
            labels: vec![],
        },
    ];
    assert!(matches!(
        confusion(&gold, &extra),
        Err(MetricsError::UnexpectedSentence(_))
    ));
}

#[test]
fn aggregation_rejects_bad_input() {
    assert!(aggregate_seeds(&[]).is_err());
    assert!(aggregate_seeds(&[0.5, f64::NAN]).is_err());
    let one = aggregate_seeds(&[0.25]).unwrap();
    assert_eq!((one.mean, one.std), (0.25, 0.0));
}
