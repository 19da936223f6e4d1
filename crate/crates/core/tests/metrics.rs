mod support;

use ckb_varieties::metrics::{bleu, chrf, corpus_bleu, corpus_chrf, corpus_wer, f1, wer, BleuOptions, ChrfOptions};
use proptest::prelude::*;
use support::oracle;

fn split(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

fn ours(pairs: &[(String, String)]) -> (f64, f64, f64) {
    let hyps: Vec<&str> = pairs.iter().map(|p| p.0.as_str()).collect();
    let refs: Vec<Vec<&str>> = pairs.iter().map(|p| vec![p.1.as_str()]).collect();
    let b = corpus_bleu(&hyps, &refs, &BleuOptions::default()).bleu;
    let c = corpus_chrf(&hyps, &refs, &ChrfOptions::default());
    let w: Vec<(Vec<&str>, Vec<&str>)> = pairs.iter().map(|(h, r)| (split(r), split(h))).collect();
    (b, c, corpus_wer(&w).unwrap().wer_percent)
}

#[test]
fn fixture_matches_naive_oracles() {
    let pairs = oracle::mt_pairs();
    assert_eq!(pairs.len(), 20);
    let (b, c, w) = ours(&pairs);
    assert!(
        (b - oracle::bleu(&pairs)).abs() < 0.1,
        "{b} vs {}",
        oracle::bleu(&pairs)
    );
    assert!(
        (c - oracle::chrf(&pairs)).abs() < 0.1,
        "{c} vs {}",
        oracle::chrf(&pairs)
    );
    assert!((w - oracle::wer(&pairs)).abs() < 1e-9);
}

#[test]
fn fixture_matches_reference_scorer() {
    // sacrebleu 2.6.0, tokenize="none"; WER by exhaustive recursion
    let (b, c, w) = ours(&oracle::mt_pairs());
    assert!((b - 39.947280053364146).abs() < 1e-9, "{b}");
    assert!((c - 69.5177807720966).abs() < 1e-9, "{c}");
    assert!((w - 100.0 * 25.0 / 63.0).abs() < 1e-9, "{w}");
}

#[test]
fn wer_hand_cases() {
    let r = wer(&["a", "b", "c", "d"], &["a", "x", "c"]).unwrap();
    assert_eq!(
        (r.substitutions, r.deletions, r.insertions, r.wer_percent),
        (1, 1, 0, 50.0)
    );
    let r = wer(&["a"], &["a", "b", "c"]).unwrap();
    assert_eq!((r.insertions, r.wer_percent), (2, 200.0));
}

#[test]
fn f1_hand_cases() {
    assert_eq!(f1(&[vec![1, 1], vec![1, 1]]).unwrap().macro_f1, 0.5);
    let forced = f1(&[vec![5, 0], vec![5, 0]]).unwrap();
    assert!((forced.macro_f1 - 1.0 / 3.0).abs() < 1e-12);
}

fn sentence() -> impl Strategy<Value = String> {
    prop::collection::vec("[abcdê]{1,3}", 1..8).prop_map(|w| w.join(" "))
}

proptest! {
    #[test]
    fn scores_bounded_and_deterministic(h in sentence(), r in sentence()) {
        let b1 = bleu(&[split(&r)], &split(&h));
        let b2 = bleu(&[split(&r)], &split(&h));
        prop_assert!((0.0..=100.0).contains(&b1));
        prop_assert_eq!(b1.to_bits(), b2.to_bits());
        let c1 = chrf(&[r.as_str()], &h, 2.0, 6);
        prop_assert!((0.0..=100.0).contains(&c1));
        prop_assert_eq!(c1.to_bits(), chrf(&[r.as_str()], &h, 2.0, 6).to_bits());
    }

    #[test]
    fn identical_scores_full(s in sentence()) {
        prop_assert!((chrf(&[s.as_str()], &s, 2.0, 6) - 100.0).abs() < 1e-9);
        if split(&s).len() >= 4 {
            prop_assert!((bleu(&[split(&s)], &split(&s)) - 100.0).abs() < 1e-9);
        }
    }

    #[test]
    fn corpus_scores_stable_under_duplication(pairs in prop::collection::vec((sentence(), sentence()), 1..5)) {
        let doubled: Vec<_> = pairs.iter().chain(&pairs).cloned().collect();
        let (b, c, _) = ours(&pairs);
        let (b2, c2, _) = ours(&doubled);
        prop_assert!((c - c2).abs() < 1e-9);
        // exp smoothing divides by the n-gram total, so it only cancels out
        // when every order has a match
        let unsmoothed = BleuOptions { smooth_exp: false, ..BleuOptions::default() };
        let score = |ps: &[(String, String)], o: &BleuOptions| {
            let hyps: Vec<&str> = ps.iter().map(|p| p.0.as_str()).collect();
            let refs: Vec<Vec<&str>> = ps.iter().map(|p| vec![p.1.as_str()]).collect();
            corpus_bleu(&hyps, &refs, o)
        };
        prop_assert!((score(&pairs, &unsmoothed).bleu - score(&doubled, &unsmoothed).bleu).abs() < 1e-9);
        if score(&pairs, &unsmoothed).bleu > 0.0 {
            prop_assert!((b - b2).abs() < 1e-9);
        }
    }

    #[test]
    fn naive_oracles_agree(pairs in prop::collection::vec((sentence(), sentence()), 1..5)) {
        let (b, c, w) = ours(&pairs);
        prop_assert!((b - oracle::bleu(&pairs)).abs() < 0.1);
        prop_assert!((c - oracle::chrf(&pairs)).abs() < 0.1);
        prop_assert!((w - oracle::wer(&pairs)).abs() < 1e-9);
    }

    #[test]
    fn wer_zero_iff_equal(r in sentence(), h in sentence()) {
        let w = wer(&split(&r), &split(&h)).unwrap();
        prop_assert_eq!(w.errors() == 0, split(&r) == split(&h));
        let self_w = wer(&split(&r), &split(&r)).unwrap();
        prop_assert_eq!(self_w.wer_percent, 0.0);
    }

    #[test]
    fn edit_count_symmetric(r in sentence(), h in sentence()) {
        let a = wer(&split(&r), &split(&h)).unwrap();
        let b = wer(&split(&h), &split(&r)).unwrap();
        prop_assert_eq!(a.errors(), b.errors());
        prop_assert_eq!((a.insertions, a.deletions), (b.deletions, b.insertions));
    }
}
