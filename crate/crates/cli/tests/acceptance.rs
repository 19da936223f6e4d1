//! Acceptance runner: prints PASS, FAIL or SKIP for each criterion with its
//! time bound, and exits nonzero if any criterion fails.
//!
//! Criterion 6 needs the released speech corpus transcripts as two `label<TAB>text` files named
//! by CKB_LID_TRAIN and CKB_LID_TEST.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::fs;
use std::time::{Duration, Instant};

use ckb_cli::adapter::SystemConfig;
use ckb_cli::experiment::{run_mt_experiment, Direction, Mode, MtExperiment, Tokenize};
use ckb_varieties::corpus::{
    read_episode_sources, split, stats, upsample, BuildOptions, Corpus, SplitSpec, UpsampleStrategy,
};
use ckb_varieties::dialect_rules::{similarity_matrix, Transducer, Wordlists};
use ckb_varieties::lid::{evaluate, read_examples, train, LabeledExample, Level, LidConfig};
use ckb_varieties::metrics::{corpus_bleu, corpus_chrf, corpus_wer, wer, BleuOptions, ChrfOptions};
use ckb_varieties::morphology::Inventory;
use ckb_varieties::orthography::normalize;
use ckb_varieties::tag::{DialectTag, Subdialect};

/// Absolute tolerance for metric equivalence, 0 to 100 scale.
const METRIC_TOLERANCE: f64 = 0.1;
const LID_SYNTHETIC_F1: f64 = 1.0;
const LID_FULL_MIN_F1: f64 = 0.70;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

type Check = Result<String, String>;

/// Number, name, time bound, and the check (`None` means skipped).
type Criterion = (u32, &'static str, Duration, Box<dyn Fn() -> Option<Check>>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_suite() -> Check {
    let t = Transducer::builtin();
    let pairs = support::golden_pairs();
    ensure(pairs.len() >= 20, || format!("only {} golden pairs", pairs.len()))?;
    let required = [
        ("deçim", "eçim"),
        ("jinan", "jingel"),
        ("naw", "nêw"),
        ("xal", "xar"),
        ("xal", "xalo"),
        ("kewtin", "keftin"),
        ("xwên", "xîn"),
        ("xwên", "xên"),
        ("ziman", "ziwan"),
        ("xoş", "xweş"),
        ("pyawêk", "pyawek"),
    ];
    for (s, d) in required {
        ensure(pairs.iter().any(|p| p.standard[0] == s && p.target[0] == d), || {
            format!("missing case {s}↔{d}")
        })?;
    }
    let mut checked = 0;
    for p in &pairs {
        for script in 0..2 {
            let fwd = t
                .dialectalize(&normalize(&p.standard[script]), &p.dialect)
                .map_err(|e| e.to_string())?;
            ensure(fwd.text.as_str() == p.target[script], || {
                format!(
                    "{} → {}: got {}, want {}",
                    p.standard[script],
                    p.dialect,
                    fwd.text.as_str(),
                    p.target[script]
                )
            })?;
            let back = t
                .standardize(&normalize(&p.target[script]), &p.dialect)
                .map_err(|e| e.to_string())?;
            ensure(back.text.as_str() == p.standard[script], || {
                format!(
                    "{} ← {}: got {}, want {}",
                    p.target[script],
                    p.dialect,
                    back.text.as_str(),
                    p.standard[script]
                )
            })?;
            checked += 2;
        }
    }
    Ok(format!("{} pairs, {checked} conversions", pairs.len()))
}

fn round_trip() -> Check {
    let t = Transducer::builtin();
    let probes = support::probe_tokens(&t, 1000);
    let (mut bijective, mut flagged) = (0, 0);
    for p in &probes {
        let fwd = t
            .dialectalize(&normalize(&p.standard), &p.dialect)
            .map_err(|e| e.to_string())?;
        ensure(fwd.text.as_str() == p.dialect_form, || {
            format!(
                "{} → {}: got {}, want {}",
                p.standard,
                p.dialect,
                fwd.text.as_str(),
                p.dialect_form
            )
        })?;
        let back = t.standardize(&fwd.text, &p.dialect).map_err(|e| e.to_string())?;
        if p.bijective {
            ensure(
                back.text.as_str() == p.standard && fwd.flagged().next().is_none(),
                || format!("{} via {} came back as {}", p.standard, p.dialect, back.text.as_str()),
            )?;
            bijective += 1;
        } else {
            ensure(
                fwd.flagged().count() == 1 && back.text.as_str() == p.dialect_form,
                || {
                    format!(
                        "non-bijective {} → {} not flagged or was inverted",
                        p.standard, p.dialect
                    )
                },
            )?;
            flagged += 1;
        }
    }
    Ok(format!(
        "{} tokens: {bijective} round-tripped, {flagged} flagged",
        probes.len()
    ))
}

fn morphology() -> Check {
    let failures = support::cell_round_trip_failures(&Inventory::builtin());
    ensure(failures.is_empty(), || {
        format!(
            "{} failures, first {:?}",
            failures.len(),
            &failures[..failures.len().min(5)]
        )
    })?;
    Ok(format!(
        "{} stems, every populated cell, both scripts",
        support::synthetic_stems().len()
    ))
}

fn metrics_oracle() -> Check {
    let pairs = support::oracle::mt_pairs();
    ensure(pairs.len() == 20, || format!("fixture has {} pairs", pairs.len()))?;
    let hyps: Vec<&str> = pairs.iter().map(|p| p.0.as_str()).collect();
    let refs: Vec<Vec<&str>> = pairs.iter().map(|p| vec![p.1.as_str()]).collect();
    let tokens: Vec<(Vec<&str>, Vec<&str>)> = pairs
        .iter()
        .map(|(h, r)| (r.split_whitespace().collect(), h.split_whitespace().collect()))
        .collect();
    let ours = [
        (
            "BLEU",
            corpus_bleu(&hyps, &refs, &BleuOptions::default()).bleu,
            support::oracle::bleu(&pairs),
        ),
        (
            "chrF2",
            corpus_chrf(&hyps, &refs, &ChrfOptions::default()),
            support::oracle::chrf(&pairs),
        ),
        (
            "WER",
            corpus_wer(&tokens).map_err(|e| e.to_string())?.wer_percent,
            support::oracle::wer(&pairs),
        ),
    ];
    let mut notes = Vec::new();
    for (name, a, b) in ours {
        ensure((a - b).abs() <= METRIC_TOLERANCE, || {
            format!("{name}: {a} vs oracle {b}")
        })?;
        notes.push(format!("{name} {a:.4}/{b:.4}"));
    }
    let hand = [
        (wer(&["a", "b", "c", "d"], &["a", "x", "c"]), 50.0),
        (wer(&["a"], &["a", "b", "c"]), 200.0),
    ];
    for (w, want) in hand {
        let got = w.map_err(|e| e.to_string())?.wer_percent;
        ensure(got == want, || format!("WER hand case: {got} != {want}"))?;
    }
    Ok(notes.join(", "))
}

fn lid_synthetic() -> Check {
    let (tr, test) = support::disjoint_alphabet_corpus(400, 0);
    let config = LidConfig {
        seed: 0,
        ..LidConfig::default()
    };
    let (model, _) = train(&tr, &config, Level::Language).map_err(|e| e.to_string())?;
    let e = evaluate(&model, &test).map_err(|e| e.to_string())?;
    ensure(e.macro_f1() == LID_SYNTHETIC_F1, || {
        format!("held-out macro-F1 {}", e.macro_f1())
    })?;
    Ok(format!(
        "{} train / {} held-out, macro-F1 {}",
        tr.len(),
        test.len(),
        e.macro_f1()
    ))
}

fn lid_full() -> Option<Check> {
    let (Ok(train_path), Ok(test_path)) = (std::env::var("CKB_LID_TRAIN"), std::env::var("CKB_LID_TEST")) else {
        return None;
    };
    Some((|| {
        let read = |p: &str| -> Result<Vec<LabeledExample>, String> {
            read_examples(&fs::read_to_string(p).map_err(|e| format!("{p}: {e}"))?).map_err(|e| e.to_string())
        };
        let raw = read(&train_path)?;
        let test = read(&test_path)?;
        let items: Vec<(String, LabeledExample)> = raw.into_iter().map(|e| (e.label.clone(), e)).collect();
        let balanced: Vec<LabeledExample> = upsample(&items, UpsampleStrategy::Cycle)
            .into_iter()
            .map(|u| u.item)
            .collect();
        let (model, _) = train(&balanced, &LidConfig::default(), Level::Subdialect).map_err(|e| e.to_string())?;
        let e = evaluate(&model, &test).map_err(|e| e.to_string())?;
        let pattern = e.pattern();
        let hub = DialectTag::subdialect(Subdialect::Sulaymaniyah).to_string();
        let erbil = DialectTag::subdialect(Subdialect::Erbil).to_string();
        let mahabad = DialectTag::subdialect(Subdialect::Mahabad).to_string();
        ensure(e.macro_f1() >= LID_FULL_MIN_F1, || {
            format!("macro-F1 {:.4} < {LID_FULL_MIN_F1}", e.macro_f1())
        })?;
        ensure(pattern.hub_dominates(&hub), || {
            format!("largest confusion is {:?}", pattern.largest_cell)
        })?;
        ensure(pattern.top_pair_without(&hub, &erbil, &mahabad), || {
            format!(
                "top pair without {hub} is {:?}",
                pattern.pairs.iter().find(|p| p.0 != hub && p.1 != hub)
            )
        })?;
        Ok(format!(
            "{} train (upsampled), {} test, macro-F1 {:.4}",
            items.len(),
            test.len(),
            e.macro_f1()
        ))
    })())
}

fn similarity_order() -> Check {
    let m = similarity_matrix(&Wordlists::builtin());
    let n = m.neighbors(&DialectTag::standard());
    let first = &n.first().ok_or("no neighbours")?.0;
    let last = &n.last().ok_or("no neighbours")?.0;
    ensure(*first == DialectTag::subdialect(Subdialect::Sulaymaniyah), || {
        format!("closest is {first}")
    })?;
    ensure(*last == DialectTag::subdialect(Subdialect::Sanandaj), || {
        format!("farthest is {last}")
    })?;
    Ok(format!("closest {first}, farthest {last}"))
}

fn corpus_pipeline() -> Check {
    let dir = support::fixture_dir().join("corpus");
    let sources = read_episode_sources(&dir.join("episodes.csv")).map_err(|e| e.to_string())?;
    let corpus = Corpus::build(&sources, &BuildOptions::default()).map_err(|e| e.to_string())?;
    let cues: usize = corpus
        .episodes
        .iter()
        .map(|e| e.utterances.len() + e.exclusions.len())
        .sum();
    let short = corpus
        .episodes
        .iter()
        .flat_map(|e| &e.exclusions)
        .filter(|x| x.reason == "too_short")
        .count();
    let annotated = corpus.utterances().filter(|u| u.has_speaker_metadata()).count();
    ensure((cues, short, annotated) == (12, 1, 2), || {
        format!("cues {cues}, short {short}, annotated {annotated}")
    })?;
    let expected = fs::read_to_string(dir.join("expected_stats.csv")).map_err(|e| e.to_string())?;
    let got = stats(&corpus).to_csv();
    ensure(got == expected, || format!("stats differ:\n{got}"))?;
    let spec = SplitSpec {
        test_sizes: [("ckb-snn".to_owned(), 2), ("ckb-hwl".to_owned(), 1)].into(),
        ..SplitSpec::asr_default()
    };
    let listing = || -> Result<Vec<Vec<u8>>, String> {
        let out = tempfile::tempdir().map_err(|e| e.to_string())?;
        split(&corpus, &spec, 0)
            .and_then(|s| s.write(out.path()))
            .map_err(|e| e.to_string())?;
        ["train.txt", "validation.txt", "test.txt"]
            .iter()
            .map(|f| fs::read(out.path().join(f)).map_err(|e| e.to_string()))
            .collect()
    };
    ensure(listing()? == listing()?, || "split listings differ between runs".into())?;
    Ok("stats match hand-computed table; split byte-identical".into())
}

fn harness() -> Check {
    let t = Transducer::builtin();
    let pairs = support::oracle::mt_pairs();
    let hyps: Vec<String> = pairs.iter().map(|p| p.0.clone()).collect();
    let refs: Vec<String> = pairs.iter().map(|p| p.1.clone()).collect();
    let cell = |mode, dialect: DialectTag, src: &[String], refs: &[String]| MtExperiment {
        direction: Direction::EnToCkb,
        dialect,
        mode,
        system: SystemConfig::identity("identity"),
        sources: src.to_vec(),
        references: vec![refs.to_vec()],
        tokenize: Tokenize::None,
    };
    let same = run_mt_experiment(&cell(Mode::Baseline, DialectTag::standard(), &refs, &refs), &t, None)
        .map_err(|e| e.to_string())?;
    ensure(
        (same.bleu - 100.0).abs() < 1e-9 && (same.chrf2 - 100.0).abs() < 1e-9,
        || format!("identity on references: BLEU {} chrF2 {}", same.bleu, same.chrf2),
    )?;
    let base = run_mt_experiment(&cell(Mode::Baseline, DialectTag::standard(), &hyps, &refs), &t, None)
        .map_err(|e| e.to_string())?;
    let post = run_mt_experiment(&cell(Mode::Postprocess, DialectTag::standard(), &hyps, &refs), &t, None)
        .map_err(|e| e.to_string())?;
    ensure(base.bleu == post.bleu && base.chrf2 == post.chrf2, || {
        "postprocess to Standard changed scores".into()
    })?;
    metrics_oracle().map_err(|e| format!("metrics oracle: {e}"))?;
    Ok("identity invariants hold; numeric reproduction needs external systems".into())
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (
            1,
            "transducer golden suite",
            Duration::from_secs(1),
            Box::new(|| Some(golden_suite())),
        ),
        (
            2,
            "dialect round trip",
            Duration::from_secs(10),
            Box::new(|| Some(round_trip())),
        ),
        (
            3,
            "morphology round trip",
            Duration::from_secs(5),
            Box::new(|| Some(morphology())),
        ),
        (
            4,
            "metrics oracle equivalence",
            Duration::from_secs(5),
            Box::new(|| Some(metrics_oracle())),
        ),
        (
            5,
            "LID synthetic separability",
            Duration::from_secs(30),
            Box::new(|| Some(lid_synthetic())),
        ),
        (6, "LID full corpus", Duration::from_secs(3600), Box::new(lid_full)),
        (
            7,
            "similarity ordering",
            Duration::from_secs(5),
            Box::new(|| Some(similarity_order())),
        ),
        (
            8,
            "corpus pipeline",
            Duration::from_secs(1),
            Box::new(|| Some(corpus_pipeline())),
        ),
        (9, "MT harness", Duration::from_secs(5), Box::new(|| Some(harness()))),
    ];
    let mut failed = 0;
    for (n, name, bound, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let outcome = match result {
            None => Outcome::Skip("CKB_LID_TRAIN / CKB_LID_TEST not set".into()),
            Some(Err(e)) => Outcome::Fail(e),
            Some(Ok(_)) if elapsed > bound => Outcome::Fail(format!("took {elapsed:.2?}, bound {bound:?}")),
            Some(Ok(note)) => Outcome::Pass(note),
        };
        let (tag, note) = match outcome {
            Outcome::Pass(s) => ("PASS", s),
            Outcome::Fail(s) => {
                failed += 1;
                ("FAIL", s)
            }
            Outcome::Skip(s) => ("SKIP", s),
        };
        println!("criterion {n} [{name}]: {tag} ({elapsed:.2?} of {bound:?}) {note}");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
