//! Fixtures shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

pub mod oracle;

use ckb_varieties::dialect_rules::{RuleKind, Transducer};
use ckb_varieties::morphology::{Category, Inventory, Morph};
use ckb_varieties::orthography::TransliterationTable;
use ckb_varieties::tag::{DialectTag, Subdialect};

pub const GOLDEN_PAIRS: &str = include_str!("../fixtures/golden_pairs.tsv");
pub const ARABIC_TOKENS: &str = include_str!("../fixtures/arabic_tokens.txt");

pub struct GoldenPair {
    pub standard: [String; 2],
    pub dialect: DialectTag,
    pub target: [String; 2],
}

pub fn golden_pairs() -> Vec<GoldenPair> {
    GOLDEN_PAIRS
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            GoldenPair {
                standard: [f[0].to_owned(), f[1].to_owned()],
                dialect: f[2].parse().unwrap(),
                target: [f[3].to_owned(), f[4].to_owned()],
            }
        })
        .collect()
}

/// Fifty C V C + "im" stems: consonant-final and ending in a person ending,
/// so every analyzer guard admits them. Onsets avoid the prefix spellings
/// (b, d, m, n): a word like "nawimewanê" is genuinely ambiguous with na- + stem.
pub fn synthetic_stems() -> Vec<String> {
    let onsets = ["g", "h", "j", "k", "p", "s", "t", "z", "ç", "ş"];
    let nuclei = ["a", "e", "o", "ê", "û"];
    let mut out = Vec::new();
    for (i, o) in onsets.iter().enumerate() {
        for v in nuclei {
            let coda = ["r", "x", "f", "l", "w"][i % 5];
            out.push(format!("{o}{v}{coda}im"));
        }
    }
    out
}

fn dialects(inv: &Inventory) -> Vec<DialectTag> {
    let mut d: Vec<DialectTag> = inv
        .subdialect_columns()
        .into_iter()
        .map(DialectTag::subdialect)
        .collect();
    d.push(DialectTag::subdialect(Subdialect::Kalar));
    d
}

/// Every overt cell surface, in both scripts, generated on every stem and
/// analyzed back. Returns the failures.
pub fn cell_round_trip_failures(inv: &Inventory) -> Vec<String> {
    let translit = TransliterationTable::builtin();
    let mut failures = Vec::new();
    for dialect in dialects(inv) {
        for cat in Category::ALL {
            for surface in inv.surfaces(cat, &dialect).iter().filter(|s| !s.is_zero()) {
                for stem in synthetic_stems() {
                    let arabic_stem = translit.to_arabic(&stem).0;
                    for (stem, form) in [(&stem, &surface.latin), (&arabic_stem, &surface.arabic)] {
                        let morph = Morph {
                            category: cat,
                            surface: form.clone(),
                        };
                        let word = inv.generate_with(stem, &[morph], &dialect).unwrap();
                        let ok = inv
                            .analyze(&word, &dialect)
                            .unwrap()
                            .iter()
                            .any(|a| a.confidence_rank <= 2 && a.categories() == [cat] && &a.stem == stem);
                        if !ok {
                            failures.push(format!("{dialect} {cat} {word}"));
                        }
                    }
                }
            }
        }
    }
    failures
}

/// A standard-side token built to exercise one rule entry.
#[derive(Debug, Clone)]
pub struct Probe {
    pub dialect: DialectTag,
    pub kind: RuleKind,
    pub standard: String,
    pub dialect_form: String,
    pub bijective: bool,
}

/// One probe per map entry and script, and one per morph rule, stem and
/// script.
pub fn rule_probes(t: &Transducer) -> Vec<Probe> {
    let translit = TransliterationTable::builtin();
    let stems = synthetic_stems();
    let std = DialectTag::standard();
    let mut out = Vec::new();
    for sub in t.rules().covered() {
        let dialect = DialectTag::subdialect(sub);
        let set = t.rules().ruleset(&dialect).unwrap();
        for kind in [RuleKind::Term, RuleKind::Vocab] {
            for e in set.entries(kind) {
                for (s, d) in [
                    (&e.standard.latin, &e.dialect.latin),
                    (&e.standard.arabic, &e.dialect.arabic),
                ] {
                    out.push(Probe {
                        dialect: dialect.clone(),
                        kind,
                        standard: s.clone(),
                        dialect_form: d.clone(),
                        bijective: e.bijective,
                    });
                }
            }
        }
        for r in &set.morph_rules {
            for stem in &stems {
                let arabic = translit.to_arabic(stem).0;
                for (stem, s, d) in [
                    (stem, &r.standard_form.latin, &r.dialect_form.latin),
                    (&arabic, &r.standard_form.arabic, &r.dialect_form.arabic),
                ] {
                    let make = |surface: &String, tag: &DialectTag| {
                        let m = Morph {
                            category: r.category,
                            surface: surface.clone(),
                        };
                        t.inventory().generate_with(stem, &[m], tag).unwrap()
                    };
                    out.push(Probe {
                        dialect: dialect.clone(),
                        kind: RuleKind::Morph,
                        standard: make(s, &std),
                        dialect_form: make(d, &dialect),
                        bijective: r.bijective,
                    });
                }
            }
        }
    }
    out
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next()
        .map(|f| f.to_uppercase().chain(c).collect())
        .unwrap_or_default()
}

/// `n` probes: every probe once, then capitalized Latin variants, then
/// repeats, so all entries are covered for any `n` ≥ the probe count.
pub fn probe_tokens(t: &Transducer, n: usize) -> Vec<Probe> {
    let base = rule_probes(t);
    let caps: Vec<Probe> = base
        .iter()
        .filter(|p| p.standard.is_ascii() || p.standard.chars().next().is_some_and(|c| c.is_ascii_lowercase()))
        .map(|p| Probe {
            standard: capitalize(&p.standard),
            dialect_form: capitalize(&p.dialect_form),
            ..p.clone()
        })
        .collect();
    base.iter()
        .chain(&caps)
        .cycle()
        .take(n.max(base.len()))
        .cloned()
        .collect()
}

/// Two classes over disjoint alphabets: `n` examples split 80/20 into
/// train and held-out, classes interleaved.
pub fn disjoint_alphabet_corpus(
    n: usize,
    seed: u64,
) -> (
    Vec<ckb_varieties::lid::LabeledExample>,
    Vec<ckb_varieties::lid::LabeledExample>,
) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let classes = [("ckb", "abcdefgh"), ("kmr", "ijklmnop")];
    let all: Vec<_> = (0..n)
        .map(|i| {
            let (label, alphabet) = classes[i % 2];
            let letters: Vec<char> = alphabet.chars().collect();
            let words: Vec<String> = (0..rng.gen_range(1..6))
                .map(|_| {
                    (0..rng.gen_range(2..7))
                        .map(|_| letters[rng.gen_range(0..letters.len())])
                        .collect()
                })
                .collect();
            ckb_varieties::lid::LabeledExample::new(label, &words.join(" "))
        })
        .collect();
    let cut = n * 4 / 5;
    (all[..cut].to_vec(), all[cut..].to_vec())
}

/// `tests/fixtures` of the core crate, from any crate in the workspace.
pub fn fixture_dir() -> std::path::PathBuf {
    let here = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(file!());
    here.parent().unwrap().parent().unwrap().join("fixtures")
}
