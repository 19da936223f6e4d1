//! Standard ↔ subdialect rewriting and wordlist similarity.

mod similarity;
mod transducer;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::morphology::{Category, Inventory, MorphError, Surface};
use crate::orthography::TransliterationTable;
pub use crate::tag::{DialectTag, Subdialect};

pub use similarity::{similarity_matrix, SimilarityMatrix, WordlistRow, Wordlists};
pub use transducer::{dialectalize, standardize, Edit, Rewrite, Transducer};

const BUILTIN_RULES: &str = include_str!("../../data/rules.tsv");

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("unsupported dialect {0}: no conversion rules for it")]
    UnsupportedDialect(String),
    #[error("rules: {0}")]
    Rules(String),
    #[error("wordlist schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Morph(#[from] MorphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    Morph,
    Vocab,
    Term,
}

/// Affix replacement, with surfaces in both scripts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphRule {
    pub category: Category,
    pub standard_form: Surface,
    pub dialect_form: Surface,
    pub bijective: bool,
}

/// Word or multiword mapping. `latin` and `arabic` hold the same entry in
/// each script.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    pub standard: Surface,
    pub dialect: Surface,
    pub bijective: bool,
}

impl MapEntry {
    pub fn is_multiword(&self) -> bool {
        self.standard.latin.contains(' ') || self.dialect.latin.contains(' ')
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSet {
    pub dialect: DialectTag,
    pub morph_rules: Vec<MorphRule>,
    pub vocab_map: Vec<MapEntry>,
    pub term_map: Vec<MapEntry>,
}

impl RuleSet {
    fn new(dialect: DialectTag) -> Self {
        Self {
            dialect,
            morph_rules: Vec::new(),
            vocab_map: Vec::new(),
            term_map: Vec::new(),
        }
    }

    pub fn entries(&self, kind: RuleKind) -> &[MapEntry] {
        match kind {
            RuleKind::Vocab => &self.vocab_map,
            RuleKind::Term => &self.term_map,
            RuleKind::Morph => &[],
        }
    }
}

/// Rule sets for every covered subdialect.
#[derive(Debug, Clone)]
pub struct RuleBook {
    sets: BTreeMap<Subdialect, RuleSet>,
}

impl RuleBook {
    pub fn builtin(inventory: &Inventory) -> Self {
        Self::from_tsv(BUILTIN_RULES, inventory).expect("builtin rule table is valid")
    }

    pub fn from_tsv(src: &str, inventory: &Inventory) -> Result<Self, RuleError> {
        let table = TransliterationTable::builtin();
        let to_arabic = |latin: &str| table.to_arabic(latin).0;
        let mut sets: BTreeMap<Subdialect, RuleSet> = BTreeMap::new();
        for (lineno, line) in src.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |m: String| RuleError::Rules(format!("line {}: {m}", lineno + 1));
            let cols: Vec<&str> = line.split('\t').collect();
            if !(5..=6).contains(&cols.len()) {
                return Err(err("expected 5 or 6 columns".into()));
            }
            let (standard, dialect_form) = (cols[1].trim(), cols[2].trim());
            if standard.is_empty() || dialect_form.is_empty() {
                return Err(err("empty form".into()));
            }
            let tag: DialectTag = cols[3].parse().map_err(|e| err(format!("{e}")))?;
            let sub = match tag.subdialect {
                Some(s) if s != Subdialect::Standard => s,
                _ => return Err(err(format!("{tag} is not a rule target"))),
            };
            let bijective = match cols[4] {
                "1" => true,
                "0" => false,
                other => return Err(err(format!("bad bijective flag {other:?}"))),
            };
            let set = sets.entry(sub).or_insert_with(|| RuleSet::new(tag.clone()));
            match cols[0] {
                "morph" => {
                    let category = match cols.get(5) {
                        Some(c) => c.parse().map_err(|e: MorphError| err(e.to_string()))?,
                        None => infer_category(inventory, standard, dialect_form, &tag).map_err(err)?,
                    };
                    let find = |dialect: &DialectTag, latin: &str| {
                        inventory
                            .surfaces(category, dialect)
                            .iter()
                            .find(|s| s.latin == latin)
                            .cloned()
                            .ok_or_else(|| err(format!("{category} has no surface {latin:?} in {dialect}")))
                    };
                    set.morph_rules.push(MorphRule {
                        category,
                        standard_form: find(&DialectTag::standard(), standard)?,
                        dialect_form: find(&tag, dialect_form)?,
                        bijective,
                    });
                }
                kind @ ("vocab" | "term") => {
                    let entry = MapEntry {
                        standard: Surface {
                            latin: standard.to_owned(),
                            arabic: to_arabic(standard),
                        },
                        dialect: Surface {
                            latin: dialect_form.to_owned(),
                            arabic: to_arabic(dialect_form),
                        },
                        bijective,
                    };
                    if kind == "vocab" {
                        set.vocab_map.push(entry);
                    } else {
                        set.term_map.push(entry);
                    }
                }
                other => return Err(err(format!("unknown rule kind {other:?}"))),
            }
        }
        Ok(Self { sets })
    }

    pub fn ruleset(&self, dialect: &DialectTag) -> Result<&RuleSet, RuleError> {
        dialect
            .subdialect
            .and_then(|s| self.sets.get(&s))
            .ok_or_else(|| RuleError::UnsupportedDialect(dialect.to_string()))
    }

    pub fn covered(&self) -> impl Iterator<Item = Subdialect> + '_ {
        self.sets.keys().copied()
    }
}

fn infer_category(inv: &Inventory, standard: &str, dialect_form: &str, tag: &DialectTag) -> Result<Category, String> {
    let candidates: Vec<Category> = Category::ALL
        .into_iter()
        .filter(|&c| {
            inv.surfaces(c, &DialectTag::standard())
                .iter()
                .any(|s| s.latin == standard)
                && inv.surfaces(c, tag).iter().any(|s| s.latin == dialect_form)
        })
        .collect();
    match candidates[..] {
        [c] => Ok(c),
        [] => Err(format!(
            "no category has {standard:?} in Standard and {dialect_form:?} in {tag}"
        )),
        _ => Err(format!(
            "{standard:?}->{dialect_form:?} is ambiguous; add a category column"
        )),
    }
}
