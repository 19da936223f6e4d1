use std::collections::HashSet;
use std::sync::OnceLock;

use super::{word_script, Category, Cell, Inventory, Morph, MorphAnalysis, MorphError};
use crate::orthography::Script;
use crate::tag::DialectTag;

use Category::*;

struct Template {
    prefixes: &'static [Category],
    /// Suffix slots in surface order; `true` marks a required slot.
    suffixes: &'static [(&'static [Category], bool)],
}

const TEMPLATES: [Template; 4] = [
    // finite verb
    Template {
        prefixes: &[Neg, Sbjv, Prog],
        suffixes: &[(&[AdverbialE], false), (&[VsuffEwe], false), (&[CliticIsh], false)],
    },
    // infinitive
    Template {
        prefixes: &[],
        suffixes: &[(&[Inf], true), (&[VsuffEwe], false), (&[CliticIsh], false)],
    },
    // noun
    Template {
        prefixes: &[],
        suffixes: &[
            (&[IndfSg, DefSg, DefPl, Dem], false),
            (&[IndfPl], false),
            (&[Obl], false),
            (&[Izafe], false),
            (&[CliticIsh], false),
        ],
    },
    // adjective
    Template {
        prefixes: &[],
        suffixes: &[(&[Comp, Sup], false)],
    },
];

const MIN_STEM: usize = 2;

const PERSON_ENDINGS_LATIN: [&str; 9] = ["im", "î", "ît", "ê", "a", "at", "în", "in", "n"];
const PERSON_ENDINGS_ARABIC: [&str; 8] = ["م", "ی", "یت", "ێ", "ا", "ات", "ین", "ن"];

const LATIN_VOWELS: &str = "aeêiîouû";
/// Letters that can spell a vowel; و and ی count since they may be read as one.
const ARABIC_VOWEL_LETTERS: &str = "اەێۆوی";

fn builtin() -> &'static Inventory {
    static INVENTORY: OnceLock<Inventory> = OnceLock::new();
    INVENTORY.get_or_init(Inventory::builtin)
}

/// All template-consistent segmentations of `word`, best first, with the
/// whole-word analysis last.
pub fn analyze(word: &str, dialect: &DialectTag) -> Result<Vec<MorphAnalysis>, MorphError> {
    builtin().analyze(word, dialect)
}

/// Builds a surface form from a stem and categories using the first overt
/// surface of each category.
pub fn generate(stem: &str, categories: &[Category], dialect: &DialectTag) -> Result<String, MorphError> {
    builtin().generate(stem, categories, dialect)
}

fn ends_in_person_ending(stem: &str, script: Script) -> bool {
    match script {
        Script::Arabic => PERSON_ENDINGS_ARABIC.iter().any(|e| stem.ends_with(e)),
        _ => PERSON_ENDINGS_LATIN.iter().any(|e| stem.ends_with(e)),
    }
}

/// Arabic spells ب + ا as "ba"; a vowel-initial stem after a prefix
/// written without its vowel would carry ئ or a glide instead.
fn vowel_after_bare_prefix(prefix: &str, stem: &str, script: Script) -> bool {
    script == Script::Arabic
        && consonant_final(prefix, script)
        && stem.chars().next().is_some_and(|c| "اەێۆ".contains(c))
}

fn consonant_final(stem: &str, script: Script) -> bool {
    let vowels = match script {
        Script::Arabic => ARABIC_VOWEL_LETTERS,
        _ => LATIN_VOWELS,
    };
    stem.chars().last().is_some_and(|c| !vowels.contains(c))
}

impl Inventory {
    /// Overt surfaces of a category in the word's script.
    fn overt(&self, category: Category, dialect: &DialectTag, script: Script) -> Vec<&str> {
        self.surfaces(category, dialect)
            .iter()
            .filter(|s| !s.is_zero())
            .map(|s| s.in_script(script))
            .collect()
    }

    pub fn analyze(&self, word: &str, dialect: &DialectTag) -> Result<Vec<MorphAnalysis>, MorphError> {
        if word.is_empty() {
            return Err(MorphError::InvalidInput("empty token".into()));
        }
        if word.chars().any(char::is_whitespace) {
            return Err(MorphError::InvalidInput(format!("{word:?} contains whitespace")));
        }
        let script = word_script(word);
        let mut seen = HashSet::new();
        let mut found = Vec::new();

        for template in &TEMPLATES {
            let mut prefix_options: Vec<Option<Morph>> = vec![None];
            for &cat in template.prefixes {
                for surface in self.overt(cat, dialect, script) {
                    if word.starts_with(surface) {
                        prefix_options.push(Some(Morph {
                            category: cat,
                            surface: surface.to_owned(),
                        }));
                    }
                }
            }
            for prefix in prefix_options {
                let rest = &word[prefix.as_ref().map_or(0, |p| p.surface.len())..];
                let mut suffixes = Vec::new();
                self.strip_suffixes(
                    template,
                    template.suffixes.len(),
                    rest,
                    dialect,
                    script,
                    &mut suffixes,
                    &mut |stem, sufs| {
                        if stem.chars().count() < MIN_STEM {
                            return;
                        }
                        if let Some(p) = &prefix {
                            if !ends_in_person_ending(stem, script) || vowel_after_bare_prefix(&p.surface, stem, script)
                            {
                                return;
                            }
                        }
                        if sufs.iter().any(|m| m.category == Inf) && !consonant_final(stem, script) {
                            return;
                        }
                        let prefixes: Vec<Morph> = prefix.iter().cloned().collect();
                        let suffixes: Vec<Morph> = sufs.iter().rev().cloned().collect();
                        if seen.insert((stem.to_owned(), prefixes.clone(), suffixes.clone())) {
                            found.push(MorphAnalysis {
                                stem: stem.to_owned(),
                                prefixes,
                                suffixes,
                                confidence_rank: 0,
                            });
                        }
                    },
                );
            }
        }

        let (mut affixed, bare): (Vec<_>, Vec<_>) = found.into_iter().partition(|a| !a.is_bare());
        affixed.sort_by_key(|a| (a.morpheme_count(), std::cmp::Reverse(a.stem.chars().count())));
        let mut rank = 0;
        let mut last_key = None;
        for a in &mut affixed {
            let key = (a.morpheme_count(), a.stem.chars().count());
            if last_key != Some(key) {
                rank += 1;
                last_key = Some(key);
            }
            a.confidence_rank = rank;
        }
        let mut bare = bare.into_iter().next().unwrap_or_else(|| MorphAnalysis {
            stem: word.to_owned(),
            prefixes: Vec::new(),
            suffixes: Vec::new(),
            confidence_rank: 0,
        });
        bare.confidence_rank = rank + 1;
        affixed.push(bare);
        Ok(affixed)
    }

    /// Walks suffix slots right to left; `acc` holds stripped suffixes in
    /// reverse surface order.
    #[allow(clippy::too_many_arguments)]
    fn strip_suffixes(
        &self,
        template: &Template,
        slot: usize,
        rest: &str,
        dialect: &DialectTag,
        script: Script,
        acc: &mut Vec<Morph>,
        emit: &mut dyn FnMut(&str, &[Morph]),
    ) {
        if slot == 0 {
            emit(rest, acc);
            return;
        }
        let (cats, required) = template.suffixes[slot - 1];
        if !required {
            self.strip_suffixes(template, slot - 1, rest, dialect, script, acc, emit);
        }
        for &cat in cats {
            for surface in self.overt(cat, dialect, script) {
                if let Some(stem) = rest.strip_suffix(surface) {
                    acc.push(Morph {
                        category: cat,
                        surface: surface.to_owned(),
                    });
                    self.strip_suffixes(template, slot - 1, stem, dialect, script, acc, emit);
                    acc.pop();
                }
            }
        }
    }

    pub fn generate(&self, stem: &str, categories: &[Category], dialect: &DialectTag) -> Result<String, MorphError> {
        let script = word_script(stem);
        let mut morphs = Vec::with_capacity(categories.len());
        for &cat in categories {
            let surface = match self.cell(cat, dialect) {
                Cell::Forms(forms) => forms
                    .iter()
                    .find(|s| !s.is_zero())
                    .map(|s| s.in_script(script).to_owned()),
                Cell::Unavailable => None,
            };
            let surface = surface.ok_or_else(|| MorphError::UnavailableMorpheme {
                category: cat,
                dialect: dialect.to_string(),
            })?;
            morphs.push(Morph { category: cat, surface });
        }
        self.generate_with(stem, &morphs, dialect)
    }

    /// Like [`generate`](Self::generate) but with the surface of each
    /// morpheme fixed by the caller; each must be listed for the dialect.
    pub fn generate_with(&self, stem: &str, morphs: &[Morph], dialect: &DialectTag) -> Result<String, MorphError> {
        for m in morphs {
            let listed = self
                .surfaces(m.category, dialect)
                .iter()
                .any(|s| s.latin == m.surface || s.arabic == m.surface);
            if !listed {
                return Err(MorphError::UnavailableMorpheme {
                    category: m.category,
                    dialect: dialect.to_string(),
                });
            }
        }
        let analysis = place(stem, morphs)?;
        Ok(analysis.surface())
    }
}

/// Orders morphemes by the first template that accepts all of them.
fn place(stem: &str, morphs: &[Morph]) -> Result<MorphAnalysis, MorphError> {
    let mut seen = HashSet::new();
    if let Some(dup) = morphs.iter().find(|m| !seen.insert(m.category)) {
        return Err(MorphError::Template(format!("{} given twice", dup.category)));
    }
    'templates: for template in &TEMPLATES {
        let mut prefixes = Vec::new();
        let mut slots: Vec<Option<Morph>> = vec![None; template.suffixes.len()];
        for m in morphs {
            if template.prefixes.contains(&m.category) {
                if !prefixes.is_empty() {
                    continue 'templates;
                }
                prefixes.push(m.clone());
                continue;
            }
            let Some(i) = template
                .suffixes
                .iter()
                .position(|(cats, _)| cats.contains(&m.category))
            else {
                continue 'templates;
            };
            if slots[i].is_some() {
                continue 'templates;
            }
            slots[i] = Some(m.clone());
        }
        if template
            .suffixes
            .iter()
            .zip(&slots)
            .any(|((_, req), s)| *req && s.is_none())
        {
            continue;
        }
        return Ok(MorphAnalysis {
            stem: stem.to_owned(),
            prefixes,
            suffixes: slots.into_iter().flatten().collect(),
            confidence_rank: 1,
        });
    }
    let cats: Vec<_> = morphs.iter().map(|m| m.category.as_str()).collect();
    Err(MorphError::Template(format!(
        "no template accepts [{}]",
        cats.join(", ")
    )))
}
