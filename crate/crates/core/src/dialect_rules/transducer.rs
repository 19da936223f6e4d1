use std::collections::HashMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{RuleBook, RuleError, RuleKind, RuleSet};
use crate::morphology::{Category, Inventory, Morph};
use crate::orthography::{is_punctuation, NormalizedText};
use crate::tag::{DialectTag, Subdialect};

/// One token-level (or multiword) rewrite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edit {
    /// Index of the first rewritten token in the input.
    pub token: usize,
    pub kind: RuleKind,
    pub from: String,
    pub to: String,
    pub bijective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rewrite {
    pub text: NormalizedText,
    pub edits: Vec<Edit>,
}

impl Rewrite {
    /// Edits that cannot be undone by standardization.
    pub fn flagged(&self) -> impl Iterator<Item = &Edit> + '_ {
        self.edits.iter().filter(|e| !e.bijective)
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    words: Vec<String>,
    replacement: String,
    kind: RuleKind,
    bijective: bool,
}

#[derive(Debug, Default, Clone)]
struct Index {
    /// keyed by the lowercased first word; term before vocab, longer first
    maps: HashMap<String, Vec<Candidate>>,
    /// (category, source surface) -> (target surface, bijective)
    morph: HashMap<(Category, String), (String, bool)>,
}

/// Applies a [`RuleBook`] to text. Precedence per token is term, then
/// vocabulary, then affix rules; the first that matches wins.
#[derive(Debug, Clone)]
pub struct Transducer {
    inventory: Inventory,
    rules: RuleBook,
    forward: HashMap<Subdialect, Index>,
    backward: HashMap<Subdialect, Index>,
}

impl Transducer {
    pub fn builtin() -> Self {
        let inventory = Inventory::builtin();
        let rules = RuleBook::builtin(&inventory);
        Self::new(inventory, rules)
    }

    pub fn new(inventory: Inventory, rules: RuleBook) -> Self {
        let mut forward = HashMap::new();
        let mut backward = HashMap::new();
        for sub in rules.covered() {
            let set = &rules.sets[&sub];
            forward.insert(sub, build_index(set, true));
            backward.insert(sub, build_index(set, false));
        }
        Self {
            inventory,
            rules,
            forward,
            backward,
        }
    }

    pub fn rules(&self) -> &RuleBook {
        &self.rules
    }

    pub fn inventory(&self) -> &Inventory {
        &self.inventory
    }

    pub fn dialectalize(&self, text: &NormalizedText, target: &DialectTag) -> Result<Rewrite, RuleError> {
        if target.is_standard() {
            return Ok(unchanged(text));
        }
        let set = self.rules.ruleset(target)?;
        let sub = set.dialect.subdialect.expect("rule sets are keyed by subdialect");
        Ok(self.rewrite(text, &self.forward[&sub], &DialectTag::standard()))
    }

    /// Reverse direction; only entries marked bijective are applied.
    pub fn standardize(&self, text: &NormalizedText, source: &DialectTag) -> Result<Rewrite, RuleError> {
        if source.is_standard() {
            return Ok(unchanged(text));
        }
        let set = self.rules.ruleset(source)?;
        let sub = set.dialect.subdialect.expect("rule sets are keyed by subdialect");
        Ok(self.rewrite(text, &self.backward[&sub], source))
    }

    fn rewrite(&self, text: &NormalizedText, index: &Index, analysis_dialect: &DialectTag) -> Rewrite {
        let src = text.as_str();
        let spans = text.token_spans();
        let mut out = String::with_capacity(src.len());
        let mut cursor = 0;
        let mut edits = Vec::new();
        let mut i = 0;
        while i < spans.len() {
            let (start, end) = spans[i];
            let token = &src[start..end];
            if token.chars().all(is_punctuation) {
                i += 1;
                continue;
            }
            if let Some((n, cand)) = match_maps(src, spans, i, index) {
                let last = spans[i + n - 1].1;
                let replacement = match_case(token, &cand.replacement);
                out.push_str(&src[cursor..start]);
                out.push_str(&replacement);
                edits.push(Edit {
                    token: i,
                    kind: cand.kind,
                    from: src[start..last].to_owned(),
                    to: replacement,
                    bijective: cand.bijective,
                });
                cursor = last;
                i += n;
                continue;
            }
            if let Some((replacement, bijective)) = self.rewrite_affixes(&token.to_lowercase(), index, analysis_dialect)
            {
                let replacement = match_case(token, &replacement);
                out.push_str(&src[cursor..start]);
                out.push_str(&replacement);
                edits.push(Edit {
                    token: i,
                    kind: RuleKind::Morph,
                    from: token.to_owned(),
                    to: replacement,
                    bijective,
                });
                cursor = end;
            }
            i += 1;
        }
        out.push_str(&src[cursor..]);
        Rewrite {
            text: NormalizedText::from_parts(out, Vec::new()),
            edits,
        }
    }

    /// Tries analyses best first and rewrites the first one that has at
    /// least one rule-covered morpheme.
    fn rewrite_affixes(&self, token: &str, index: &Index, dialect: &DialectTag) -> Option<(String, bool)> {
        if index.morph.is_empty() {
            return None;
        }
        let analyses = self.inventory.analyze(token, dialect).ok()?;
        for a in analyses.iter().filter(|a| !a.is_bare()) {
            let mut changed = false;
            let mut bijective = true;
            let mut swap = |m: &Morph| match index.morph.get(&(m.category, m.surface.clone())) {
                Some((to, bij)) => {
                    changed = true;
                    bijective &= bij;
                    to.clone()
                }
                None => m.surface.clone(),
            };
            let mut s = String::new();
            a.prefixes.iter().for_each(|m| s.push_str(&swap(m)));
            s.push_str(&a.stem);
            a.suffixes.iter().for_each(|m| s.push_str(&swap(m)));
            if changed {
                return Some((s, bijective));
            }
        }
        None
    }
}

fn unchanged(text: &NormalizedText) -> Rewrite {
    Rewrite {
        text: text.clone(),
        edits: Vec::new(),
    }
}

fn build_index(set: &RuleSet, forward: bool) -> Index {
    let mut index = Index::default();
    for kind in [RuleKind::Term, RuleKind::Vocab] {
        for e in set.entries(kind) {
            if !forward && !e.bijective {
                continue;
            }
            let (from, to) = if forward {
                (&e.standard, &e.dialect)
            } else {
                (&e.dialect, &e.standard)
            };
            for (key, value) in [(&from.latin, &to.latin), (&from.arabic, &to.arabic)] {
                let words: Vec<String> = key.split(' ').map(str::to_lowercase).collect();
                index.maps.entry(words[0].clone()).or_default().push(Candidate {
                    words,
                    replacement: value.clone(),
                    kind,
                    bijective: e.bijective,
                });
            }
        }
    }
    for cands in index.maps.values_mut() {
        // stable: kind order (term first) is preserved within equal lengths
        cands.sort_by_key(|c| (c.kind != RuleKind::Term, std::cmp::Reverse(c.words.len())));
    }
    for r in &set.morph_rules {
        if !forward && !r.bijective {
            continue;
        }
        let (from, to) = if forward {
            (&r.standard_form, &r.dialect_form)
        } else {
            (&r.dialect_form, &r.standard_form)
        };
        index
            .morph
            .insert((r.category, from.latin.clone()), (to.latin.clone(), r.bijective));
        index
            .morph
            .insert((r.category, from.arabic.clone()), (to.arabic.clone(), r.bijective));
    }
    index
}

/// Longest map entry starting at token `i`; multiword entries need single
/// spaces between their tokens.
fn match_maps<'a>(src: &str, spans: &[(usize, usize)], i: usize, index: &'a Index) -> Option<(usize, &'a Candidate)> {
    let first = src[spans[i].0..spans[i].1].to_lowercase();
    let cands = index.maps.get(&first)?;
    cands.iter().find_map(|c| {
        let n = c.words.len();
        if i + n > spans.len() {
            return None;
        }
        for k in 1..n {
            let (prev_end, start) = (spans[i + k - 1].1, spans[i + k].0);
            if &src[prev_end..start] != " " || src[start..spans[i + k].1].to_lowercase() != c.words[k] {
                return None;
            }
        }
        Some((n, c))
    })
}

/// Carries a leading capital over to the replacement.
fn match_case(original: &str, replacement: &str) -> String {
    let starts_upper = original.chars().next().is_some_and(char::is_uppercase);
    if !starts_upper {
        return replacement.to_owned();
    }
    let mut chars = replacement.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn builtin() -> &'static Transducer {
    static TRANSDUCER: OnceLock<Transducer> = OnceLock::new();
    TRANSDUCER.get_or_init(Transducer::builtin)
}

/// Rewrites Standard text into `target` with the builtin rules.
pub fn dialectalize(text: &NormalizedText, target: &DialectTag) -> Result<NormalizedText, RuleError> {
    builtin().dialectalize(text, target).map(|r| r.text)
}

/// Rewrites `source` text towards Standard with the builtin rules.
pub fn standardize(text: &NormalizedText, source: &DialectTag) -> Result<NormalizedText, RuleError> {
    builtin().standardize(text, source).map(|r| r.text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthography::normalize;

    fn tag(s: &str) -> DialectTag {
        s.parse().unwrap()
    }

    fn dia(s: &str, t: &str) -> String {
        dialectalize(&normalize(s), &tag(t)).unwrap().into_string()
    }

    fn std_(s: &str, t: &str) -> String {
        standardize(&normalize(s), &tag(t)).unwrap().into_string()
    }

    #[test]
    fn table_examples_forward() {
        assert_eq!(dia("deçim", "ckb-slm"), "eçim");
        assert_eq!(dia("jinan", "ckb-snn"), "jingel");
        assert_eq!(dia("naw", "ckb-mhb"), "nêw");
        assert_eq!(dia("xal", "ckb-hwl"), "xar");
        assert_eq!(dia("دەچم", "ckb-slm"), "ئەچم");
        assert_eq!(dia("ژنان", "ckb-snn"), "ژنگەل");
    }

    #[test]
    fn table_examples_backward() {
        assert_eq!(std_("eçim", "ckb-slm"), "deçim");
        assert_eq!(std_("keftin", "ckb-snn"), "kewtin");
        assert_eq!(std_("xîn", "ckb-hwl"), "xwên");
        assert_eq!(std_("خین", "ckb-hwl"), "خوێن");
    }

    #[test]
    fn standard_target_is_identity() {
        let t = normalize("deçim  jinan, naw");
        assert_eq!(dialectalize(&t, &DialectTag::standard()).unwrap(), t);
    }

    #[test]
    fn unsupported_targets() {
        for t in ["ckb-klr", "ckb-srd", "ckb", "kmr"] {
            assert!(matches!(
                dialectalize(&normalize("naw"), &tag(t)),
                Err(RuleError::UnsupportedDialect(_))
            ));
        }
    }

    #[test]
    fn punctuation_and_spacing_kept() {
        assert_eq!(dia("naw, xal.", "ckb-mhb"), "nêw, xal.");
        assert_eq!(dia("Naw", "ckb-mhb"), "Nêw");
        assert_eq!(dia("Deçim", "ckb-slm"), "Eçim");
    }

    #[test]
    fn term_beats_vocab_and_multiword() {
        assert_eq!(dia("mesʿed", "ckb-snn"), "asansor");
        assert_eq!(dia("ew bom hênay", "ckb-snn"), "ew hawirdim bot");
        assert_eq!(std_("ew hawirdim bot", "ckb-snn"), "ew bom hênay");
        // not adjacent with a single space: no multiword match
        assert_eq!(dia("bom, hênay", "ckb-snn"), "bom, hênay");
    }

    #[test]
    fn non_bijective_only_forward_and_flagged() {
        let t = Transducer::builtin();
        let r = t.dialectalize(&normalize("dił"), &tag("ckb-hwl")).unwrap();
        assert_eq!(r.text.as_str(), "dir");
        assert_eq!(r.flagged().count(), 1);
        assert_eq!(std_("dir", "ckb-hwl"), "dir");
    }

    #[test]
    fn lower_ranked_analysis_used_when_top_has_no_rule() {
        // rank 1 reads the final -e as a suffix on "hatimew"; -ewe is rank 2
        assert_eq!(dia("hatimewe", "ckb-snn"), "hatimew");
        assert_eq!(std_("hatimew", "ckb-snn"), "hatimewe");
    }

    #[test]
    fn edits_record_source() {
        let t = Transducer::builtin();
        let r = t.dialectalize(&normalize("pyawêk naw"), &tag("ckb-hwl")).unwrap();
        assert_eq!(r.text.as_str(), "pyawek naw");
        assert_eq!(r.edits.len(), 1);
        assert_eq!(r.edits[0].kind, RuleKind::Morph);
        assert_eq!(r.edits[0].token, 0);
    }
}
