use std::collections::HashMap;

use unicode_normalization::UnicodeNormalization;

use super::{is_arabic_letter, is_latin_letter, is_punctuation, NormalizedText, Warning, WarningKind};

pub const ZWNJ: char = '\u{200C}';

const BUILTIN_TABLE: &str = include_str!("../../data/normalization.tsv");

/// Character-level cleanup map loaded from a `source\ttarget\tflag` TSV.
#[derive(Debug, Clone)]
pub struct NormalizationTable {
    strip: Vec<char>,
    map: HashMap<char, char>,
    /// letter + ZWNJ folded into a single letter
    zwnj_seq: HashMap<char, char>,
}

impl NormalizationTable {
    pub fn builtin() -> Self {
        Self::from_tsv(BUILTIN_TABLE).expect("builtin normalization table is valid")
    }

    pub fn from_tsv(src: &str) -> Result<Self, String> {
        let mut table = Self {
            strip: Vec::new(),
            map: HashMap::new(),
            zwnj_seq: HashMap::new(),
        };
        for (lineno, line) in src.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(format!("line {}: expected 3 columns", lineno + 1));
            }
            let source = parse_code_points(cols[0]).map_err(|e| format!("line {}: {e}", lineno + 1))?;
            let target = parse_code_points(cols[1]).map_err(|e| format!("line {}: {e}", lineno + 1))?;
            match (cols[2], source.as_slice(), target.as_slice()) {
                ("strip", [c], []) => table.strip.push(*c),
                ("map", [c], [t]) => {
                    table.map.insert(*c, *t);
                }
                ("zwnj-seq", [c, ZWNJ], [t]) => {
                    table.zwnj_seq.insert(*c, *t);
                }
                (flag, _, _) => return Err(format!("line {}: bad entry for flag {flag:?}", lineno + 1)),
            }
        }
        Ok(table)
    }

    /// Characters that can never survive normalization.
    pub fn blocklist(&self) -> impl Iterator<Item = char> + '_ {
        self.strip.iter().copied().chain(self.map.keys().copied())
    }
}

fn parse_code_points(s: &str) -> Result<Vec<char>, String> {
    s.split_whitespace()
        .map(|cp| {
            let hex = cp.strip_prefix("U+").ok_or_else(|| format!("bad code point {cp:?}"))?;
            u32::from_str_radix(hex, 16)
                .ok()
                .and_then(char::from_u32)
                .ok_or_else(|| format!("bad code point {cp:?}"))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NormalizeOptions {
    /// Keep ZWNJ at token edges too (by default it survives only word-internally).
    pub keep_edge_zwnj: bool,
}

#[derive(Debug, Clone)]
pub struct Normalizer {
    table: NormalizationTable,
    options: NormalizeOptions,
}

impl Default for Normalizer {
    fn default() -> Self {
        Self::new(NormalizationTable::builtin(), NormalizeOptions::default())
    }
}

impl Normalizer {
    pub fn new(table: NormalizationTable, options: NormalizeOptions) -> Self {
        Self { table, options }
    }

    pub fn table(&self) -> &NormalizationTable {
        &self.table
    }

    pub fn normalize(&self, raw: &str) -> NormalizedText {
        let mut text = self.pass(raw);
        // Stages can expose new matches (a stripped tatweel between heh and
        // ZWNJ, say); iterate to a fixed point so the result is idempotent.
        for _ in 0..4 {
            let next = self.pass(&text);
            if next == text {
                break;
            }
            text = next;
        }
        let warnings = text
            .char_indices()
            .filter(|&(_, c)| !is_known(c))
            .map(|(offset, ch)| Warning {
                offset,
                ch,
                kind: WarningKind::UnknownCharacter,
            })
            .collect();
        NormalizedText::from_parts(text, warnings)
    }

    fn pass(&self, raw: &str) -> String {
        let composed: String = raw
            .chars()
            .flat_map(|c| -> Box<dyn Iterator<Item = char>> {
                if is_presentation_form(c) {
                    Box::new(std::iter::once(c).nfkc())
                } else {
                    Box::new(std::iter::once(c))
                }
            })
            .nfc()
            .filter(|c| !self.table.strip.contains(c))
            .collect();

        let mut mapped = String::with_capacity(composed.len());
        let mut chars = composed.chars().peekable();
        while let Some(c) = chars.next() {
            if chars.peek() == Some(&ZWNJ) {
                if let Some(&t) = self.table.zwnj_seq.get(&c) {
                    chars.next();
                    mapped.push(t);
                    continue;
                }
            }
            mapped.push(*self.table.map.get(&c).unwrap_or(&c));
        }

        let collapsed = collapse_whitespace(&mapped);
        if self.options.keep_edge_zwnj {
            collapsed
        } else {
            strip_edge_zwnj(&collapsed)
        }
    }
}

/// Normalizes with the builtin table and default options.
pub fn normalize(raw: &str) -> NormalizedText {
    thread_local! {
        static DEFAULT: Normalizer = Normalizer::default();
    }
    DEFAULT.with(|n| n.normalize(raw))
}

fn is_presentation_form(c: char) -> bool {
    matches!(c as u32, 0xFB50..=0xFDFF | 0xFE70..=0xFEFF)
}

fn collapse_whitespace(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for word in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

/// Drops ZWNJ that is not between two word characters; runs collapse to one.
fn strip_edge_zwnj(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let is_word = |c: char| !(c.is_whitespace() || is_punctuation(c) || c == ZWNJ);
    let mut out = String::with_capacity(s.len());
    let mut i = 0;
    while i < chars.len() {
        if chars[i] != ZWNJ {
            out.push(chars[i]);
            i += 1;
            continue;
        }
        let run_end = chars[i..]
            .iter()
            .position(|&c| c != ZWNJ)
            .map_or(chars.len(), |p| i + p);
        let before = i.checked_sub(1).map(|j| chars[j]);
        let after = chars.get(run_end).copied();
        if before.is_some_and(is_word) && after.is_some_and(is_word) {
            out.push(ZWNJ);
        }
        i = run_end;
    }
    out
}

fn is_known(c: char) -> bool {
    c.is_whitespace()
        || c == ZWNJ
        || is_punctuation(c)
        || c.is_ascii_digit()
        || matches!(c as u32, 0x0660..=0x0669 | 0x06F0..=0x06F9)
        || is_latin_letter(c)
        || (is_arabic_letter(c) && KURDISH_ARABIC.contains(c))
}

const KURDISH_ARABIC: &str = "ئابپتجچحخدرڕزژسشعغفڤقکگلڵمنهەوۆیێ";
