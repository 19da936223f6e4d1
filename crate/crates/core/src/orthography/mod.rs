//! Script handling for Central Kurdish text.
//!
//! Arabic script is the canonical form; Latin is a projection used for
//! authoring rule tables and for display. Everything downstream consumes
//! [`NormalizedText`], produced by [`normalize`].

mod normalize;
mod transliterate;

use serde::{Deserialize, Serialize};

pub use normalize::{normalize, NormalizationTable, NormalizeOptions, Normalizer, ZWNJ};
pub use transliterate::{transliterate, Direction, TransliterationTable};

/// Something noteworthy that happened while processing text. Never fatal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Warning {
    /// Byte offset into the produced text.
    pub offset: usize,
    pub ch: char,
    pub kind: WarningKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WarningKind {
    /// Character outside the known Kurdish repertoire; passed through.
    UnknownCharacter,
    /// Letter with no entry in the transliteration table; passed through.
    UnmappedGrapheme,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Script {
    Arabic,
    Latin,
    /// No letters at all (digits, punctuation, empty).
    Neutral,
}

/// Text in canonical form plus its token boundaries.
///
/// Spans are byte ranges into `text`, non-overlapping and strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedText {
    text: String,
    token_spans: Vec<(usize, usize)>,
    warnings: Vec<Warning>,
}

impl NormalizedText {
    pub(crate) fn from_parts(text: String, warnings: Vec<Warning>) -> Self {
        let token_spans = token_spans(&text);
        Self {
            text,
            token_spans,
            warnings,
        }
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn into_string(self) -> String {
        self.text
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn token_spans(&self) -> &[(usize, usize)] {
        &self.token_spans
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> + '_ {
        self.token_spans.iter().map(move |&(s, e)| &self.text[s..e])
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    /// Dominant script of the letters in the text.
    pub fn script(&self) -> Script {
        script_of(&self.text)
    }
}

impl std::fmt::Display for NormalizedText {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.text)
    }
}

/// Splits normalized text into tokens: whitespace-delimited words, with every
/// punctuation character emitted as a token of its own.
pub fn tokenize(t: &NormalizedText) -> Vec<String> {
    t.tokens().map(str::to_owned).collect()
}

pub(crate) fn token_spans(text: &str) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() || is_punctuation(c) {
            if let Some(s) = start.take() {
                spans.push((s, i));
            }
            if is_punctuation(c) {
                spans.push((i, i + c.len_utf8()));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        spans.push((s, text.len()));
    }
    spans
}

const EXTRA_PUNCTUATION: &str = "،؛؟«»…“”‘’–—٪٫٬۔¡¿·•";

pub fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation() || EXTRA_PUNCTUATION.contains(c)
}

pub(crate) fn is_arabic_letter(c: char) -> bool {
    matches!(c as u32, 0x0620..=0x064A | 0x066E..=0x06D5 | 0x06FA..=0x06FF | 0x0750..=0x077F)
}

const LATIN_EXTRA: &str = "çêîşûłřḧẍʿÇÊÎŞÛŁŘḦẌ";

pub(crate) fn is_latin_letter(c: char) -> bool {
    c.is_ascii_alphabetic() || LATIN_EXTRA.contains(c)
}

pub fn script_of(text: &str) -> Script {
    let (mut arabic, mut latin) = (0usize, 0usize);
    for c in text.chars() {
        if is_arabic_letter(c) {
            arabic += 1;
        } else if c.is_alphabetic() {
            latin += 1;
        }
    }
    match (arabic, latin) {
        (0, 0) => Script::Neutral,
        (a, l) if a >= l => Script::Arabic,
        _ => Script::Latin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn punctuation_is_split_off() {
        let t = normalize("naw, xoş");
        assert_eq!(tokenize(&t), vec!["naw", ",", "xoş"]);
    }

    #[test]
    fn empty_text_has_no_tokens() {
        assert!(tokenize(&normalize("")).is_empty());
    }

    #[test]
    fn nine_word_sentence() {
        // hand count: 9 words, no punctuation
        let t = normalize("ئەمڕۆ من و هاوڕێکەم دەچین بۆ بازاڕ لە شار");
        assert_eq!(tokenize(&t).len(), 9);
    }

    #[test]
    fn arabic_punctuation_tokens() {
        let t = normalize("باشی؟ باشم، سوپاس.");
        assert_eq!(tokenize(&t), vec!["باشی", "؟", "باشم", "،", "سوپاس", "."]);
    }

    #[test]
    fn spans_are_increasing_and_in_bounds() {
        let t = normalize("  a,b  ... c ");
        let spans = t.token_spans();
        for w in spans.windows(2) {
            assert!(w[0].1 <= w[1].0);
        }
        for &(s, e) in spans {
            assert!(s < e && e <= t.as_str().len());
        }
    }

    #[test]
    fn script_detection() {
        assert_eq!(script_of("دەچم"), Script::Arabic);
        assert_eq!(script_of("deçim"), Script::Latin);
        assert_eq!(script_of("12 ,"), Script::Neutral);
    }
}
