use crate::orthography::NormalizedText;

use super::LidConfig;

const WORD_NS: u8 = 0x00;
const NGRAM_NS: u8 = 0x01;

/// 32-bit FNV-1a.
pub fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u32 {
    let mut h: u32 = 0x811c_9dc5;
    for b in bytes {
        h ^= u32::from(b);
        h = h.wrapping_mul(0x0100_0193);
    }
    h
}

/// Character n-grams of `^token$` for every n in `min..=max`, in order of
/// length then position.
pub fn char_ngrams(token: &str, min: usize, max: usize) -> Vec<String> {
    let chars: Vec<char> = std::iter::once('^')
        .chain(token.chars())
        .chain(std::iter::once('$'))
        .collect();
    let mut out = Vec::new();
    for n in min..=max.min(chars.len()) {
        for w in chars.windows(n) {
            out.push(w.iter().collect());
        }
    }
    out
}

fn bucket(namespace: u8, s: &str, buckets: u32) -> u32 {
    fnv1a(std::iter::once(namespace).chain(s.bytes())) % buckets
}

/// Hashed feature ids (a multiset): one per word when word unigrams are on,
/// plus one per character n-gram of each word.
pub fn featurize(text: &NormalizedText, config: &LidConfig) -> Vec<u32> {
    let mut ids = Vec::new();
    for token in text.tokens() {
        if config.word_unigrams {
            ids.push(bucket(WORD_NS, token, config.feature_buckets));
        }
        for g in char_ngrams(token, config.ngram_min, config.ngram_max) {
            ids.push(bucket(NGRAM_NS, &g, config.feature_buckets));
        }
    }
    ids
}
