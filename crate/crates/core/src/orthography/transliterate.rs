use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{is_arabic_letter, NormalizedText, Warning, WarningKind};

const BUILTIN_TABLE: &str = include_str!("../../data/transliteration.tsv");
const LATIN_VOWELS: &str = "aeêiîouû";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    ArabicToLatin,
    LatinToArabic,
}

/// Grapheme tables plus the positional rules needed for the two letters that
/// double as vowels and glides, and for the unwritten vowel `i`.
#[derive(Debug, Clone)]
pub struct TransliterationTable {
    /// Unconditional Arabic letter -> Latin, in table order.
    arabic_to_latin: Vec<(char, String)>,
    letters: HashMap<char, String>,
    /// Glide letters: (consonant reading, vowel reading).
    glides: HashMap<char, (String, String)>,
    digraphs: Vec<(Vec<char>, String)>,
    carrier: char,
    epenthetic: String,
    punct: HashMap<char, char>,
    codas: HashSet<String>,
    latin_to_arabic: HashMap<char, String>,
    vowel_letters: HashSet<char>,
}

impl Default for TransliterationTable {
    fn default() -> Self {
        Self::builtin()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Unit {
    Consonant(String),
    Vowel(String),
}

impl TransliterationTable {
    pub fn builtin() -> Self {
        Self::from_tsv(BUILTIN_TABLE).expect("builtin transliteration table is valid")
    }

    pub fn from_tsv(src: &str) -> Result<Self, String> {
        let mut arabic_to_latin = Vec::new();
        let mut glides: HashMap<char, (Option<String>, Option<String>)> = HashMap::new();
        let mut digraphs = Vec::new();
        let mut carrier = None;
        let mut epenthetic = None;
        let mut punct = HashMap::new();
        let mut codas = HashSet::new();

        for (lineno, line) in src.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| format!("line {}: {msg}", lineno + 1);
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(err("expected 3 columns"));
            }
            let (source, target, flag) = (cols[0], cols[1], cols[2]);
            let single = |s: &str| {
                let mut it = s.chars();
                match (it.next(), it.next()) {
                    (Some(c), None) => Ok(c),
                    _ => Err(err("expected a single character")),
                }
            };
            match flag {
                "-" => arabic_to_latin.push((single(source)?, target.to_owned())),
                "digraph" => digraphs.push((source.chars().collect::<Vec<_>>(), target.to_owned())),
                "consonant" => glides.entry(single(source)?).or_default().0 = Some(target.to_owned()),
                "vowel" => glides.entry(single(source)?).or_default().1 = Some(target.to_owned()),
                "carrier" => carrier = Some(single(source)?),
                "epenthetic" => epenthetic = Some(target.to_owned()),
                "punct" => {
                    punct.insert(single(source)?, single(target)?);
                }
                "coda" => {
                    codas.insert(target.to_owned());
                }
                other => return Err(err(&format!("unknown flag {other:?}"))),
            }
        }

        let glides: HashMap<char, (String, String)> = glides
            .into_iter()
            .map(|(c, (cons, vow))| match (cons, vow) {
                (Some(cons), Some(vow)) => Ok((c, (cons, vow))),
                _ => Err(format!("glide {c} needs both consonant and vowel readings")),
            })
            .collect::<Result<_, _>>()?;
        let carrier = carrier.ok_or("missing carrier entry")?;
        let epenthetic = epenthetic.ok_or("missing epenthetic entry")?;

        let mut latin_to_arabic = HashMap::new();
        let mut insert_inverse = |latin: &str, arabic: String| -> Result<(), String> {
            let mut it = latin.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => {
                    latin_to_arabic.insert(c, arabic);
                    Ok(())
                }
                _ => Err(format!("latin grapheme {latin:?} must be one character")),
            }
        };
        for (a, l) in &arabic_to_latin {
            insert_inverse(l, a.to_string())?;
        }
        for (a, (cons, vow)) in &glides {
            insert_inverse(cons, a.to_string())?;
            insert_inverse(vow, a.to_string())?;
        }
        for (a, l) in &digraphs {
            insert_inverse(l, a.iter().collect())?;
        }

        let vowel_letters = arabic_to_latin
            .iter()
            .filter(|(_, l)| l.chars().next().is_some_and(|c| LATIN_VOWELS.contains(c)))
            .map(|(a, _)| *a)
            .collect();
        let letters = arabic_to_latin.iter().cloned().collect();

        Ok(Self {
            arabic_to_latin,
            letters,
            glides,
            digraphs,
            carrier,
            epenthetic,
            punct,
            codas,
            latin_to_arabic,
            vowel_letters,
        })
    }

    /// Unconditional letter correspondences in table order.
    pub fn arabic_to_latin(&self) -> &[(char, String)] {
        &self.arabic_to_latin
    }

    pub fn latin_to_arabic(&self) -> &HashMap<char, String> {
        &self.latin_to_arabic
    }

    /// Multi-letter Arabic sequences read as a single vowel.
    pub fn digraph_rules(&self) -> impl Iterator<Item = (String, &str)> + '_ {
        self.digraphs.iter().map(|(a, l)| (a.iter().collect(), l.as_str()))
    }

    fn in_table(&self, c: char) -> bool {
        c == self.carrier || self.letters.contains_key(&c) || self.glides.contains_key(&c)
    }

    fn is_vowel_letter(&self, c: char) -> bool {
        self.vowel_letters.contains(&c)
    }

    /// Arabic script to Latin. Returns the text and warnings for unmapped letters.
    pub fn to_latin(&self, text: &str) -> (String, Vec<Warning>) {
        let chars: Vec<char> = text.chars().collect();
        let mut out = String::with_capacity(text.len());
        let mut warnings = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if self.in_table(c) {
                let end = chars[i..]
                    .iter()
                    .position(|&c| !self.in_table(c))
                    .map_or(chars.len(), |p| i + p);
                out.push_str(&self.word_to_latin(&chars[i..end]));
                i = end;
                continue;
            }
            if let Some(&p) = self.punct.get(&c) {
                out.push(p);
            } else {
                if is_arabic_letter(c) {
                    warnings.push(Warning {
                        offset: out.len(),
                        ch: c,
                        kind: WarningKind::UnmappedGrapheme,
                    });
                }
                out.push(c);
            }
            i += 1;
        }
        (out, warnings)
    }

    fn word_to_latin(&self, run: &[char]) -> String {
        let mut units = Vec::with_capacity(run.len());
        let mut i = 0;
        'outer: while i < run.len() {
            for (seq, latin) in &self.digraphs {
                if run[i..].starts_with(seq) {
                    units.push(Unit::Vowel(latin.clone()));
                    i += seq.len();
                    continue 'outer;
                }
            }
            let c = run[i];
            let prev = i.checked_sub(1).map(|j| run[j]);
            let next = run.get(i + 1).copied();
            if c == self.carrier {
                let before_vowel = next.is_some_and(|n| {
                    self.is_vowel_letter(n)
                        || self.glides.contains_key(&n)
                        || self.digraphs.iter().any(|(seq, _)| run[i + 1..].starts_with(seq))
                });
                if !before_vowel {
                    units.push(Unit::Vowel(self.epenthetic.clone()));
                }
            } else if let Some((cons, vow)) = self.glides.get(&c) {
                let unit = if prev == Some(self.carrier) {
                    Unit::Vowel(vow.clone())
                } else if prev.is_none_or(|p| self.is_vowel_letter(p)) || next.is_some_and(|n| self.is_vowel_letter(n))
                {
                    Unit::Consonant(cons.clone())
                } else {
                    Unit::Vowel(vow.clone())
                };
                units.push(unit);
            } else {
                let latin = self.letters[&c].clone();
                if self.is_vowel_letter(c) {
                    units.push(Unit::Vowel(latin));
                } else {
                    units.push(Unit::Consonant(latin));
                }
            }
            i += 1;
        }
        self.syllabify(&units)
    }

    /// Inserts the unwritten `i` into consonant runs.
    fn syllabify(&self, units: &[Unit]) -> String {
        let epi = self.epenthetic.as_str();
        let mut out = String::new();
        let mut i = 0;
        while i < units.len() {
            let start = i;
            while i < units.len() && matches!(units[i], Unit::Consonant(_)) {
                i += 1;
            }
            if i == start {
                if let Unit::Vowel(v) = &units[i] {
                    out.push_str(v);
                }
                i += 1;
                continue;
            }
            let run: Vec<&str> = units[start..i]
                .iter()
                .map(|u| match u {
                    Unit::Consonant(c) | Unit::Vowel(c) => c.as_str(),
                })
                .collect();
            let left = start > 0;
            let right = i < units.len();
            match (left, right) {
                (true, true) => {
                    let (onset, rest) = run.split_last().unwrap();
                    open_syllables(&mut out, rest, epi);
                    out.push_str(onset);
                }
                (false, true) => {
                    let onset_len = if run.len() >= 2 && run[run.len() - 2..] == ["x", "w"] {
                        2
                    } else {
                        1
                    };
                    let (rest, onset) = run.split_at(run.len() - onset_len);
                    if let Some((first, tail)) = rest.split_first() {
                        out.push_str(first);
                        out.push_str(epi);
                        open_syllables(&mut out, tail, epi);
                    }
                    onset.iter().for_each(|c| out.push_str(c));
                }
                (true, false) => self.closed_syllables(&mut out, &run),
                (false, false) => {
                    out.push_str(run[0]);
                    out.push_str(epi);
                    self.closed_syllables(&mut out, &run[1..]);
                }
            }
        }
        out
    }

    fn closed_syllables(&self, out: &mut String, run: &[&str]) {
        if run.len() == 2 && self.codas.contains(&run.concat()) {
            out.push_str(&run.concat());
            return;
        }
        let mut pieces = Vec::new();
        let mut end = run.len();
        while end >= 2 {
            pieces.push(format!("{}{}{}", run[end - 2], self.epenthetic, run[end - 1]));
            end -= 2;
        }
        run[..end].iter().for_each(|c| out.push_str(c));
        pieces.iter().rev().for_each(|p| out.push_str(p));
    }

    /// Latin to Arabic script. Returns the text and warnings for unmapped letters.
    pub fn to_arabic(&self, text: &str) -> (String, Vec<Warning>) {
        let mut out = String::with_capacity(text.len() * 2);
        let mut warnings = Vec::new();
        let inverse_punct: HashMap<char, char> = self.punct.iter().map(|(&a, &l)| (l, a)).collect();
        let epi = self.epenthetic.chars().next();
        let mut prev: Option<char> = None;
        for raw in text.chars() {
            let lower = raw.to_lowercase().next().unwrap_or(raw);
            let word_start = !prev.is_some_and(|p| self.is_latin_grapheme(p));
            if Some(lower) == epi {
                if word_start {
                    out.push(self.carrier);
                }
            } else if let Some(arabic) = self.latin_to_arabic.get(&lower) {
                let hiatus = prev.is_some_and(|p| LATIN_VOWELS.contains(p));
                if LATIN_VOWELS.contains(lower) && (word_start || hiatus) {
                    out.push(self.carrier);
                }
                out.push_str(arabic);
            } else if let Some(&p) = inverse_punct.get(&lower) {
                out.push(p);
            } else {
                if lower.is_alphabetic() {
                    warnings.push(Warning {
                        offset: out.len(),
                        ch: raw,
                        kind: WarningKind::UnmappedGrapheme,
                    });
                }
                out.push(raw);
            }
            prev = Some(lower);
        }
        (out, warnings)
    }

    fn is_latin_grapheme(&self, c: char) -> bool {
        self.epenthetic.starts_with(c) || self.latin_to_arabic.contains_key(&c)
    }
}

fn open_syllables(out: &mut String, rest: &[&str], epi: &str) {
    if let Some((first, tail)) = rest.split_first() {
        out.push_str(first);
        for c in tail {
            out.push_str(c);
            out.push_str(epi);
        }
    }
}

/// Converts normalized text between scripts with the builtin table.
pub fn transliterate(t: &NormalizedText, direction: Direction) -> NormalizedText {
    thread_local! {
        static TABLE: TransliterationTable = TransliterationTable::builtin();
    }
    TABLE.with(|table| table.transliterate(t, direction))
}

impl TransliterationTable {
    pub fn transliterate(&self, t: &NormalizedText, direction: Direction) -> NormalizedText {
        let (text, warnings) = match direction {
            Direction::ArabicToLatin => self.to_latin(t.as_str()),
            Direction::LatinToArabic => self.to_arabic(t.as_str()),
        };
        NormalizedText::from_parts(text, warnings)
    }
}
