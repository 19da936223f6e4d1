use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::CorpusError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Age {
    Adult,
    Child,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gender {
    Masculine,
    Feminine,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Value {
    Age(Age),
    Gender(Gender),
}

/// Words accepted inside a leading `( … )` speaker annotation.
#[derive(Debug, Clone)]
pub struct SpeakerAliases {
    map: HashMap<String, Value>,
}

const ADULT: &[&str] = &["adult", "a", "grown", "gewre", "گەورە"];
const CHILD: &[&str] = &["child", "c", "kid", "mindał", "منداڵ"];
const MASCULINE: &[&str] = &["m", "male", "masculine", "man", "pyaw", "nêr", "پیاو", "نێر"];
const FEMININE: &[&str] = &[
    "f",
    "female",
    "feminine",
    "woman",
    "jin",
    "afret",
    "mê",
    "ژن",
    "ئافرەت",
    "مێ",
];

impl Default for SpeakerAliases {
    fn default() -> Self {
        let mut s = Self { map: HashMap::new() };
        s.add(ADULT, Value::Age(Age::Adult));
        s.add(CHILD, Value::Age(Age::Child));
        s.add(MASCULINE, Value::Gender(Gender::Masculine));
        s.add(FEMININE, Value::Gender(Gender::Feminine));
        s
    }
}

#[derive(Deserialize)]
struct AliasFile {
    #[serde(default)]
    adult: Vec<String>,
    #[serde(default)]
    child: Vec<String>,
    #[serde(default)]
    masculine: Vec<String>,
    #[serde(default)]
    feminine: Vec<String>,
}

impl SpeakerAliases {
    fn add<S: AsRef<str>>(&mut self, words: &[S], v: Value) {
        for w in words {
            self.map.insert(w.as_ref().to_lowercase(), v);
        }
    }

    /// Extends the builtin sets from JSON:
    /// `{"adult": [...], "child": [...], "masculine": [...], "feminine": [...]}`.
    pub fn extend_from_json(&mut self, json: &str) -> Result<(), CorpusError> {
        let f: AliasFile = serde_json::from_str(json).map_err(|e| CorpusError::Metadata(format!("alias file: {e}")))?;
        self.add(&f.adult, Value::Age(Age::Adult));
        self.add(&f.child, Value::Age(Age::Child));
        self.add(&f.masculine, Value::Gender(Gender::Masculine));
        self.add(&f.feminine, Value::Gender(Gender::Feminine));
        Ok(())
    }

    /// Reads a leading annotation. Only consumed when every word in it is a
    /// known alias and no field is given twice.
    pub fn extract<'a>(&self, text: &'a str) -> (Age, Gender, &'a str) {
        let unknown = (Age::Unknown, Gender::Unknown, text);
        let trimmed = text.trim_start();
        let Some(inner) = trimmed.strip_prefix('(') else {
            return unknown;
        };
        let Some(close) = inner.find(')') else {
            return unknown;
        };
        let words: Vec<String> = inner[..close]
            .split(|c: char| c == ',' || c == '،' || c == '/' || c.is_whitespace())
            .filter(|w| !w.is_empty())
            .map(str::to_lowercase)
            .collect();
        if words.is_empty() {
            return unknown;
        }
        let (mut age, mut gender) = (Age::Unknown, Gender::Unknown);
        for w in &words {
            match self.map.get(w) {
                Some(Value::Age(a)) if age == Age::Unknown => age = *a,
                Some(Value::Gender(g)) if gender == Gender::Unknown => gender = *g,
                _ => return unknown,
            }
        }
        (age, gender, inner[close + 1..].trim())
    }
}

/// [`SpeakerAliases::extract`] with the builtin alias sets.
pub fn extract_speaker(text: &str) -> (Age, Gender, String) {
    let (a, g, t) = SpeakerAliases::default().extract(text);
    (a, g, t.to_owned())
}
