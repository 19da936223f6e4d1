use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subdialect {
    Standard,
    Sulaymaniyah,
    Sanandaj,
    Erbil,
    Mahabad,
    Kalar,
    Sardasht,
}

impl Subdialect {
    pub const ALL: [Subdialect; 7] = [
        Subdialect::Standard,
        Subdialect::Sulaymaniyah,
        Subdialect::Sanandaj,
        Subdialect::Erbil,
        Subdialect::Mahabad,
        Subdialect::Kalar,
        Subdialect::Sardasht,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Subdialect::Standard => "std",
            Subdialect::Sulaymaniyah => "slm",
            Subdialect::Sanandaj => "snn",
            Subdialect::Erbil => "hwl",
            Subdialect::Mahabad => "mhb",
            Subdialect::Kalar => "klr",
            Subdialect::Sardasht => "srd",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Subdialect::Standard => "Standard",
            Subdialect::Sulaymaniyah => "Sulaymaniyah",
            Subdialect::Sanandaj => "Sanandaj",
            Subdialect::Erbil => "Erbil",
            Subdialect::Mahabad => "Mahabad",
            Subdialect::Kalar => "Kalar",
            Subdialect::Sardasht => "Sardasht",
        }
    }

    /// Accepts the three-letter code, the "1"-for-"l" spelling seen in some
    /// label lists, or the English name.
    pub fn parse(s: &str) -> Option<Self> {
        let lower = s.to_ascii_lowercase();
        let lower = match lower.as_str() {
            "s1m" => "slm",
            "hw1" => "hwl",
            "k1r" => "klr",
            other => other,
        };
        Self::ALL
            .into_iter()
            .find(|d| d.code() == lower || d.name().to_ascii_lowercase() == lower)
    }
}

impl fmt::Display for Subdialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TagError {
    #[error("empty dialect tag")]
    Empty,
    #[error("invalid language code {0:?}")]
    Language(String),
    #[error("unknown subdialect {0:?}")]
    Subdialect(String),
}

/// `language[-subdialect]` label. A subdialect implies the Central dialect.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DialectTag {
    pub language: String,
    pub dialect: Option<String>,
    pub subdialect: Option<Subdialect>,
}

impl DialectTag {
    pub fn language(code: &str) -> Self {
        Self {
            language: code.to_owned(),
            dialect: None,
            subdialect: None,
        }
    }

    pub fn subdialect(sub: Subdialect) -> Self {
        Self {
            language: "ckb".to_owned(),
            dialect: Some("Central".to_owned()),
            subdialect: Some(sub),
        }
    }

    pub fn standard() -> Self {
        Self::subdialect(Subdialect::Standard)
    }

    pub fn is_standard(&self) -> bool {
        self.subdialect == Some(Subdialect::Standard)
    }
}

impl fmt::Display for DialectTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.subdialect {
            Some(sub) => write!(f, "{}-{}", self.language, sub.code()),
            None => f.write_str(&self.language),
        }
    }
}

impl FromStr for DialectTag {
    type Err = TagError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(TagError::Empty);
        }
        let (lang, sub) = match s.split_once('-') {
            Some((l, r)) => (l, Some(r)),
            None => match Subdialect::parse(s) {
                // bare subdialect names are Central Kurdish
                Some(sub) => return Ok(Self::subdialect(sub)),
                None => (s, None),
            },
        };
        if !(2..=3).contains(&lang.len()) || !lang.chars().all(|c| c.is_ascii_alphabetic()) {
            return Err(TagError::Language(lang.to_owned()));
        }
        let lang = lang.to_ascii_lowercase();
        match sub {
            None => Ok(Self::language(&lang)),
            Some(code) => {
                let sub = Subdialect::parse(code).ok_or_else(|| TagError::Subdialect(code.to_owned()))?;
                if lang != "ckb" {
                    return Err(TagError::Subdialect(format!("{lang}-{code}")));
                }
                Ok(Self::subdialect(sub))
            }
        }
    }
}

impl Serialize for DialectTag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DialectTag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
