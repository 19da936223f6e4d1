//! Affix segmentation and generation over the bound-morpheme inventory.

mod analyze;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::orthography::{script_of, Script};
use crate::tag::{DialectTag, Subdialect};

pub use analyze::{analyze, generate};

const BUILTIN_INVENTORY: &str = include_str!("../../data/morphemes.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Category {
    IndfSg,
    IndfPl,
    DefSg,
    DefPl,
    Dem,
    Obl,
    Izafe,
    Inf,
    Prog,
    Sbjv,
    Neg,
    VsuffEwe,
    AdverbialE,
    CliticIsh,
    Comp,
    Sup,
}

impl Category {
    pub const ALL: [Category; 16] = [
        Category::IndfSg,
        Category::IndfPl,
        Category::DefSg,
        Category::DefPl,
        Category::Dem,
        Category::Obl,
        Category::Izafe,
        Category::Inf,
        Category::Prog,
        Category::Sbjv,
        Category::Neg,
        Category::VsuffEwe,
        Category::AdverbialE,
        Category::CliticIsh,
        Category::Comp,
        Category::Sup,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::IndfSg => "INDF_SG",
            Category::IndfPl => "INDF_PL",
            Category::DefSg => "DEF_SG",
            Category::DefPl => "DEF_PL",
            Category::Dem => "DEM",
            Category::Obl => "OBL",
            Category::Izafe => "IZAFE",
            Category::Inf => "INF",
            Category::Prog => "PROG",
            Category::Sbjv => "SBJV",
            Category::Neg => "NEG",
            Category::VsuffEwe => "VSUFF_EWE",
            Category::AdverbialE => "ADVERBIAL_E",
            Category::CliticIsh => "CLITIC_ISH",
            Category::Comp => "COMP",
            Category::Sup => "SUP",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = MorphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| MorphError::Inventory(format!("unknown category {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    Prefix,
    Suffix,
    Enclitic,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MorphError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{category} is not available in {dialect}")]
    UnavailableMorpheme { category: Category, dialect: String },
    #[error("template violation: {0}")]
    Template(String),
    #[error("inventory: {0}")]
    Inventory(String),
}

/// One surface realization in both scripts. Empty strings are the zero form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Surface {
    pub latin: String,
    pub arabic: String,
}

impl Surface {
    pub fn in_script(&self, script: Script) -> &str {
        match script {
            Script::Arabic => &self.arabic,
            _ => &self.latin,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.latin.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "forms")]
pub enum Cell {
    Unavailable,
    Forms(Vec<Surface>),
}

/// A bound morpheme and its realizations per subdialect.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morpheme {
    pub category: Category,
    pub position: Position,
    pub surface_by_dialect: BTreeMap<String, Cell>,
}

/// A morpheme occurrence inside an analysis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Morph {
    pub category: Category,
    pub surface: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphAnalysis {
    pub stem: String,
    pub prefixes: Vec<Morph>,
    pub suffixes: Vec<Morph>,
    pub confidence_rank: u32,
}

impl MorphAnalysis {
    pub fn surface(&self) -> String {
        let mut s = String::new();
        self.prefixes.iter().for_each(|m| s.push_str(&m.surface));
        s.push_str(&self.stem);
        self.suffixes.iter().for_each(|m| s.push_str(&m.surface));
        s
    }

    pub fn morphs(&self) -> impl Iterator<Item = &Morph> + '_ {
        self.prefixes.iter().chain(&self.suffixes)
    }

    pub fn categories(&self) -> Vec<Category> {
        self.morphs().map(|m| m.category).collect()
    }

    pub fn morpheme_count(&self) -> usize {
        self.prefixes.len() + self.suffixes.len()
    }

    pub fn is_bare(&self) -> bool {
        self.morpheme_count() == 0
    }
}

/// The loaded morpheme table.
#[derive(Debug, Clone)]
pub struct Inventory {
    morphemes: BTreeMap<Category, Morpheme>,
}

impl Default for Inventory {
    fn default() -> Self {
        Self::builtin()
    }
}

impl Inventory {
    pub fn builtin() -> Self {
        Self::from_tsv(BUILTIN_INVENTORY).expect("builtin morpheme inventory is valid")
    }

    pub fn from_tsv(src: &str) -> Result<Self, MorphError> {
        let mut morphemes: BTreeMap<Category, Morpheme> = BTreeMap::new();
        for (lineno, line) in src.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |m: String| MorphError::Inventory(format!("line {}: {m}", lineno + 1));
            let cols: Vec<&str> = line.split('\t').collect();
            let [cat, dialect, latin, arabic, position, available] = cols[..] else {
                return Err(err("expected 6 columns".into()));
            };
            let category: Category = cat.parse().map_err(|e: MorphError| err(e.to_string()))?;
            let tag: DialectTag = dialect.parse().map_err(|e| err(format!("{e}")))?;
            let position = match position {
                "prefix" => Position::Prefix,
                "suffix" => Position::Suffix,
                "enclitic" => Position::Enclitic,
                other => return Err(err(format!("bad position {other:?}"))),
            };
            let entry = morphemes.entry(category).or_insert_with(|| Morpheme {
                category,
                position,
                surface_by_dialect: BTreeMap::new(),
            });
            if entry.position != position {
                return Err(err(format!("{category} has conflicting positions")));
            }
            let key = tag.to_string();
            match available {
                "0" => {
                    entry.surface_by_dialect.insert(key, Cell::Unavailable);
                }
                "1" => {
                    let zero = |s: &str| {
                        if s == "∅" {
                            String::new()
                        } else {
                            s.to_owned()
                        }
                    };
                    let surface = Surface {
                        latin: zero(latin),
                        arabic: zero(arabic),
                    };
                    if surface.latin.is_empty() != surface.arabic.is_empty() {
                        return Err(err("zero surface must be zero in both scripts".into()));
                    }
                    match entry.surface_by_dialect.entry(key).or_insert(Cell::Forms(Vec::new())) {
                        Cell::Forms(forms) => forms.push(surface),
                        Cell::Unavailable => return Err(err(format!("{category} {dialect} is marked unavailable"))),
                    }
                }
                other => return Err(err(format!("bad availability {other:?}"))),
            }
        }
        Ok(Self { morphemes })
    }

    pub fn morpheme(&self, category: Category) -> Option<&Morpheme> {
        self.morphemes.get(&category)
    }

    pub fn morphemes(&self) -> impl Iterator<Item = &Morpheme> + '_ {
        self.morphemes.values()
    }

    /// Inventory key for a tag. Tags without a subdialect, and subdialects
    /// with no column of their own, read the Standard column.
    fn column(&self, dialect: &DialectTag) -> String {
        let tag = dialect.to_string();
        let has_column = self.morphemes.values().any(|m| m.surface_by_dialect.contains_key(&tag));
        if has_column {
            tag
        } else {
            DialectTag::standard().to_string()
        }
    }

    pub fn cell(&self, category: Category, dialect: &DialectTag) -> &Cell {
        static UNAVAILABLE: Cell = Cell::Unavailable;
        let key = self.column(dialect);
        self.morphemes
            .get(&category)
            .and_then(|m| m.surface_by_dialect.get(&key))
            .unwrap_or(&UNAVAILABLE)
    }

    /// Available surfaces for a category in a dialect, in table order.
    pub fn surfaces(&self, category: Category, dialect: &DialectTag) -> &[Surface] {
        match self.cell(category, dialect) {
            Cell::Forms(forms) => forms,
            Cell::Unavailable => &[],
        }
    }

    pub fn position(&self, category: Category) -> Option<Position> {
        self.morphemes.get(&category).map(|m| m.position)
    }

    pub fn subdialect_columns(&self) -> Vec<Subdialect> {
        let mut subs: Vec<Subdialect> = Subdialect::ALL
            .into_iter()
            .filter(|s| {
                let key = DialectTag::subdialect(*s).to_string();
                self.morphemes.values().any(|m| m.surface_by_dialect.contains_key(&key))
            })
            .collect();
        subs.sort();
        subs
    }
}

pub(crate) fn word_script(word: &str) -> Script {
    match script_of(word) {
        Script::Arabic => Script::Arabic,
        _ => Script::Latin,
    }
}
