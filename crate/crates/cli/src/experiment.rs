//! MT experiments: a translator run in baseline mode or wrapped by
//! standardization of the source (preprocess) or dialectalization of the
//! output (postprocess), scored with corpus BLEU and chrF2.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use ckb_varieties::dialect_rules::{DialectTag, Transducer};
use ckb_varieties::metrics::{corpus_bleu, corpus_chrf, BleuOptions, ChrfOptions};
use ckb_varieties::orthography::normalize;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adapter::{AdapterError, SystemConfig, Translator};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Adapter(#[from] AdapterError),
    #[error(transparent)]
    Rules(#[from] ckb_varieties::dialect_rules::RuleError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn schema(m: impl Into<String>) -> ExperimentError {
    ExperimentError::Schema(m.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "en-ckb", alias = "en→ckb")]
    EnToCkb,
    #[serde(rename = "ckb-en", alias = "ckb→en")]
    CkbToEn,
}

impl Direction {
    fn langs(self) -> (&'static str, &'static str) {
        match self {
            Direction::EnToCkb => ("en", "ckb"),
            Direction::CkbToEn => ("ckb", "en"),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s, t) = self.langs();
        write!(f, "{s}-{t}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Baseline,
    /// Standardize dialect input before translating; ckb→en only.
    Preprocess,
    /// Dialectalize translations; en→ckb only.
    Postprocess,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Baseline => "baseline",
            Mode::Preprocess => "preprocess",
            Mode::Postprocess => "postprocess",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tokenize {
    None,
    #[serde(rename = "13a")]
    Thirteen,
}

/// One experiment cell: a system, a direction, a dialect and a mode over
/// aligned sources and reference streams.
#[derive(Debug, Clone)]
pub struct MtExperiment {
    pub direction: Direction,
    pub dialect: DialectTag,
    pub mode: Mode,
    pub system: SystemConfig,
    pub sources: Vec<String>,
    /// Reference streams, each aligned with `sources`.
    pub references: Vec<Vec<String>>,
    pub tokenize: Tokenize,
}

impl MtExperiment {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        match (self.mode, self.direction) {
            (Mode::Preprocess, Direction::EnToCkb) => return Err(schema("preprocess applies to ckb-en only")),
            (Mode::Postprocess, Direction::CkbToEn) => return Err(schema("postprocess applies to en-ckb only")),
            _ => {}
        }
        if self.sources.is_empty() {
            return Err(schema("no source sentences"));
        }
        if self.references.is_empty() {
            return Err(schema("no reference stream"));
        }
        for (i, r) in self.references.iter().enumerate() {
            if r.len() != self.sources.len() {
                return Err(schema(format!(
                    "reference stream {} has {} lines, sources have {}",
                    i + 1,
                    r.len(),
                    self.sources.len()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub dialect: String,
    pub direction: String,
    pub system: String,
    pub mode: String,
    pub bleu: f64,
    pub chrf2: f64,
    pub sentences: usize,
    pub tokenize: Tokenize,
    /// Always "corpus": one score over all sentences, not a sentence average.
    pub scoring: String,
    /// The full experiment setup as JSON.
    pub config: String,
}

/// Input that the translator sees for `exp`.
fn adapter_input(exp: &MtExperiment, t: &Transducer) -> Result<Vec<String>, ExperimentError> {
    if exp.mode != Mode::Preprocess || exp.dialect.is_standard() {
        return Ok(exp.sources.clone());
    }
    exp.sources
        .iter()
        .map(|s| Ok(t.standardize(&normalize(s), &exp.dialect)?.text.into_string()))
        .collect()
}

fn finish(exp: &MtExperiment, t: &Transducer, translations: Vec<String>) -> Result<Vec<String>, ExperimentError> {
    if exp.mode != Mode::Postprocess || exp.dialect.is_standard() {
        return Ok(translations);
    }
    translations
        .iter()
        .map(|h| Ok(t.dialectalize(&normalize(h), &exp.dialect)?.text.into_string()))
        .collect()
}

/// Scores hypotheses against the experiment's references.
pub fn score(exp: &MtExperiment, hyps: &[String]) -> ReportRow {
    let refs: Vec<Vec<&str>> = (0..hyps.len())
        .map(|i| exp.references.iter().map(|s| s[i].as_str()).collect())
        .collect();
    let bleu_opts = BleuOptions {
        tokenize_13a: exp.tokenize == Tokenize::Thirteen,
        ..BleuOptions::default()
    };
    let config = serde_json::json!({
        "dialect": exp.dialect,
        "direction": exp.direction,
        "mode": exp.mode,
        "system": exp.system,
        "references": exp.references.len(),
        "bleu": bleu_opts,
        "chrf": ChrfOptions::default(),
    });
    ReportRow {
        dialect: exp.dialect.to_string(),
        direction: exp.direction.to_string(),
        system: exp.system.name.clone(),
        mode: exp.mode.to_string(),
        bleu: corpus_bleu(hyps, &refs, &bleu_opts).bleu,
        chrf2: corpus_chrf(hyps, &refs, &ChrfOptions::default()),
        sentences: hyps.len(),
        tokenize: exp.tokenize,
        scoring: "corpus".into(),
        config: config.to_string(),
    }
}

/// Runs one experiment cell end to end.
pub fn run_mt_experiment(
    exp: &MtExperiment,
    transducer: &Transducer,
    cache_dir: Option<&Path>,
) -> Result<ReportRow, ExperimentError> {
    exp.validate()?;
    let input = adapter_input(exp, transducer)?;
    let translations = translator(exp, cache_dir).translate(&input)?;
    Ok(score(exp, &finish(exp, transducer, translations)?))
}

fn translator<'a>(exp: &'a MtExperiment, cache_dir: Option<&Path>) -> Translator<'a> {
    let (s, t) = exp.direction.langs();
    let code = |l: &str| exp.system.lang_codes.get(l).cloned().unwrap_or_else(|| l.to_owned());
    Translator::new(&exp.system, &code(s), &code(t), cache_dir)
}

/// An experiment file: systems plus experiment entries, each run in one or
/// more modes. Paths are relative to the file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
    #[serde(rename = "system")]
    pub systems: Vec<SystemConfig>,
    #[serde(rename = "experiment")]
    pub experiments: Vec<ExperimentEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentEntry {
    pub dialect: DialectTag,
    pub direction: Direction,
    /// System names; every listed system runs every mode.
    pub systems: Vec<String>,
    pub modes: Vec<Mode>,
    pub source: PathBuf,
    pub references: Vec<PathBuf>,
    /// BLEU tokenization; defaults to 13a for English output and none for
    /// Kurdish output.
    #[serde(default)]
    pub tokenize: Option<Tokenize>,
}

impl ExperimentConfig {
    /// Parses TOML, or JSON when the file name ends in `.json`.
    pub fn load(path: &Path) -> Result<(Self, PathBuf), ExperimentError> {
        let src = read(path)?;
        let cfg: Self = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&src).map_err(|e| schema(format!("{}: {e}", path.display())))?
        } else {
            toml::from_str(&src).map_err(|e| schema(format!("{}: {e}", path.display())))?
        };
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((cfg, base))
    }

    /// Expands entries into experiment cells, reading the text files.
    pub fn expand(&self, base: &Path) -> Result<Vec<MtExperiment>, ExperimentError> {
        let mut names = BTreeMap::new();
        for s in &self.systems {
            if names.insert(s.name.as_str(), s).is_some() {
                return Err(schema(format!("system {:?} defined twice", s.name)));
            }
        }
        let mut out = Vec::new();
        for e in &self.experiments {
            let sources = read_lines(&base.join(&e.source))?;
            let references = e
                .references
                .iter()
                .map(|p| read_lines(&base.join(p)))
                .collect::<Result<Vec<_>, _>>()?;
            for name in &e.systems {
                let system = names
                    .get(name.as_str())
                    .ok_or_else(|| schema(format!("unknown system {name:?}")))?;
                for &mode in &e.modes {
                    let exp = MtExperiment {
                        direction: e.direction,
                        dialect: e.dialect.clone(),
                        mode,
                        system: (*system).clone(),
                        sources: sources.clone(),
                        references: references.clone(),
                        tokenize: e.tokenize.unwrap_or(match e.direction {
                            Direction::CkbToEn => Tokenize::Thirteen,
                            Direction::EnToCkb => Tokenize::None,
                        }),
                    };
                    exp.validate()
                        .map_err(|err| schema(format!("{} {} {}: {err}", e.dialect, e.direction, mode)))?;
                    out.push(exp);
                }
            }
        }
        Ok(out)
    }
}

fn read(path: &Path) -> Result<String, ExperimentError> {
    fs::read_to_string(path).map_err(|source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_lines(path: &Path) -> Result<Vec<String>, ExperimentError> {
    Ok(read(path)?.lines().map(str::to_owned).collect())
}

/// Runs every cell, translating each distinct adapter input once.
pub fn run_all(
    experiments: &[MtExperiment],
    transducer: &Transducer,
    cache_dir: Option<&Path>,
) -> Result<Vec<ReportRow>, ExperimentError> {
    let mut memo: HashMap<(String, Direction, Vec<String>), Vec<String>> = HashMap::new();
    let mut rows = Vec::new();
    for exp in experiments {
        exp.validate()?;
        let input = adapter_input(exp, transducer)?;
        let key = (exp.system.name.clone(), exp.direction, input);
        let translations = match memo.get(&key) {
            Some(t) => t.clone(),
            None => {
                log::info!("{} {} {} {}", exp.system.name, exp.direction, exp.dialect, exp.mode);
                let t = translator(exp, cache_dir).translate(&key.2)?;
                memo.insert(key, t.clone());
                t
            }
        };
        rows.push(score(exp, &finish(exp, transducer, translations)?));
    }
    Ok(rows)
}

pub fn rows_to_csv(rows: &[ReportRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "dialect",
        "direction",
        "system",
        "mode",
        "bleu",
        "chrf2",
        "sentences",
        "tokenize",
        "scoring",
        "config",
    ])
    .expect("in-memory write");
    for r in rows {
        let tok = match r.tokenize {
            Tokenize::None => "none",
            Tokenize::Thirteen => "13a",
        };
        w.write_record([
            r.dialect.as_str(),
            &r.direction,
            &r.system,
            &r.mode,
            &format!("{:.2}", r.bleu),
            &format!("{:.2}", r.chrf2),
            &r.sentences.to_string(),
            tok,
            &r.scoring,
            &r.config,
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// One row per dialect; for each (direction, system) a group of columns,
/// baseline first, then the wrapped mode, each as BLEU and chrF2.
pub fn pivot_csv(rows: &[ReportRow]) -> String {
    let mut dialects: Vec<&str> = Vec::new();
    let mut groups: Vec<(&str, &str)> = Vec::new();
    let mut modes: BTreeMap<(&str, &str), Vec<&str>> = BTreeMap::new();
    let mut cells: HashMap<(&str, &str, &str, &str), (f64, f64)> = HashMap::new();
    for r in rows {
        if !dialects.contains(&r.dialect.as_str()) {
            dialects.push(&r.dialect);
        }
        let g = (r.direction.as_str(), r.system.as_str());
        if !groups.contains(&g) {
            groups.push(g);
        }
        let m = modes.entry(g).or_default();
        if !m.contains(&r.mode.as_str()) {
            m.push(&r.mode);
        }
        cells.insert((&r.dialect, g.0, g.1, &r.mode), (r.bleu, r.chrf2));
    }
    for m in modes.values_mut() {
        m.sort_by_key(|m| *m != "baseline");
    }
    let mut header = vec!["dialect".to_owned()];
    for g in &groups {
        for m in &modes[g] {
            for metric in ["bleu", "chrf2"] {
                header.push(format!("{} {} {m} {metric}", g.1, g.0));
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("in-memory write");
    for d in &dialects {
        let mut rec = vec![d.to_string()];
        for g in &groups {
            for m in &modes[g] {
                match cells.get(&(*d, g.0, g.1, *m)) {
                    Some((b, c)) => rec.extend([format!("{b:.2}"), format!("{c:.2}")]),
                    None => rec.extend([String::new(), String::new()]),
                }
            }
        }
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}
