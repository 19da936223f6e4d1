//! Command-line entry points. Line-oriented commands read files or stdin and
//! write one output line per input line; report commands write CSV or JSON.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::Command;

use anyhow::{bail, Context, Result};
use ckb_varieties::corpus::{
    read_episode_sources, slice_command, split, stats, BuildOptions, Corpus, CorpusError, SplitSpec,
};
use ckb_varieties::dialect_rules::{similarity_matrix, DialectTag, RuleBook, RuleError, Transducer, Wordlists};
use ckb_varieties::lid::{evaluate, read_examples, train, Level, LidConfig, LidError, LidModel};
use ckb_varieties::metrics::{corpus_bleu, corpus_chrf, corpus_wer, BleuOptions, ChrfOptions, MetricError};
use ckb_varieties::morphology::{Inventory, MorphError};
use ckb_varieties::orthography::{
    tokenize, Direction, NormalizationTable, NormalizeOptions, Normalizer, TransliterationTable,
};
use ckb_varieties::tag::TagError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::adapter::AdapterError;
use crate::experiment::{pivot_csv, rows_to_csv, run_all, ExperimentConfig, ExperimentError};

#[derive(Parser, Debug)]
#[command(name = "ckbv", version, about = "Central Kurdish variety toolkit")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// CSV reports; plain lines for text commands.
    Csv,
    /// JSON reports; one JSON object per line for text commands.
    Json,
}

#[derive(Args, Debug)]
pub struct Inputs {
    /// Input files, read line by line; stdin when none are given.
    pub inputs: Vec<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Normalize Arabic-script or Latin text.
    Normalize {
        #[command(flatten)]
        io: Inputs,
        /// Keep zero-width non-joiners at token edges.
        #[arg(long)]
        keep_zwnj: bool,
        /// Normalization table (TSV) replacing the built-in one.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Convert between Arabic and Latin script.
    Transliterate {
        #[command(flatten)]
        io: Inputs,
        /// Target script.
        #[arg(long, value_enum)]
        to: Script,
        /// Transliteration table (TSV) replacing the built-in one.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Rewrite standard text into a subdialect.
    Dialectalize {
        #[command(flatten)]
        io: Inputs,
        #[arg(long)]
        target: DialectTag,
        #[command(flatten)]
        resources: Resources,
    },
    /// Rewrite subdialect text into the standard variety.
    Standardize {
        #[command(flatten)]
        io: Inputs,
        #[arg(long)]
        source: DialectTag,
        #[command(flatten)]
        resources: Resources,
    },
    /// Segment every token into stem and affixes.
    MorphAnalyze {
        #[command(flatten)]
        io: Inputs,
        #[arg(long, default_value = "ckb-std")]
        dialect: DialectTag,
        /// Morpheme table (TSV) replacing the built-in one.
        #[arg(long)]
        morphemes: Option<PathBuf>,
    },
    /// Pairwise lexical similarity of varieties.
    Similarity {
        /// Word lists (TSV); the bundled lists when omitted.
        #[arg(long)]
        wordlists: Option<PathBuf>,
    },
    /// Train a dialect identifier from `label<TAB>text` lines.
    LidTrain {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "subdialect")]
        level: Level,
        #[command(flatten)]
        hyper: Hyper,
    },
    /// Top-k labels per input line.
    LidPredict {
        #[command(flatten)]
        io: Inputs,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Score a model on `label<TAB>text` lines.
    LidEval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        test: PathBuf,
        /// Write the confusion matrix here as CSV.
        #[arg(long)]
        confusion: Option<PathBuf>,
    },
    /// Build a corpus from an episode list (CSV or JSON) and SRT files.
    CorpusBuild {
        #[arg(long)]
        episodes: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = ckb_varieties::corpus::DEFAULT_MIN_DURATION_S)]
        min_duration: f64,
        /// Extra speaker annotation aliases (JSON).
        #[arg(long)]
        aliases: Option<PathBuf>,
        /// Slicing command run once per segment, whitespace separated, with
        /// {source}, {start}, {end} and {output} placeholders.
        #[arg(long)]
        slice_cmd: Option<String>,
        /// Folder the slicing command runs in; defaults to the episode list's folder.
        #[arg(long)]
        media_dir: Option<PathBuf>,
    },
    /// Per-variety statistics of a built corpus.
    CorpusStats {
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Train/validation/test listings of a built corpus.
    CorpusSplit {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Test utterances per variety, as `tag=count`; repeatable. Without
        /// any, the ASR defaults are used.
        #[arg(long = "test-size", value_parser = parse_test_size)]
        test_sizes: Vec<(String, usize)>,
        #[arg(long, default_value_t = 0.1)]
        validation_fraction: f64,
        #[arg(long, default_value_t = ckb_varieties::corpus::DEFAULT_MIN_DURATION_S)]
        min_duration: f64,
    },
    /// Word error rate of line-aligned hypothesis and reference files.
    EvalAsr {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        hyp: PathBuf,
    },
    /// Corpus BLEU and chrF2 of line-aligned files.
    EvalMt {
        /// Reference file; repeat for multiple references.
        #[arg(long = "refs", required = true)]
        refs: Vec<PathBuf>,
        #[arg(long)]
        hyp: PathBuf,
        /// Metrics to report; both when omitted.
        #[arg(long, value_enum)]
        metric: Vec<Metric>,
        /// Apply the 13a tokenizer before BLEU.
        #[arg(long)]
        tokenize_13a: bool,
    },
    /// Run an MT experiment file through its translators.
    MtExperiment {
        /// Experiment file (TOML, or JSON by extension).
        #[arg(long)]
        config: PathBuf,
        /// Response cache; overrides the file's cache_dir.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a dialect-by-system pivot table (CSV).
        #[arg(long)]
        pivot: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Script {
    Latin,
    Arabic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Bleu,
    Chrf,
}

#[derive(Args, Debug)]
pub struct Resources {
    /// Rule file (TSV) replacing the built-in rules.
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Morpheme table (TSV) replacing the built-in one.
    #[arg(long)]
    morphemes: Option<PathBuf>,
    /// Also print applied edits to stderr.
    #[arg(long)]
    edits: bool,
}

#[derive(Args, Debug)]
pub struct Hyper {
    #[arg(long, default_value_t = 2)]
    minn: usize,
    #[arg(long, default_value_t = 6)]
    maxn: usize,
    #[arg(long, default_value_t = 64)]
    dim: usize,
    #[arg(long, default_value_t = 25)]
    epochs: usize,
    #[arg(long, default_value_t = 1.0)]
    lr: f32,
    /// Hashed feature buckets.
    #[arg(long, default_value_t = 1 << 21)]
    buckets: u32,
    /// Leave out word unigram features.
    #[arg(long)]
    no_words: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_test_size(s: &str) -> Result<(String, usize), String> {
    let (tag, n) = s.split_once('=').ok_or("expected tag=count")?;
    let tag: DialectTag = tag.parse().map_err(|e: TagError| e.to_string())?;
    Ok((tag.to_string(), n.parse().map_err(|_| format!("bad count {n:?}"))?))
}

/// A machine-readable failure.
#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub error: String,
    pub kind: &'static str,
}

fn kind_of(e: &anyhow::Error) -> &'static str {
    for cause in e.chain() {
        if cause.is::<io::Error>() {
            return "io";
        }
        if let Some(x) = cause.downcast_ref::<ExperimentError>() {
            return match x {
                ExperimentError::Schema(_) => "schema",
                ExperimentError::Adapter(_) => "adapter",
                ExperimentError::Rules(_) => "rules",
                ExperimentError::Io { .. } => "io",
            };
        }
        if cause.is::<AdapterError>() {
            return "adapter";
        }
        if cause.is::<CorpusError>() {
            return "corpus";
        }
        if cause.is::<LidError>() {
            return "lid";
        }
        if cause.is::<RuleError>() {
            return "rules";
        }
        if cause.is::<MorphError>() {
            return "morphology";
        }
        if cause.is::<MetricError>() {
            return "metrics";
        }
        if cause.is::<TagError>() {
            return "tag";
        }
    }
    "schema"
}

/// Parses arguments, runs, and returns the process exit code. Failures are
/// printed to stderr as `{"error": ..., "kind": ...}`.
pub fn main_with_args<I: IntoIterator<Item = T>, T: Into<OsString> + Clone>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let report = ErrorReport {
                error: e.render().to_string().trim().to_owned(),
                kind: "usage",
            };
            eprintln!("{}", serde_json::to_string(&report).expect("plain struct"));
            return 2;
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out).and_then(|()| out.flush().map_err(Into::into));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let report = ErrorReport {
                error: format!("{e:#}"),
                kind: kind_of(&e),
            };
            eprintln!("{}", serde_json::to_string(&report).expect("plain struct"));
            1
        }
    }
}

fn read_file(p: &Path) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))
}

/// Applies `f` to every input line, streaming.
fn each_line(io_: &Inputs, out: &mut dyn Write, mut f: impl FnMut(&str, &mut dyn Write) -> Result<()>) -> Result<()> {
    if io_.inputs.is_empty() {
        for line in io::stdin().lock().lines() {
            f(&line.context("cannot read stdin")?, out)?;
        }
    } else {
        for p in &io_.inputs {
            let file = fs::File::open(p).with_context(|| format!("cannot read {}", p.display()))?;
            for line in io::BufReader::new(file).lines() {
                f(&line.with_context(|| format!("cannot read {}", p.display()))?, out)?;
            }
        }
    }
    Ok(())
}

fn json_line(out: &mut dyn Write, v: &impl Serialize) -> Result<()> {
    serde_json::to_writer(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn transducer(r: &Resources) -> Result<Transducer> {
    let inventory = match &r.morphemes {
        Some(p) => Inventory::from_tsv(&read_file(p)?).with_context(|| format!("{}", p.display()))?,
        None => Inventory::builtin(),
    };
    let rules = match &r.rules {
        Some(p) => RuleBook::from_tsv(&read_file(p)?, &inventory).with_context(|| format!("{}", p.display()))?,
        None => RuleBook::builtin(&inventory),
    };
    Ok(Transducer::new(inventory, rules))
}

fn write_report(out: &mut dyn Write, format: Format, csv: String, json: &impl Serialize) -> Result<()> {
    match format {
        Format::Csv => out.write_all(csv.as_bytes())?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, json)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn aligned_lines(reference: &Path, hyp: &Path) -> Result<(Vec<String>, Vec<String>)> {
    let r: Vec<String> = read_file(reference)?.lines().map(str::to_owned).collect();
    let h: Vec<String> = read_file(hyp)?.lines().map(str::to_owned).collect();
    if r.len() != h.len() {
        bail!(MetricError::Shape(format!(
            "{} has {} lines but {} has {}",
            reference.display(),
            r.len(),
            hyp.display(),
            h.len()
        )));
    }
    Ok((r, h))
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let format = cli.format;
    match &cli.command {
        Cmd::Normalize { io, keep_zwnj, table } => {
            let table = match table {
                Some(p) => {
                    NormalizationTable::from_tsv(&read_file(p)?).map_err(|e| anyhow::anyhow!("{}: {e}", p.display()))?
                }
                None => NormalizationTable::builtin(),
            };
            let n = Normalizer::new(
                table,
                NormalizeOptions {
                    keep_edge_zwnj: *keep_zwnj,
                },
            );
            each_line(io, out, |line, out| {
                let t = n.normalize(line);
                match format {
                    Format::Csv => writeln!(out, "{}", t.as_str())?,
                    Format::Json => json_line(
                        out,
                        &serde_json::json!({"text": t.as_str(), "tokens": tokenize(&t), "warnings": t.warnings()}),
                    )?,
                }
                Ok(())
            })
        }
        Cmd::Transliterate { io, to, table } => {
            let table = match table {
                Some(p) => TransliterationTable::from_tsv(&read_file(p)?)
                    .map_err(|e| anyhow::anyhow!("{}: {e}", p.display()))?,
                None => TransliterationTable::builtin(),
            };
            let dir = match to {
                Script::Latin => Direction::ArabicToLatin,
                Script::Arabic => Direction::LatinToArabic,
            };
            let n = Normalizer::default();
            each_line(io, out, |line, out| {
                let t = table.transliterate(&n.normalize(line), dir);
                match format {
                    Format::Csv => writeln!(out, "{}", t.as_str())?,
                    Format::Json => json_line(out, &serde_json::json!({"text": t.as_str(), "warnings": t.warnings()}))?,
                }
                Ok(())
            })
        }
        Cmd::Dialectalize { io, target, resources }
        | Cmd::Standardize {
            io,
            source: target,
            resources,
        } => {
            let forward = matches!(cli.command, Cmd::Dialectalize { .. });
            let t = transducer(resources)?;
            let n = Normalizer::default();
            each_line(io, out, |line, out| {
                let text = n.normalize(line);
                let r = if forward {
                    t.dialectalize(&text, target)?
                } else {
                    t.standardize(&text, target)?
                };
                if resources.edits {
                    for e in &r.edits {
                        eprintln!("{}", serde_json::to_string(e)?);
                    }
                }
                match format {
                    Format::Csv => writeln!(out, "{}", r.text.as_str())?,
                    Format::Json => json_line(out, &serde_json::json!({"text": r.text.as_str(), "edits": r.edits}))?,
                }
                Ok(())
            })
        }
        Cmd::MorphAnalyze { io, dialect, morphemes } => {
            let inv = match morphemes {
                Some(p) => Inventory::from_tsv(&read_file(p)?).with_context(|| format!("{}", p.display()))?,
                None => Inventory::builtin(),
            };
            let n = Normalizer::default();
            if format == Format::Csv {
                writeln!(out, "line,token,rank,stem,morphs")?;
            }
            let mut line_no = 0;
            each_line(io, out, |line, out| {
                line_no += 1;
                for token in tokenize(&n.normalize(line)) {
                    let analyses = inv.analyze(&token, dialect)?;
                    match format {
                        Format::Csv => {
                            let rows: Vec<Vec<String>> = analyses
                                .iter()
                                .map(|a| {
                                    let morphs: Vec<String> = a
                                        .morphs()
                                        .map(|m| format!("{}:{}", m.category.as_str(), m.surface))
                                        .collect();
                                    vec![
                                        line_no.to_string(),
                                        token.clone(),
                                        a.confidence_rank.to_string(),
                                        a.stem.clone(),
                                        morphs.join(" "),
                                    ]
                                })
                                .collect();
                            let body = csv_string(&["line", "token", "rank", "stem", "morphs"], &rows);
                            out.write_all(body.split_once('\n').map_or("", |(_, rest)| rest).as_bytes())?;
                        }
                        Format::Json => json_line(
                            out,
                            &serde_json::json!({"line": line_no, "token": token, "analyses": analyses}),
                        )?,
                    }
                }
                Ok(())
            })
        }
        Cmd::Similarity { wordlists } => {
            let lists = match wordlists {
                Some(p) => Wordlists::from_tsv(&read_file(p)?).with_context(|| format!("{}", p.display()))?,
                None => Wordlists::builtin(),
            };
            let m = similarity_matrix(&lists);
            write_report(out, format, m.to_csv(), &m)
        }
        Cmd::LidTrain {
            train: path,
            model,
            level,
            hyper,
        } => {
            let examples = read_examples(&read_file(path)?).with_context(|| format!("{}", path.display()))?;
            let config = LidConfig {
                ngram_min: hyper.minn,
                ngram_max: hyper.maxn,
                embedding_dim: hyper.dim,
                epochs: hyper.epochs,
                learning_rate: hyper.lr,
                feature_buckets: hyper.buckets,
                word_unigrams: !hyper.no_words,
                seed: hyper.seed,
            };
            let (m, summary) = train(&examples, &config, *level)?;
            m.save_path(model)
                .with_context(|| format!("cannot write {}", model.display()))?;
            let csv = csv_string(
                &[
                    "examples",
                    "skipped_empty",
                    "distinct_features",
                    "train_accuracy",
                    "labels",
                ],
                &[vec![
                    summary.examples.to_string(),
                    summary.skipped_empty.to_string(),
                    summary.distinct_features.to_string(),
                    format!("{:.4}", summary.train_accuracy),
                    m.labels().join(" "),
                ]],
            );
            write_report(
                out,
                format,
                csv,
                &serde_json::json!({"summary": summary, "labels": m.labels(), "config": config}),
            )
        }
        Cmd::LidPredict { io, model, k } => {
            let m = LidModel::load_path(model).with_context(|| format!("{}", model.display()))?;
            let n = Normalizer::default();
            if format == Format::Csv {
                writeln!(out, "line,rank,label,probability")?;
            }
            let mut line_no = 0;
            each_line(io, out, |line, out| {
                line_no += 1;
                let top = m
                    .predict(&n.normalize(line), *k)
                    .with_context(|| format!("line {line_no}"))?;
                match format {
                    Format::Csv => {
                        for (rank, (label, p)) in top.iter().enumerate() {
                            writeln!(out, "{line_no},{},{label},{p:.6}", rank + 1)?;
                        }
                    }
                    Format::Json => json_line(out, &serde_json::json!({"line": line_no, "labels": top}))?,
                }
                Ok(())
            })
        }
        Cmd::LidEval { model, test, confusion } => {
            let m = LidModel::load_path(model).with_context(|| format!("{}", model.display()))?;
            let examples = read_examples(&read_file(test)?).with_context(|| format!("{}", test.display()))?;
            let e = evaluate(&m, &examples)?;
            if let Some(p) = confusion {
                fs::write(p, e.confusion_csv()).with_context(|| format!("cannot write {}", p.display()))?;
            }
            let mut rows: Vec<Vec<String>> = e
                .labels
                .iter()
                .zip(&e.report.per_class)
                .map(|(l, c)| {
                    vec![
                        l.clone(),
                        format!("{:.4}", c.precision),
                        format!("{:.4}", c.recall),
                        format!("{:.4}", c.f1),
                        c.support.to_string(),
                    ]
                })
                .collect();
            let total: u64 = e.report.per_class.iter().map(|c| c.support).sum();
            rows.push(vec![
                "macro".into(),
                String::new(),
                String::new(),
                format!("{:.4}", e.report.macro_f1),
                total.to_string(),
            ]);
            rows.push(vec![
                "weighted".into(),
                String::new(),
                String::new(),
                format!("{:.4}", e.report.weighted_f1),
                total.to_string(),
            ]);
            rows.push(vec![
                "accuracy".into(),
                String::new(),
                String::new(),
                format!("{:.4}", e.report.accuracy),
                total.to_string(),
            ]);
            let csv = csv_string(&["label", "precision", "recall", "f1", "support"], &rows);
            write_report(out, format, csv, &e)
        }
        Cmd::CorpusBuild {
            episodes,
            out: dir,
            min_duration,
            aliases,
            slice_cmd,
            media_dir,
        } => {
            let sources = read_episode_sources(episodes)?;
            let mut opts = BuildOptions {
                min_duration_s: *min_duration,
                ..BuildOptions::default()
            };
            if let Some(p) = aliases {
                opts.aliases.extend_from_json(&read_file(p)?)?;
            }
            let corpus = Corpus::build(&sources, &opts)?;
            corpus.write(dir)?;
            for ep in &corpus.episodes {
                for w in &ep.warnings {
                    log::warn!("{}: {w}", ep.metadata.id);
                }
            }
            if let Some(cmd) = slice_cmd {
                let template: Vec<String> = cmd.split_whitespace().map(str::to_owned).collect();
                let cwd = match media_dir {
                    Some(d) => d.clone(),
                    None => episodes.parent().map(Path::to_path_buf).unwrap_or_default(),
                };
                let audio = fs::canonicalize(dir)?.join("audio");
                fs::create_dir_all(&audio)?;
                for row in corpus.cut_manifest() {
                    let args = slice_command(&template, &row, &audio);
                    let (program, rest) = args.split_first().context("empty --slice-cmd")?;
                    let status = Command::new(program)
                        .args(rest)
                        .current_dir(&cwd)
                        .status()
                        .with_context(|| format!("cannot start {program}"))?;
                    if !status.success() {
                        bail!("slicing {} failed with {status}", row.segment_name);
                    }
                }
            }
            let exclusions: usize = corpus.episodes.iter().map(|e| e.exclusions.len()).sum();
            let csv = csv_string(
                &["episodes", "utterances", "exclusions"],
                &[vec![
                    corpus.episodes.len().to_string(),
                    corpus.utterances().count().to_string(),
                    exclusions.to_string(),
                ]],
            );
            write_report(
                out,
                format,
                csv,
                &serde_json::json!({
                    "episodes": corpus.episodes.len(),
                    "utterances": corpus.utterances().count(),
                    "exclusions": exclusions,
                }),
            )
        }
        Cmd::CorpusStats { corpus } => {
            let table = stats(&Corpus::load(corpus)?);
            write_report(out, format, table.to_csv(), &table)
        }
        Cmd::CorpusSplit {
            corpus,
            out: dir,
            seed,
            test_sizes,
            validation_fraction,
            min_duration,
        } => {
            let mut spec = SplitSpec::asr_default();
            if !test_sizes.is_empty() {
                spec.test_sizes = test_sizes.iter().cloned().collect::<BTreeMap<_, _>>();
            }
            spec.validation_fraction = *validation_fraction;
            spec.min_duration_s = *min_duration;
            let s = split(&Corpus::load(corpus)?, &spec, *seed)?;
            s.write(dir)?;
            let csv = csv_string(
                &["train", "validation", "test", "seed"],
                &[vec![
                    s.train.len().to_string(),
                    s.validation.len().to_string(),
                    s.test.len().to_string(),
                    seed.to_string(),
                ]],
            );
            write_report(
                out,
                format,
                csv,
                &serde_json::json!({
                    "train": s.train.len(), "validation": s.validation.len(), "test": s.test.len(), "seed": seed,
                }),
            )
        }
        Cmd::EvalAsr { reference, hyp } => {
            let (r, h) = aligned_lines(reference, hyp)?;
            let pairs: Vec<(Vec<&str>, Vec<&str>)> = r
                .iter()
                .zip(&h)
                .map(|(r, h)| (r.split_whitespace().collect(), h.split_whitespace().collect()))
                .collect();
            let w = corpus_wer(&pairs)?;
            let csv = csv_string(
                &[
                    "wer",
                    "substitutions",
                    "deletions",
                    "insertions",
                    "ref_tokens",
                    "sentences",
                ],
                &[vec![
                    format!("{:.2}", w.wer_percent),
                    w.substitutions.to_string(),
                    w.deletions.to_string(),
                    w.insertions.to_string(),
                    w.ref_tokens.to_string(),
                    r.len().to_string(),
                ]],
            );
            write_report(out, format, csv, &w)
        }
        Cmd::EvalMt {
            refs,
            hyp,
            metric,
            tokenize_13a,
        } => {
            let hyps: Vec<String> = read_file(hyp)?.lines().map(str::to_owned).collect();
            let mut streams = Vec::new();
            for p in refs {
                let (r, _) = aligned_lines(p, hyp)?;
                streams.push(r);
            }
            let by_sentence: Vec<Vec<&str>> = (0..hyps.len())
                .map(|i| streams.iter().map(|s| s[i].as_str()).collect())
                .collect();
            let metrics = if metric.is_empty() {
                vec![Metric::Bleu, Metric::Chrf]
            } else {
                metric.clone()
            };
            let bleu_opts = BleuOptions {
                tokenize_13a: *tokenize_13a,
                ..BleuOptions::default()
            };
            let mut rows = Vec::new();
            let mut json = Vec::new();
            for m in metrics {
                let score = match m {
                    Metric::Bleu => corpus_bleu(&hyps, &by_sentence, &bleu_opts).bleu,
                    Metric::Chrf => corpus_chrf(&hyps, &by_sentence, &ChrfOptions::default()),
                };
                let name = match m {
                    Metric::Bleu => "bleu",
                    Metric::Chrf => "chrf2",
                };
                rows.push(vec![
                    name.to_owned(),
                    format!("{score:.2}"),
                    hyps.len().to_string(),
                    refs.len().to_string(),
                ]);
                json.push(serde_json::json!({
                    "metric": name, "score": score, "sentences": hyps.len(), "references": refs.len(), "scoring": "corpus",
                }));
            }
            let csv = csv_string(&["metric", "score", "sentences", "references"], &rows);
            write_report(out, format, csv, &json)
        }
        Cmd::MtExperiment {
            config,
            cache_dir,
            out: report,
            pivot,
        } => {
            let (cfg, base) = ExperimentConfig::load(config)?;
            let cells = cfg.expand(&base)?;
            let cache = cache_dir
                .clone()
                .or_else(|| cfg.cache_dir.as_ref().map(|d| base.join(d)));
            let rows = run_all(&cells, &Transducer::builtin(), cache.as_deref())?;
            let text = match format {
                Format::Csv => rows_to_csv(&rows),
                Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
            };
            match report {
                Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?,
                None => out.write_all(text.as_bytes())?,
            }
            if let Some(p) = pivot {
                fs::write(p, pivot_csv(&rows)).with_context(|| format!("cannot write {}", p.display()))?;
            }
            Ok(())
        }
    }
}
