use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::speaker::{Age, Gender, SpeakerAliases};
use super::srt::parse_srt;
use super::CorpusError;
use crate::orthography::normalize;
use crate::tag::{DialectTag, Subdialect};

pub const DEFAULT_MIN_DURATION_S: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Genre {
    Comedy,
    Drama,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeMetadata {
    pub id: String,
    pub title: String,
    pub genre: Genre,
    pub dialect: DialectTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_url: Option<String>,
}

impl EpisodeMetadata {
    pub fn validate(&self) -> Result<(), CorpusError> {
        let bad = |m: String| Err(CorpusError::Metadata(format!("episode {:?}: {m}", self.id)));
        if self.id.is_empty() || self.id.contains(['/', '\\']) || self.id.starts_with('.') {
            return bad("id must be a plain folder name".into());
        }
        match self.dialect.subdialect {
            Some(s) if s != Subdialect::Standard => Ok(()),
            _ => bad(format!("{} is not a corpus subdialect", self.dialect)),
        }
    }
}

/// One row of the episode list given to the builder (CSV or JSON).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeSource {
    pub id: String,
    pub title: String,
    pub genre: Genre,
    pub dialect: DialectTag,
    #[serde(default)]
    pub source_url: Option<String>,
    /// SRT path, relative to the list file.
    pub srt: PathBuf,
    /// Media file named in the cut manifest; defaults to `<id>.mp4`.
    #[serde(default)]
    pub source: Option<String>,
    #[serde(default)]
    pub audio_duration_s: Option<f64>,
}

impl EpisodeSource {
    pub fn metadata(&self) -> EpisodeMetadata {
        EpisodeMetadata {
            id: self.id.clone(),
            title: self.title.clone(),
            genre: self.genre,
            dialect: self.dialect.clone(),
            source_url: self.source_url.clone(),
        }
    }

    pub fn media(&self) -> String {
        self.source.clone().unwrap_or_else(|| format!("{}.mp4", self.id))
    }
}

/// Reads an episode list; `.json` files hold an array, anything else is CSV
/// with a header row. Relative SRT paths are resolved against the list's folder.
pub fn read_episode_sources(path: &Path) -> Result<Vec<EpisodeSource>, CorpusError> {
    let mut sources: Vec<EpisodeSource> = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&fs::read_to_string(path)?)?
    } else {
        let mut rdr = csv::Reader::from_path(path)?;
        rdr.deserialize().collect::<Result<_, _>>()?
    };
    let base = path.parent().unwrap_or(Path::new(""));
    for s in &mut sources {
        if s.srt.is_relative() {
            s.srt = base.join(&s.srt);
        }
    }
    Ok(sources)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Utterance {
    pub id: String,
    pub index: u32,
    pub start_s: f64,
    pub end_s: f64,
    /// Normalized text with the speaker annotation removed.
    pub text: String,
    pub speaker_age: Age,
    pub speaker_gender: Gender,
    pub audio_file: Option<String>,
    pub dialect: DialectTag,
    /// The cue ends after the declared media duration.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub beyond_audio: bool,
}

impl Utterance {
    pub fn duration_s(&self) -> f64 {
        self.end_s - self.start_s
    }

    pub fn has_speaker_metadata(&self) -> bool {
        self.speaker_age != Age::Unknown || self.speaker_gender != Gender::Unknown
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exclusion {
    pub episode: String,
    pub index: u32,
    pub start_s: f64,
    pub end_s: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutRow {
    pub source: String,
    pub start_s: f64,
    pub end_s: f64,
    pub segment_name: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Episode {
    pub metadata: EpisodeMetadata,
    pub media: String,
    pub utterances: Vec<Utterance>,
    pub exclusions: Vec<Exclusion>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub min_duration_s: f64,
    pub aliases: SpeakerAliases,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            min_duration_s: DEFAULT_MIN_DURATION_S,
            aliases: SpeakerAliases::default(),
        }
    }
}

/// Turns one episode's subtitles into utterances. Cues that are too short or
/// have no text left after the speaker annotation are excluded and logged.
pub fn build_episode(source: &EpisodeSource, srt: &str, opts: &BuildOptions) -> Result<Episode, CorpusError> {
    let metadata = source.metadata();
    metadata.validate()?;
    let cues = parse_srt(srt)?;
    let mut episode = Episode {
        metadata,
        media: source.media(),
        utterances: Vec::new(),
        exclusions: Vec::new(),
        warnings: Vec::new(),
    };
    if cues.is_empty() {
        let w = format!("episode {}: no cues", source.id);
        log::warn!("{w}");
        episode.warnings.push(w);
    }
    let min_ms = (opts.min_duration_s * 1000.0).round() as u64;
    for cue in cues {
        let exclude = |reason: &str| Exclusion {
            episode: source.id.clone(),
            index: cue.index,
            start_s: cue.start_s(),
            end_s: cue.end_s(),
            reason: reason.to_owned(),
        };
        if cue.duration_ms() < min_ms {
            episode.exclusions.push(exclude("too_short"));
            continue;
        }
        let (age, gender, rest) = opts.aliases.extract(&cue.text);
        let text = normalize(rest).into_string();
        if text.is_empty() {
            episode.exclusions.push(exclude("empty_text"));
            continue;
        }
        let beyond_audio = source.audio_duration_s.is_some_and(|d| cue.end_s() > d);
        if beyond_audio {
            let w = format!("episode {}: cue {} ends after the media", source.id, cue.index);
            log::warn!("{w}");
            episode.warnings.push(w);
        }
        let id = format!("{}_{}", source.id, cue.index);
        episode.utterances.push(Utterance {
            audio_file: Some(format!("{id}.ogg")),
            id,
            index: cue.index,
            start_s: cue.start_s(),
            end_s: cue.end_s(),
            text,
            speaker_age: age,
            speaker_gender: gender,
            dialect: source.dialect.clone(),
            beyond_audio,
        });
    }
    for e in &episode.exclusions {
        log::info!("excluded {}_{}: {}", e.episode, e.index, e.reason);
    }
    Ok(episode)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Corpus {
    pub episodes: Vec<Episode>,
}

pub const UTTERANCES_FILE: &str = "utterances.json";
pub const METADATA_FILE: &str = "metadata.json";
pub const MANIFEST_FILE: &str = "cut_manifest.csv";
pub const EXCLUSIONS_FILE: &str = "exclusions.csv";

#[derive(Serialize, Deserialize)]
struct MetadataEntry {
    #[serde(flatten)]
    metadata: EpisodeMetadata,
    media: String,
}

impl Corpus {
    /// Builds every episode, reading each SRT from disk.
    pub fn build(sources: &[EpisodeSource], opts: &BuildOptions) -> Result<Self, CorpusError> {
        let mut ids = std::collections::HashSet::new();
        let mut episodes = Vec::with_capacity(sources.len());
        for s in sources {
            if !ids.insert(&s.id) {
                return Err(CorpusError::Metadata(format!("duplicate episode id {:?}", s.id)));
            }
            let srt =
                fs::read_to_string(&s.srt).map_err(|e| CorpusError::Metadata(format!("{}: {e}", s.srt.display())))?;
            episodes.push(build_episode(s, &srt, opts)?);
        }
        Ok(Self { episodes })
    }

    pub fn utterances(&self) -> impl Iterator<Item = &Utterance> + '_ {
        self.episodes.iter().flat_map(|e| &e.utterances)
    }

    pub fn cut_manifest(&self) -> Vec<CutRow> {
        self.episodes
            .iter()
            .flat_map(|e| {
                e.utterances.iter().map(|u| CutRow {
                    source: e.media.clone(),
                    start_s: u.start_s,
                    end_s: u.end_s,
                    segment_name: u.audio_file.clone().unwrap_or_default(),
                })
            })
            .collect()
    }

    /// Writes `<out>/<episode>/utterances.json`, `<out>/metadata.json`, the
    /// cut manifest and the exclusion log.
    pub fn write(&self, out: &Path) -> Result<(), CorpusError> {
        fs::create_dir_all(out)?;
        let mut meta = Vec::new();
        for e in &self.episodes {
            let dir = out.join(&e.metadata.id);
            fs::create_dir_all(&dir)?;
            fs::write(
                dir.join(UTTERANCES_FILE),
                serde_json::to_string_pretty(&e.utterances)? + "\n",
            )?;
            meta.push(MetadataEntry {
                metadata: e.metadata.clone(),
                media: e.media.clone(),
            });
        }
        fs::write(out.join(METADATA_FILE), serde_json::to_string_pretty(&meta)? + "\n")?;

        let mut w = csv::Writer::from_path(out.join(MANIFEST_FILE))?;
        w.write_record(["source", "start_s", "end_s", "segment_name"])?;
        for r in self.cut_manifest() {
            w.write_record([
                r.source,
                format!("{:.3}", r.start_s),
                format!("{:.3}", r.end_s),
                r.segment_name,
            ])?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_path(out.join(EXCLUSIONS_FILE))?;
        w.write_record(["episode", "index", "start_s", "end_s", "reason"])?;
        for e in self.episodes.iter().flat_map(|e| &e.exclusions) {
            w.write_record([
                e.episode.clone(),
                e.index.to_string(),
                format!("{:.3}", e.start_s),
                format!("{:.3}", e.end_s),
                e.reason.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a tree written by [`Corpus::write`]. Exclusions are not reloaded.
    pub fn load(dir: &Path) -> Result<Self, CorpusError> {
        let meta: Vec<MetadataEntry> = serde_json::from_str(&fs::read_to_string(dir.join(METADATA_FILE))?)?;
        let mut episodes = Vec::with_capacity(meta.len());
        for m in meta {
            m.metadata.validate()?;
            let path = dir.join(&m.metadata.id).join(UTTERANCES_FILE);
            let utterances = serde_json::from_str(&fs::read_to_string(&path)?)?;
            episodes.push(Episode {
                metadata: m.metadata,
                media: m.media,
                utterances,
                exclusions: Vec::new(),
                warnings: Vec::new(),
            });
        }
        Ok(Self { episodes })
    }
}

/// Fills `{source}`, `{start}`, `{end}` and `{output}` in an argument
/// template for an external slicing tool.
pub fn slice_command(template: &[String], row: &CutRow, out_dir: &Path) -> Vec<String> {
    let output = out_dir.join(&row.segment_name);
    template
        .iter()
        .map(|a| {
            a.replace("{source}", &row.source)
                .replace("{start}", &format!("{:.3}", row.start_s))
                .replace("{end}", &format!("{:.3}", row.end_s))
                .replace("{output}", &output.to_string_lossy())
        })
        .collect()
}
