//! Subtitle-based speech corpus: SRT parsing, speaker annotations, the
//! per-episode tree with its cut manifest, statistics and splits.

mod build;
mod speaker;
mod split;
mod srt;
mod stats;

use thiserror::Error;

pub use build::{
    build_episode, read_episode_sources, slice_command, BuildOptions, Corpus, CutRow, Episode, EpisodeMetadata,
    EpisodeSource, Exclusion, Genre, Utterance, DEFAULT_MIN_DURATION_S, EXCLUSIONS_FILE, MANIFEST_FILE, METADATA_FILE,
    UTTERANCES_FILE,
};
pub use speaker::{extract_speaker, Age, Gender, SpeakerAliases};
pub use split::{split, upsample, Split, SplitSpec, UpsampleStrategy, Upsampled};
pub use srt::{parse_srt, Cue};
pub use stats::{stats, StatsRow, StatsTable};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{dialect}: requested {requested} test utterances, only {available} available")]
    Split {
        dialect: String,
        requested: usize,
        available: usize,
    },
    #[error("metadata: {0}")]
    Metadata(String),
}
