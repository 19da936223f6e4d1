use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Corpus, Utterance};
use crate::orthography::{normalize, tokenize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub variety: String,
    pub utterances: usize,
    pub hours: f64,
    pub avg_tokens: f64,
    pub avg_seconds: f64,
    /// Share of utterances with a known age or gender.
    pub speaker_metadata_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct StatsTable {
    pub rows: Vec<StatsRow>,
    /// Absent for an empty corpus.
    pub total: Option<StatsRow>,
}

#[derive(Default, Clone, Copy)]
struct Acc {
    n: usize,
    ms: u64,
    tokens: usize,
    with_meta: usize,
}

impl Acc {
    fn add(&mut self, u: &Utterance) {
        self.n += 1;
        // durations are whole milliseconds; summing them as integers keeps
        // the total row exact
        self.ms += ((u.end_s - u.start_s) * 1000.0).round() as u64;
        self.tokens += tokenize(&normalize(&u.text)).len();
        self.with_meta += usize::from(u.has_speaker_metadata());
    }

    fn merge(&mut self, o: &Acc) {
        self.n += o.n;
        self.ms += o.ms;
        self.tokens += o.tokens;
        self.with_meta += o.with_meta;
    }

    fn row(&self, variety: String) -> StatsRow {
        let n = self.n as f64;
        StatsRow {
            variety,
            utterances: self.n,
            hours: self.ms as f64 / 3_600_000.0,
            avg_tokens: self.tokens as f64 / n,
            avg_seconds: self.ms as f64 / 1000.0 / n,
            speaker_metadata_pct: 100.0 * self.with_meta as f64 / n,
        }
    }
}

/// Per-variety counts, duration, mean tokens and mean seconds, plus a total
/// row whose averages are utterance-weighted.
pub fn stats(corpus: &Corpus) -> StatsTable {
    let mut by: BTreeMap<String, Acc> = BTreeMap::new();
    for u in corpus.utterances() {
        by.entry(u.dialect.to_string()).or_default().add(u);
    }
    if by.is_empty() {
        return StatsTable::default();
    }
    let mut total = Acc::default();
    let rows = by
        .into_iter()
        .map(|(k, a)| {
            total.merge(&a);
            a.row(k)
        })
        .collect();
    StatsTable {
        rows,
        total: Some(total.row("Total".into())),
    }
}

impl StatsTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("variety,utterances,hours,avg_tokens,avg_seconds,speaker_metadata_pct\n");
        for r in self.rows.iter().chain(&self.total) {
            s.push_str(&format!(
                "{},{},{:.6},{:.4},{:.4},{:.2}\n",
                r.variety, r.utterances, r.hours, r.avg_tokens, r.avg_seconds, r.speaker_metadata_pct
            ));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Age, Episode, EpisodeMetadata, Gender, Genre};

    fn utt(dialect: &str, i: u32, secs: f64, text: &str, age: Age) -> Utterance {
        Utterance {
            id: format!("e_{i}"),
            index: i,
            start_s: 10.0,
            end_s: 10.0 + secs,
            text: text.into(),
            speaker_age: age,
            speaker_gender: Gender::Unknown,
            audio_file: None,
            dialect: dialect.parse().unwrap(),
            beyond_audio: false,
        }
    }

    fn corpus(us: Vec<Utterance>) -> Corpus {
        Corpus {
            episodes: vec![Episode {
                metadata: EpisodeMetadata {
                    id: "e".into(),
                    title: "t".into(),
                    genre: Genre::Drama,
                    dialect: "ckb-snn".parse().unwrap(),
                    source_url: None,
                },
                media: "e.mp4".into(),
                utterances: us,
                exclusions: vec![],
                warnings: vec![],
            }],
        }
    }

    #[test]
    fn metadata_share() {
        let c = corpus(vec![
            utt("ckb-snn", 1, 1.0, "a b", Age::Adult),
            utt("ckb-snn", 2, 1.0, "a", Age::Unknown),
            utt("ckb-snn", 3, 1.0, "a", Age::Child),
            utt("ckb-snn", 4, 1.0, "a", Age::Unknown),
        ]);
        let t = stats(&c);
        assert_eq!(t.rows[0].speaker_metadata_pct, 50.0);
        assert_eq!(t.rows[0].avg_tokens, 1.25);
    }

    #[test]
    fn total_row_aggregates() {
        let c = corpus(vec![
            utt("ckb-snn", 1, 1.5, "a b c", Age::Adult),
            utt("ckb-hwl", 2, 0.5, "a", Age::Unknown),
            utt("ckb-hwl", 3, 2.0, "a, b", Age::Unknown),
        ]);
        let t = stats(&c);
        let total = t.total.clone().unwrap();
        assert_eq!(total.utterances, 3);
        assert_eq!(total.hours, 4.0 / 3600.0);
        assert_eq!(total.avg_tokens, 7.0 / 3.0);
        assert_eq!(
            t.to_csv(),
            "variety,utterances,hours,avg_tokens,avg_seconds,speaker_metadata_pct\n\
             ckb-hwl,2,0.000694,2.0000,1.2500,0.00\n\
             ckb-snn,1,0.000417,3.0000,1.5000,100.00\n\
             Total,3,0.001111,2.3333,1.3333,33.33\n"
        );
    }

    #[test]
    fn empty_corpus_empty_table() {
        let t = stats(&Corpus::default());
        assert!(t.rows.is_empty() && t.total.is_none());
        assert_eq!(t.to_csv().lines().count(), 1);
    }
}
