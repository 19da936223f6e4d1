use serde::{Deserialize, Serialize};

use super::CorpusError;

/// One subtitle block. Times are milliseconds from the start of the media.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cue {
    pub index: u32,
    pub start_ms: u64,
    pub end_ms: u64,
    pub text: String,
}

impl Cue {
    pub fn start_s(&self) -> f64 {
        self.start_ms as f64 / 1000.0
    }

    pub fn end_s(&self) -> f64 {
        self.end_ms as f64 / 1000.0
    }

    pub fn duration_ms(&self) -> u64 {
        self.end_ms - self.start_ms
    }
}

fn parse_timecode(s: &str) -> Option<u64> {
    let (hms, ms) = s.trim().split_once([',', '.'])?;
    let parts: Vec<&str> = hms.split(':').collect();
    let [h, m, sec] = parts[..] else {
        return None;
    };
    let num = |x: &str| -> Option<u64> {
        if x.is_empty() || !x.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        x.parse().ok()
    };
    let (h, m, sec, ms) = (num(h)?, num(m)?, num(sec)?, num(ms)?);
    if m >= 60 || sec >= 60 || ms >= 1000 {
        return None;
    }
    Some(((h * 60 + m) * 60 + sec) * 1000 + ms)
}

/// Parses SRT blocks. Multi-line cue text is joined with single spaces.
pub fn parse_srt(src: &str) -> Result<Vec<Cue>, CorpusError> {
    let src = src.strip_prefix('\u{FEFF}').unwrap_or(src);
    let lines: Vec<&str> = src.lines().map(|l| l.trim_end_matches('\r')).collect();
    let err = |line: usize, message: String| CorpusError::Parse {
        line: line + 1,
        message,
    };
    let mut cues: Vec<Cue> = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        if lines[i].trim().is_empty() {
            i += 1;
            continue;
        }
        let index: u32 = lines[i]
            .trim()
            .parse()
            .map_err(|_| err(i, format!("expected a cue index, found {:?}", lines[i])))?;
        if let Some(prev) = cues.last() {
            if index <= prev.index {
                return Err(err(i, format!("cue index {index} does not follow {}", prev.index)));
            }
        }
        i += 1;
        let timing = lines.get(i).ok_or_else(|| err(i, "missing timecode line".into()))?;
        let (start, rest) = timing
            .split_once("-->")
            .ok_or_else(|| err(i, format!("malformed timecode line {timing:?}")))?;
        // anything after the end time (positioning hints) is ignored
        let end = rest.split_whitespace().next().unwrap_or("");
        let start_ms =
            parse_timecode(start).ok_or_else(|| err(i, format!("malformed start time {:?}", start.trim())))?;
        let end_ms = parse_timecode(end).ok_or_else(|| err(i, format!("malformed end time {end:?}")))?;
        if end_ms <= start_ms {
            return Err(err(i, format!("cue {index} ends at or before its start")));
        }
        i += 1;
        let mut text = Vec::new();
        while i < lines.len() && !lines[i].trim().is_empty() {
            text.push(lines[i].trim());
            i += 1;
        }
        cues.push(Cue {
            index,
            start_ms,
            end_ms,
            text: text.join(" "),
        });
    }
    Ok(cues)
}
