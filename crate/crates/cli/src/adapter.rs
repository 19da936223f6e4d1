//! Translators behind a batch text-in/text-out contract, with a
//! content-addressed cache, rate limiting, retries and bounded parallelism.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AdapterError {
    #[error("adapter {system}: {message}")]
    Call { system: String, message: String },
    #[error("adapter {system}: expected {expected} lines, got {got}")]
    Length {
        system: String,
        expected: usize,
        got: usize,
    },
    #[error("adapter {0}: auth token variable {1} is not set")]
    MissingToken(String, String),
    #[error("cache: {0}")]
    Cache(#[from] std::io::Error),
}

type BatchResult = Option<Result<Vec<String>, AdapterError>>;

/// How a system is reached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AdapterKind {
    /// Returns its input.
    Identity,
    /// Runs a program once per batch: one sentence per stdin line in, one per
    /// stdout line out. `{source_lang}` and `{target_lang}` are filled in
    /// `command`.
    Command { command: Vec<String> },
    /// POSTs `{"source_lang", "target_lang", "texts": [...]}` and accepts
    /// either a JSON array of strings or `{"translations": [...]}`.
    Http {
        url: String,
        /// Environment variable holding a bearer token.
        #[serde(default)]
        token_env: Option<String>,
        #[serde(default = "default_timeout")]
        timeout_s: u64,
    },
}

fn default_timeout() -> u64 {
    60
}

/// Call policy shared by all adapter kinds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CallPolicy {
    pub batch_size: usize,
    /// Batches in flight at once.
    pub parallelism: usize,
    /// Extra attempts per batch after a failure.
    pub retries: usize,
    pub retry_backoff_ms: u64,
    /// Minimum gap between the starts of two calls, across threads.
    pub min_interval_ms: u64,
}

impl Default for CallPolicy {
    fn default() -> Self {
        Self {
            batch_size: 32,
            parallelism: 1,
            retries: 2,
            retry_backoff_ms: 500,
            min_interval_ms: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub name: String,
    #[serde(flatten)]
    pub kind: AdapterKind,
    #[serde(flatten)]
    pub policy: CallPolicy,
    /// System-specific codes for "en" and "ckb", e.g. `ckb = "ckb_Arab"`.
    #[serde(default)]
    pub lang_codes: BTreeMap<String, String>,
}

impl SystemConfig {
    pub fn identity(name: &str) -> Self {
        Self {
            name: name.to_owned(),
            kind: AdapterKind::Identity,
            policy: CallPolicy::default(),
            lang_codes: BTreeMap::new(),
        }
    }

    /// Part of the cache key: changes whenever the adapter would.
    fn fingerprint(&self) -> String {
        serde_json::to_string(&self.kind).expect("adapter kinds serialize")
    }
}

/// A configured system bound to one language pair.
pub struct Translator<'a> {
    pub system: &'a SystemConfig,
    pub source_lang: String,
    pub target_lang: String,
    pub cache_dir: Option<PathBuf>,
    gate: Mutex<Option<Instant>>,
}

impl<'a> Translator<'a> {
    pub fn new(system: &'a SystemConfig, source_lang: &str, target_lang: &str, cache_dir: Option<&Path>) -> Self {
        Self {
            system,
            source_lang: source_lang.to_owned(),
            target_lang: target_lang.to_owned(),
            cache_dir: cache_dir.map(Path::to_path_buf),
            gate: Mutex::new(None),
        }
    }

    /// Translates every line, same length and order as the input.
    pub fn translate(&self, texts: &[String]) -> Result<Vec<String>, AdapterError> {
        let mut out: Vec<Option<String>> = texts.iter().map(|t| self.cache_get(t)).collect::<Result<_, _>>()?;
        let missing: Vec<usize> = (0..texts.len()).filter(|&i| out[i].is_none()).collect();
        let batches: Vec<&[usize]> = missing.chunks(self.system.policy.batch_size.max(1)).collect();
        log::debug!(
            "{}: {} cached, {} batches",
            self.system.name,
            texts.len() - missing.len(),
            batches.len()
        );

        let results: Mutex<Vec<BatchResult>> = Mutex::new((0..batches.len()).map(|_| None).collect());
        let next = AtomicUsize::new(0);
        let workers = self.system.policy.parallelism.clamp(1, batches.len().max(1));
        thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| loop {
                    let b = next.fetch_add(1, Ordering::SeqCst);
                    let Some(batch) = batches.get(b) else { break };
                    let input: Vec<String> = batch.iter().map(|&i| texts[i].clone()).collect();
                    let r = self.call_with_retries(&input);
                    let failed = r.is_err();
                    results.lock().unwrap()[b] = Some(r);
                    if failed {
                        next.store(batches.len(), Ordering::SeqCst);
                    }
                });
            }
        });

        for (batch, r) in batches.iter().zip(results.into_inner().unwrap()) {
            let Some(r) = r else { continue };
            for (&i, t) in batch.iter().zip(r?) {
                self.cache_put(&texts[i], &t)?;
                out[i] = Some(t);
            }
        }
        out.into_iter()
            .map(|t| {
                t.ok_or_else(|| AdapterError::Call {
                    system: self.system.name.clone(),
                    message: "batch abandoned after an earlier failure".into(),
                })
            })
            .collect()
    }

    fn call_with_retries(&self, batch: &[String]) -> Result<Vec<String>, AdapterError> {
        let policy = &self.system.policy;
        let mut attempt = 0;
        loop {
            self.wait_turn();
            match self.call(batch) {
                Ok(out) if out.len() == batch.len() => return Ok(out),
                Ok(out) if attempt >= policy.retries => {
                    return Err(AdapterError::Length {
                        system: self.system.name.clone(),
                        expected: batch.len(),
                        got: out.len(),
                    })
                }
                Err(e @ AdapterError::MissingToken(..)) => return Err(e),
                Err(e) if attempt >= policy.retries => return Err(e),
                other => log::warn!(
                    "{}: attempt {} failed: {:?}",
                    self.system.name,
                    attempt + 1,
                    other.err()
                ),
            }
            attempt += 1;
            thread::sleep(Duration::from_millis(policy.retry_backoff_ms * attempt as u64));
        }
    }

    fn wait_turn(&self) {
        let gap = Duration::from_millis(self.system.policy.min_interval_ms);
        if gap.is_zero() {
            return;
        }
        let wait = {
            let mut slot = self.gate.lock().unwrap();
            let now = Instant::now();
            let start = slot.map_or(now, |t| t.max(now));
            *slot = Some(start + gap);
            start - now
        };
        thread::sleep(wait);
    }

    fn call(&self, batch: &[String]) -> Result<Vec<String>, AdapterError> {
        let fail = |message: String| AdapterError::Call {
            system: self.system.name.clone(),
            message,
        };
        match &self.system.kind {
            AdapterKind::Identity => Ok(batch.to_vec()),
            AdapterKind::Command { command } => {
                let args: Vec<String> = command
                    .iter()
                    .map(|a| {
                        a.replace("{source_lang}", &self.source_lang)
                            .replace("{target_lang}", &self.target_lang)
                    })
                    .collect();
                let (program, rest) = args.split_first().ok_or_else(|| fail("empty command".into()))?;
                let mut child = Command::new(program)
                    .args(rest)
                    .stdin(Stdio::piped())
                    .stdout(Stdio::piped())
                    .stderr(Stdio::piped())
                    .spawn()
                    .map_err(|e| fail(format!("cannot start {program}: {e}")))?;
                let mut input = batch.join("\n");
                input.push('\n');
                let mut stdin = child.stdin.take().expect("piped stdin");
                let writer = thread::spawn(move || stdin.write_all(input.as_bytes()));
                let output = child.wait_with_output().map_err(|e| fail(e.to_string()))?;
                writer.join().expect("stdin writer").map_err(|e| fail(e.to_string()))?;
                if !output.status.success() {
                    return Err(fail(format!(
                        "{program} exited with {}: {}",
                        output.status,
                        String::from_utf8_lossy(&output.stderr).trim()
                    )));
                }
                let text = String::from_utf8(output.stdout).map_err(|e| fail(e.to_string()))?;
                Ok(text.lines().map(str::to_owned).collect())
            }
            AdapterKind::Http {
                url,
                token_env,
                timeout_s,
            } => {
                let mut req = ureq::post(url).timeout(Duration::from_secs(*timeout_s));
                if let Some(var) = token_env {
                    let token = std::env::var(var)
                        .map_err(|_| AdapterError::MissingToken(self.system.name.clone(), var.clone()))?;
                    req = req.set("Authorization", &format!("Bearer {token}"));
                }
                let body = serde_json::json!({
                    "source_lang": self.source_lang,
                    "target_lang": self.target_lang,
                    "texts": batch,
                });
                let resp: serde_json::Value = req
                    .send_json(body)
                    .map_err(|e| fail(e.to_string()))?
                    .into_json()
                    .map_err(|e| fail(format!("response is not JSON: {e}")))?;
                let list = resp.get("translations").unwrap_or(&resp);
                serde_json::from_value(list.clone()).map_err(|e| fail(format!("unexpected response shape: {e}")))
            }
        }
    }

    fn cache_path(&self, text: &str) -> Option<PathBuf> {
        let dir = self.cache_dir.as_ref()?;
        let mut h = Sha256::new();
        for part in [&self.system.fingerprint(), &self.source_lang, &self.target_lang, text] {
            h.update(part.as_bytes());
            h.update([0]);
        }
        let key = hex::encode(h.finalize());
        Some(dir.join(&key[..2]).join(&key))
    }

    fn cache_get(&self, text: &str) -> Result<Option<String>, AdapterError> {
        if matches!(self.system.kind, AdapterKind::Identity) {
            return Ok(None);
        }
        match self.cache_path(text) {
            Some(p) if p.exists() => Ok(Some(fs::read_to_string(p)?)),
            _ => Ok(None),
        }
    }

    fn cache_put(&self, text: &str, translation: &str) -> Result<(), AdapterError> {
        if matches!(self.system.kind, AdapterKind::Identity) {
            return Ok(());
        }
        if let Some(p) = self.cache_path(text) {
            fs::create_dir_all(p.parent().expect("cache entries live in a shard folder"))?;
            let tmp = p.with_extension("tmp");
            fs::write(&tmp, translation)?;
            fs::rename(tmp, p)?;
        }
        Ok(())
    }
}
