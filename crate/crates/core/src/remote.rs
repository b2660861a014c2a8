//! Language-model transliteration over an OpenAI-style chat endpoint, with
//! a JSONL log that can be replayed offline.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Condvar, Mutex};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};

pub const LATIN_PROMPT: &str = include_str!("../data/prompts/latin.txt");
pub const SEMANTIC_PROMPT: &str = include_str!("../data/prompts/semantic.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TranslitMode {
    Latin,
    Semantic,
}

impl TranslitMode {
    pub fn prompt(self) -> &'static str {
        match self {
            TranslitMode::Latin => LATIN_PROMPT,
            TranslitMode::Semantic => SEMANTIC_PROMPT,
        }
    }
}

/// Something that rewrites a whole sentence for a transliteration mode.
pub trait RemoteSource: Send + Sync {
    fn query(&self, mode: TranslitMode, input: &str) -> Result<String>;
}

/// One logged exchange.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exchange {
    pub mode: TranslitMode,
    pub input: String,
    pub output: String,
}

#[derive(Debug, Clone)]
pub struct HttpConfig {
    /// Base URL; `/chat/completions` is appended.
    pub base_url: String,
    pub model: String,
    pub api_key: Option<String>,
    pub max_in_flight: usize,
    pub timeout: Duration,
    pub log_path: Option<PathBuf>,
}

/// Counting semaphore bounding concurrent requests.
struct Gate {
    free: Mutex<usize>,
    cv: Condvar,
}

impl Gate {
    fn new(n: usize) -> Self {
        Self { free: Mutex::new(n.max(1)), cv: Condvar::new() }
    }

    fn run<T>(&self, f: impl FnOnce() -> T) -> T {
        {
            let mut free = self.free.lock().expect("gate lock");
            while *free == 0 {
                free = self.cv.wait(free).expect("gate lock");
            }
            *free -= 1;
        }
        let out = f();
        *self.free.lock().expect("gate lock") += 1;
        self.cv.notify_one();
        out
    }
}

pub struct HttpSource {
    cfg: HttpConfig,
    agent: ureq::Agent,
    gate: Gate,
    log: Option<Mutex<File>>,
}

impl HttpSource {
    pub fn new(cfg: HttpConfig) -> Result<Self> {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(cfg.timeout))
            .build()
            .into();
        let log = match &cfg.log_path {
            Some(p) => Some(Mutex::new(OpenOptions::new().create(true).append(true).open(p)?)),
            None => None,
        };
        Ok(Self { gate: Gate::new(cfg.max_in_flight), cfg, agent, log })
    }

    fn request(&self, mode: TranslitMode, input: &str) -> Result<String> {
        let url = format!("{}/chat/completions", self.cfg.base_url.trim_end_matches('/'));
        let body = json!({
            "model": self.cfg.model,
            "temperature": 0,
            "messages": [
                {"role": "system", "content": mode.prompt()},
                {"role": "user", "content": input},
            ],
        });
        let mut req = self.agent.post(&url);
        if let Some(key) = &self.cfg.api_key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = req
            .send_json(&body)
            .map_err(|e| Error::BackendUnavailable(e.to_string()))?;
        let v: serde_json::Value = resp
            .body_mut()
            .read_json()
            .map_err(|e| Error::MalformedRemoteResponse(e.to_string()))?;
        let content = v
            .pointer("/choices/0/message/content")
            .and_then(|c| c.as_str())
            .ok_or_else(|| Error::MalformedRemoteResponse("missing choices[0].message.content".into()))?;
        parse_content(content)
    }
}

impl RemoteSource for HttpSource {
    fn query(&self, mode: TranslitMode, input: &str) -> Result<String> {
        let output = self.gate.run(|| self.request(mode, input))?;
        if let Some(log) = &self.log {
            let line = serde_json::to_string(&Exchange {
                mode,
                input: input.to_string(),
                output: output.clone(),
            })?;
            let mut f = log.lock().expect("log lock");
            writeln!(f, "{line}")?;
        }
        Ok(output)
    }
}

/// Extracts `output` from the first JSON object in the model's reply.
/// Code fences and trailing objects are tolerated.
pub fn parse_content(content: &str) -> Result<String> {
    #[derive(Deserialize)]
    struct Reply {
        #[allow(dead_code)]
        input: String,
        output: String,
    }
    let start = content
        .find('{')
        .ok_or_else(|| Error::MalformedRemoteResponse(format!("no JSON object in {content:?}")))?;
    let mut stream = serde_json::Deserializer::from_str(&content[start..]).into_iter::<Reply>();
    match stream.next() {
        Some(Ok(r)) => Ok(r.output),
        Some(Err(e)) => Err(Error::MalformedRemoteResponse(e.to_string())),
        None => Err(Error::MalformedRemoteResponse("empty reply".into())),
    }
}

/// Answers from a log written by [`HttpSource`].
#[derive(Debug, Default)]
pub struct ReplaySource {
    entries: HashMap<(TranslitMode, String), String>,
}

impl ReplaySource {
    pub fn load(path: &Path) -> Result<Self> {
        let mut entries = HashMap::new();
        for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let e: Exchange = serde_json::from_str(&line).map_err(|err| Error::Parse {
                line: i + 1,
                message: err.to_string(),
            })?;
            entries.insert((e.mode, e.input), e.output);
        }
        Ok(Self { entries })
    }

    pub fn from_exchanges(exchanges: impl IntoIterator<Item = Exchange>) -> Self {
        Self {
            entries: exchanges
                .into_iter()
                .map(|e| ((e.mode, e.input), e.output))
                .collect(),
        }
    }
}

impl RemoteSource for ReplaySource {
    fn query(&self, mode: TranslitMode, input: &str) -> Result<String> {
        self.entries
            .get(&(mode, input.to_string()))
            .cloned()
            .ok_or_else(|| Error::BackendUnavailable(format!("no replay entry for {input:?}")))
    }
}
