//! TOML configuration and construction of an [`Obfuscator`] from it.
//!
//! ```toml
//! seed = 42
//! levels = ["easy", "normal", "hard"]
//! jobs = 4
//! max_length_ratio = 3.0
//! symbol_pool = ["°♡", "《 》", "≥ㅅ≤"]
//! dict_dir = "my-dicts"
//! with_provenance = false
//!
//! [rates]
//! 15 = 0.4
//!
//! [translit]
//! backend = "remote"            # offline | remote | replay
//! base_url = "https://api.openai.com/v1"
//! model = "gpt-4o"
//! api_key_env = "OPENAI_API_KEY"
//! log_path = "exchanges.jsonl"  # remote answers are appended here
//! replay_path = "exchanges.jsonl"
//! max_in_flight = 4
//! timeout_secs = 60
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::choose::Rate;
use crate::dict::Dictionaries;
use crate::engine::{Level, Obfuscator, DEFAULT_MAX_LENGTH_RATIO};
use crate::error::{Error, Result};
use crate::remote::{HttpConfig, HttpSource, ReplaySource};
use crate::rules::pragmatic::SymbolPool;
use crate::rules::transliteration::Backend;
use crate::rules::{default_rules, RULE_COUNT};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    #[default]
    Offline,
    Remote,
    Replay,
}

impl std::str::FromStr for BackendKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "offline" => Ok(Self::Offline),
            "remote" => Ok(Self::Remote),
            "replay" => Ok(Self::Replay),
            other => Err(Error::InvalidArgument(format!("unknown backend `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TranslitConfig {
    pub backend: BackendKind,
    pub base_url: String,
    pub model: String,
    pub api_key_env: Option<String>,
    pub log_path: Option<PathBuf>,
    pub replay_path: Option<PathBuf>,
    pub max_in_flight: usize,
    pub timeout_secs: u64,
}

impl Default for TranslitConfig {
    fn default() -> Self {
        Self {
            backend: BackendKind::Offline,
            base_url: "https://api.openai.com/v1".into(),
            model: "gpt-4o".into(),
            api_key_env: Some("OPENAI_API_KEY".into()),
            log_path: None,
            replay_path: None,
            max_in_flight: 4,
            timeout_secs: 60,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub seed: u64,
    pub levels: Vec<Level>,
    pub jobs: usize,
    pub max_length_ratio: f64,
    pub symbol_pool: SymbolPool,
    pub dict_dir: Option<PathBuf>,
    pub with_provenance: bool,
    /// Rate overrides by rule id.
    pub rates: BTreeMap<String, Rate>,
    pub translit: TranslitConfig,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 0,
            levels: Level::ALL.to_vec(),
            jobs: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            max_length_ratio: DEFAULT_MAX_LENGTH_RATIO,
            symbol_pool: SymbolPool::default(),
            dict_dir: None,
            with_provenance: false,
            rates: BTreeMap::new(),
            translit: TranslitConfig::default(),
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        let c: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        for key in self.rates.keys() {
            self.rate_id(key)?;
        }
        if self.levels.is_empty() {
            return Err(Error::Config("no levels selected".into()));
        }
        if self.max_length_ratio.is_nan() || self.max_length_ratio <= 0.0 {
            return Err(Error::Config("max_length_ratio must be positive".into()));
        }
        Ok(())
    }

    fn rate_id(&self, key: &str) -> Result<u8> {
        key.parse::<u8>()
            .ok()
            .filter(|id| (1..=RULE_COUNT).contains(id))
            .ok_or_else(|| Error::Config(format!("unknown rule id `{key}` in [rates]")))
    }

    /// Parses `id=rate`.
    pub fn set_rate_override(&mut self, spec: &str) -> Result<()> {
        let (id, rate) = spec
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected id=rate, got `{spec}`")))?;
        let rate: f64 = rate
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad rate in `{spec}`")))?;
        let id = id.trim().to_string();
        self.rate_id(&id).map_err(|_| Error::InvalidArgument(format!("unknown rule id in `{spec}`")))?;
        self.rates.insert(id, Rate::new(rate)?);
        Ok(())
    }

    /// SHA-256 of the settings that affect generated output.
    pub fn digest(&self) -> String {
        let mut c = self.clone();
        // Parallelism never changes output.
        c.jobs = 0;
        let bytes = serde_json::to_vec(&c).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn backend(&self) -> Result<Backend> {
        let t = &self.translit;
        match t.backend {
            BackendKind::Offline => Ok(Backend::Offline),
            BackendKind::Replay => {
                let path = t
                    .replay_path
                    .as_ref()
                    .ok_or_else(|| Error::Config("replay backend needs translit.replay_path".into()))?;
                Ok(Backend::Remote(Arc::new(ReplaySource::load(path)?)))
            }
            BackendKind::Remote => {
                let api_key = match &t.api_key_env {
                    Some(var) => Some(std::env::var(var).map_err(|_| {
                        Error::Config(format!("environment variable {var} is not set"))
                    })?),
                    None => None,
                };
                let src = HttpSource::new(HttpConfig {
                    base_url: t.base_url.clone(),
                    model: t.model.clone(),
                    api_key,
                    max_in_flight: t.max_in_flight,
                    timeout: Duration::from_secs(t.timeout_secs),
                    log_path: t.log_path.clone(),
                })?;
                Ok(Backend::Remote(Arc::new(src)))
            }
        }
    }

    pub fn obfuscator(&self) -> Result<Obfuscator> {
        let dicts = match &self.dict_dir {
            Some(d) => Dictionaries::load_dir(d)?,
            None => Dictionaries::embedded(),
        };
        let mut rules = default_rules();
        for (key, rate) in &self.rates {
            let id = self.rate_id(key)?;
            rules[id as usize - 1].tau = *rate;
        }
        Ok(Obfuscator {
            dicts,
            backend: self.backend()?,
            pool: self.symbol_pool.clone(),
            rules,
            max_length_ratio: self.max_length_ratio,
        })
    }
}
