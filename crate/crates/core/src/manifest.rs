//! Sample manifests: one JSON document naming the chain files of each class
//! and the search parameters.
//!
//! ```json
//! {
//!   "ap": ["h"],
//!   "positives": [{ "format": "json", "path": "pos_0.json" }],
//!   "negatives": [{ "format": "prism-explicit", "tra": "neg_0.tra", "lab": "neg_0.lab" }],
//!   "params": { "max_size": 4, "max_depth": 2, "delta": 0.05, "bool_limit": 10 }
//! }
//! ```
//!
//! Relative paths are resolved against the manifest's directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dtmc::{parse_json_dtmc, parse_prism_explicit, Dtmc, DtmcError, Sample, SampleError};
use crate::learner::{Config, DEFAULT_BOOL_LIMIT, DEFAULT_DELTA, DEFAULT_MAX_DEPTH};

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{}: {source}", path.display())]
    Chain { path: PathBuf, source: DtmcError },
    #[error("{}: {msg}", path.display())]
    Invalid { path: PathBuf, msg: String },
    #[error(transparent)]
    Sample(#[from] SampleError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ChainFile {
    Json { path: String },
    PrismExplicit { tra: String, lab: String },
}

impl ChainFile {
    pub fn load(&self, base: &Path) -> Result<Dtmc, ManifestError> {
        match self {
            ChainFile::Json { path } => {
                let path = base.join(path);
                let text = read(&path)?;
                parse_json_dtmc(&text).map_err(|source| ManifestError::Chain { path, source })
            }
            ChainFile::PrismExplicit { tra, lab } => {
                let (tra, lab) = (base.join(tra), base.join(lab));
                let (tra_text, lab_text) = (read(&tra)?, read(&lab)?);
                parse_prism_explicit(&tra_text, &lab_text).map_err(|source| {
                    // point at the file the error came from
                    let path = match &source {
                        DtmcError::Malformed { what: "labels", .. }
                        | DtmcError::InitCount { .. } => lab,
                        _ => tra,
                    };
                    ManifestError::Chain { path, source }
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_size: Option<usize>,
    #[serde(default = "default_max_depth")]
    pub max_depth: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_bool_limit")]
    pub bool_limit: usize,
}

fn default_max_depth() -> usize {
    DEFAULT_MAX_DEPTH
}

fn default_delta() -> f64 {
    DEFAULT_DELTA
}

fn default_bool_limit() -> usize {
    DEFAULT_BOOL_LIMIT
}

impl Default for Params {
    fn default() -> Self {
        Params {
            max_size: None,
            max_depth: DEFAULT_MAX_DEPTH,
            delta: DEFAULT_DELTA,
            bool_limit: DEFAULT_BOOL_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleManifest {
    /// Proposition universe; defaults to every proposition of every chain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ap: Option<Vec<String>>,
    pub positives: Vec<ChainFile>,
    pub negatives: Vec<ChainFile>,
    #[serde(default)]
    pub params: Params,
    /// Formula the sample was generated to satisfy. Informational only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planted: Option<String>,
}

/// A manifest with its chains loaded.
#[derive(Debug, Clone)]
pub struct LoadedSample {
    pub sample: Sample,
    pub params: Params,
}

impl LoadedSample {
    /// Search configuration from the manifest parameters. `max_size` must
    /// come from the manifest or from `override_size`.
    pub fn config(&self, override_size: Option<usize>) -> Option<Config> {
        let k = override_size.or(self.params.max_size)?;
        Some(Config {
            max_depth: self.params.max_depth,
            delta: self.params.delta,
            bool_limit: self.params.bool_limit,
            ..Config::new(k)
        })
    }
}

fn read(path: &Path) -> Result<String, ManifestError> {
    fs::read_to_string(path).map_err(|source| ManifestError::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl SampleManifest {
    pub fn parse(text: &str, path: &Path) -> Result<Self, ManifestError> {
        let m: SampleManifest =
            serde_json::from_str(text).map_err(|source| ManifestError::Json {
                path: path.to_path_buf(),
                source,
            })?;
        m.validate(path)?;
        Ok(m)
    }

    fn validate(&self, path: &Path) -> Result<(), ManifestError> {
        let invalid = |msg: &str| {
            Err(ManifestError::Invalid {
                path: path.to_path_buf(),
                msg: msg.to_string(),
            })
        };
        let p = &self.params;
        if self.positives.is_empty() {
            return invalid("at least one positive chain is required");
        }
        if self.negatives.is_empty() {
            return invalid("at least one negative chain is required");
        }
        if p.max_size == Some(0) {
            return invalid("max_size must be at least 1");
        }
        if !(p.delta > 0.0 && p.delta < 0.1) {
            return invalid("delta must lie in (0, 0.1)");
        }
        if p.bool_limit < 1 {
            return invalid("bool_limit must be at least 1");
        }
        Ok(())
    }

    /// Read and validate a manifest file.
    pub fn read(path: &Path) -> Result<Self, ManifestError> {
        Self::parse(&read(path)?, path)
    }

    /// Load every chain and assemble the sample.
    pub fn load(&self, base: &Path) -> Result<LoadedSample, ManifestError> {
        let load_all = |files: &[ChainFile]| -> Result<Vec<Dtmc>, ManifestError> {
            files.iter().map(|f| f.load(base)).collect()
        };
        let positives = load_all(&self.positives)?;
        let negatives = load_all(&self.negatives)?;
        let ap = match &self.ap {
            Some(ap) => ap.clone(),
            None => {
                let mut ap: Vec<String> = positives
                    .iter()
                    .chain(&negatives)
                    .flat_map(|m| m.ap().iter().cloned())
                    .collect();
                ap.sort();
                ap.dedup();
                ap
            }
        };
        Ok(LoadedSample {
            sample: Sample::new(ap, positives, negatives)?,
            params: self.params.clone(),
        })
    }
}

/// Read a manifest and load its sample; relative paths resolve against the
/// manifest's directory.
pub fn load_sample(path: &Path) -> Result<LoadedSample, ManifestError> {
    let manifest = SampleManifest::read(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    manifest.load(base)
}

/// Load one chain: `.json`, or a `.tra` file with a sibling `.lab` file.
pub fn load_chain(path: &Path) -> Result<Dtmc, ManifestError> {
    let is_tra = path.extension().is_some_and(|e| e == "tra");
    let file = if is_tra {
        ChainFile::PrismExplicit {
            tra: path.to_string_lossy().into_owned(),
            lab: path.with_extension("lab").to_string_lossy().into_owned(),
        }
    } else {
        ChainFile::Json {
            path: path.to_string_lossy().into_owned(),
        }
    };
    file.load(Path::new(""))
}
