use std::path::Path;

use serde::{Deserialize, Serialize};

use super::params::GruParams;
use super::train::{EpochLog, TrainConfig, TrainingLog};
use crate::corpus::BiasType;
use crate::error::{Error, Result};

pub const CHECKPOINT_FORMAT: &str = "biaslens-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

/// The embedding table a checkpoint was trained against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingRef {
    pub path: Option<String>,
    pub dimension: usize,
}

/// Trained parameters plus everything needed to reproduce or reuse them.
/// Stored as pretty-printed JSON; floats round-trip exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub target: BiasType,
    pub embeddings: EmbeddingRef,
    pub config: TrainConfig,
    pub best_epoch: usize,
    pub history: Vec<EpochLog>,
    pub params: GruParams,
}

impl Checkpoint {
    pub fn new(target: BiasType, embeddings: EmbeddingRef, config: TrainConfig, log: TrainingLog, params: GruParams) -> Self {
        Self {
            format: CHECKPOINT_FORMAT.to_string(),
            version: CHECKPOINT_VERSION,
            target,
            embeddings,
            config,
            best_epoch: log.best_epoch,
            history: log.epochs,
            params,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ckpt: Checkpoint = serde_json::from_str(text)?;
        if ckpt.format != CHECKPOINT_FORMAT {
            return Err(Error::Checkpoint(format!("unexpected format tag {:?}", ckpt.format)));
        }
        if ckpt.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!("unsupported version {}", ckpt.version)));
        }
        ckpt.params.validate()?;
        if ckpt.params.input_dim != ckpt.embeddings.dimension {
            return Err(Error::Checkpoint(format!(
                "parameters expect {}-d inputs but the embedding reference is {}-d",
                ckpt.params.input_dim, ckpt.embeddings.dimension
            )));
        }
        Ok(ckpt)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
