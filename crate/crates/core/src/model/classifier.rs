use std::sync::Arc;

use super::gru::{forward, Prediction};
use super::params::GruParams;
use crate::error::{Error, Result};
use crate::text::{truncate, EmbeddingTable, MAX_SEQUENCE_LEN};

/// Anything that maps a token sequence to a two-way prediction.
pub trait Predictor: Sync {
    fn predict_tokens(&self, tokens: &[String]) -> Result<Prediction>;
}

/// Trained parameters bound to the embedding table they were trained with.
#[derive(Clone, Debug)]
pub struct Classifier {
    params: GruParams,
    table: Arc<EmbeddingTable>,
    max_len: usize,
}

impl Classifier {
    pub fn new(params: GruParams, table: Arc<EmbeddingTable>) -> Result<Self> {
        params.validate()?;
        if params.input_dim != table.dimension() {
            return Err(Error::Shape(format!(
                "model expects {}-d inputs, embedding table is {}-d",
                params.input_dim,
                table.dimension()
            )));
        }
        Ok(Self {
            params,
            table,
            max_len: MAX_SEQUENCE_LEN,
        })
    }

    pub fn with_max_len(mut self, max_len: usize) -> Self {
        self.max_len = max_len;
        self
    }

    pub fn params(&self) -> &GruParams {
        &self.params
    }

    pub fn table(&self) -> &EmbeddingTable {
        &self.table
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }
}

impl Predictor for Classifier {
    fn predict_tokens(&self, tokens: &[String]) -> Result<Prediction> {
        let tokens = truncate(tokens, self.max_len);
        forward(&self.table.embed(tokens), &self.params)
    }
}

/// Predict with the default sequence cap.
pub fn predict<S: AsRef<str>>(tokens: &[S], table: &EmbeddingTable, params: &GruParams) -> Result<Prediction> {
    let tokens = truncate(tokens, MAX_SEQUENCE_LEN);
    forward(&table.embed(tokens), params)
}
