//! Political-bias, unfairness and non-objectivity classification of news
//! articles with a from-scratch GRU, plus segment-ablation attribution at
//! sentence, paragraph and discourse level and word-category correlation.

pub mod analysis;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod lexicon;
pub mod model;
pub mod report;
pub mod synthetic;
pub mod text;

pub use error::{Error, Result};
