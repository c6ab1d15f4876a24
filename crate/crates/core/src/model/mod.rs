//! GRU sequence classifier: forward pass, backpropagation through time,
//! Adam, early-stopped training and checkpoints.

mod adam;
mod checkpoint;
mod classifier;
mod gru;
mod params;
mod train;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use checkpoint::{Checkpoint, EmbeddingRef, CHECKPOINT_FORMAT, CHECKPOINT_VERSION};
pub use classifier::{predict, Classifier, Predictor};
pub use gru::{final_state, forward, gru_cell, loss, loss_and_grads, Prediction, Sequence};
pub use params::{GruParams, Matrix, HIDDEN_SIZE, OUTPUT_CLASSES, TENSOR_NAMES};
pub use train::{labeled_tokens, train, EpochLog, LabeledTokens, TrainConfig, TrainingLog};
