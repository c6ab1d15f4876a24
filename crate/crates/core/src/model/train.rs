use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::adam::{adam_step, AdamConfig, AdamState};
use super::gru::{forward, loss_and_grads, Sequence};
use super::params::{GruParams, HIDDEN_SIZE};
use crate::corpus::{Article, BiasType};
use crate::error::{Error, Result};
use crate::eval::EvalReport;
use crate::text::{truncate, EmbeddingTable, TokenizedArticle, MAX_SEQUENCE_LEN};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub seed: u64,
    pub batch_size: usize,
    pub max_epochs: usize,
    /// Consecutive non-improving epochs tolerated before stopping.
    pub patience: usize,
    pub hidden: usize,
    /// Half-width of the uniform initialization interval.
    pub init_scale: f64,
    pub max_len: usize,
    pub adam: AdamConfig,
    /// Optional global gradient-norm clip; off by default.
    #[serde(default)]
    pub clip_norm: Option<f64>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            batch_size: 16,
            max_epochs: 100,
            patience: 3,
            hidden: HIDDEN_SIZE,
            init_scale: 0.08,
            max_len: MAX_SEQUENCE_LEN,
            adam: AdamConfig::default(),
            clip_norm: None,
        }
    }
}

/// Tokens of one article with its binary target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTokens {
    pub id: String,
    pub tokens: Vec<String>,
    pub label: bool,
}

impl AsRef<[String]> for LabeledTokens {
    fn as_ref(&self) -> &[String] {
        &self.tokens
    }
}

/// Tokenize articles for one target. The same path serves all three
/// classifiers; only `bias_type` changes.
pub fn labeled_tokens<'a, I>(articles: I, bias_type: BiasType) -> Result<Vec<LabeledTokens>>
where
    I: IntoIterator<Item = &'a Article>,
{
    articles
        .into_iter()
        .map(|a| {
            let tokenized = TokenizedArticle::from_text(&a.text)?;
            Ok(LabeledTokens {
                id: a.id.clone(),
                tokens: tokenized.flat_tokens(),
                label: a.labels.get(bias_type),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochLog {
    pub epoch: usize,
    pub train_loss: f64,
    pub dev_loss: f64,
    pub dev_macro_f1: f64,
    pub dev_accuracy: f64,
    pub improved: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainingLog {
    pub epochs: Vec<EpochLog>,
    /// 1-based epoch whose parameters were returned.
    pub best_epoch: usize,
    pub stopped_early: bool,
}

fn sequence<'a>(ex: &'a LabeledTokens, table: &'a EmbeddingTable, max_len: usize) -> Result<Sequence<'a>> {
    let tokens = truncate(&ex.tokens, max_len);
    if tokens.is_empty() {
        return Err(Error::Invalid(format!("article {:?} has no tokens", ex.id)));
    }
    Ok(Sequence {
        id: &ex.id,
        inputs: table.embed(tokens),
        label: usize::from(ex.label),
    })
}

/// Dev loss, macro-F1 and accuracy.
fn dev_metrics(
    dev: &[LabeledTokens],
    table: &EmbeddingTable,
    params: &GruParams,
    max_len: usize,
) -> Result<(f64, EvalReport)> {
    let preds: Vec<(f64, bool)> = dev
        .par_iter()
        .map(|ex| {
            let seq = sequence(ex, table, max_len)?;
            let p = forward(&seq.inputs, params)?;
            let prob = p.probabilities[seq.label].max(f64::MIN_POSITIVE);
            Ok((-prob.ln(), p.label == 1))
        })
        .collect::<Result<_>>()?;
    let loss = preds.iter().map(|(l, _)| l).sum::<f64>() / dev.len() as f64;
    let truth: Vec<bool> = dev.iter().map(|e| e.label).collect();
    let predicted: Vec<bool> = preds.iter().map(|(_, p)| *p).collect();
    Ok((loss, EvalReport::from_labels(&truth, &predicted)?))
}

/// Train a GRU classifier with Adam and early stopping on dev macro-F1.
///
/// An epoch improves when dev macro-F1 rises, or stays equal while dev loss
/// falls. Training stops once `patience` consecutive epochs fail to improve
/// (the first non-improving epoch when `patience` is 0) or after
/// `max_epochs`. The best epoch's parameters are returned.
pub fn train(
    train_set: &[LabeledTokens],
    dev_set: &[LabeledTokens],
    table: &EmbeddingTable,
    config: &TrainConfig,
) -> Result<(GruParams, TrainingLog)> {
    if train_set.is_empty() || dev_set.is_empty() {
        return Err(Error::EmptyInput("training and dev sets must be non-empty"));
    }
    if config.batch_size == 0 || config.max_epochs == 0 || config.hidden == 0 {
        return Err(Error::Invalid("batch_size, max_epochs and hidden must be positive".into()));
    }
    let dev_pos = dev_set.iter().filter(|e| e.label).count();
    if dev_pos == 0 || dev_pos == dev_set.len() {
        log::warn!("dev set holds a single class; macro-F1 early stopping is degenerate");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut params = GruParams::uniform(table.dimension(), config.hidden, config.init_scale, &mut rng);
    let mut adam = AdamState::new(&params, &config.adam);

    let mut log = TrainingLog::default();
    let mut best: Option<(f64, f64, GruParams)> = None;
    let mut waited = 0usize;
    let mut order: Vec<usize> = (0..train_set.len()).collect();

    for epoch in 1..=config.max_epochs {
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        for chunk in order.chunks(config.batch_size) {
            let batch: Vec<Sequence<'_>> = chunk
                .iter()
                .map(|&i| sequence(&train_set[i], table, config.max_len))
                .collect::<Result<_>>()?;
            let (loss, mut grads) = loss_and_grads(&batch, &params)?;
            if let Some(max_norm) = config.clip_norm {
                let norm = grads.l2_norm();
                if norm > max_norm {
                    grads.scale(max_norm / norm);
                }
            }
            adam_step(&mut params, &grads, &mut adam, config.adam.learning_rate)?;
            loss_sum += loss * chunk.len() as f64;
        }
        let train_loss = loss_sum / train_set.len() as f64;
        let (dev_loss, dev) = dev_metrics(dev_set, table, &params, config.max_len)?;

        let improved = match &best {
            None => true,
            Some((f1, loss, _)) => dev.macro_f1 > *f1 || (dev.macro_f1 == *f1 && dev_loss < *loss),
        };
        log::info!(
            "epoch {epoch}: train loss {train_loss:.5}, dev loss {dev_loss:.5}, dev macro-F1 {:.4}{}",
            dev.macro_f1,
            if improved { " *" } else { "" }
        );
        log.epochs.push(EpochLog {
            epoch,
            train_loss,
            dev_loss,
            dev_macro_f1: dev.macro_f1,
            dev_accuracy: dev.confusion.accuracy(),
            improved,
        });
        if improved {
            best = Some((dev.macro_f1, dev_loss, params.clone()));
            log.best_epoch = epoch;
            waited = 0;
        } else {
            waited += 1;
            if waited >= config.patience {
                log.stopped_early = true;
                break;
            }
        }
    }
    let (_, _, best_params) = best.expect("at least one epoch ran");
    Ok((best_params, log))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> (EmbeddingTable, Vec<LabeledTokens>) {
        let table = EmbeddingTable::from_entries(
            3,
            [("a", vec![1.0, 0.0, 0.0]), ("b", vec![0.0, 1.0, 0.0]), ("m", vec![0.0, 0.0, 1.0])],
        )
        .unwrap();
        let data = (0..16)
            .map(|i| {
                let pos = i % 2 == 0;
                let mut tokens = vec!["a".to_string(), "b".to_string(), "a".to_string()];
                if pos {
                    tokens.insert(1, "m".to_string());
                }
                LabeledTokens {
                    id: format!("t{i}"),
                    tokens,
                    label: pos,
                }
            })
            .collect();
        (table, data)
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let (table, data) = toy();
        let cfg = TrainConfig {
            seed: 5,
            hidden: 4,
            batch_size: 4,
            max_epochs: 3,
            ..TrainConfig::default()
        };
        let (a, la) = train(&data, &data, &table, &cfg).unwrap();
        let (b, lb) = train(&data, &data, &table, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(la, lb);
        let (c, _) = train(&data, &data, &table, &TrainConfig { seed: 6, ..cfg }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn patience_zero_stops_at_first_non_improvement() {
        let (table, data) = toy();
        let cfg = TrainConfig {
            seed: 1,
            hidden: 4,
            batch_size: 4,
            max_epochs: 200,
            patience: 0,
            adam: AdamConfig {
                learning_rate: 0.5,
                ..AdamConfig::default()
            },
            ..TrainConfig::default()
        };
        let (_, log) = train(&data, &data, &table, &cfg).unwrap();
        let first_bad = log.epochs.iter().position(|e| !e.improved).expect("some epoch fails to improve");
        assert_eq!(log.epochs.len(), first_bad + 1);
        assert!(log.stopped_early);
        assert_eq!(log.best_epoch, first_bad);
    }

    #[test]
    fn rejects_empty_and_tokenless_input() {
        let (table, data) = toy();
        let cfg = TrainConfig::default();
        assert!(train(&[], &data, &table, &cfg).is_err());
        let empty = vec![LabeledTokens {
            id: "e".into(),
            tokens: vec![],
            label: true,
        }];
        let err = train(&empty, &data, &table, &TrainConfig { hidden: 2, ..cfg }).unwrap_err();
        assert!(err.to_string().contains("\"e\""), "{err}");
    }
}
