//! Train the GRU on a synthetic corpus where positives carry a marker token,
//! then report training accuracy and dev macro-F1.
//!
//!     cargo run --release --example train_synthetic -- [seed]

use std::sync::Arc;
use std::time::Instant;

use biaslens::corpus::{split_by_topic, BiasType, Partition};
use biaslens::eval::evaluate;
use biaslens::model::{labeled_tokens, train, Classifier, TrainConfig};
use biaslens::synthetic::{generate_corpus, generate_embeddings, SyntheticConfig};

fn main() -> anyhow::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);

    let syn = SyntheticConfig::default();
    let corpus = generate_corpus(&syn);
    let table = Arc::new(generate_embeddings(&syn)?);
    let split = split_by_topic(&corpus, seed, 0.10)?;
    let target = BiasType::PoliticalBias;
    let train_set = labeled_tokens(split.select(&corpus, Partition::Train)?, target)?;
    let dev_set = labeled_tokens(split.select(&corpus, Partition::Dev)?, target)?;

    let config = TrainConfig {
        seed,
        max_epochs: 50,
        ..TrainConfig::default()
    };
    let start = Instant::now();
    let (params, log) = train(&train_set, &dev_set, &table, &config)?;
    let clf = Classifier::new(params, table)?;

    let as_pairs = |set: &[biaslens::model::LabeledTokens]| -> Vec<(Vec<String>, bool)> {
        set.iter().map(|e| (e.tokens.clone(), e.label)).collect()
    };
    let (train_report, _) = evaluate(&clf, &as_pairs(&train_set))?;
    let (dev_report, _) = evaluate(&clf, &as_pairs(&dev_set))?;
    println!(
        "{} train / {} dev articles, best epoch {} of {} ({:.1?})",
        train_set.len(),
        dev_set.len(),
        log.best_epoch,
        log.epochs.len(),
        start.elapsed()
    );
    println!("train accuracy {:.4}", train_report.confusion.accuracy());
    println!("dev macro-F1   {:.4}", dev_report.macro_f1);
    Ok(())
}
