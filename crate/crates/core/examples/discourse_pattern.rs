//! Quarter-level bias-strength curves per class, as a plot-ready CSV.
//!
//!     cargo run --release --example discourse_pattern

use std::sync::Arc;

use biaslens::analysis::{filter_correct, quartile_pattern, NormalizationScope, PreparedArticle};
use biaslens::corpus::{split_by_topic, BiasType, Partition};
use biaslens::model::{labeled_tokens, train, Classifier, TrainConfig};
use biaslens::report::emit_pattern_table;
use biaslens::synthetic::{generate_corpus, generate_embeddings, SyntheticConfig};

fn main() -> anyhow::Result<()> {
    let syn = SyntheticConfig::default();
    let corpus = generate_corpus(&syn);
    let table = Arc::new(generate_embeddings(&syn)?);
    let split = split_by_topic(&corpus, 2, 0.10)?;
    let target = BiasType::PoliticalBias;
    let train_set = labeled_tokens(split.select(&corpus, Partition::Train)?, target)?;
    let dev_set = labeled_tokens(split.select(&corpus, Partition::Dev)?, target)?;
    let config = TrainConfig {
        seed: 2,
        max_epochs: 20,
        ..TrainConfig::default()
    };
    let (params, _) = train(&train_set, &dev_set, &table, &config)?;
    let clf = Classifier::new(params, table)?;

    let test: Vec<PreparedArticle> = split
        .select(&corpus, Partition::Test)?
        .into_iter()
        .map(|a| PreparedArticle::from_article(a, target))
        .collect::<Result<_, _>>()?;
    let correct: Vec<PreparedArticle> = filter_correct(&clf, &test)?.into_iter().map(|(a, _)| a).collect();
    println!("{} of {} test articles predicted correctly", correct.len(), test.len());

    for scope in [NormalizationScope::PerCurve, NormalizationScope::PerBiasType] {
        let patterns = quartile_pattern(&clf, &correct, target, scope)?;
        println!("\n{scope:?} normalization ({} skipped)", patterns.skipped);
        print!("{}", emit_pattern_table(&[patterns])?);
    }
    Ok(())
}
