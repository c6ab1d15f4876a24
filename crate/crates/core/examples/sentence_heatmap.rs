//! Train on the synthetic corpus, ablate every sentence and paragraph of a
//! held-out article and write the two heatmaps as static HTML.
//!
//!     cargo run --release --example sentence_heatmap -- [out_dir]

use std::path::PathBuf;
use std::sync::Arc;

use biaslens::analysis::{bias_strength, Granularity, PreparedArticle};
use biaslens::corpus::{split_by_topic, BiasType, Partition};
use biaslens::model::{labeled_tokens, train, Classifier, TrainConfig};
use biaslens::report::render_heatmap;
use biaslens::synthetic::{generate_corpus, generate_embeddings, marked_articles, SyntheticConfig};

fn main() -> anyhow::Result<()> {
    let out_dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let syn = SyntheticConfig {
        max_sentences: 9,
        ..SyntheticConfig::default()
    };
    let corpus = generate_corpus(&syn);
    let table = Arc::new(generate_embeddings(&syn)?);
    let split = split_by_topic(&corpus, 1, 0.10)?;
    let target = BiasType::PoliticalBias;
    let train_set = labeled_tokens(split.select(&corpus, Partition::Train)?, target)?;
    let dev_set = labeled_tokens(split.select(&corpus, Partition::Dev)?, target)?;
    let config = TrainConfig {
        seed: 1,
        max_epochs: 20,
        ..TrainConfig::default()
    };
    let (params, _) = train(&train_set, &dev_set, &table, &config)?;
    let clf = Classifier::new(params, table)?;

    let held = marked_articles(&syn, 1, 99).remove(0);
    let article = PreparedArticle::from_article(&held.article, target)?;
    for granularity in [Granularity::Sentence, Granularity::Paragraph] {
        let report = bias_strength(&clf, &article, granularity)?;
        println!("{granularity}: p_art {:.4}", report.p_art);
        for s in &report.segments {
            println!("  segment {} (sentences {:?}): strength {:+.4}", s.index, s.sentences, s.strength);
        }
        let path = out_dir.join(format!("heatmap_{granularity}.html"));
        std::fs::write(&path, render_heatmap(&report, &held.article.text)?)?;
        println!("  wrote {}", path.display());
    }
    println!("marker was planted in sentence {}", held.marker_sentence);
    Ok(())
}
