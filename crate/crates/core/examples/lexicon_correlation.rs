//! Correlate lexicon categories with sentence-level bias strength. The
//! synthetic positives carry a marker word, so a category holding it should
//! rank first.
//!
//!     cargo run --release --example lexicon_correlation

use std::sync::Arc;

use biaslens::analysis::{filter_correct, PreparedArticle};
use biaslens::corpus::{split_by_topic, BiasType, Partition};
use biaslens::lexicon::{correlate_categories, Lexicon};
use biaslens::model::{labeled_tokens, train, Classifier, TrainConfig};
use biaslens::synthetic::{generate_corpus, generate_embeddings, SyntheticConfig};

const LEXICON: &str = "\
marker: zorblax
ba_words: ba*
ko_words: ko*
never: qqq
";

fn main() -> anyhow::Result<()> {
    let syn = SyntheticConfig::default();
    let corpus = generate_corpus(&syn);
    let table = Arc::new(generate_embeddings(&syn)?);
    let split = split_by_topic(&corpus, 3, 0.10)?;
    let target = BiasType::PoliticalBias;
    let train_set = labeled_tokens(split.select(&corpus, Partition::Train)?, target)?;
    let dev_set = labeled_tokens(split.select(&corpus, Partition::Dev)?, target)?;
    let config = TrainConfig {
        seed: 3,
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

    let lexicon = Lexicon::parse(LEXICON, "inline")?;
    let outcome = correlate_categories(&clf, &correct, &lexicon, target)?;
    for r in &outcome.results {
        println!("{:<10} r = {:+.4}  (n = {})", r.category, r.r, r.n);
    }
    println!("omitted: {:?}", outcome.omitted);
    Ok(())
}
