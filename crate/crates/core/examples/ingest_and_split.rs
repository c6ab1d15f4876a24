//! Load the bundled sample articles, label them from portal ratings, scrub
//! portal mentions and assign whole topics to train/dev/test.
//!
//!     cargo run --example ingest_and_split

use std::path::Path;

use biaslens::corpus::{corpus_stats, load_corpus, scrub_corpus, split_by_topic, summarize_split, RatingsTable};

fn main() -> anyhow::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let ratings = RatingsTable::load(&data.join("ratings.csv"))?;
    let loaded = load_corpus(&data.join("articles.jsonl"), &data.join("ratings.csv"))?;
    for (portal, ids) in &loaded.dropped {
        println!("dropped {ids:?} (no rating for {portal:?})");
    }
    let mut articles = loaded.articles;
    scrub_corpus(&mut articles, &ratings);

    let stats = corpus_stats(&articles);
    println!("{} articles from {} portals on {} topics", stats.articles, stats.portals.len(), stats.topics.len());
    println!("first article after scrubbing:\n  {}\n", articles[0].text);

    let split = split_by_topic(&articles, 4, 0.10)?;
    for (topic, partition) in &split.topics {
        println!("{topic:<12} -> {partition}");
    }
    for s in summarize_split(&articles, &split)? {
        println!("{:<5} {:>2} articles, {:?}", s.partition.as_str(), s.articles, s.positive_percent);
    }
    Ok(())
}
