//! Article ingestion, portal-derived labels, portal scrubbing and
//! topic-disjoint dataset splits.

mod ingest;
mod labels;
mod ratings;
mod scrub;
mod split;

pub use ingest::{
    corpus_stats, join_ratings, load_corpus, read_corpus, read_raw_articles, save_corpus,
    scrub_article, scrub_corpus, write_corpus, Article, CorpusStats, LoadReport, RawArticle,
};
pub use labels::{derive_labels, BiasLabels, BiasType, FairnessPlacement, PoliticalPlacement};
pub use ratings::{canonical_name, PlacementNormalization, PortalRating, RatingsTable};
pub use scrub::{scrub_portal_mentions, PortalScrubber, ScrubLog, PORTAL_TOKEN};
pub use split::{split_by_topic, summarize_split, Partition, PartitionSummary, SplitAssignment};
