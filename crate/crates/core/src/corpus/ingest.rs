use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::labels::BiasLabels;
use super::ratings::{canonical_name, RatingsTable};
use super::scrub::{PortalScrubber, ScrubLog};
use crate::error::{Error, Result};

/// One line of the raw articles dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawArticle {
    pub id: String,
    pub portal: String,
    pub topic: String,
    pub text: String,
}

/// A labeled article as stored in `corpus.jsonl`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Article {
    pub id: String,
    #[serde(rename = "portal")]
    pub portal_name: String,
    pub topic: String,
    pub text: String,
    pub labels: BiasLabels,
    #[serde(default)]
    pub scrubbed: bool,
}

/// Result of joining articles with ratings.
#[derive(Clone, Debug, Default)]
pub struct LoadReport {
    pub articles: Vec<Article>,
    /// Article ids dropped because their portal has no rating, keyed by portal.
    pub dropped: BTreeMap<String, Vec<String>>,
}

impl LoadReport {
    pub fn dropped_count(&self) -> usize {
        self.dropped.values().map(Vec::len).sum()
    }
}

fn read_jsonl<T, R>(reader: R, file: &str) -> Result<Vec<T>>
where
    T: for<'de> Deserialize<'de>,
    R: BufRead,
{
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(file, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| Error::parse(file, idx + 1, e.to_string()))?;
        out.push(record);
    }
    Ok(out)
}

pub fn read_raw_articles<R: BufRead>(reader: R, file: &str) -> Result<Vec<RawArticle>> {
    let records: Vec<RawArticle> = read_jsonl(reader, file)?;
    let mut seen = HashSet::new();
    for (idx, r) in records.iter().enumerate() {
        if !seen.insert(r.id.as_str()) {
            return Err(Error::Invalid(format!("{file}: duplicate article id {:?} (record {})", r.id, idx + 1)));
        }
    }
    Ok(records)
}

/// Join raw articles with portal ratings and attach derived labels.
/// Articles whose portal is unrated are dropped and reported, not errors.
pub fn join_ratings(raw: Vec<RawArticle>, ratings: &RatingsTable) -> Result<LoadReport> {
    let mut report = LoadReport::default();
    for r in raw {
        match ratings.get(&r.portal) {
            Some(rating) => report.articles.push(Article {
                id: r.id,
                portal_name: rating.portal_name.clone(),
                topic: r.topic,
                text: r.text,
                labels: rating.labels(),
                scrubbed: false,
            }),
            None => report
                .dropped
                .entry(canonical_name(&r.portal))
                .or_default()
                .push(r.id),
        }
    }
    if report.articles.is_empty() {
        return Err(Error::EmptyInput("no article matched a rated portal"));
    }
    for (portal, ids) in &report.dropped {
        log::info!("dropped {} article(s) from unrated portal {portal:?}", ids.len());
    }
    Ok(report)
}

/// Read an articles dump and a ratings table and label every article from
/// a rated portal.
pub fn load_corpus(articles_file: &Path, ratings_file: &Path) -> Result<LoadReport> {
    let ratings = RatingsTable::load(ratings_file)?;
    let f = std::fs::File::open(articles_file).map_err(|e| Error::io(articles_file, e))?;
    let raw = read_raw_articles(BufReader::new(f), &articles_file.display().to_string())?;
    join_ratings(raw, &ratings)
}

/// Scrub one article against its portal's aliases.
pub fn scrub_article(article: &Article, aliases: &[String]) -> (Article, ScrubLog) {
    let (text, log) = PortalScrubber::new(aliases).scrub(&article.text);
    (
        Article {
            text,
            scrubbed: true,
            ..article.clone()
        },
        log,
    )
}

/// Scrub every article in place. Articles left with no text are removed
/// and their ids returned.
pub fn scrub_corpus(articles: &mut Vec<Article>, ratings: &RatingsTable) -> Vec<String> {
    let mut scrubbers: BTreeMap<String, PortalScrubber> = BTreeMap::new();
    let mut emptied = Vec::new();
    for article in articles.iter_mut() {
        let Some(rating) = ratings.get(&article.portal_name) else {
            continue;
        };
        let scrubber = scrubbers
            .entry(rating.portal_name.clone())
            .or_insert_with(|| PortalScrubber::new(&rating.aliases));
        let (text, log) = scrubber.scrub(&article.text);
        for byline in &log.removed_bylines {
            log::debug!("{}: removed byline {byline:?}", article.id);
        }
        for mention in &log.replaced_mentions {
            log::debug!("{}: replaced mention {mention:?}", article.id);
        }
        article.text = text;
        article.scrubbed = true;
        if article.text.trim().is_empty() {
            emptied.push(article.id.clone());
        }
    }
    articles.retain(|a| !a.text.trim().is_empty());
    emptied
}

pub fn write_corpus<W: Write>(articles: &[Article], mut out: W) -> Result<()> {
    for a in articles {
        let line = serde_json::to_string(a)?;
        writeln!(out, "{line}").map_err(|e| Error::io("<corpus output>", e))?;
    }
    Ok(())
}

pub fn save_corpus(articles: &[Article], path: &Path) -> Result<()> {
    let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(f);
    write_corpus(articles, &mut w)?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Read a labeled corpus written by [`save_corpus`].
pub fn read_corpus(path: &Path) -> Result<Vec<Article>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let file = path.display().to_string();
    let articles: Vec<Article> = read_jsonl(BufReader::new(f), &file)?;
    let mut seen = HashSet::new();
    for a in &articles {
        if !seen.insert(a.id.as_str()) {
            return Err(Error::Invalid(format!("{file}: duplicate article id {:?}", a.id)));
        }
        if !a.labels.is_consistent() {
            return Err(Error::Invalid(format!("{file}: inconsistent labels on {:?}", a.id)));
        }
        if a.text.trim().is_empty() {
            return Err(Error::Invalid(format!("{file}: empty text on {:?}", a.id)));
        }
    }
    if articles.is_empty() {
        return Err(Error::EmptyInput("corpus file holds no articles"));
    }
    Ok(articles)
}

/// Portal and topic counts, largest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusStats {
    pub articles: usize,
    pub portals: Vec<(String, usize)>,
    pub topics: Vec<(String, usize)>,
}

pub fn corpus_stats(articles: &[Article]) -> CorpusStats {
    fn ranked(counts: BTreeMap<&str, usize>) -> Vec<(String, usize)> {
        let mut v: Vec<(String, usize)> = counts.into_iter().map(|(k, c)| (k.to_string(), c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        v
    }
    let mut portals = BTreeMap::new();
    let mut topics = BTreeMap::new();
    for a in articles {
        *portals.entry(a.portal_name.as_str()).or_insert(0) += 1;
        *topics.entry(a.topic.as_str()).or_insert(0) += 1;
    }
    CorpusStats {
        articles: articles.len(),
        portals: ranked(portals),
        topics: ranked(topics),
    }
}
