use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ingest::Article;
use super::labels::BiasType;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Train,
    Dev,
    Test,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::Train, Partition::Dev, Partition::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Partition::Train => "train",
            Partition::Dev => "dev",
            Partition::Test => "test",
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Partition::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown partition {s:?}")))
    }
}

/// Topic-to-partition map. Whole topics go to one partition so topical
/// vocabulary cannot leak between training and evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitAssignment {
    pub seed: u64,
    pub min_fraction: f64,
    pub topics: BTreeMap<String, Partition>,
}

impl SplitAssignment {
    pub fn partition_of(&self, topic: &str) -> Option<Partition> {
        self.topics.get(topic).copied()
    }

    /// Articles of one partition, in corpus order. Articles whose topic is
    /// not in the map are an error.
    pub fn select<'a>(&self, articles: &'a [Article], partition: Partition) -> Result<Vec<&'a Article>> {
        let mut out = Vec::new();
        for a in articles {
            let p = self
                .partition_of(&a.topic)
                .ok_or_else(|| Error::Invalid(format!("topic {:?} of article {:?} is not in the split", a.topic, a.id)))?;
            if p == partition {
                out.push(a);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

fn topic_counts(articles: &[Article]) -> BTreeMap<&str, usize> {
    let mut counts = BTreeMap::new();
    for a in articles {
        *counts.entry(a.topic.as_str()).or_insert(0usize) += 1;
    }
    counts
}

/// Greedy seeded topic split.
///
/// Topics are shuffled with a seeded generator and handed to `test` until it
/// holds at least `min_fraction` of all articles, then to `dev` likewise; the
/// rest go to `train`. A topic is passed over when taking it would make the
/// remaining partitions unsatisfiable.
pub fn split_by_topic(articles: &[Article], seed: u64, min_fraction: f64) -> Result<SplitAssignment> {
    if !(0.0..0.5).contains(&min_fraction) {
        return Err(Error::Invalid(format!("min_fraction {min_fraction} must lie in [0, 0.5)")));
    }
    if let Some(a) = articles.iter().find(|a| a.topic.is_empty()) {
        return Err(Error::Invalid(format!("article {:?} has no topic", a.id)));
    }
    let counts = topic_counts(articles);
    if counts.len() < 3 {
        return Err(Error::Split(format!("need at least 3 topics, found {}", counts.len())));
    }
    let total = articles.len();
    let target = ((min_fraction * total as f64) - 1e-9).ceil().max(0.0) as usize;

    let mut order: Vec<(&str, usize)> = counts.iter().map(|(t, c)| (*t, *c)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let mut assigned: BTreeMap<String, Partition> = BTreeMap::new();
    let mut unassigned = total;

    // test, then dev; each must leave enough for what comes after
    for (partition, reserve_after) in [(Partition::Test, target + 1), (Partition::Dev, 1)] {
        let mut filled = 0usize;
        for &(topic, count) in &order {
            if filled >= target.max(1) {
                break;
            }
            if assigned.contains_key(topic) {
                continue;
            }
            if unassigned - count < reserve_after {
                continue;
            }
            assigned.insert(topic.to_string(), partition);
            filled += count;
            unassigned -= count;
        }
        if filled < target.max(1) {
            let blocking = order
                .iter()
                .filter(|(t, _)| !assigned.contains_key(*t))
                .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(a.0)))
                .map(|(t, c)| format!("topic {t:?} ({c} of {total} articles)"))
                .unwrap_or_else(|| "no topic left".into());
            return Err(Error::Split(format!(
                "{partition} reaches only {filled} of the required {target} articles; blocked by {blocking}"
            )));
        }
    }
    for &(topic, _) in &order {
        assigned.entry(topic.to_string()).or_insert(Partition::Train);
    }
    Ok(SplitAssignment {
        seed,
        min_fraction,
        topics: assigned,
    })
}

/// Article count and positive-label percentage for each partition.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionSummary {
    pub partition: Partition,
    pub articles: usize,
    pub positive_percent: BTreeMap<BiasType, f64>,
}

pub fn summarize_split(articles: &[Article], split: &SplitAssignment) -> Result<Vec<PartitionSummary>> {
    Partition::ALL
        .into_iter()
        .map(|p| {
            let sel = split.select(articles, p)?;
            let n = sel.len();
            let positive_percent = BiasType::ALL
                .into_iter()
                .map(|t| {
                    let pos = sel.iter().filter(|a| a.labels.get(t)).count();
                    let pct = if n == 0 { 0.0 } else { 100.0 * pos as f64 / n as f64 };
                    (t, pct)
                })
                .collect();
            Ok(PartitionSummary {
                partition: p,
                articles: n,
                positive_percent,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::labels::BiasLabels;

    fn articles_with_topics(sizes: &[(&str, usize)]) -> Vec<Article> {
        let mut out = Vec::new();
        for (topic, n) in sizes {
            for i in 0..*n {
                out.push(Article {
                    id: format!("{topic}-{i}"),
                    portal_name: "p".into(),
                    topic: topic.to_string(),
                    text: "x".into(),
                    labels: BiasLabels {
                        political_bias: i % 2 == 0,
                        unfairness: false,
                        non_objectivity: i % 2 == 0,
                    },
                    scrubbed: true,
                });
            }
        }
        out
    }

    #[test]
    fn ten_by_ten_split() {
        let names: Vec<String> = (0..10).map(|i| format!("t{i}")).collect();
        let sizes: Vec<(&str, usize)> = names.iter().map(|n| (n.as_str(), 10)).collect();
        let arts = articles_with_topics(&sizes);
        let split = split_by_topic(&arts, 7, 0.10).unwrap();
        let dev = split.select(&arts, Partition::Dev).unwrap();
        let test = split.select(&arts, Partition::Test).unwrap();
        let train = split.select(&arts, Partition::Train).unwrap();
        assert!(dev.len() >= 10 && test.len() >= 10);
        assert_eq!(dev.len() + test.len() + train.len(), 100);
        assert_eq!(split.topics.len(), 10);
    }

    #[test]
    fn same_seed_same_split() {
        let arts = articles_with_topics(&[("a", 5), ("b", 7), ("c", 9), ("d", 3), ("e", 11), ("f", 2)]);
        assert_eq!(split_by_topic(&arts, 3, 0.1).unwrap(), split_by_topic(&arts, 3, 0.1).unwrap());
    }

    #[test]
    fn giant_topic_is_named() {
        let mut sizes = vec![("giant", 91usize)];
        let names: Vec<String> = (0..9).map(|i| format!("small{i}")).collect();
        sizes.extend(names.iter().map(|n| (n.as_str(), 1)));
        let arts = articles_with_topics(&sizes);
        let err = split_by_topic(&arts, 1, 0.10).unwrap_err();
        assert!(matches!(err, Error::Split(_)));
        assert!(err.to_string().contains("\"giant\""), "{err}");
    }

    #[test]
    fn too_few_topics() {
        let arts = articles_with_topics(&[("a", 5), ("b", 5)]);
        assert!(split_by_topic(&arts, 1, 0.1).is_err());
    }

    #[test]
    fn split_file_round_trips_bytes() {
        let arts = articles_with_topics(&[("a", 5), ("b", 7), ("c", 9), ("d", 3), ("e", 11)]);
        let split = split_by_topic(&arts, 11, 0.1).unwrap();
        let text = split.to_json().unwrap();
        let back = SplitAssignment::from_json(&text).unwrap();
        assert_eq!(back, split);
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn summary_percentages() {
        let arts = articles_with_topics(&[("a", 4), ("b", 4), ("c", 4)]);
        let split = SplitAssignment {
            seed: 0,
            min_fraction: 0.1,
            topics: [("a", Partition::Train), ("b", Partition::Dev), ("c", Partition::Test)]
                .into_iter()
                .map(|(t, p)| (t.to_string(), p))
                .collect(),
        };
        let s = summarize_split(&arts, &split).unwrap();
        assert_eq!(s[0].articles, 4);
        assert_eq!(s[2].positive_percent[&BiasType::PoliticalBias], 50.0);
        assert_eq!(s[2].positive_percent[&BiasType::Unfairness], 0.0);
    }
}
