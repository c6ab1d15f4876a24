//! Word-category lexicons and their correlation with sentence-level bias
//! strength.
//!
//! A lexicon file holds one category per line:
//!
//! ```text
//! # comment
//! negemo: angry, hate, disappoint*, worr*
//! percept: feel*, gloom, depict*
//! ```
//!
//! A trailing `*` makes the entry a prefix pattern; everything else matches
//! a whole token. Matching is case-insensitive.

use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::{bias_strength, Granularity, PreparedArticle};
use crate::corpus::BiasType;
use crate::error::{Error, Result};
use crate::model::Predictor;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconCategory {
    pub name: String,
    pub exact_words: BTreeSet<String>,
    pub prefixes: BTreeSet<String>,
}

impl LexiconCategory {
    pub fn new<I, S>(name: &str, entries: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut exact_words = BTreeSet::new();
        let mut prefixes = BTreeSet::new();
        for e in entries {
            let e = e.as_ref().trim().to_lowercase();
            if let Some(stem) = e.strip_suffix('*') {
                if !stem.is_empty() {
                    prefixes.insert(stem.to_string());
                }
            } else if !e.is_empty() {
                exact_words.insert(e);
            }
        }
        Self {
            name: name.trim().to_string(),
            exact_words,
            prefixes,
        }
    }

    /// Membership test on an already case-folded token.
    pub fn matches(&self, token: &str) -> bool {
        self.exact_words.contains(token) || self.prefixes.iter().any(|p| token.starts_with(p.as_str()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lexicon {
    pub categories: Vec<LexiconCategory>,
}

impl Lexicon {
    pub fn parse(text: &str, file: &str) -> Result<Self> {
        let mut categories = Vec::new();
        let mut seen = HashSet::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (name, words) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(file, idx + 1, "expected `name: word, word*, …`"))?;
            let name = name.trim();
            if name.is_empty() {
                return Err(Error::parse(file, idx + 1, "empty category name"));
            }
            if !seen.insert(name.to_string()) {
                return Err(Error::parse(file, idx + 1, format!("duplicate category {name:?}")));
            }
            categories.push(LexiconCategory::new(name, words.split(',')));
        }
        Ok(Self { categories })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn get(&self, name: &str) -> Option<&LexiconCategory> {
        self.categories.iter().find(|c| c.name == name)
    }
}

/// Share of the sentence's tokens (duplicates included) that belong to the
/// category.
pub fn lexicon_score<S: AsRef<str>>(tokens: &[S], category: &LexiconCategory) -> Result<f64> {
    if tokens.is_empty() {
        return Err(Error::EmptyInput("lexicon score of an empty sentence"));
    }
    let hits = tokens
        .iter()
        .filter(|t| category.matches(&t.as_ref().to_lowercase()))
        .count();
    Ok(hits as f64 / tokens.len() as f64)
}

fn is_constant(v: &[f64]) -> bool {
    v.iter().all(|&x| x == v[0])
}

/// Sample Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!("pearson over {} and {} values", x.len(), y.len())));
    }
    if x.len() < 3 {
        return Err(Error::UndefinedCorrelation(format!("need at least 3 pairs, got {}", x.len())));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("pearson input".into()));
    }
    if is_constant(x) || is_constant(y) {
        return Err(Error::UndefinedCorrelation("zero variance".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("zero variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub category: String,
    pub bias_type: BiasType,
    pub r: f64,
    pub n: usize,
}

/// Correlations sorted by descending `r`, plus categories left out because
/// their scores never vary.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CorrelationOutcome {
    pub results: Vec<CorrelationResult>,
    pub omitted: Vec<String>,
}

/// Pool `(sentence tokens, strength)` pairs and correlate each category's
/// score with the strength.
pub fn correlate_sentences<S: AsRef<str>>(
    sentences: &[(&[S], f64)],
    lexicon: &Lexicon,
    bias_type: BiasType,
) -> Result<CorrelationOutcome> {
    if sentences.len() < 3 {
        return Err(Error::UndefinedCorrelation(format!(
            "need at least 3 sentences, got {}",
            sentences.len()
        )));
    }
    let strengths: Vec<f64> = sentences.iter().map(|(_, s)| *s).collect();
    let mut outcome = CorrelationOutcome::default();
    for category in &lexicon.categories {
        let scores: Vec<f64> = sentences
            .iter()
            .map(|(toks, _)| lexicon_score(toks, category))
            .collect::<Result<_>>()?;
        match pearson(&scores, &strengths) {
            Ok(r) => outcome.results.push(CorrelationResult {
                category: category.name.clone(),
                bias_type,
                r,
                n: sentences.len(),
            }),
            Err(Error::UndefinedCorrelation(why)) => {
                log::warn!("category {:?} omitted: {why}", category.name);
                outcome.omitted.push(category.name.clone());
            }
            Err(e) => return Err(e),
        }
    }
    outcome
        .results
        .sort_by(|a, b| b.r.total_cmp(&a.r).then_with(|| a.category.cmp(&b.category)));
    Ok(outcome)
}

/// Sentence-level bias strengths of every article against every lexicon
/// category, pooled over all sentences. `articles` should already be
/// restricted to correctly predicted ones.
pub fn correlate_categories<P: Predictor + ?Sized>(
    model: &P,
    articles: &[PreparedArticle],
    lexicon: &Lexicon,
    bias_type: BiasType,
) -> Result<CorrelationOutcome> {
    let mut pooled: Vec<(&[String], f64)> = Vec::new();
    let reports: Vec<_> = articles
        .iter()
        .filter(|a| a.tokenized.len() >= 2)
        .map(|a| bias_strength(model, a, Granularity::Sentence).map(|r| (a, r)))
        .collect::<Result<_>>()?;
    for (article, report) in &reports {
        for seg in &report.segments {
            pooled.push((&article.tokenized.sentences[seg.sentences.start], seg.strength));
        }
    }
    correlate_sentences(&pooled, lexicon, bias_type)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn score_counts_exact_and_prefix_matches() {
        let cat = LexiconCategory::new("c", ["angry", "feel*"]);
        assert_eq!(lexicon_score(&["i", "feel", "angry", "today"], &cat).unwrap(), 0.5);
        assert_eq!(lexicon_score(&["nothing", "here"], &cat).unwrap(), 0.0);
        assert_eq!(lexicon_score(&["angry", "feelings", "ANGRY"], &cat).unwrap(), 1.0);
        assert!(lexicon_score::<&str>(&[], &cat).is_err());
    }

    #[test]
    fn overlapping_exact_and_prefix_count_once() {
        let cat = LexiconCategory::new("c", ["feel", "feel*"]);
        assert_eq!(lexicon_score(&["feel", "x"], &cat).unwrap(), 0.5);
    }

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert!((pearson(&x, &y).unwrap() - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-12);
        assert!((pearson(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap() - 0.5).abs() < 1e-12);
        assert!(matches!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), Err(Error::UndefinedCorrelation(_))));
        assert!(matches!(pearson(&[0.1; 5], &[1.0, 2.0, 3.0, 4.0, 5.0]), Err(Error::UndefinedCorrelation(_))));
        assert!(pearson(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn parse_lexicon_file() {
        let text = "# demo\nnegemo: angry, Hate, disappoint*\n\npercept: feel* , gloom # trailing\n";
        let lex = Lexicon::parse(text, "l.txt").unwrap();
        assert_eq!(lex.categories.len(), 2);
        let neg = lex.get("negemo").unwrap();
        assert!(neg.matches("hate") && neg.matches("disappointed") && !neg.matches("disappoin"));
        let per = lex.get("percept").unwrap();
        assert_eq!(per.exact_words, BTreeSet::from(["gloom".to_string()]));
        assert_eq!(per.prefixes, BTreeSet::from(["feel".to_string()]));
        let err = Lexicon::parse("a: x\na: y\n", "l.txt").unwrap_err();
        assert!(err.to_string().starts_with("l.txt:2:"), "{err}");
        assert!(Lexicon::parse("no colon here\n", "l.txt").is_err());
    }

    #[test]
    fn unmatched_category_is_omitted() {
        let lex = Lexicon::parse("never: zzz\nsome: b\n", "l").unwrap();
        let s1 = ["a", "b"];
        let s2 = ["a", "a"];
        let s3 = ["b", "b"];
        let pairs: Vec<(&[&str], f64)> = vec![(&s1, 0.5), (&s2, 0.0), (&s3, 1.0)];
        let out = correlate_sentences(&pairs, &lex, BiasType::PoliticalBias).unwrap();
        assert_eq!(out.omitted, vec!["never"]);
        assert_eq!(out.results.len(), 1);
        assert!((out.results[0].r - 1.0).abs() < 1e-12);
        assert_eq!(out.results[0].n, 3);
    }
}
