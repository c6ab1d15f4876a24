//! Reverse feature analysis: how much each sentence or paragraph pushes the
//! classifier toward the biased class, and how that strength is spread over
//! the four quarters of an article.
//!
//! The strength of segment `i` is `p_art - p_art_minus_i`, where `p_art` is
//! the positive-class probability of the full article and `p_art_minus_i`
//! the probability with segment `i` removed. Every ablation starts from the
//! full article; removals are never cumulative.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Article, BiasType};
use crate::error::{Error, Result};
use crate::model::{Prediction, Predictor};
use crate::text::{paragraphs, TokenizedArticle};

/// An article segmented and tokenized once, with its true label for the
/// bias type under study.
#[derive(Clone, Debug, PartialEq)]
pub struct PreparedArticle {
    pub id: String,
    pub label: bool,
    pub tokenized: TokenizedArticle,
}

impl PreparedArticle {
    pub fn new(id: impl Into<String>, text: &str, label: bool) -> Result<Self> {
        Ok(Self {
            id: id.into(),
            label,
            tokenized: TokenizedArticle::from_text(text)?,
        })
    }

    pub fn from_article(article: &Article, bias_type: BiasType) -> Result<Self> {
        Self::new(article.id.clone(), &article.text, article.labels.get(bias_type))
    }

    pub fn tokens(&self) -> Vec<String> {
        self.tokenized.flat_tokens()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Sentence,
    Paragraph,
}

impl Granularity {
    pub fn as_str(self) -> &'static str {
        match self {
            Granularity::Sentence => "sentence",
            Granularity::Paragraph => "paragraph",
        }
    }

    /// Sentence-index ranges of the segments of an article with `n` sentences.
    pub fn segments(self, n: usize) -> Result<Vec<Range<usize>>> {
        match self {
            Granularity::Sentence if n == 0 => Err(Error::EmptyInput("no sentences to segment")),
            Granularity::Sentence => Ok((0..n).map(|i| i..i + 1).collect()),
            Granularity::Paragraph => paragraphs(&vec![(); n]),
        }
    }
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sentence" => Ok(Granularity::Sentence),
            "paragraph" => Ok(Granularity::Paragraph),
            _ => Err(Error::Invalid(format!("unknown granularity {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentStrength {
    pub index: usize,
    /// Sentence indices covered by the segment.
    pub sentences: Range<usize>,
    pub p_art_minus_i: f64,
    pub strength: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasStrengthReport {
    pub article_id: String,
    pub granularity: Granularity,
    pub p_art: f64,
    pub segments: Vec<SegmentStrength>,
}

impl BiasStrengthReport {
    /// Index of the segment with the largest strength (first one on ties).
    pub fn strongest(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for s in &self.segments {
            if best.is_none_or(|(_, v)| s.strength > v) {
                best = Some((s.index, s.strength));
            }
        }
        best.map(|(i, _)| i)
    }

    pub fn strengths(&self) -> Vec<f64> {
        self.segments.iter().map(|s| s.strength).collect()
    }
}

/// Occlusion strengths of every segment of `article`.
pub fn bias_strength<P: Predictor + ?Sized>(
    model: &P,
    article: &PreparedArticle,
    granularity: Granularity,
) -> Result<BiasStrengthReport> {
    let n = article.tokenized.len();
    let spans = granularity.segments(n)?;
    if spans.len() < 2 {
        return Err(Error::AblationUndefined(format!(
            "article {:?} has a single {granularity} segment",
            article.id
        )));
    }
    let p_art = model.predict_tokens(&article.tokens())?.p_positive;
    let segments = spans
        .into_par_iter()
        .enumerate()
        .map(|(index, span)| {
            let reduced = article.tokenized.tokens_without(span.clone());
            let p_minus = model.predict_tokens(&reduced)?.p_positive;
            Ok(SegmentStrength {
                index,
                sentences: span,
                p_art_minus_i: p_minus,
                strength: p_art - p_minus,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BiasStrengthReport {
        article_id: article.id.clone(),
        granularity,
        p_art,
        segments,
    })
}

/// Articles whose predicted label matches the true label, with their
/// predictions.
pub fn filter_correct<P: Predictor + ?Sized>(
    model: &P,
    articles: &[PreparedArticle],
) -> Result<Vec<(PreparedArticle, Prediction)>> {
    let preds: Vec<Prediction> = articles
        .par_iter()
        .map(|a| model.predict_tokens(&a.tokens()))
        .collect::<Result<_>>()?;
    let kept: Vec<_> = articles
        .iter()
        .zip(preds)
        .filter(|(a, p)| (p.label == 1) == a.label)
        .map(|(a, p)| (a.clone(), p))
        .collect();
    if kept.is_empty() {
        log::warn!("no article was predicted correctly");
    }
    Ok(kept)
}

/// Four consecutive sentence ranges as equal as possible; the first
/// `n % 4` parts get one extra sentence.
pub fn quartile_parts(n: usize) -> Result<[Range<usize>; 4]> {
    if n < 4 {
        return Err(Error::Invalid(format!("{n} sentences cannot form four parts")));
    }
    let (base, extra) = (n / 4, n % 4);
    let mut start = 0;
    Ok(std::array::from_fn(|k| {
        let len = base + usize::from(k < extra);
        let r = start..start + len;
        start += len;
        r
    }))
}

/// Mean strength of each quarter of a sentence-strength sequence.
pub fn quartile_means(strengths: &[f64]) -> Result<[f64; 4]> {
    let parts = quartile_parts(strengths.len())?;
    Ok(parts.map(|r| {
        let len = r.len() as f64;
        strengths[r].iter().sum::<f64>() / len
    }))
}

/// Shift to mean 0 and scale to population standard deviation 1. A curve
/// whose spread is below `1e-12` of its magnitude counts as constant and maps
/// to all zeros.
pub fn z_normalize(values: &[f64]) -> Vec<f64> {
    if values.is_empty() {
        return Vec::new();
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let std = var.sqrt();
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if std <= 1e-12 * scale {
        return vec![0.0; values.len()];
    }
    values.iter().map(|v| (v - mean) / std).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrengthClass {
    Biased,
    Unbiased,
}

impl StrengthClass {
    pub fn as_str(self) -> &'static str {
        match self {
            StrengthClass::Biased => "biased",
            StrengthClass::Unbiased => "unbiased",
        }
    }

    pub fn of_label(label: bool) -> Self {
        if label {
            StrengthClass::Biased
        } else {
            StrengthClass::Unbiased
        }
    }
}

impl FromStr for StrengthClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "biased" => Ok(StrengthClass::Biased),
            "unbiased" => Ok(StrengthClass::Unbiased),
            _ => Err(Error::Invalid(format!("unknown class {s:?}"))),
        }
    }
}

/// Population over which the four-value curves are z-normalized.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationScope {
    /// Each (bias type, class) curve on its own.
    #[default]
    PerCurve,
    /// Both class curves of a bias type together.
    PerBiasType,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuartilePattern {
    pub bias_type: BiasType,
    pub class: StrengthClass,
    pub raw: [f64; 4],
    pub normalized: [f64; 4],
    pub articles: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuartilePatterns {
    pub bias_type: BiasType,
    pub biased: Option<QuartilePattern>,
    pub unbiased: Option<QuartilePattern>,
    /// Articles skipped for having fewer than four sentences.
    pub skipped: usize,
    pub normalization: NormalizationScope,
}

impl QuartilePatterns {
    pub fn curves(&self) -> impl Iterator<Item = &QuartilePattern> {
        self.biased.iter().chain(self.unbiased.iter())
    }
}

/// Quarter means of per-article sentence strengths, averaged within each
/// true class and normalized.
pub fn pattern_from_strengths(
    bias_type: BiasType,
    per_article: &[(bool, Vec<f64>)],
    scope: NormalizationScope,
) -> QuartilePatterns {
    let mut sums = [[0.0f64; 4]; 2];
    let mut counts = [0usize; 2];
    let mut skipped = 0;
    for (label, strengths) in per_article {
        match quartile_means(strengths) {
            Ok(means) => {
                let c = usize::from(*label);
                counts[c] += 1;
                for (s, m) in sums[c].iter_mut().zip(means) {
                    *s += m;
                }
            }
            Err(_) => skipped += 1,
        }
    }
    let curve = |c: usize| -> Option<QuartilePattern> {
        (counts[c] > 0).then(|| {
            let raw = sums[c].map(|s| s / counts[c] as f64);
            let norm = z_normalize(&raw);
            QuartilePattern {
                bias_type,
                class: StrengthClass::of_label(c == 1),
                raw,
                normalized: [norm[0], norm[1], norm[2], norm[3]],
                articles: counts[c],
            }
        })
    };
    let mut patterns = QuartilePatterns {
        bias_type,
        biased: curve(1),
        unbiased: curve(0),
        skipped,
        normalization: NormalizationScope::PerCurve,
    };
    if scope == NormalizationScope::PerBiasType {
        renormalize_jointly(&mut patterns);
    }
    patterns
}

fn renormalize_jointly(patterns: &mut QuartilePatterns) {
    let joined: Vec<f64> = patterns.curves().flat_map(|c| c.raw).collect();
    let norm = z_normalize(&joined);
    let mut chunks = norm.chunks_exact(4);
    for curve in [patterns.biased.as_mut(), patterns.unbiased.as_mut()].into_iter().flatten() {
        let c = chunks.next().expect("one chunk per curve");
        curve.normalized = [c[0], c[1], c[2], c[3]];
    }
    patterns.normalization = NormalizationScope::PerBiasType;
}

/// Discourse-level pattern for one bias type. `articles` should already be
/// restricted to correctly predicted ones; articles under four sentences
/// are skipped and counted.
pub fn quartile_pattern<P: Predictor + ?Sized>(
    model: &P,
    articles: &[PreparedArticle],
    bias_type: BiasType,
    scope: NormalizationScope,
) -> Result<QuartilePatterns> {
    let per_article: Vec<(bool, Vec<f64>)> = articles
        .iter()
        .map(|a| {
            if a.tokenized.len() < 4 {
                return Ok((a.label, Vec::new()));
            }
            let report = bias_strength(model, a, Granularity::Sentence)?;
            Ok((a.label, report.strengths()))
        })
        .collect::<Result<_>>()?;
    Ok(pattern_from_strengths(bias_type, &per_article, scope))
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Constant(f64);

    impl Predictor for Constant {
        fn predict_tokens(&self, tokens: &[String]) -> Result<Prediction> {
            if tokens.is_empty() {
                return Err(Error::EmptyInput("no tokens"));
            }
            Ok(Prediction {
                probabilities: [1.0 - self.0, self.0],
                label: usize::from(self.0 > 0.5),
                p_positive: self.0,
            })
        }
    }

    /// p = share of tokens equal to "bad".
    struct Counter;

    impl Predictor for Counter {
        fn predict_tokens(&self, tokens: &[String]) -> Result<Prediction> {
            let p = tokens.iter().filter(|t| *t == "bad").count() as f64 / tokens.len() as f64;
            Ok(Prediction {
                probabilities: [1.0 - p, p],
                label: usize::from(p > 0.5),
                p_positive: p,
            })
        }
    }

    fn article(text: &str, label: bool) -> PreparedArticle {
        PreparedArticle::new("a", text, label).unwrap()
    }

    #[test]
    fn constant_model_gives_zero_strength() {
        let a = article("One two. Three four. Five six. Seven eight.", true);
        for g in [Granularity::Sentence, Granularity::Paragraph] {
            let r = bias_strength(&Constant(0.7), &a, g).unwrap();
            assert!(r.segments.iter().all(|s| s.strength == 0.0));
            assert_eq!(r.p_art, 0.7);
        }
    }

    #[test]
    fn single_segment_is_undefined() {
        let a = article("Only one sentence here.", true);
        assert!(matches!(bias_strength(&Constant(0.5), &a, Granularity::Sentence), Err(Error::AblationUndefined(_))));
        let b = article("One. Two. Three.", true);
        assert!(matches!(bias_strength(&Constant(0.5), &b, Granularity::Paragraph), Err(Error::AblationUndefined(_))));
    }

    #[test]
    fn strengths_are_p_minus_ablated() {
        let a = article("Bad bad. Good. Bad good good.", true);
        let r = bias_strength(&Counter, &a, Granularity::Sentence).unwrap();
        // tokens: [bad bad .] [good .] [bad good good .]
        let p = 3.0 / 9.0;
        let expect = [p - 1.0 / 6.0, p - 3.0 / 7.0, p - 2.0 / 5.0];
        for (s, e) in r.segments.iter().zip(expect) {
            assert!((s.strength - e).abs() < 1e-15);
            assert!((s.strength - (r.p_art - s.p_art_minus_i)).abs() < 1e-12);
        }
        assert_eq!(r.strongest(), Some(0));
    }

    #[test]
    fn paragraph_segments_cover_sentence_groups() {
        let text = (0..7).map(|i| format!("Sentence number {i}.")).collect::<Vec<_>>().join(" ");
        let a = article(&text, false);
        let r = bias_strength(&Counter, &a, Granularity::Paragraph).unwrap();
        let spans: Vec<_> = r.segments.iter().map(|s| s.sentences.clone()).collect();
        assert_eq!(spans, vec![0..3, 3..6, 6..7]);
    }

    #[test]
    fn filter_with_tie_model_keeps_negatives() {
        let arts = vec![article("A b.", true), article("C d.", false), article("E f.", false)];
        let kept = filter_correct(&Constant(0.5), &arts).unwrap();
        assert_eq!(kept.len(), 2);
        assert!(kept.iter().all(|(a, _)| !a.label));
    }

    #[test]
    fn quartile_sizes() {
        let sizes = |n| quartile_parts(n).unwrap().map(|r| r.len());
        assert_eq!(sizes(8), [2, 2, 2, 2]);
        assert_eq!(sizes(10), [3, 3, 2, 2]);
        assert_eq!(sizes(4), [1, 1, 1, 1]);
        assert!(quartile_parts(3).is_err());
    }

    #[test]
    fn normalization() {
        assert_eq!(z_normalize(&[0.3; 4]), vec![0.0; 4]);
        let z = z_normalize(&[1.0, 2.0, 3.0, 4.0]);
        let s = 1.25f64.sqrt();
        assert!((z[0] + 1.5 / s).abs() < 1e-12);
        assert!((z[3] - 1.5 / s).abs() < 1e-12);
        // equal strengths averaged over differently sized parts
        let raw = quartile_means(&[0.1; 10]).unwrap();
        assert_eq!(z_normalize(&raw), vec![0.0; 4]);
    }

    #[test]
    fn pattern_per_class_and_skip_count() {
        let data = vec![
            (true, vec![0.0, 0.0, 0.0, 1.0]),
            (true, vec![0.0, 0.0, 0.0, 3.0]),
            (false, vec![1.0, 0.0, 0.0, 0.0, 0.0]),
            (false, vec![1.0]),
        ];
        let p = pattern_from_strengths(BiasType::Unfairness, &data, NormalizationScope::PerCurve);
        assert_eq!(p.skipped, 1);
        let b = p.biased.as_ref().unwrap();
        assert_eq!(b.raw, [0.0, 0.0, 0.0, 2.0]);
        assert_eq!(b.articles, 2);
        let u = p.unbiased.as_ref().unwrap();
        assert_eq!(u.raw, [0.5, 0.0, 0.0, 0.0]);
        let joint = pattern_from_strengths(BiasType::Unfairness, &data, NormalizationScope::PerBiasType);
        let all: Vec<f64> = joint.curves().flat_map(|c| c.normalized).collect();
        let mean = all.iter().sum::<f64>() / 8.0;
        assert!(mean.abs() < 1e-12);
        assert_ne!(joint.biased.unwrap().normalized, b.normalized);
    }
}
