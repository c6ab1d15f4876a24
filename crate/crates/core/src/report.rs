//! Static heatmap documents and plot-ready pattern tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::{BiasStrengthReport, Granularity, QuartilePatterns, StrengthClass};
use crate::corpus::BiasType;
use crate::error::{Error, Result};
use crate::text::TokenizedArticle;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatmapSpan {
    pub text: String,
    pub strength: f64,
    /// `strength / max |strength|`, in [-1, 1].
    pub color_intensity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Heatmap {
    pub article_id: String,
    pub granularity: Granularity,
    pub p_art: f64,
    pub spans: Vec<HeatmapSpan>,
}

impl Heatmap {
    /// Pair each segment of `report` with its text. The report must have been
    /// computed on the same text.
    pub fn build(report: &BiasStrengthReport, article_text: &str) -> Result<Self> {
        let tokenized = TokenizedArticle::from_text(article_text)?;
        let expected = report.granularity.segments(tokenized.len())?;
        let actual: Vec<_> = report.segments.iter().map(|s| s.sentences.clone()).collect();
        if expected != actual {
            return Err(Error::Alignment(format!(
                "article {:?}: report has {} {} segments, text yields {}",
                report.article_id,
                actual.len(),
                report.granularity,
                expected.len()
            )));
        }
        let max = report.segments.iter().fold(0.0f64, |m, s| m.max(s.strength.abs()));
        let spans = report
            .segments
            .iter()
            .map(|s| HeatmapSpan {
                text: tokenized.sentence_texts[s.sentences.clone()].join(" "),
                strength: s.strength,
                color_intensity: if max > 0.0 { s.strength / max } else { 0.0 },
            })
            .collect();
        Ok(Self {
            article_id: report.article_id.clone(),
            granularity: report.granularity,
            p_art: report.p_art,
            spans,
        })
    }

    pub fn to_html(&self) -> String {
        let mut out = String::new();
        let title = escape_html(&self.article_id);
        out.push_str("<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n");
        let _ = writeln!(out, "<title>Bias strength: {title}</title>");
        out.push_str("</head>\n<body style=\"font-family: Georgia, serif; max-width: 46em; margin: 2em auto; line-height: 1.6;\">\n");
        let _ = writeln!(out, "<h1 style=\"font-size: 1.2em;\">{title}</h1>");
        let _ = writeln!(
            out,
            "<p class=\"legend\" style=\"font-family: sans-serif; font-size: 0.85em;\">granularity: {} | p_art: {:.4} | \
             <span style=\"background-color: rgb(255, 0, 0);\">&nbsp;&nbsp;&nbsp;</span> pushes toward biased \
             <span style=\"background-color: rgb(0, 0, 255);\">&nbsp;&nbsp;&nbsp;</span> pushes away</p>",
            self.granularity,
            clean_zero(self.p_art)
        );
        let block = match self.granularity {
            Granularity::Sentence => "div",
            Granularity::Paragraph => "p",
        };
        let _ = writeln!(out, "<{block} class=\"article\">");
        for (i, span) in self.spans.iter().enumerate() {
            let (r, g, b) = diverging_rgb(span.color_intensity);
            let _ = writeln!(
                out,
                "<span class=\"segment\" data-index=\"{i}\" title=\"strength {:+.4}\" style=\"background-color: rgb({r}, {g}, {b});\">{}</span>",
                clean_zero(span.strength),
                escape_html(&span.text)
            );
            if self.granularity == Granularity::Paragraph && i + 1 < self.spans.len() {
                let _ = writeln!(out, "</p>\n<p class=\"article\">");
            }
        }
        let _ = writeln!(out, "</{block}>");
        out.push_str("</body>\n</html>\n");
        out
    }
}

pub fn render_heatmap(report: &BiasStrengthReport, article_text: &str) -> Result<String> {
    Ok(Heatmap::build(report, article_text)?.to_html())
}

fn clean_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// White at 0, pure red at +1, pure blue at -1.
pub fn diverging_rgb(intensity: f64) -> (u8, u8, u8) {
    let c = intensity.clamp(-1.0, 1.0);
    let fade = (255.0 * (1.0 - c.abs())).round() as u8;
    if c >= 0.0 {
        (255, fade, fade)
    } else {
        (fade, fade, 255)
    }
}

pub fn escape_html(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

/// File name for an article's heatmap: anything outside `[A-Za-z0-9._-]`
/// becomes `_`.
pub fn heatmap_file_name(article_id: &str) -> String {
    let stem: String = article_id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "._-".contains(c) { c } else { '_' })
        .collect();
    format!("{stem}.html")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternRow {
    pub bias_type: BiasType,
    pub class: StrengthClass,
    pub quarter: u8,
    pub raw_mean: f64,
    pub normalized: f64,
}

/// One row per (bias type, class, quarter), ordered by bias type, then
/// biased before unbiased, then quarter.
pub fn pattern_rows(patterns: &[QuartilePatterns]) -> Vec<PatternRow> {
    let mut rows: Vec<PatternRow> = patterns
        .iter()
        .flat_map(|p| p.curves())
        .flat_map(|c| {
            (0..4).map(move |q| PatternRow {
                bias_type: c.bias_type,
                class: c.class,
                quarter: q as u8 + 1,
                raw_mean: c.raw[q],
                normalized: c.normalized[q],
            })
        })
        .collect();
    rows.sort_by_key(|r| (r.bias_type, r.class, r.quarter));
    rows
}

pub fn emit_pattern_table(patterns: &[QuartilePatterns]) -> Result<String> {
    write_pattern_rows(&pattern_rows(patterns))
}

pub fn write_pattern_rows(rows: &[PatternRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["bias_type", "class", "quarter", "raw_mean", "normalized"])?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn read_pattern_rows(text: &str) -> Result<Vec<PatternRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<PatternRow> = r.deserialize().collect::<std::result::Result<_, _>>()?;
    let mut seen = std::collections::BTreeSet::new();
    for row in &rows {
        if !(1..=4).contains(&row.quarter) {
            return Err(Error::Invalid(format!("quarter {} outside 1..=4", row.quarter)));
        }
        if !seen.insert((row.bias_type, row.class, row.quarter)) {
            return Err(Error::Invalid(format!(
                "duplicate row for {} {} quarter {}",
                row.bias_type.as_str(),
                row.class.as_str(),
                row.quarter
            )));
        }
    }
    Ok(rows)
}

/// Wide, plot-ready form: one line per quarter, one normalized column per
/// (bias type, class) curve present in the input.
pub fn pivot_pattern_table(rows: &[PatternRow]) -> Result<String> {
    let mut curves: BTreeMap<(BiasType, StrengthClass), [Option<f64>; 4]> = BTreeMap::new();
    for row in rows {
        curves.entry((row.bias_type, row.class)).or_default()[usize::from(row.quarter - 1)] = Some(row.normalized);
    }
    let mut header = vec!["quarter".to_string()];
    let mut columns = Vec::new();
    for ((bt, class), values) in &curves {
        let vals: Option<Vec<f64>> = values.iter().copied().collect();
        let vals = vals.ok_or_else(|| {
            Error::Invalid(format!("curve {} {} is missing a quarter", bt.as_str(), class.as_str()))
        })?;
        header.push(format!("{}_{}", bt.as_str(), class.as_str()));
        columns.push(vals);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for q in 0..4 {
        let mut rec = vec![(q + 1).to_string()];
        rec.extend(columns.iter().map(|c| c[q].to_string()));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
