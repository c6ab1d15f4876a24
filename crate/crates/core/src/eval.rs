//! Per-class F1, macro-F1 and the majority baseline.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Prediction, Predictor};

/// Which side of a binary task a score refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    /// Label 1: biased, unfair or non-objective.
    Positive,
    /// Label 0.
    Negative,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Confusion {
    pub fn from_labels(truth: &[bool], predicted: &[bool]) -> Result<Self> {
        if truth.len() != predicted.len() {
            return Err(Error::Shape(format!(
                "{} labels but {} predictions",
                truth.len(),
                predicted.len()
            )));
        }
        let mut c = Confusion::default();
        for (&t, &p) in truth.iter().zip(predicted) {
            match (t, p) {
                (true, true) => c.tp += 1,
                (false, true) => c.fp += 1,
                (false, false) => c.tn += 1,
                (true, false) => c.fn_ += 1,
            }
        }
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn accuracy(&self) -> f64 {
        (self.tp + self.tn) as f64 / self.n().max(1) as f64
    }
}

/// F1 of one class: harmonic mean of precision and recall, 0 when both are 0.
pub fn f1(confusion: &Confusion, class: Class) -> Result<f64> {
    if confusion.n() == 0 {
        return Err(Error::EmptyInput("F1 of an empty confusion matrix"));
    }
    // swap roles for the negative class
    let (tp, fp, fn_) = match class {
        Class::Positive => (confusion.tp, confusion.fp, confusion.fn_),
        Class::Negative => (confusion.tn, confusion.fn_, confusion.fp),
    };
    let denom = 2 * tp + fp + fn_;
    Ok(if denom == 0 { 0.0 } else { 2.0 * tp as f64 / denom as f64 })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerClassF1 {
    pub positive: f64,
    pub negative: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_class_f1: PerClassF1,
    pub macro_f1: f64,
    pub confusion: Confusion,
    pub n: usize,
}

impl EvalReport {
    pub fn from_confusion(confusion: Confusion) -> Result<Self> {
        let positive = f1(&confusion, Class::Positive)?;
        let negative = f1(&confusion, Class::Negative)?;
        Ok(Self {
            per_class_f1: PerClassF1 { positive, negative },
            macro_f1: (positive + negative) / 2.0,
            confusion,
            n: confusion.n(),
        })
    }

    pub fn from_labels(truth: &[bool], predicted: &[bool]) -> Result<Self> {
        Self::from_confusion(Confusion::from_labels(truth, predicted)?)
    }
}

/// Predict the more frequent class for every item (class 0 on a tie).
pub fn majority_baseline(labels: &[bool]) -> Result<EvalReport> {
    if labels.is_empty() {
        return Err(Error::EmptyInput("majority baseline over no labels"));
    }
    let positives = labels.iter().filter(|&&l| l).count();
    let majority = positives * 2 > labels.len();
    let predicted = vec![majority; labels.len()];
    EvalReport::from_labels(labels, &predicted)
}

/// Score `model` on labeled token sequences. Predictions come back in
/// input order.
pub fn evaluate<P, S>(model: &P, dataset: &[(S, bool)]) -> Result<(EvalReport, Vec<Prediction>)>
where
    P: Predictor + ?Sized,
    S: AsRef<[String]> + Sync,
{
    if dataset.is_empty() {
        return Err(Error::EmptyInput("evaluation set is empty"));
    }
    let predictions: Vec<Prediction> = dataset
        .par_iter()
        .map(|(tokens, _)| model.predict_tokens(tokens.as_ref()))
        .collect::<Result<_>>()?;
    let truth: Vec<bool> = dataset.iter().map(|(_, l)| *l).collect();
    let predicted: Vec<bool> = predictions.iter().map(|p| p.label == 1).collect();
    Ok((EvalReport::from_labels(&truth, &predicted)?, predictions))
}

/// A fraction rendered as a percentage with two decimals, e.g. `"36.38%"`.
pub fn percent(value: f64) -> String {
    format!("{:.2}%", 100.0 * value)
}

/// One row of a results table in the Majority / model / by-class layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub row: String,
    pub f1: String,
}

pub fn table_rows(model_name: &str, model: &EvalReport, majority: &EvalReport) -> Vec<TableRow> {
    [
        ("Majority".to_string(), majority.macro_f1),
        (model_name.to_string(), model.macro_f1),
        ("- Biased".to_string(), model.per_class_f1.positive),
        ("- Unbiased".to_string(), model.per_class_f1.negative),
    ]
    .into_iter()
    .map(|(row, v)| TableRow { row, f1: percent(v) })
    .collect()
}
