use serde::{Deserialize, Serialize};

use super::params::{GruParams, OUTPUT_CLASSES};
use crate::error::{Error, Result};

/// Class probabilities for one article. Index 0 is the unbiased / fair /
/// objective class, index 1 the biased / unfair / non-objective class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub probabilities: [f64; OUTPUT_CLASSES],
    pub label: usize,
    pub p_positive: f64,
}

impl Prediction {
    /// Softmax over two logits; an exact tie predicts class 0.
    pub fn from_logits(logits: [f64; OUTPUT_CLASSES]) -> Self {
        let probabilities = softmax(logits);
        let label = usize::from(probabilities[1] > probabilities[0]);
        Self {
            probabilities,
            label,
            p_positive: probabilities[1],
        }
    }
}

fn softmax(logits: [f64; OUTPUT_CLASSES]) -> [f64; OUTPUT_CLASSES] {
    let m = logits[0].max(logits[1]);
    let e0 = (logits[0] - m).exp();
    let e1 = (logits[1] - m).exp();
    let s = e0 + e1;
    [e0 / s, e1 / s]
}

/// `ln Σ exp(l)` without overflow.
fn log_sum_exp(logits: [f64; OUTPUT_CLASSES]) -> f64 {
    let m = logits[0].max(logits[1]);
    m + ((logits[0] - m).exp() + (logits[1] - m).exp()).ln()
}

#[inline]
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Gate activations of one step, kept for the backward pass.
#[derive(Clone, Debug)]
struct StepCache {
    z: Vec<f64>,
    r: Vec<f64>,
    candidate: Vec<f64>,
}

fn step(x: &[f64], h_prev: &[f64], p: &GruParams) -> (Vec<f64>, StepCache) {
    let mut z = p.b_z.clone();
    p.w_z.add_transposed_product(x, &mut z);
    p.u_z.add_transposed_product(h_prev, &mut z);
    z.iter_mut().for_each(|v| *v = sigmoid(*v));

    let mut r = p.b_r.clone();
    p.w_r.add_transposed_product(x, &mut r);
    p.u_r.add_transposed_product(h_prev, &mut r);
    r.iter_mut().for_each(|v| *v = sigmoid(*v));

    let gated: Vec<f64> = r.iter().zip(h_prev).map(|(r, h)| r * h).collect();
    let mut candidate = p.b_h.clone();
    p.w_h.add_transposed_product(x, &mut candidate);
    p.u_h.add_transposed_product(&gated, &mut candidate);
    candidate.iter_mut().for_each(|v| *v = v.tanh());

    let h: Vec<f64> = (0..p.hidden)
        .map(|j| (1.0 - z[j]) * h_prev[j] + z[j] * candidate[j])
        .collect();
    (h, StepCache { z, r, candidate })
}

/// One GRU step:
///
/// ```text
/// z  = σ(W_zᵀx + U_zᵀh + b_z)
/// r  = σ(W_rᵀx + U_rᵀh + b_r)
/// h̃  = tanh(W_hᵀx + U_hᵀ(r ⊙ h) + b_h)
/// h' = (1 − z) ⊙ h + z ⊙ h̃
/// ```
pub fn gru_cell(x: &[f64], h_prev: &[f64], params: &GruParams) -> Result<Vec<f64>> {
    if x.len() != params.input_dim || h_prev.len() != params.hidden {
        return Err(Error::Shape(format!(
            "gru_cell expects x of {} and h of {}, got {} and {}",
            params.input_dim,
            params.hidden,
            x.len(),
            h_prev.len()
        )));
    }
    if x.iter().chain(h_prev).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("gru_cell input".into()));
    }
    Ok(step(x, h_prev, params).0)
}

fn check_inputs(inputs: &[&[f64]], params: &GruParams) -> Result<()> {
    if inputs.is_empty() {
        return Err(Error::EmptyInput("sequence has no tokens"));
    }
    if let Some(bad) = inputs.iter().find(|x| x.len() != params.input_dim) {
        return Err(Error::Shape(format!(
            "input vector has {} components, model expects {}",
            bad.len(),
            params.input_dim
        )));
    }
    Ok(())
}

fn output_logits(h: &[f64], p: &GruParams) -> [f64; OUTPUT_CLASSES] {
    let mut logits = [p.b_out[0], p.b_out[1]];
    p.w_out.add_transposed_product(h, &mut logits);
    logits
}

/// Final hidden state after running the cell over `inputs` from `h_0 = 0`.
pub fn final_state(inputs: &[&[f64]], params: &GruParams) -> Result<Vec<f64>> {
    check_inputs(inputs, params)?;
    let mut h = vec![0.0; params.hidden];
    for x in inputs {
        h = step(x, &h, params).0;
    }
    Ok(h)
}

/// Run the GRU over embedded inputs and apply the softmax output layer.
pub fn forward(inputs: &[&[f64]], params: &GruParams) -> Result<Prediction> {
    let h = final_state(inputs, params)?;
    let logits = output_logits(&h, params);
    if logits.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("output logits".into()));
    }
    Ok(Prediction::from_logits(logits))
}

/// One labeled, embedded sequence.
#[derive(Clone, Debug)]
pub struct Sequence<'a> {
    pub id: &'a str,
    pub inputs: Vec<&'a [f64]>,
    pub label: usize,
}

/// Cross-entropy of one sequence; gradients are added into `grads`
/// (unscaled).
fn accumulate_sequence(seq: &Sequence<'_>, params: &GruParams, grads: &mut GruParams) -> Result<f64> {
    check_inputs(&seq.inputs, params)?;
    if seq.label >= OUTPUT_CLASSES {
        return Err(Error::Invalid(format!("label {} of {:?} is not 0 or 1", seq.label, seq.id)));
    }
    let hidden = params.hidden;
    let steps = seq.inputs.len();

    // states[t] is the hidden state before step t; states[steps] is h_T
    let mut states: Vec<Vec<f64>> = Vec::with_capacity(steps + 1);
    let mut caches: Vec<StepCache> = Vec::with_capacity(steps);
    states.push(vec![0.0; hidden]);
    for x in &seq.inputs {
        let (h, cache) = step(x, states.last().unwrap(), params);
        states.push(h);
        caches.push(cache);
    }

    let h_final = &states[steps];
    let logits = output_logits(h_final, params);
    let loss = log_sum_exp(logits) - logits[seq.label];
    if !loss.is_finite() {
        return Err(Error::NonFinite(format!("loss on article {:?}", seq.id)));
    }

    let probs = softmax(logits);
    let mut d_logits = probs;
    d_logits[seq.label] -= 1.0;
    grads.w_out.add_outer(h_final, &d_logits);
    for (b, d) in grads.b_out.iter_mut().zip(d_logits) {
        *b += d;
    }
    let mut dh = vec![0.0; hidden];
    params.w_out.add_product(&d_logits, &mut dh);

    let mut d_cand = vec![0.0; hidden];
    let mut d_z = vec![0.0; hidden];
    let mut d_r = vec![0.0; hidden];
    let mut d_gated = vec![0.0; hidden];
    let mut gated = vec![0.0; hidden];
    for t in (0..steps).rev() {
        let x = seq.inputs[t];
        let h_prev = &states[t];
        let StepCache { z, r, candidate } = &caches[t];

        let mut dh_prev = vec![0.0; hidden];
        for j in 0..hidden {
            let dz = dh[j] * (candidate[j] - h_prev[j]);
            d_z[j] = dz * z[j] * (1.0 - z[j]);
            d_cand[j] = dh[j] * z[j] * (1.0 - candidate[j] * candidate[j]);
            dh_prev[j] = dh[j] * (1.0 - z[j]);
            gated[j] = r[j] * h_prev[j];
        }

        grads.w_h.add_outer(x, &d_cand);
        grads.u_h.add_outer(&gated, &d_cand);
        d_gated.iter_mut().for_each(|v| *v = 0.0);
        params.u_h.add_product(&d_cand, &mut d_gated);
        for j in 0..hidden {
            dh_prev[j] += d_gated[j] * r[j];
            d_r[j] = d_gated[j] * h_prev[j] * r[j] * (1.0 - r[j]);
        }

        grads.w_r.add_outer(x, &d_r);
        grads.u_r.add_outer(h_prev, &d_r);
        params.u_r.add_product(&d_r, &mut dh_prev);

        grads.w_z.add_outer(x, &d_z);
        grads.u_z.add_outer(h_prev, &d_z);
        params.u_z.add_product(&d_z, &mut dh_prev);

        for j in 0..hidden {
            grads.b_z[j] += d_z[j];
            grads.b_r[j] += d_r[j];
            grads.b_h[j] += d_cand[j];
        }
        dh = dh_prev;
    }
    Ok(loss)
}

/// Mean cross-entropy over `batch` and its exact gradient, by
/// backpropagation through time over each full sequence.
pub fn loss_and_grads(batch: &[Sequence<'_>], params: &GruParams) -> Result<(f64, GruParams)> {
    if batch.is_empty() {
        return Err(Error::EmptyInput("empty batch"));
    }
    let mut grads = params.zeros_like();
    let mut total = 0.0;
    for seq in batch {
        total += accumulate_sequence(seq, params, &mut grads)?;
    }
    let n = batch.len() as f64;
    grads.scale(1.0 / n);
    Ok((total / n, grads))
}

/// Mean cross-entropy without gradients.
pub fn loss(batch: &[Sequence<'_>], params: &GruParams) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::EmptyInput("empty batch"));
    }
    let mut total = 0.0;
    for seq in batch {
        let h = final_state(&seq.inputs, params)?;
        let logits = output_logits(&h, params);
        let l = log_sum_exp(logits) - logits[seq.label.min(1)];
        if !l.is_finite() {
            return Err(Error::NonFinite(format!("loss on article {:?}", seq.id)));
        }
        total += l;
    }
    Ok(total / batch.len() as f64)
}
