#![allow(dead_code, clippy::needless_range_loop)]

use biaslens::model::{loss, loss_and_grads, GruParams, Sequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Straight-line GRU written from the update equations, indexing weights
/// one entry at a time.
pub fn scalar_forward(inputs: &[Vec<f64>], p: &GruParams) -> [f64; 2] {
    let (d, n) = (p.input_dim, p.hidden);
    let mut h = vec![0.0; n];
    for x in inputs {
        let mut z = vec![0.0; n];
        let mut r = vec![0.0; n];
        for j in 0..n {
            let mut az = p.b_z[j];
            let mut ar = p.b_r[j];
            for i in 0..d {
                az += p.w_z.get(i, j) * x[i];
                ar += p.w_r.get(i, j) * x[i];
            }
            for k in 0..n {
                az += p.u_z.get(k, j) * h[k];
                ar += p.u_r.get(k, j) * h[k];
            }
            z[j] = sigmoid(az);
            r[j] = sigmoid(ar);
        }
        let mut next = vec![0.0; n];
        for j in 0..n {
            let mut ah = p.b_h[j];
            for i in 0..d {
                ah += p.w_h.get(i, j) * x[i];
            }
            for k in 0..n {
                ah += p.u_h.get(k, j) * r[k] * h[k];
            }
            next[j] = (1.0 - z[j]) * h[j] + z[j] * ah.tanh();
        }
        h = next;
    }
    let mut logits = [p.b_out[0], p.b_out[1]];
    for (c, l) in logits.iter_mut().enumerate() {
        for j in 0..n {
            *l += p.w_out.get(j, c) * h[j];
        }
    }
    let m = logits[0].max(logits[1]);
    let e = [(logits[0] - m).exp(), (logits[1] - m).exp()];
    [e[0] / (e[0] + e[1]), e[1] / (e[0] + e[1])]
}

pub struct Instance {
    pub params: GruParams,
    pub inputs: Vec<Vec<Vec<f64>>>,
    pub labels: Vec<usize>,
}

/// A small random batch: 1-3 sequences of length 1-8.
pub fn random_instance(seed: u64, input_dim: usize, hidden: usize, scale: f64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = GruParams::uniform(input_dim, hidden, scale, &mut rng);
    let batch = rng.gen_range(1..=3);
    let mut inputs = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..batch {
        let len = rng.gen_range(1..=8);
        inputs.push((0..len).map(|_| (0..input_dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect());
        labels.push(rng.gen_range(0..2));
    }
    Instance { params, inputs, labels }
}

impl Instance {
    pub fn batch(&self) -> Vec<Sequence<'_>> {
        self.inputs
            .iter()
            .zip(&self.labels)
            .map(|(seq, &label)| Sequence {
                id: "x",
                inputs: seq.iter().map(Vec::as_slice).collect(),
                label,
            })
            .collect()
    }
}

/// Largest relative gap between analytic and central-difference gradients
/// over every parameter. Relative error is `|a - n| / max(|a|, |n|, floor)`.
pub fn max_gradient_error(inst: &Instance, step: f64, floor: f64) -> f64 {
    let batch = inst.batch();
    let (_, grads) = loss_and_grads(&batch, &inst.params).unwrap();
    let analytic: Vec<Vec<f64>> = grads.tensors().iter().map(|(_, t)| t.to_vec()).collect();
    let mut worst = 0.0f64;
    let mut p = inst.params.clone();
    for (ti, grad) in analytic.iter().enumerate() {
        for k in 0..grad.len() {
            let orig = p.tensors()[ti].1[k];
            p.tensors_mut()[ti].1[k] = orig + step;
            let up = loss(&batch, &p).unwrap();
            p.tensors_mut()[ti].1[k] = orig - step;
            let down = loss(&batch, &p).unwrap();
            p.tensors_mut()[ti].1[k] = orig;
            let numeric = (up - down) / (2.0 * step);
            let a = grad[k];
            let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(floor);
            worst = worst.max(rel);
        }
    }
    worst
}
