use serde::{Deserialize, Serialize};

use super::params::GruParams;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.001,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// First and second moment accumulators, shaped like the parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: GruParams,
    pub v: GruParams,
    pub step_count: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamState {
    pub fn new(params: &GruParams, config: &AdamConfig) -> Self {
        Self {
            m: params.zeros_like(),
            v: params.zeros_like(),
            step_count: 0,
            beta1: config.beta1,
            beta2: config.beta2,
            epsilon: config.epsilon,
        }
    }
}

/// One bias-corrected Adam update, in place.
pub fn adam_step(params: &mut GruParams, grads: &GruParams, state: &mut AdamState, lr: f64) -> Result<()> {
    if !params.same_shape(grads) || !params.same_shape(&state.m) || !params.same_shape(&state.v) {
        return Err(Error::Shape(format!(
            "adam_step: params {}x{}, grads {}x{}, moments {}x{}",
            params.input_dim, params.hidden, grads.input_dim, grads.hidden, state.m.input_dim, state.m.hidden
        )));
    }
    state.step_count += 1;
    let t = state.step_count as i32;
    let (b1, b2, eps) = (state.beta1, state.beta2, state.epsilon);
    let bc1 = 1.0 - b1.powi(t);
    let bc2 = 1.0 - b2.powi(t);

    let grads = grads.tensors();
    let m = state.m.tensors_mut();
    let v = state.v.tensors_mut();
    for ((((_, theta), (_, g)), (_, m)), (_, v)) in params.tensors_mut().into_iter().zip(grads).zip(m).zip(v) {
        if theta.len() != g.len() {
            return Err(Error::Shape("tensor length mismatch".into()));
        }
        for i in 0..theta.len() {
            m[i] = b1 * m[i] + (1.0 - b1) * g[i];
            v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
            let m_hat = m[i] / bc1;
            let v_hat = v[i] / bc2;
            theta[i] -= lr * m_hat / (v_hat.sqrt() + eps);
        }
    }
    Ok(())
}
