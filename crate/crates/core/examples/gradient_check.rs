//! Compare backpropagation-through-time gradients with central finite
//! differences on a small random GRU.
//!
//!     cargo run --example gradient_check

use biaslens::model::{loss, loss_and_grads, GruParams, Sequence, TENSOR_NAMES};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> anyhow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let params = GruParams::uniform(3, 4, 0.5, &mut rng);
    let rows: Vec<Vec<f64>> = (0..6).map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let batch = [Sequence {
        id: "demo",
        inputs: rows.iter().map(Vec::as_slice).collect(),
        label: 1,
    }];

    let (value, grads) = loss_and_grads(&batch, &params)?;
    println!("loss {value:.6}");
    let h = 1e-5;
    let mut probe = params.clone();
    for (t, name) in TENSOR_NAMES.iter().enumerate() {
        let mut worst = 0.0f64;
        for k in 0..grads.tensors()[t].1.len() {
            let orig = probe.tensors()[t].1[k];
            probe.tensors_mut()[t].1[k] = orig + h;
            let up = loss(&batch, &probe)?;
            probe.tensors_mut()[t].1[k] = orig - h;
            let down = loss(&batch, &probe)?;
            probe.tensors_mut()[t].1[k] = orig;
            let numeric = (up - down) / (2.0 * h);
            let analytic = grads.tensors()[t].1[k];
            worst = worst.max((analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-6));
        }
        println!("{name:<6} max relative error {worst:.2e}");
    }
    Ok(())
}
