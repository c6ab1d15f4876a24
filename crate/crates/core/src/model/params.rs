use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of output classes (0 = unbiased, 1 = biased).
pub const OUTPUT_CLASSES: usize = 2;
/// Default recurrent state size.
pub const HIDDEN_SIZE: usize = 32;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    /// `out += selfᵀ · x`, with `x.len() == rows` and `out.len() == cols`.
    #[inline]
    pub fn add_transposed_product(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols);
        for (row, &xi) in self.data.chunks_exact(self.cols).zip(x) {
            if xi == 0.0 {
                continue;
            }
            for (o, &w) in out.iter_mut().zip(row) {
                *o += w * xi;
            }
        }
    }

    /// `out += self · v`, with `v.len() == cols` and `out.len() == rows`.
    #[inline]
    pub fn add_product(&self, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (row, o) in self.data.chunks_exact(self.cols).zip(out.iter_mut()) {
            *o += row.iter().zip(v).map(|(w, x)| w * x).sum::<f64>();
        }
    }

    /// `self += a ⊗ b`.
    #[inline]
    pub fn add_outer(&mut self, a: &[f64], b: &[f64]) {
        debug_assert_eq!(a.len(), self.rows);
        debug_assert_eq!(b.len(), self.cols);
        for (row, &ai) in self.data.chunks_exact_mut(self.cols).zip(a) {
            if ai == 0.0 {
                continue;
            }
            for (w, &bj) in row.iter_mut().zip(b) {
                *w += ai * bj;
            }
        }
    }
}

/// GRU classifier weights.
///
/// Input weights are `input_dim × hidden`, recurrent weights
/// `hidden × hidden`, the output layer `hidden × 2`. Gradients and Adam
/// moments reuse this type.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GruParams {
    pub input_dim: usize,
    pub hidden: usize,
    pub w_z: Matrix,
    pub w_r: Matrix,
    pub w_h: Matrix,
    pub u_z: Matrix,
    pub u_r: Matrix,
    pub u_h: Matrix,
    pub b_z: Vec<f64>,
    pub b_r: Vec<f64>,
    pub b_h: Vec<f64>,
    pub w_out: Matrix,
    pub b_out: Vec<f64>,
}

/// Tensor names in storage order.
pub const TENSOR_NAMES: [&str; 11] = [
    "w_z", "w_r", "w_h", "u_z", "u_r", "u_h", "b_z", "b_r", "b_h", "w_out", "b_out",
];

impl GruParams {
    pub fn zeros(input_dim: usize, hidden: usize) -> Self {
        Self {
            input_dim,
            hidden,
            w_z: Matrix::zeros(input_dim, hidden),
            w_r: Matrix::zeros(input_dim, hidden),
            w_h: Matrix::zeros(input_dim, hidden),
            u_z: Matrix::zeros(hidden, hidden),
            u_r: Matrix::zeros(hidden, hidden),
            u_h: Matrix::zeros(hidden, hidden),
            b_z: vec![0.0; hidden],
            b_r: vec![0.0; hidden],
            b_h: vec![0.0; hidden],
            w_out: Matrix::zeros(hidden, OUTPUT_CLASSES),
            b_out: vec![0.0; OUTPUT_CLASSES],
        }
    }

    /// Every entry drawn uniformly from `[-scale, scale]`, tensors filled in
    /// storage order.
    pub fn uniform<R: Rng + ?Sized>(input_dim: usize, hidden: usize, scale: f64, rng: &mut R) -> Self {
        let mut p = Self::zeros(input_dim, hidden);
        for (_, t) in p.tensors_mut() {
            for v in t.iter_mut() {
                *v = rng.gen_range(-scale..=scale);
            }
        }
        p
    }

    pub fn zeros_like(&self) -> Self {
        Self::zeros(self.input_dim, self.hidden)
    }

    pub fn tensors(&self) -> [(&'static str, &[f64]); 11] {
        [
            ("w_z", &self.w_z.data),
            ("w_r", &self.w_r.data),
            ("w_h", &self.w_h.data),
            ("u_z", &self.u_z.data),
            ("u_r", &self.u_r.data),
            ("u_h", &self.u_h.data),
            ("b_z", &self.b_z),
            ("b_r", &self.b_r),
            ("b_h", &self.b_h),
            ("w_out", &self.w_out.data),
            ("b_out", &self.b_out),
        ]
    }

    pub fn tensors_mut(&mut self) -> [(&'static str, &mut [f64]); 11] {
        [
            ("w_z", &mut self.w_z.data),
            ("w_r", &mut self.w_r.data),
            ("w_h", &mut self.w_h.data),
            ("u_z", &mut self.u_z.data),
            ("u_r", &mut self.u_r.data),
            ("u_h", &mut self.u_h.data),
            ("b_z", &mut self.b_z),
            ("b_r", &mut self.b_r),
            ("b_h", &mut self.b_h),
            ("w_out", &mut self.w_out.data),
            ("b_out", &mut self.b_out),
        ]
    }

    pub fn num_params(&self) -> usize {
        self.tensors().iter().map(|(_, t)| t.len()).sum()
    }

    pub fn same_shape(&self, other: &GruParams) -> bool {
        self.input_dim == other.input_dim && self.hidden == other.hidden
    }

    /// Check every tensor's shape against `input_dim`/`hidden` and that all
    /// entries are finite.
    pub fn validate(&self) -> Result<()> {
        let (i, h) = (self.input_dim, self.hidden);
        let mats = [
            ("w_z", &self.w_z, i, h),
            ("w_r", &self.w_r, i, h),
            ("w_h", &self.w_h, i, h),
            ("u_z", &self.u_z, h, h),
            ("u_r", &self.u_r, h, h),
            ("u_h", &self.u_h, h, h),
            ("w_out", &self.w_out, h, OUTPUT_CLASSES),
        ];
        for (name, m, rows, cols) in mats {
            if m.rows != rows || m.cols != cols || m.data.len() != rows * cols {
                return Err(Error::Shape(format!(
                    "{name} is {}x{} ({} values), expected {rows}x{cols}",
                    m.rows,
                    m.cols,
                    m.data.len()
                )));
            }
        }
        for (name, v, len) in [
            ("b_z", &self.b_z, h),
            ("b_r", &self.b_r, h),
            ("b_h", &self.b_h, h),
            ("b_out", &self.b_out, OUTPUT_CLASSES),
        ] {
            if v.len() != len {
                return Err(Error::Shape(format!("{name} has {} values, expected {len}", v.len())));
            }
        }
        for (name, t) in self.tensors() {
            if t.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("parameter tensor {name}")));
            }
        }
        Ok(())
    }

    /// `self *= factor`, entry-wise.
    pub fn scale(&mut self, factor: f64) {
        for (_, t) in self.tensors_mut() {
            t.iter_mut().for_each(|v| *v *= factor);
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.tensors()
            .iter()
            .flat_map(|(_, t)| t.iter())
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shapes_and_counts() {
        let p = GruParams::zeros(50, 32);
        assert_eq!(p.num_params(), 3 * 50 * 32 + 3 * 32 * 32 + 3 * 32 + 32 * 2 + 2);
        p.validate().unwrap();
        let names: Vec<_> = p.tensors().iter().map(|(n, _)| *n).collect();
        assert_eq!(names, TENSOR_NAMES);
    }

    #[test]
    fn uniform_init_is_bounded_and_seeded() {
        let a = GruParams::uniform(5, 4, 0.08, &mut ChaCha8Rng::seed_from_u64(1));
        let b = GruParams::uniform(5, 4, 0.08, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(a, b);
        assert!(a.tensors().iter().flat_map(|(_, t)| t.iter()).all(|v| v.abs() <= 0.08));
    }

    #[test]
    fn validate_catches_bad_shapes_and_values() {
        let mut p = GruParams::zeros(3, 2);
        p.b_r.push(0.0);
        assert!(matches!(p.validate(), Err(Error::Shape(_))));
        let mut p = GruParams::zeros(3, 2);
        p.u_h.data[1] = f64::NAN;
        assert!(matches!(p.validate(), Err(Error::NonFinite(_))));
    }

    #[test]
    fn matrix_products() {
        // 2x3
        let m = Matrix {
            rows: 2,
            cols: 3,
            data: vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
        };
        let mut out = vec![0.0; 3];
        m.add_transposed_product(&[1.0, -1.0], &mut out);
        assert_eq!(out, vec![-3.0, -3.0, -3.0]);
        let mut out = vec![1.0; 2];
        m.add_product(&[1.0, 0.0, 1.0], &mut out);
        assert_eq!(out, vec![5.0, 11.0]);
        let mut z = Matrix::zeros(2, 3);
        z.add_outer(&[1.0, 2.0], &[1.0, 0.0, -1.0]);
        assert_eq!(z.data, vec![1.0, 0.0, -1.0, 2.0, 0.0, -2.0]);
    }
}
