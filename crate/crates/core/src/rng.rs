//! Seeded random generation for sampling-based checks.
//!
//! The generator is fixed so instances can be reproduced from the seed alone,
//! in any implementation:
//!
//! * stream: SplitMix64 — `state += 0x9E3779B97F4A7C15`, output
//!   `z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//!   z = (z ^ (z >> 27)) * 0x94D049BB133111EB; z ^ (z >> 31)`;
//! * uniforms: `(output >> 11) as f64 * 2^-53`, shifted into `(0, 1]` for
//!   logarithms;
//! * normals: Box-Muller, `sqrt(-2 ln u1) * (cos, sin)(2 pi u2)`, consumed
//!   in pairs;
//! * complex Gaussian matrices: row-major entry order, each entry
//!   `g1 + i g2` from one Box-Muller pair.
//!
//! Sub-generators for parallel sampling derive from `(seed, index)` by
//! seeding SplitMix64 with `seed + (index + 1) * 0x9E3779B97F4A7C15`.

use ndarray::Array2;
use num_complex::Complex64;

const GAMMA: u64 = 0x9E3779B97F4A7C15;

/// SplitMix64 stream (Steele, Lea, Flood 2014).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Deterministic sub-stream for sample `index`.
    pub fn fork(seed: u64, index: u64) -> Self {
        SplitMix64::new(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in `(0, 1]` (strictly positive, safe under `ln`).
    pub fn next_unit_open(&mut self) -> f64 {
        (((self.next_u64() >> 11) + 1) as f64) * (1.0 / 9007199254740992.0)
    }

    /// One Box-Muller pair of independent standard normals.
    pub fn next_normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_unit_open();
        let u2 = self.next_unit_open();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        (radius * angle.cos(), radius * angle.sin())
    }

    /// Complex standard Gaussian matrix, entries in row-major order.
    pub fn complex_gaussian_matrix(&mut self, rows: usize, cols: usize) -> Array2<Complex64> {
        let data: Vec<Complex64> = (0..rows * cols)
            .map(|_| {
                let (re, im) = self.next_normal_pair();
                Complex64::new(re, im)
            })
            .collect();
        Array2::from_shape_vec((rows, cols), data).expect("shape")
    }

    /// Complex Gaussian matrix normalized to unit Frobenius norm; diagonal
    /// support only when `diagonal` is set. Returns `None` for the
    /// measure-zero event of an exactly zero draw.
    pub fn unit_frobenius_matrix(
        &mut self,
        rows: usize,
        cols: usize,
        diagonal: bool,
    ) -> Option<Array2<Complex64>> {
        let mut mat = if diagonal {
            let mut m = Array2::zeros((rows, cols));
            for i in 0..rows.min(cols) {
                let (re, im) = self.next_normal_pair();
                m[(i, i)] = Complex64::new(re, im);
            }
            m
        } else {
            self.complex_gaussian_matrix(rows, cols)
        };
        let norm = mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return None;
        }
        mat.mapv_inplace(|z| z / norm);
        Some(mat)
    }
}
