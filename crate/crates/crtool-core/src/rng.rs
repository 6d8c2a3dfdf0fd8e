use alloc::vec::Vec;

use num_complex::Complex64 as C64;
#[allow(unused_imports)] // float methods for no_std builds
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numerics::{orthonormalize, ComplexMatrix};

/// Seeded generator used by every sampler in the crate.
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn uniform(&mut self) -> f64 {
        self.0.random::<f64>()
    }

    pub fn normal(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }

    /// Standard complex Gaussian (unit variance).
    pub fn complex_normal(&mut self) -> C64 {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        C64::new(self.normal() * s, self.normal() * s)
    }

    pub fn complex_vec(&mut self, n: usize) -> Vec<C64> {
        (0..n).map(|_| self.complex_normal()).collect()
    }

    pub fn unit_vector(&mut self, n: usize) -> Vec<C64> {
        loop {
            let v = self.complex_vec(n);
            let nv = crate::numerics::norm(&v);
            if nv > 1e-8 {
                return v.iter().map(|z| z / nv).collect();
            }
        }
    }

    pub fn real_unit_vector(&mut self, n: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..n).map(|_| self.normal()).collect();
            let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nv > 1e-8 {
                return v.iter().map(|x| x / nv).collect();
            }
        }
    }

    /// Random unitary matrix: one Gram–Schmidt pass over Gaussian columns.
    pub fn unitary(&mut self, n: usize) -> ComplexMatrix {
        loop {
            let cols: Vec<Vec<C64>> = (0..n).map(|_| self.complex_vec(n)).collect();
            let q = orthonormalize(&cols, 1e-6);
            if q.len() == n {
                return ComplexMatrix::from_columns(n, &q);
            }
        }
    }

    pub fn complex_matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }
}
