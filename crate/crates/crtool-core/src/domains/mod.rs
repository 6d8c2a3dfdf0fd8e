//! Explicit models of the smooth boundary parts `M_I^{m,n}`, `M_II^m`,
//! `M_III^m`, `M_IV^m` and of the tube over the light cone.
//!
//! Points are stored in their natural shape (matrices for I/II/III, column
//! vectors for IV and the tube). Derivatives are taken in flattened free
//! coordinates: all entries for I; the entries above (II) or on and above (III)
//! the diagonal, with off-diagonal entries scaled by √2 so that the standard
//! Hermitian metric on coordinates equals the Frobenius metric on matrices.
//! All defining functions are negative on the domain.

mod defining;
mod point;

pub use defining::{complex_gradient, complex_hessian, defining_value, reduced_defining_value};
pub use point::{is_smooth_boundary_point, sample_boundary_point, BoundaryPoint, Provenance, SMOOTH_MARGIN};

use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    I,
    II,
    III,
    IV,
    Tube,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::I => "I",
            ModelKind::II => "II",
            ModelKind::III => "III",
            ModelKind::IV => "IV",
            ModelKind::Tube => "Tube",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "I" | "i" | "1" => Some(ModelKind::I),
            "II" | "ii" | "2" => Some(ModelKind::II),
            "III" | "iii" | "3" => Some(ModelKind::III),
            "IV" | "iv" | "4" => Some(ModelKind::IV),
            "Tube" | "tube" | "TUBE" => Some(ModelKind::Tube),
            _ => None,
        }
    }
}

/// A model hypersurface together with its dimensions.
///
/// `flat_line` appends one coordinate on which nothing depends (the product
/// `M × ℂ`); it exists for the maximal-ν test fixture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DomainModel {
    kind: ModelKind,
    m: usize,
    n: usize,
    flat_line: bool,
}

impl DomainModel {
    /// `n` is only read for kind I.
    pub fn new(kind: ModelKind, m: usize, n: usize) -> Result<Self> {
        let ok = match kind {
            ModelKind::I => m >= 2 && n >= 2,
            ModelKind::II => m >= 4,
            ModelKind::III | ModelKind::IV => m >= 2,
            ModelKind::Tube => m >= 3,
        };
        if !ok {
            return Err(Error::BadDimensions);
        }
        let n = match kind {
            ModelKind::I => n,
            ModelKind::II | ModelKind::III => m,
            ModelKind::IV | ModelKind::Tube => 1,
        };
        Ok(Self { kind, m, n, flat_line: false })
    }

    /// The unit sphere in `ℂ^n` as the kind I model with one row. It is
    /// strongly pseudoconvex and has no Levi leaves; used as a map source.
    pub fn sphere(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadDimensions);
        }
        Ok(Self { kind: ModelKind::I, m: 1, n, flat_line: false })
    }

    pub fn is_sphere(&self) -> bool {
        self.kind == ModelKind::I && self.m == 1
    }

    /// The product of this model with a complex line.
    pub fn product_with_line(self) -> Self {
        Self { flat_line: true, ..self }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Column count of the ambient matrix (`n` for I, `m` for II/III, 1 for vectors).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_flat_line(&self) -> bool {
        self.flat_line
    }

    /// Model without the flat factor.
    pub fn base(&self) -> Self {
        Self { flat_line: false, ..*self }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    /// Number of free coordinates of the base model.
    pub fn base_dim(&self) -> usize {
        let m = self.m;
        match self.kind {
            ModelKind::I => m * self.n,
            ModelKind::II => m * (m - 1) / 2,
            ModelKind::III => m * (m + 1) / 2,
            ModelKind::IV | ModelKind::Tube => m,
        }
    }

    /// `N′`
    pub fn ambient_dim(&self) -> usize {
        self.base_dim() + usize::from(self.flat_line)
    }

    /// `K`, the complex dimension of the Levi leaves.
    pub fn leaf_dim(&self) -> usize {
        let m = self.m;
        let k = match self.kind {
            ModelKind::I => (m - 1) * (self.n - 1),
            ModelKind::II => (m - 2) * (m - 3) / 2,
            ModelKind::III => m * (m - 1) / 2,
            ModelKind::IV | ModelKind::Tube => 1,
        };
        k + usize::from(self.flat_line)
    }

    /// Expected number of positive Levi eigenvalues.
    pub fn expected_positive(&self) -> usize {
        let m = self.m;
        match self.kind {
            ModelKind::I => m + self.n - 2,
            ModelKind::II => 2 * m - 4,
            ModelKind::III => m - 1,
            ModelKind::IV | ModelKind::Tube => m - 2,
        }
    }

    /// Closed-form ν at leaf base points.
    pub fn expected_nu(&self) -> usize {
        if self.flat_line {
            return self.expected_positive();
        }
        let m = self.m;
        match self.kind {
            ModelKind::I if m == 1 => 0,
            ModelKind::I => m + self.n - 4,
            ModelKind::II => 2 * m - 8,
            ModelKind::III => m - 2,
            ModelKind::IV | ModelKind::Tube => 0,
        }
    }

    pub fn is_vector_model(&self) -> bool {
        matches!(self.kind, ModelKind::IV | ModelKind::Tube)
    }

    /// Free coordinates of a base-model ambient matrix. Symmetry of II/III is
    /// imposed by reading only the upper triangle.
    pub fn coords_of(&self, z: &ComplexMatrix) -> Result<Vec<C64>> {
        if z.shape() != self.shape() {
            return Err(Error::ShapeMismatch);
        }
        let s2 = core::f64::consts::SQRT_2;
        let m = self.m;
        Ok(match self.kind {
            ModelKind::I | ModelKind::IV | ModelKind::Tube => z.as_slice().to_vec(),
            ModelKind::II => {
                let mut w = Vec::with_capacity(self.base_dim());
                for i in 0..m {
                    for j in i + 1..m {
                        w.push(z[(i, j)] * s2);
                    }
                }
                w
            }
            ModelKind::III => {
                let mut w = Vec::with_capacity(self.base_dim());
                for i in 0..m {
                    for j in i..m {
                        w.push(if i == j { z[(i, j)] } else { z[(i, j)] * s2 });
                    }
                }
                w
            }
        })
    }

    /// Inverse of [`coords_of`](Self::coords_of) on the base coordinates.
    pub fn matrix_of(&self, w: &[C64]) -> Result<ComplexMatrix> {
        if w.len() < self.base_dim() {
            return Err(Error::ShapeMismatch);
        }
        let s2 = core::f64::consts::FRAC_1_SQRT_2;
        let m = self.m;
        Ok(match self.kind {
            ModelKind::I | ModelKind::IV | ModelKind::Tube => {
                ComplexMatrix::from_row_major(self.m, self.n, w[..self.base_dim()].to_vec())?
            }
            ModelKind::II => {
                let mut z = ComplexMatrix::zeros(m, m);
                let mut k = 0;
                for i in 0..m {
                    for j in i + 1..m {
                        z[(i, j)] = w[k] * s2;
                        z[(j, i)] = -w[k] * s2;
                        k += 1;
                    }
                }
                z
            }
            ModelKind::III => {
                let mut z = ComplexMatrix::zeros(m, m);
                let mut k = 0;
                for i in 0..m {
                    for j in i..m {
                        let x = if i == j { w[k] } else { w[k] * s2 };
                        z[(i, j)] = x;
                        z[(j, i)] = x;
                        k += 1;
                    }
                }
                z
            }
        })
    }

    /// Flattened coordinates of a base ambient matrix plus the optional flat coordinate.
    pub fn full_coords(&self, z: &ComplexMatrix, extra: Option<C64>) -> Result<Vec<C64>> {
        let mut w = self.coords_of(z)?;
        if self.flat_line {
            w.push(extra.unwrap_or(C64::new(0.0, 0.0)));
        }
        Ok(w)
    }

    /// Checks the exact symmetry type demanded by the model.
    pub fn check_symmetry(&self, z: &ComplexMatrix) -> Result<()> {
        if z.shape() != self.shape() {
            return Err(Error::ShapeMismatch);
        }
        let m = self.m;
        let ok = match self.kind {
            ModelKind::II => (0..m).all(|i| (0..m).all(|j| z[(i, j)] == -z[(j, i)])),
            ModelKind::III => (0..m).all(|i| (0..m).all(|j| z[(i, j)] == z[(j, i)])),
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ShapeMismatch)
        }
    }
}
