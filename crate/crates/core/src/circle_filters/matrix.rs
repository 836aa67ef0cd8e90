use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;

use crate::cmatrix::max_entry;
use crate::code_space::C64;
use crate::error::Result;

use super::{Convention, LaurentPoly};

/// Default number of unit-circle sample points.
pub const DEFAULT_GRID: usize = 256;

/// Default tolerance for grid checks.
pub const DEFAULT_GRID_TOL: f64 = 1e-12;

/// A square-matrix-valued function of one complex variable.
pub trait MatrixFunction {
    fn dim(&self) -> usize;
    fn eval(&self, z: C64) -> DMatrix<C64>;
}

impl<T: MatrixFunction + ?Sized> MatrixFunction for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, z: C64) -> DMatrix<C64> {
        (**self).eval(z)
    }
}

impl<T: MatrixFunction + ?Sized> MatrixFunction for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, z: C64) -> DMatrix<C64> {
        (**self).eval(z)
    }
}

/// Angles `2πg/points`, `g = 0..points`.
pub fn unit_circle_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|g| 2.0 * PI * g as f64 / points as f64)
        .collect()
}

/// One residual per grid angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub angles: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max: f64,
}

impl GridReport {
    fn from_fn(angles: &[f64], f: impl Fn(C64) -> f64) -> Self {
        let residuals: Vec<f64> = angles.iter().map(|&t| f(C64::from_polar(1.0, t))).collect();
        let max = residuals.iter().copied().fold(0.0, f64::max);
        Self {
            angles: angles.to_vec(),
            residuals,
            max,
        }
    }

    /// `angle,residual` lines with a header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["angle", "residual"])?;
        for (a, r) in self.angles.iter().zip(&self.residuals) {
            w.write_record([format!("{a:.17e}"), format!("{r:.17e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `max |M(z)* M(z) − I|` on the grid.
pub fn unitarity_residual(m: &impl MatrixFunction, angles: &[f64]) -> GridReport {
    let id = DMatrix::<C64>::identity(m.dim(), m.dim());
    GridReport::from_fn(angles, |z| {
        let v = m.eval(z);
        max_entry(&(v.adjoint() * &v - &id))
    })
}

/// `max |U(εz) − U(z)|` with `ε = e^{2πi/N}`.
pub fn periodicity_residual(u: &impl MatrixFunction, n: usize, angles: &[f64]) -> GridReport {
    let eps = C64::from_polar(1.0, 2.0 * PI / n as f64);
    GridReport::from_fn(angles, |z| max_entry(&(u.eval(eps * z) - u.eval(z))))
}

/// The cyclic permutation `[[0, 1], [I_{N−1}, 0]]`.
pub fn cyclic_permutation(n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |r, c| {
        let hit = (r == 0 && c == n - 1) || (r >= 1 && c == r - 1);
        C64::new(if hit { 1.0 } else { 0.0 }, 0.0)
    })
}

/// `max |M(εz) − M(z) Π|` with `Π` from [`cyclic_permutation`].
pub fn shift_relation_residual(m: &impl MatrixFunction, angles: &[f64]) -> GridReport {
    let n = m.dim();
    let eps = C64::from_polar(1.0, 2.0 * PI / n as f64);
    let pi = cyclic_permutation(n);
    GridReport::from_fn(angles, |z| max_entry(&(m.eval(eps * z) - m.eval(z) * &pi)))
}

/// A square matrix of Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyMatrix {
    pub entries: Vec<Vec<LaurentPoly>>,
}

impl MatrixFunction for PolyMatrix {
    fn dim(&self) -> usize {
        self.entries.len()
    }
    fn eval(&self, z: C64) -> DMatrix<C64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |r, c| self.entries[r][c].eval(z))
    }
}

/// `M(z)_{jk} = s · m_j(ε^k z)`, `k = 0..N`, with `s = 1/√N` for averaged
/// filters and `s = 1` for unit-sum filters.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterMatrix {
    filters: Vec<LaurentPoly>,
    scale: f64,
}

impl FilterMatrix {
    pub fn filters(&self) -> &[LaurentPoly] {
        &self.filters
    }
}

impl MatrixFunction for FilterMatrix {
    fn dim(&self) -> usize {
        self.filters.len()
    }
    fn eval(&self, z: C64) -> DMatrix<C64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |j, k| {
            let w = C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64) * z;
            self.filters[j].eval(w) * self.scale
        })
    }
}

pub fn build_m_matrix(filters: &[LaurentPoly], convention: Convention) -> FilterMatrix {
    let n = filters.len();
    let scale = match convention {
        Convention::Averaged => 1.0 / (n as f64).sqrt(),
        Convention::UnitSum => 1.0,
    };
    FilterMatrix {
        filters: filters.to_vec(),
        scale,
    }
}
