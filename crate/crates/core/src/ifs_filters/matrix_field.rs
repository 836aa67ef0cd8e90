use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cmatrix::max_entry;
use crate::code_space::{CylinderFn, IfsSpec, C64};
use crate::error::{input, Result, WavelabError};

/// An `N×N` matrix of cylinder functions, i.e. a matrix-valued function on
/// the code space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FieldRepr", into = "FieldRepr")]
pub struct MatrixField {
    spec: IfsSpec,
    entries: Vec<Vec<CylinderFn>>,
}

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    spec: IfsSpec,
    entries: Vec<Vec<CylinderFn>>,
}

impl TryFrom<FieldRepr> for MatrixField {
    type Error = WavelabError;
    fn try_from(r: FieldRepr) -> Result<Self> {
        MatrixField::new(&r.spec, r.entries)
    }
}

impl From<MatrixField> for FieldRepr {
    fn from(m: MatrixField) -> Self {
        FieldRepr {
            spec: m.spec,
            entries: m.entries,
        }
    }
}

impl MatrixField {
    pub fn new(spec: &IfsSpec, entries: Vec<Vec<CylinderFn>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|row| row.len() != n) {
            return input("matrix field must be square and nonempty");
        }
        if entries.iter().flatten().any(|e| e.spec() != spec) {
            return input("matrix entries must share the code space");
        }
        if entries.iter().flatten().any(|e| {
            e.values()
                .iter()
                .any(|v| !v.re.is_finite() || !v.im.is_finite())
        }) {
            return input("matrix entries must be finite");
        }
        Ok(Self {
            spec: spec.clone(),
            entries,
        })
    }

    /// A field that takes the same matrix value everywhere.
    pub fn constant(spec: &IfsSpec, value: &DMatrix<C64>) -> Result<Self> {
        if !value.is_square() {
            return input("constant matrix must be square");
        }
        let entries = (0..value.nrows())
            .map(|j| {
                (0..value.ncols())
                    .map(|k| CylinderFn::constant(spec, value[(j, k)]))
                    .collect()
            })
            .collect();
        Self::new(spec, entries)
    }

    pub fn identity(spec: &IfsSpec, n: usize) -> Result<Self> {
        Self::constant(spec, &DMatrix::identity(n, n))
    }

    pub fn spec(&self) -> &IfsSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, j: usize, k: usize) -> &CylinderFn {
        &self.entries[j][k]
    }

    pub fn entries(&self) -> &[Vec<CylinderFn>] {
        &self.entries
    }

    /// Largest entry depth.
    pub fn depth(&self) -> usize {
        self.entries
            .iter()
            .flatten()
            .map(CylinderFn::depth)
            .max()
            .unwrap_or(0)
    }

    /// The matrix value on every word of length `self.depth()`, in canonical order.
    pub fn pointwise(&self) -> Result<Vec<DMatrix<C64>>> {
        let depth = self.depth();
        let n = self.dim();
        let lifted = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.lift(depth))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let cells = self.spec.cells(depth)?;
        Ok((0..cells)
            .map(|x| DMatrix::from_fn(n, n, |j, k| lifted[j][k].values()[x]))
            .collect())
    }

    /// Pointwise matrix product.
    pub fn mul(&self, other: &MatrixField) -> Result<MatrixField> {
        if self.dim() != other.dim() {
            return input("matrix fields of different sizes");
        }
        let n = self.dim();
        let mut entries = Vec::with_capacity(n);
        for j in 0..n {
            let mut row = Vec::with_capacity(n);
            for k in 0..n {
                let mut acc = self.entries[j][0].multiply(&other.entries[0][k])?;
                for l in 1..n {
                    acc = acc.add(&self.entries[j][l].multiply(&other.entries[l][k])?)?;
                }
                row.push(acc);
            }
            entries.push(row);
        }
        MatrixField::new(&self.spec, entries)
    }

    /// Pointwise conjugate transpose.
    pub fn adjoint(&self) -> MatrixField {
        let n = self.dim();
        let entries = (0..n)
            .map(|j| (0..n).map(|k| self.entries[k][j].conj()).collect())
            .collect();
        MatrixField {
            spec: self.spec.clone(),
            entries,
        }
    }

    /// `max_x ‖U(x)* U(x) − I‖` (largest entry modulus).
    pub fn unitarity_residual(&self) -> Result<f64> {
        let n = self.dim();
        let id = DMatrix::<C64>::identity(n, n);
        Ok(self
            .pointwise()?
            .iter()
            .map(|u| max_entry(&(u.adjoint() * u - &id)))
            .fold(0.0, f64::max))
    }

    /// Largest entrywise sup distance to another field.
    pub fn distance(&self, other: &MatrixField) -> Result<f64> {
        if self.dim() != other.dim() {
            return input("matrix fields of different sizes");
        }
        let mut d: f64 = 0.0;
        for (ra, rb) in self.entries.iter().zip(&other.entries) {
            for (a, b) in ra.iter().zip(rb) {
                d = d.max(a.sup_distance(b)?);
            }
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_unitary_and_neutral() {
        let s = IfsSpec::uniform(3).unwrap();
        let id = MatrixField::identity(&s, 3).unwrap();
        assert_eq!(id.unitarity_residual().unwrap(), 0.0);
        let f = CylinderFn::from_real(&s, 1, &[1.0, 2.0, 3.0]).unwrap();
        let z = CylinderFn::zeros(&s, 0).unwrap();
        let u = MatrixField::new(
            &s,
            vec![
                vec![f.clone(), z.clone(), z.clone()],
                vec![z.clone(), f.clone(), z.clone()],
                vec![z.clone(), z, f],
            ],
        )
        .unwrap();
        assert_eq!(u.mul(&id).unwrap().distance(&u).unwrap(), 0.0);
        assert!(u.unitarity_residual().unwrap() > 1.0);
    }

    #[test]
    fn rejects_ragged_and_nonfinite() {
        let s = IfsSpec::uniform(2).unwrap();
        let one = CylinderFn::one(&s);
        assert!(
            MatrixField::new(&s, vec![vec![one.clone(), one.clone()], vec![one.clone()]]).is_err()
        );
        let nan = CylinderFn::constant(&s, C64::new(f64::NAN, 0.0));
        assert!(MatrixField::new(&s, vec![vec![nan]]).is_err());
    }
}
