//! Kernel conditions on finite, σ-invariant point sets.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::cmatrix::{self, max_entry};
use crate::code_space::C64;
use crate::error::{input, Result, WavelabError};

pub const HERMITIAN_TOL: f64 = 1e-13;
pub const PSD_TOL: f64 = 1e-10;

/// Points `z_i` with an index map `σ(i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PointRepr", into = "PointRepr")]
pub struct FinitePointSet {
    points: Vec<C64>,
    sigma: Vec<usize>,
    preimages: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    points: Vec<C64>,
    sigma: Vec<usize>,
}

impl TryFrom<PointRepr> for FinitePointSet {
    type Error = WavelabError;
    fn try_from(r: PointRepr) -> Result<Self> {
        FinitePointSet::new(r.points, r.sigma)
    }
}

impl From<FinitePointSet> for PointRepr {
    fn from(p: FinitePointSet) -> Self {
        PointRepr {
            points: p.points,
            sigma: p.sigma,
        }
    }
}

impl FinitePointSet {
    pub fn new(points: Vec<C64>, sigma: Vec<usize>) -> Result<Self> {
        if points.is_empty() {
            return input("point set is empty");
        }
        if sigma.len() != points.len() {
            return input("sigma must have one entry per point");
        }
        if let Some(&bad) = sigma.iter().find(|&&s| s >= points.len()) {
            return input(format!("sigma maps to index {bad} outside the point set"));
        }
        let mut preimages = vec![Vec::new(); points.len()];
        for (i, &s) in sigma.iter().enumerate() {
            preimages[s].push(i);
        }
        Ok(Self {
            points,
            sigma,
            preimages,
        })
    }

    /// Closes `seeds` under `map`; an image within `snap` of a known point is
    /// identified with it.
    pub fn orbit_closure(
        seeds: &[C64],
        map: impl Fn(C64) -> C64,
        snap: f64,
        max_points: usize,
    ) -> Result<Self> {
        let mut points: Vec<C64> = Vec::new();
        let mut sigma: Vec<Option<usize>> = Vec::new();
        let find = |pts: &[C64], z: C64| pts.iter().position(|p| (p - z).norm() <= snap);
        for &s in seeds {
            if find(&points, s).is_none() {
                points.push(s);
                sigma.push(None);
            }
        }
        let mut i = 0;
        while i < points.len() {
            let image = map(points[i]);
            if !image.re.is_finite() || !image.im.is_finite() {
                return Err(WavelabError::Domain(format!(
                    "map is not finite at {}",
                    points[i]
                )));
            }
            let j = match find(&points, image) {
                Some(j) => j,
                None => {
                    if points.len() == max_points {
                        return Err(WavelabError::Domain(format!(
                            "orbit closure exceeds {max_points} points"
                        )));
                    }
                    points.push(image);
                    sigma.push(None);
                    points.len() - 1
                }
            };
            sigma[i] = Some(j);
            i += 1;
        }
        Self::new(
            points,
            sigma
                .into_iter()
                .map(|s| s.expect("every point was mapped"))
                .collect(),
        )
    }

    /// `z ↦ z²` orbits of `r e^{iθ}` seeds, closed at the fixed point `0`.
    pub fn squaring_grid(seeds: &[C64]) -> Result<Self> {
        let mut all = vec![C64::new(0.0, 0.0)];
        all.extend_from_slice(seeds);
        Self::orbit_closure(&all, |z| z * z, 1e-15, 4096)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn preimages(&self, i: usize) -> &[usize] {
        &self.preimages[i]
    }

    /// Steps until the orbit of `i` hits a fixed point, if it does.
    pub fn steps_to_fixed_point(&self, i: usize) -> Option<usize> {
        let mut j = i;
        for step in 0..=self.len() {
            if self.sigma[j] == j {
                return Some(step);
            }
            j = self.sigma[j];
        }
        None
    }

    /// Evaluates `f` at every point.
    pub fn sample(&self, f: impl Fn(C64) -> C64) -> Vec<C64> {
        self.points.iter().map(|&z| f(z)).collect()
    }
}

/// A Hermitian kernel matrix on a point set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KernelRepr", into = "KernelRepr")]
pub struct KernelMatrix {
    k: DMatrix<C64>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct KernelRepr(#[serde(with = "cmatrix")] DMatrix<C64>);

impl TryFrom<KernelRepr> for KernelMatrix {
    type Error = WavelabError;
    fn try_from(r: KernelRepr) -> Result<Self> {
        KernelMatrix::new(r.0)
    }
}

impl From<KernelMatrix> for KernelRepr {
    fn from(k: KernelMatrix) -> Self {
        KernelRepr(k.k)
    }
}

impl KernelMatrix {
    pub fn new(k: DMatrix<C64>) -> Result<Self> {
        if !k.is_square() {
            return input("kernel matrix must be square");
        }
        let gap = max_entry(&(&k - k.adjoint()));
        if gap > HERMITIAN_TOL {
            return input(format!("kernel is not Hermitian (gap {gap:e})"));
        }
        Ok(Self { k })
    }

    pub fn from_fn(ps: &FinitePointSet, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        let p = ps.points();
        Self::new(DMatrix::from_fn(p.len(), p.len(), |i, j| f(p[i], p[j])))
    }

    /// `K(z, w) = 1/(1 − z conj(w))` on the open disk.
    pub fn szego(ps: &FinitePointSet) -> Result<Self> {
        if let Some(z) = ps.points().iter().find(|z| z.norm() >= 1.0) {
            return Err(WavelabError::Domain(format!(
                "{z} is outside the open unit disk"
            )));
        }
        Self::from_fn(ps, |z, w| (C64::new(1.0, 0.0) - z * w.conj()).inv())
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.k
    }

    pub fn dim(&self) -> usize {
        self.k.nrows()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.k)
    }

    pub fn max_distance(&self, other: &Self) -> f64 {
        max_entry(&(&self.k - &other.k))
    }
}

fn min_eigenvalue(m: &DMatrix<C64>) -> f64 {
    // Symmetrize away rounding before the Hermitian solver.
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    SymmetricEigen::new(h)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

fn check_sizes(ps: &FinitePointSet, k: Option<&KernelMatrix>, filters: &[Vec<C64>]) -> Result<()> {
    if k.is_some_and(|k| k.dim() != ps.len()) {
        return input("kernel size differs from the point set");
    }
    if filters.iter().any(|m| m.len() != ps.len()) {
        return input("filter values must have one entry per point");
    }
    Ok(())
}

fn gram_sum(filters: &[Vec<C64>], i: usize, j: usize) -> C64 {
    filters.iter().map(|m| m[i] * m[j].conj()).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    /// Smallest eigenvalue of `K(x,y) − m(x) conj(m(y)) K(σx, σy)`.
    pub min_eigenvalue: f64,
    pub contraction: bool,
}

pub fn contraction_check(
    k: &KernelMatrix,
    m: &[C64],
    ps: &FinitePointSet,
) -> Result<ContractionReport> {
    check_sizes(ps, Some(k), std::slice::from_ref(&m.to_vec()))?;
    let s = ps.sigma();
    let d = DMatrix::from_fn(ps.len(), ps.len(), |i, j| {
        k.k[(i, j)] - m[i] * m[j].conj() * k.k[(s[i], s[j])]
    });
    let min_eigenvalue = min_eigenvalue(&d);
    Ok(ContractionReport {
        min_eigenvalue,
        contraction: min_eigenvalue >= -PSD_TOL,
    })
}

/// `max |K(x,y) − Σ_n m_n(x) conj(m_n(y)) K(σx, σy)|`.
pub fn refinement_residual(
    k: &KernelMatrix,
    filters: &[Vec<C64>],
    ps: &FinitePointSet,
) -> Result<f64> {
    check_sizes(ps, Some(k), filters)?;
    let s = ps.sigma();
    let mut worst: f64 = 0.0;
    for i in 0..ps.len() {
        for j in 0..ps.len() {
            let r = k.k[(i, j)] - gram_sum(filters, i, j) * k.k[(s[i], s[j])];
            worst = worst.max(r.norm());
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductKernel {
    pub kernel: KernelMatrix,
    pub terms: usize,
    /// `max |K_T − K_{T−1}|`.
    pub tail: f64,
    pub refinement_residual: f64,
}

/// `K_T(x,y) = Π_{k=0}^{T−1} G(σ^k x, σ^k y)` with `G(x,y) = Σ_n m_n(x) conj(m_n(y))`.
pub fn product_kernel(
    filters: &[Vec<C64>],
    ps: &FinitePointSet,
    terms: usize,
) -> Result<ProductKernel> {
    check_sizes(ps, None, filters)?;
    if let Some(i) = (0..ps.len()).find(|&i| ps.steps_to_fixed_point(i).is_none()) {
        return Err(WavelabError::Domain(format!(
            "orbit of point {} never reaches a fixed point",
            ps.points()[i]
        )));
    }
    let n = ps.len();
    let s = ps.sigma();
    let mut k = DMatrix::from_element(n, n, C64::new(1.0, 0.0));
    let mut prev = k.clone();
    let mut orbit: Vec<usize> = (0..n).collect();
    for _ in 0..terms {
        prev = k.clone();
        for i in 0..n {
            for j in 0..n {
                k[(i, j)] *= gram_sum(filters, orbit[i], orbit[j]);
            }
        }
        orbit = orbit.iter().map(|&i| s[i]).collect();
    }
    let tail = max_entry(&(&k - &prev));
    let kernel = KernelMatrix::new(k)?;
    let refinement_residual = refinement_residual(&kernel, filters, ps)?;
    Ok(ProductKernel {
        kernel,
        terms,
        tail,
        refinement_residual,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreimageReport {
    /// `max_x |(1/n(x)) Σ_{σy=x} m_i(y) conj(m_j(y)) − δ_ij|` per `(i, j)`.
    pub residuals: Vec<Vec<f64>>,
    pub max: f64,
    /// Points with no preimage, left out of the maximum.
    pub skipped: Vec<usize>,
}

pub fn preimage_orthogonality(filters: &[Vec<C64>], ps: &FinitePointSet) -> Result<PreimageReport> {
    check_sizes(ps, None, filters)?;
    let nf = filters.len();
    let mut residuals = vec![vec![0.0; nf]; nf];
    let mut skipped = Vec::new();
    for x in 0..ps.len() {
        let pre = ps.preimages(x);
        if pre.is_empty() {
            skipped.push(x);
            continue;
        }
        for (i, row) in residuals.iter_mut().enumerate() {
            for (j, r) in row.iter_mut().enumerate() {
                let avg: C64 = pre
                    .iter()
                    .map(|&y| filters[i][y] * filters[j][y].conj())
                    .sum::<C64>()
                    / pre.len() as f64;
                let delta = f64::from(u8::from(i == j));
                *r = f64::max(*r, (avg - delta).norm());
            }
        }
    }
    let max = residuals.iter().flatten().copied().fold(0.0, f64::max);
    Ok(PreimageReport {
        residuals,
        max,
        skipped,
    })
}

/// Finite-set analogues of the Cuntz relations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteCuntzReport {
    /// `max |(A_i T_j − δ_ij) f|` over basis `f` and points with preimages,
    /// where `T_j f = m_j (f ∘ σ)` and `A_i g(x) = (1/n(x)) Σ_{σy=x} conj(m_i(y)) g(y)`.
    pub averaging_adjoint: f64,
    /// `max |Σ_i T_i T_i* k_y − k_y|` in `H(K)`, using `T_i* k_y = conj(m_i(y)) k_{σy}`.
    pub kernel_completeness: f64,
}

pub fn discrete_cuntz_check(
    k: &KernelMatrix,
    filters: &[Vec<C64>],
    ps: &FinitePointSet,
) -> Result<DiscreteCuntzReport> {
    check_sizes(ps, Some(k), filters)?;
    let n = ps.len();
    let s = ps.sigma();
    let t = |m: &[C64]| {
        DMatrix::from_fn(
            n,
            n,
            |x, y| if s[x] == y { m[x] } else { C64::new(0.0, 0.0) },
        )
    };
    let a = |m: &[C64]| {
        DMatrix::from_fn(n, n, |x, y| {
            let pre = ps.preimages(x);
            if s[y] == x {
                m[y].conj() / pre.len() as f64
            } else {
                C64::new(0.0, 0.0)
            }
        })
    };
    let mut averaging_adjoint: f64 = 0.0;
    for (i, mi) in filters.iter().enumerate() {
        let ai = a(mi);
        for (j, mj) in filters.iter().enumerate() {
            let mut prod = &ai * t(mj);
            for x in 0..n {
                if i == j && !ps.preimages(x).is_empty() {
                    prod[(x, x)] -= C64::new(1.0, 0.0);
                }
            }
            for x in (0..n).filter(|&x| !ps.preimages(x).is_empty()) {
                averaging_adjoint =
                    averaging_adjoint.max(prod.row(x).iter().map(|v| v.norm()).fold(0.0, f64::max));
            }
        }
    }
    let kernel_completeness = refinement_residual(k, filters, ps)?;
    Ok(DiscreteCuntzReport {
        averaging_adjoint,
        kernel_completeness,
    })
}
