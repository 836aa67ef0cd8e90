//! Wavelet filter banks on an IFS code space.
//!
//! A bank `m_1..m_N` is a wavelet filter when the weighted compositions
//! `S_j f = m_j · (f ∘ σ)` satisfy the Cuntz relations
//! `S_j* S_k = δ_jk I` and `Σ S_n S_n* = I`. In terms of the functions this
//! reads `S*(conj(m_j) m_k) = δ_jk` together with the reconstruction
//! identity `f = Σ m_n E_σ(conj(m_n) f)`.

mod gram_schmidt;
mod loop_group;
mod matrix_field;
mod multires;

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::code_space::{weighted_adjoint, weighted_compose, CylinderFn, IfsSpec, Word, C64};
use crate::error::{input, Result, WavelabError};

pub use gram_schmidt::{gram_schmidt_module, GS_RESIDUAL_TOL, GS_SUPPORT_TOL};
pub use loop_group::{apply_loop_group, connecting_unitary, endomorphism_check, matrix_field_m};
pub use matrix_field::MatrixField;
pub use multires::{multires_decompose, multires_reconstruct, CoefficientTree, DecomposeMode};

/// Default tolerance for [`verify_filter`].
pub const DEFAULT_FILTER_TOL: f64 = 1e-13;

/// An ordered family of `N` cylinder functions on a common code space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BankRepr", into = "BankRepr")]
pub struct FilterBank {
    spec: IfsSpec,
    filters: Vec<CylinderFn>,
}

#[derive(Serialize, Deserialize)]
struct BankRepr {
    spec: IfsSpec,
    filters: Vec<CylinderFn>,
}

impl TryFrom<BankRepr> for FilterBank {
    type Error = WavelabError;
    fn try_from(r: BankRepr) -> Result<Self> {
        FilterBank::new(&r.spec, r.filters)
    }
}

impl From<FilterBank> for BankRepr {
    fn from(b: FilterBank) -> Self {
        BankRepr {
            spec: b.spec,
            filters: b.filters,
        }
    }
}

impl FilterBank {
    /// Checks shape only; the Cuntz conditions are checked by [`verify_filter`].
    pub fn new(spec: &IfsSpec, filters: Vec<CylinderFn>) -> Result<Self> {
        if filters.len() != spec.n() {
            return input(format!(
                "a bank over N = {} needs {} filters, got {}",
                spec.n(),
                spec.n(),
                filters.len()
            ));
        }
        if filters.iter().any(|f| f.spec() != spec) {
            return input("filters must share the bank's code space");
        }
        Ok(Self {
            spec: spec.clone(),
            filters,
        })
    }

    pub fn spec(&self) -> &IfsSpec {
        &self.spec
    }

    pub fn filters(&self) -> &[CylinderFn] {
        &self.filters
    }

    pub fn filter(&self, j: usize) -> &CylinderFn {
        &self.filters[j]
    }

    pub fn len(&self) -> usize {
        self.filters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filters.is_empty()
    }

    /// Largest filter depth.
    pub fn depth(&self) -> usize {
        self.filters
            .iter()
            .map(CylinderFn::depth)
            .max()
            .unwrap_or(0)
    }

    fn check_input(&self, f: &CylinderFn) -> Result<()> {
        if f.spec() != &self.spec {
            return input("function and bank live on different code spaces");
        }
        Ok(())
    }
}

/// `m_n = Σ_ℓ ε^{nℓ} 1_[ℓ]` with `ε = exp(2πi/N)`.
pub fn build_roots_of_unity(spec: &IfsSpec) -> Result<FilterBank> {
    if !spec.is_uniform() {
        return Err(WavelabError::Unsupported(
            "roots-of-unity filters are orthonormal only for uniform weights".into(),
        ));
    }
    let n = spec.n();
    let filters = (1..=n)
        .map(|j| {
            CylinderFn::from_fn(spec, 1, |w| {
                let l = w.symbols()[0];
                C64::from_polar(1.0, 2.0 * PI * ((j * l) % n) as f64 / n as f64)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FilterBank::new(spec, filters)
}

/// `m_n = 1_[n] / √p_n`, which is `√N · 1_[n]` for uniform weights.
pub fn build_indicator(spec: &IfsSpec) -> Result<FilterBank> {
    let filters = (1..=spec.n())
        .map(|j| {
            let ind = CylinderFn::indicator(spec, &Word::new(spec.n(), vec![j])?)?;
            Ok(ind.scale(C64::new(spec.weight(j).sqrt().recip(), 0.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    FilterBank::new(spec, filters)
}

/// Outcome of [`verify_filter`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterReport {
    /// `‖S*(conj(m_j) m_k) − δ_jk‖∞`, row `j`, column `k`.
    pub orthonormality: Vec<Vec<f64>>,
    pub orthonormality_max: f64,
    /// Largest `‖f − Σ m_n E_σ(conj(m_n) f)‖∞` over indicator probes.
    pub completeness: f64,
    pub probe_depth: usize,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks both Cuntz conditions; the reconstruction identity is tested on
/// every cylinder indicator of length `probe_depth`.
pub fn verify_filter(bank: &FilterBank, probe_depth: usize, tol: f64) -> Result<FilterReport> {
    if probe_depth == 0 {
        return input("probe depth must be at least 1");
    }
    let spec = bank.spec();
    let n = spec.n();
    let mut orthonormality = vec![vec![0.0; n]; n];
    for (j, mj) in bank.filters().iter().enumerate() {
        for (k, mk) in bank.filters().iter().enumerate() {
            let g = mj.conj().multiply(mk)?.adjoint_sigma();
            let delta = if j == k { 1.0 } else { 0.0 };
            orthonormality[j][k] = g
                .values()
                .iter()
                .map(|v| (v - delta).norm())
                .fold(0.0, f64::max);
        }
    }
    let orthonormality_max = orthonormality.iter().flatten().copied().fold(0.0, f64::max);

    let cells = spec.cells(probe_depth)?;
    let mut completeness: f64 = 0.0;
    for i in 0..cells {
        let probe = CylinderFn::indicator(spec, &Word::from_index(n, probe_depth, i))?;
        let rebuilt = reconstruct_identity(bank, &probe)?;
        completeness = completeness.max(rebuilt.sup_distance(&probe)?);
    }
    let pass = orthonormality_max < tol && completeness < tol;
    Ok(FilterReport {
        orthonormality,
        orthonormality_max,
        completeness,
        probe_depth,
        tolerance: tol,
        pass,
    })
}

/// `Σ_n m_n E_σ(conj(m_n) f)`.
fn reconstruct_identity(bank: &FilterBank, f: &CylinderFn) -> Result<CylinderFn> {
    let mut acc: Option<CylinderFn> = None;
    for m in bank.filters() {
        let term = m.multiply(&m.conj().multiply(f)?.conditional_expectation()?)?;
        acc = Some(match acc {
            Some(a) => a.add(&term)?,
            None => term,
        });
    }
    Ok(acc.expect("bank has at least two filters"))
}

/// `f_n = S_{m_n}* f = S*(conj(m_n) f)`.
pub fn analysis(bank: &FilterBank, f: &CylinderFn) -> Result<Vec<CylinderFn>> {
    bank.check_input(f)?;
    if f.depth() == 0 && bank.depth() == 0 {
        return input("analysis needs a function of depth at least 1");
    }
    bank.filters()
        .iter()
        .map(|m| weighted_adjoint(m, f))
        .collect()
}

/// `Σ_n m_n · (f_n ∘ σ)`.
pub fn synthesis(bank: &FilterBank, parts: &[CylinderFn]) -> Result<CylinderFn> {
    if parts.len() != bank.len() {
        return input(format!(
            "synthesis needs {} parts, got {}",
            bank.len(),
            parts.len()
        ));
    }
    let mut acc: Option<CylinderFn> = None;
    for (m, part) in bank.filters().iter().zip(parts) {
        bank.check_input(part)?;
        let term = weighted_compose(m, part)?;
        acc = Some(match acc {
            Some(a) => a.add(&term)?,
            None => term,
        });
    }
    Ok(acc.expect("bank has at least two filters"))
}
