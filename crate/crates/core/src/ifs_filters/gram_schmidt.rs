use crate::code_space::{CylinderFn, IfsSpec, C64};
use crate::error::{input, Result, WavelabError};

use super::FilterBank;

/// Threshold on `E_σ|r|²` below which a point is left out of the support set.
pub const GS_SUPPORT_TOL: f64 = 1e-12;

/// A residual with `L²` norm below this means the generators are dependent.
pub const GS_RESIDUAL_TOL: f64 = 1e-10;

/// Orthonormalizes `N` generators over the algebra of functions of `σ(x)`.
///
/// Step `k` removes `Σ_{j<k} m_j E_σ(conj(m_j) g_k)` and normalizes the
/// residual `r` by `m = 1_A r / √(E_σ|r|²) + 1_{X∖A}` with
/// `A = {E_σ|r|² > GS_SUPPORT_TOL}`.
pub fn gram_schmidt_module(spec: &IfsSpec, generators: &[CylinderFn]) -> Result<FilterBank> {
    if generators.len() != spec.n() {
        return input(format!(
            "{} generators given for N = {}",
            generators.len(),
            spec.n()
        ));
    }
    let mut out: Vec<CylinderFn> = Vec::with_capacity(generators.len());
    for (k, g) in generators.iter().enumerate() {
        if g.spec() != spec {
            return input("generators must share the code space");
        }
        let mut r = g.clone();
        for m in &out {
            let coeff = m.conj().multiply(g)?.conditional_expectation()?;
            r = r.sub(&m.multiply(&coeff)?)?;
        }
        if r.norm_sq().sqrt() < GS_RESIDUAL_TOL {
            return Err(WavelabError::NotModuleBasis { index: k + 1 });
        }
        // E_σ|r|² keeps the depth of r, so it can be read pointwise.
        let q = r.abs2().conditional_expectation()?;
        let r = r.lift(q.depth())?;
        let values = r
            .values()
            .iter()
            .zip(q.values())
            .map(|(&rv, qv)| {
                if qv.re > GS_SUPPORT_TOL {
                    rv / qv.re.sqrt()
                } else {
                    C64::new(1.0, 0.0)
                }
            })
            .collect();
        out.push(CylinderFn::from_values(spec, q.depth(), values)?);
    }
    FilterBank::new(spec, out)
}
