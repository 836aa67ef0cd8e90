//! The circle case `σ(z) = z^N` with Laurent-polynomial filters.

mod blaschke;
mod laurent;
mod matrix;

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::code_space::C64;
use crate::error::{input, Result};

pub use blaschke::{
    blaschke_product, loop_action_circle, BlaschkeFactor, LoopAction, Pole, RationalMatrixProduct,
};
pub use laurent::{weighted_compose_circle, LaurentPoly, TRIM_TOL};
pub use matrix::{
    build_m_matrix, cyclic_permutation, periodicity_residual, shift_relation_residual,
    unit_circle_grid, unitarity_residual, FilterMatrix, GridReport, MatrixFunction, PolyMatrix,
    DEFAULT_GRID, DEFAULT_GRID_TOL,
};

/// Filter normalization.
///
/// `Averaged` filters satisfy `(1/N) Σ_{ω^N = z} |m_0(ω)|² = 1`, so `m_0(1) = √N`.
/// `UnitSum` filters are `1/√N` times that, so `m_0(1) = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    #[default]
    Averaged,
    UnitSum,
}

impl Convention {
    /// Factor taking a filter in this convention to the averaged one.
    pub fn to_averaged(self, n: usize) -> f64 {
        match self {
            Convention::Averaged => 1.0,
            Convention::UnitSum => (n as f64).sqrt(),
        }
    }
}

/// Exact coefficient residuals of the Cuntz relations for a circle bank.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuntzReport {
    /// `S*(conj(m_j) m_k) − δ_jk` as Laurent polynomials.
    pub residuals: Vec<Vec<LaurentPoly>>,
    /// Largest coefficient modulus over `residuals`.
    pub orthonormality_max: f64,
    /// Largest coefficient of `(1/N) Σ_j m_j(ε^a z) conj(m_j(ε^b z)) − δ_ab`.
    pub completeness: f64,
}

impl CuntzReport {
    pub fn max(&self) -> f64 {
        self.orthonormality_max.max(self.completeness)
    }
}

pub fn cuntz_residuals(
    filters: &[LaurentPoly],
    n: usize,
    convention: Convention,
) -> Result<CuntzReport> {
    if n < 2 {
        return input("N must be at least 2");
    }
    let s = C64::new(convention.to_averaged(n), 0.0);
    let ms: Vec<LaurentPoly> = filters.iter().map(|m| m.scale(s)).collect();
    let mut orthonormality_max: f64 = 0.0;
    let residuals: Vec<Vec<LaurentPoly>> = ms
        .iter()
        .enumerate()
        .map(|(j, mj)| {
            ms.iter()
                .enumerate()
                .map(|(k, mk)| {
                    let mut r = mj.conj_reflect().mul(mk).downsample(n);
                    if j == k {
                        r = r.sub(&LaurentPoly::one());
                    }
                    orthonormality_max = orthonormality_max.max(r.max_abs_coeff());
                    r
                })
                .collect()
        })
        .collect();

    let roots: Vec<C64> = (0..n)
        .map(|a| C64::from_polar(1.0, 2.0 * PI * a as f64 / n as f64))
        .collect();
    let mut completeness: f64 = 0.0;
    for (a, &ea) in roots.iter().enumerate() {
        for (b, &eb) in roots.iter().enumerate() {
            let mut sum = ms.iter().fold(LaurentPoly::zero(), |acc, m| {
                acc.add(&m.modulate(ea).mul(&m.conj_reflect().modulate(eb)))
            });
            if a == b {
                sum = sum.sub(&LaurentPoly::constant(C64::new(n as f64, 0.0)));
            }
            completeness = completeness.max(sum.max_abs_coeff() / n as f64);
        }
    }
    Ok(CuntzReport {
        residuals,
        orthonormality_max,
        completeness,
    })
}

/// `m_1(z) = z^{−1} conj(m_0(−1/z̄))`, coefficients `conj(c_n) (−1)^n z^{−n−1}`.
pub fn cqf_partner(m0: &LaurentPoly) -> LaurentPoly {
    let terms: Vec<(i64, C64)> = m0
        .terms()
        .map(|(k, c)| {
            (
                -k - 1,
                c.conj() * if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 },
            )
        })
        .collect();
    terms.into_iter().fold(LaurentPoly::zero(), |acc, (d, c)| {
        acc.add(&LaurentPoly::monomial(c, d))
    })
}

/// `[[m_0(z), m_1(z)], [m_0(−z), m_1(−z)]]`, times `1/√2` in the averaged convention.
pub fn cqf_complete(m0: &LaurentPoly, convention: Convention) -> PolyMatrix {
    let m1 = cqf_partner(m0);
    let s = C64::new(
        match convention {
            Convention::Averaged => 2f64.sqrt().recip(),
            Convention::UnitSum => 1.0,
        },
        0.0,
    );
    let neg = C64::new(-1.0, 0.0);
    PolyMatrix {
        entries: vec![
            vec![m0.scale(s), m1.scale(s)],
            vec![m0.modulate(neg).scale(s), m1.modulate(neg).scale(s)],
        ],
    }
}

/// `max |(|m_0(z)|² + |m_0(−z)|²) − t|` on the grid, with `t = 1` (unit-sum) or `2` (averaged).
pub fn marseille_residual(m0: &LaurentPoly, convention: Convention, angles: &[f64]) -> f64 {
    let target = match convention {
        Convention::Averaged => 2.0,
        Convention::UnitSum => 1.0,
    };
    angles
        .iter()
        .map(|&t| {
            let z = C64::from_polar(1.0, t);
            (m0.eval(z).norm_sqr() + m0.eval(-z).norm_sqr() - target).abs()
        })
        .fold(0.0, f64::max)
}
