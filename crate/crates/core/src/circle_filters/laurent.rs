use serde::{Deserialize, Serialize};

use crate::code_space::C64;
use crate::error::{input, Result, WavelabError};

/// Coefficients with modulus at or below this are not stored at either end.
pub const TRIM_TOL: f64 = 1e-15;

/// A Laurent polynomial `Σ_k c_k z^k` with finitely many nonzero terms.
///
/// Stored as a contiguous coefficient run starting at `min_degree`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LaurentRepr", into = "LaurentRepr")]
pub struct LaurentPoly {
    min_degree: i64,
    coeffs: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    min_degree: i64,
    coeffs: Vec<C64>,
}

impl TryFrom<LaurentRepr> for LaurentPoly {
    type Error = WavelabError;
    fn try_from(r: LaurentRepr) -> Result<Self> {
        if r.coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return input("Laurent coefficients must be finite");
        }
        Ok(LaurentPoly::new(r.min_degree, r.coeffs))
    }
}

impl From<LaurentPoly> for LaurentRepr {
    fn from(p: LaurentPoly) -> Self {
        LaurentRepr {
            min_degree: p.min_degree,
            coeffs: p.coeffs,
        }
    }
}

impl LaurentPoly {
    pub fn new(min_degree: i64, coeffs: Vec<C64>) -> Self {
        let mut p = Self { min_degree, coeffs };
        p.trim();
        p
    }

    pub fn from_real(min_degree: i64, coeffs: &[f64]) -> Self {
        Self::new(
            min_degree,
            coeffs.iter().map(|&c| C64::new(c, 0.0)).collect(),
        )
    }

    pub fn zero() -> Self {
        Self {
            min_degree: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(0, vec![c])
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    /// `c · z^k`.
    pub fn monomial(c: C64, k: i64) -> Self {
        Self::new(k, vec![c])
    }

    fn trim(&mut self) {
        let lead = self
            .coeffs
            .iter()
            .take_while(|c| c.norm() <= TRIM_TOL)
            .count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.min_degree = 0;
            return;
        }
        self.coeffs.drain(..lead);
        self.min_degree += lead as i64;
        while self.coeffs.last().is_some_and(|c| c.norm() <= TRIM_TOL) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    /// Largest degree with a stored coefficient (`min_degree − 1` for zero).
    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coefficient(&self, k: i64) -> C64 {
        let i = k - self.min_degree;
        if i < 0 || i >= self.coeffs.len() as i64 {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[i as usize]
        }
    }

    /// `(degree, coefficient)` pairs in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.min_degree + i as i64, c))
    }

    pub fn eval(&self, z: C64) -> C64 {
        if self.is_zero() {
            return C64::new(0.0, 0.0);
        }
        // Horner in z from the top, then shift by z^min_degree.
        let acc = self
            .coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c);
        acc * z.powi(self.min_degree as i32)
    }

    /// `Σ c_k`, the value at `z = 1`.
    pub fn sum(&self) -> C64 {
        self.coeffs.iter().sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `Σ |c_k|²`, the squared norm in `L²(𝕋)` with normalized arc length.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        if self.is_zero() {
            return other.scale(C64::new(sign, 0.0));
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.min_degree.min(other.min_degree);
        let hi = self.max_degree().max(other.max_degree());
        let coeffs = (lo..=hi)
            .map(|k| self.coefficient(k) + other.coefficient(k) * sign)
            .collect();
        Self::new(lo, coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1.0)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(
            self.min_degree,
            self.coeffs.iter().map(|&v| v * c).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(self.min_degree + other.min_degree, coeffs)
    }

    /// `c_k ↦ conj(c_k) z^{−k}`: equals `conj(p(z))` on the unit circle.
    pub fn conj_reflect(&self) -> Self {
        let coeffs = self.coeffs.iter().rev().map(|c| c.conj()).collect();
        Self::new(-self.max_degree(), coeffs)
    }

    /// `p(w z)` for a fixed `w`: coefficients `c_k w^k`.
    pub fn modulate(&self, w: C64) -> Self {
        let coeffs = self.terms().map(|(k, c)| c * w.powi(k as i32)).collect();
        Self::new(self.min_degree, coeffs)
    }

    /// `z^shift · p(z)`.
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            min_degree: self.min_degree + shift,
            coeffs: self.coeffs.clone(),
        }
    }

    /// `(S p)(z) = p(z^N)`.
    pub fn upsample(&self, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let n = n as i64;
        let mut coeffs =
            vec![C64::new(0.0, 0.0); ((self.coeffs.len() as i64 - 1) * n + 1) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * n as usize] = c;
        }
        Self::new(self.min_degree * n, coeffs)
    }

    /// `(S* p)(z) = (1/N) Σ_{ω^N = z} p(ω) = Σ_k c_{kN} z^k`.
    pub fn downsample(&self, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let n = n as i64;
        let lo = self.min_degree.div_euclid(n) + i64::from(self.min_degree.rem_euclid(n) != 0);
        let hi = self.max_degree().div_euclid(n);
        if hi < lo {
            return Self::zero();
        }
        let coeffs = (lo..=hi).map(|k| self.coefficient(k * n)).collect();
        Self::new(lo, coeffs)
    }
}

/// `(S_m f)(z) = m(z) f(z^N)`.
pub fn weighted_compose_circle(m: &LaurentPoly, f: &LaurentPoly, n: usize) -> LaurentPoly {
    m.mul(&f.upsample(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn trimming_and_zero() {
        let p = LaurentPoly::new(-2, vec![c(0.0), c(1.0), c(0.0), c(2.0), c(1e-16)]);
        assert_eq!(p.min_degree(), -1);
        assert_eq!(p.max_degree(), 1);
        assert!(LaurentPoly::new(3, vec![c(0.0)]).is_zero());
    }

    #[test]
    fn up_and_down_sampling() {
        let z = LaurentPoly::monomial(c(1.0), 1);
        assert_eq!(z.upsample(2), LaurentPoly::monomial(c(1.0), 2));
        assert_eq!(LaurentPoly::monomial(c(1.0), 2).downsample(2), z);
        assert!(z.downsample(2).is_zero());
        assert_eq!(LaurentPoly::one().upsample(2), LaurentPoly::one());
        assert_eq!(LaurentPoly::one().downsample(2), LaurentPoly::one());
        let p = LaurentPoly::from_real(-3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
        for n in 2..5 {
            assert_eq!(p.upsample(n).downsample(n), p);
        }
        assert_eq!(
            p.downsample(3),
            LaurentPoly::from_real(-1, &[1.0, 4.0, 7.0])
        );
    }

    #[test]
    fn downsample_is_root_average() {
        let p = LaurentPoly::new(
            -2,
            vec![
                C64::new(0.5, 1.0),
                c(-1.0),
                c(2.0),
                C64::new(0.0, 3.0),
                c(1.5),
            ],
        );
        let n = 3;
        let t = 0.77;
        // the N roots of ω^N = e^{it}
        let avg: C64 = (0..n)
            .map(|k| {
                let theta = (t + 2.0 * std::f64::consts::PI * k as f64) / n as f64;
                p.eval(C64::from_polar(1.0, theta))
            })
            .sum::<C64>()
            / n as f64;
        assert!((p.downsample(n).eval(C64::from_polar(1.0, t)) - avg).norm() < 1e-14);
    }

    #[test]
    fn weighted_compose_examples() {
        let z = LaurentPoly::monomial(c(1.0), 1);
        assert_eq!(
            weighted_compose_circle(&LaurentPoly::one(), &z, 2),
            z.upsample(2)
        );
        let r = 2f64.sqrt().recip();
        let m = LaurentPoly::from_real(0, &[r, r]);
        let out = weighted_compose_circle(&m, &z, 2);
        assert_eq!(out, LaurentPoly::from_real(2, &[r, r]));
        let zinv = LaurentPoly::monomial(c(1.0), -1);
        assert_eq!(weighted_compose_circle(&zinv, &LaurentPoly::one(), 2), zinv);
    }

    #[test]
    fn conj_reflect_matches_boundary_conjugate() {
        let p = LaurentPoly::new(-1, vec![C64::new(1.0, 2.0), c(-0.5), C64::new(0.0, 1.0)]);
        let q = p.conj_reflect();
        for t in [0.0, 0.4, 2.0, 5.5] {
            let z = C64::from_polar(1.0, t);
            assert!((q.eval(z) - p.eval(z).conj()).norm() < 1e-14);
        }
        assert_eq!(q.conj_reflect(), p);
    }

    #[test]
    fn eval_negative_degrees() {
        let p = LaurentPoly::from_real(-2, &[1.0, 0.0, 3.0]);
        let z = C64::new(0.5, -0.25);
        assert!((p.eval(z) - (z.powi(-2) + 3.0)).norm() < 1e-12);
    }
}
