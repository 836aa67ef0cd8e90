//! Scaling functions on `ℝ`: cascade, detail wavelet, Fourier product and
//! the periodic two-channel (or `N`-channel) filter bank.

mod filterbank;
mod io;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::circle_filters::LaurentPoly;
use crate::code_space::C64;
use crate::error::{input, Result, WavelabError};

pub use filterbank::{analysis_taps, filterbank_roundtrip, Roundtrip};
pub use io::{read_signal_csv, read_taps_json, write_profile_csv, write_signal_csv, ProfileMeta};

/// Tolerance on `Σ c_k = √N`.
pub const TAP_SUM_TOL: f64 = 1e-12;

/// Consecutive growing sup-differences that count as divergence.
pub const DIVERGENCE_RUN: usize = 5;

const SIMPLE_EIGEN_TOL: f64 = 1e-8;

/// Real samples `f(i/R)` for `i = offset..offset + len`, zero elsewhere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledFn {
    pub resolution: usize,
    pub offset: i64,
    pub values: Vec<f64>,
}

impl SampledFn {
    pub fn new(resolution: usize, offset: i64, values: Vec<f64>) -> Result<Self> {
        if resolution == 0 {
            return input("resolution must be positive");
        }
        Ok(Self {
            resolution,
            offset,
            values,
        })
    }

    /// Value at grid index `i`, i.e. at `x = i/R`.
    pub fn at(&self, i: i64) -> f64 {
        let k = i - self.offset;
        if k < 0 || k >= self.values.len() as i64 {
            0.0
        } else {
            self.values[k as usize]
        }
    }

    pub fn x(&self, k: usize) -> f64 {
        (self.offset + k as i64) as f64 / self.resolution as f64
    }

    /// Left Riemann sum `Σ f(i/R)/R`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.resolution as f64
    }

    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.resolution != other.resolution {
            return input("samples on different grids");
        }
        let s: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| v * other.at(self.offset + k as i64))
            .sum();
        Ok(s / self.resolution as f64)
    }

    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        if self.resolution != other.resolution {
            return input("samples on different grids");
        }
        let lo = self.offset.min(other.offset);
        let hi =
            (self.offset + self.values.len() as i64).max(other.offset + other.values.len() as i64);
        Ok((lo..hi)
            .map(|i| (self.at(i) - other.at(i)).abs())
            .fold(0.0, f64::max))
    }

    /// `(T f)(x) = f(x − 1)`.
    pub fn translate(&self) -> Self {
        Self {
            offset: self.offset + self.resolution as i64,
            ..self.clone()
        }
    }

    /// `(U f)(x) = f(x/N)/√N`; needs `N | R`.
    pub fn dilate(&self, n: usize) -> Result<Self> {
        if !self.resolution.is_multiple_of(n) {
            return input(format!(
                "resolution {} is not divisible by {n}",
                self.resolution
            ));
        }
        let s = (n as f64).sqrt().recip();
        Ok(Self {
            resolution: self.resolution / n,
            offset: self.offset,
            values: self.values.iter().map(|v| v * s).collect(),
        })
    }

    /// `(U* f)(x) = √N f(Nx)`.
    pub fn dilate_adjoint(&self, n: usize) -> Self {
        let s = (n as f64).sqrt();
        Self {
            resolution: self.resolution * n,
            offset: self.offset,
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }
}

/// How the cascade iteration is started.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CascadeSeed {
    /// Step function through the fixed vector of `T_{nm} = √N c_{Nn−m}` on the
    /// integers, or the unit box when that fixed vector is not unique.
    #[default]
    IntegerEigen,
    UnitBox,
}

/// Sampled scaling function from the cascade.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingProfile {
    pub n: usize,
    pub taps: Vec<f64>,
    pub seed: CascadeSeed,
    /// Seed actually used after fallback.
    pub seed_used: CascadeSeed,
    pub phi: SampledFn,
    /// Sup-norm difference of successive iterates, one per iteration.
    pub residuals: Vec<f64>,
}

impl ScalingProfile {
    pub fn iterations(&self) -> usize {
        self.residuals.len()
    }

    pub fn last_residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(f64::INFINITY)
    }

    pub fn integral(&self) -> f64 {
        self.phi.integral()
    }
}

fn check_taps(taps: &[f64], n: usize) -> Result<()> {
    if n < 2 {
        return input("N must be at least 2");
    }
    if taps.is_empty() || taps.iter().any(|c| !c.is_finite()) {
        return input("taps must be finite and nonempty");
    }
    let sum: f64 = taps.iter().sum();
    if (sum - (n as f64).sqrt()).abs() > TAP_SUM_TOL {
        return Err(WavelabError::Precondition(format!(
            "taps sum to {sum}, expected √{n}"
        )));
    }
    Ok(())
}

/// Integer support length `⌈(L − 1)/(N − 1)⌉`, at least 1.
fn support_len(taps: usize, n: usize) -> usize {
    (taps.saturating_sub(1)).div_ceil(n - 1).max(1)
}

fn integer_fixed_vector(taps: &[f64], n: usize, s: usize) -> Option<Vec<f64>> {
    let rt = (n as f64).sqrt();
    let dim = s + 1;
    let t = DMatrix::from_fn(dim, dim, |r, c| {
        let k = (n * r) as i64 - c as i64;
        if k >= 0 && (k as usize) < taps.len() {
            rt * taps[k as usize]
        } else {
            0.0
        }
    });
    let a = &t - DMatrix::identity(dim, dim);
    // The fixed vector must be unique: only one singular value of T − I may vanish.
    let mut sv: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    sv.sort_by(f64::total_cmp);
    if dim > 1 && sv[1] < SIMPLE_EIGEN_TOL {
        return None;
    }
    let mut sys = a.clone();
    sys.row_mut(dim - 1).fill(1.0);
    let mut rhs = nalgebra::DVector::zeros(dim);
    rhs[dim - 1] = 1.0;
    let v = sys.lu().solve(&rhs)?;
    if !v.iter().all(|x| x.is_finite()) || (&a * &v).amax() > 1e-12 {
        return None;
    }
    Some(v.iter().copied().collect())
}

/// Iterates `φ_{j+1}(x) = √N Σ c_k φ_j(Nx − k)` on the grid `x = i/R`.
pub fn cascade(
    taps: &[f64],
    n: usize,
    iters: usize,
    resolution: usize,
    seed: CascadeSeed,
) -> Result<ScalingProfile> {
    check_taps(taps, n)?;
    if resolution == 0 {
        return input("resolution must be positive");
    }
    if iters == 0 {
        return input("at least one iteration is required");
    }
    let s = support_len(taps.len(), n);
    let len = s * resolution + 1;

    let eigen = match seed {
        CascadeSeed::IntegerEigen => integer_fixed_vector(taps, n, s),
        CascadeSeed::UnitBox => None,
    };
    let seed_used = if eigen.is_some() {
        CascadeSeed::IntegerEigen
    } else {
        CascadeSeed::UnitBox
    };
    let mut phi: Vec<f64> = (0..len)
        .map(|i| match &eigen {
            Some(v) => v[i / resolution],
            None => f64::from(u8::from(i < resolution)),
        })
        .collect();

    let rt = (n as f64).sqrt();
    let r = resolution as i64;
    let mut residuals = Vec::with_capacity(iters);
    let mut growth = 0;
    for _ in 0..iters {
        let next: Vec<f64> = (0..len as i64)
            .map(|i| {
                let acc: f64 = taps
                    .iter()
                    .enumerate()
                    .map(|(k, c)| {
                        let j = n as i64 * i - k as i64 * r;
                        if j >= 0 && j < len as i64 {
                            c * phi[j as usize]
                        } else {
                            0.0
                        }
                    })
                    .sum();
                rt * acc
            })
            .collect();
        let diff = next
            .iter()
            .zip(&phi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if residuals.last().is_some_and(|&prev| diff > prev) {
            growth += 1;
        } else {
            growth = 0;
        }
        residuals.push(diff);
        phi = next;
        if growth >= DIVERGENCE_RUN || !diff.is_finite() {
            return Err(WavelabError::Convergence {
                iterations: residuals.len(),
                residual: diff,
            });
        }
    }
    Ok(ScalingProfile {
        n,
        taps: taps.to_vec(),
        seed,
        seed_used,
        phi: SampledFn::new(resolution, 0, phi)?,
        residuals,
    })
}

/// `ψ(x) = √N Σ d_k φ(Nx − k)` on the grid of the profile.
pub fn wavelet_detail(profile: &ScalingProfile, detail: &[f64]) -> Result<SampledFn> {
    if detail.iter().any(|d| !d.is_finite()) {
        return input("detail taps must be finite");
    }
    let n = profile.n as i64;
    let phi = &profile.phi;
    let r = phi.resolution as i64;
    let top = phi.offset + phi.values.len() as i64 - 1 + (detail.len() as i64 - 1).max(0) * r;
    let len = top.div_euclid(n) + 1;
    let rt = (n as f64).sqrt();
    let values = (0..len)
        .map(|i| {
            rt * detail
                .iter()
                .enumerate()
                .map(|(k, d)| d * phi.at(n * i - k as i64 * r))
                .sum::<f64>()
        })
        .collect();
    SampledFn::new(phi.resolution, 0, values)
}

/// Truncated product `Π_{k=1}^K m_0(e^{it/N^k})/√N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierProduct {
    pub value: C64,
    /// `|value_K − value_{K−1}|`.
    pub tail: f64,
}

pub fn fourier_product(m0: &LaurentPoly, n: usize, t: f64, terms: usize) -> Result<FourierProduct> {
    if n < 2 {
        return input("N must be at least 2");
    }
    if terms == 0 {
        return input("at least one factor is required");
    }
    let rt = (n as f64).sqrt();
    let at_one = m0.eval(C64::new(1.0, 0.0));
    if (at_one - rt).norm() > TAP_SUM_TOL {
        return Err(WavelabError::Precondition(format!(
            "m0(1) = {at_one}, expected √{n}"
        )));
    }
    let mut value = C64::new(1.0, 0.0);
    let mut prev = value;
    let mut scale = 1.0;
    for _ in 0..terms {
        scale *= n as f64;
        prev = value;
        value *= m0.eval(C64::from_polar(1.0, t / scale)) / rt;
    }
    Ok(FourierProduct {
        value,
        tail: (value - prev).norm(),
    })
}

/// Gram values `⟨φ, T^k φ⟩` on the sample grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftGram {
    /// Shifts `k` paired with `⟨φ, T^k φ⟩`.
    pub gram: Vec<(i64, f64)>,
    /// `max_k |⟨φ, T^k φ⟩ − δ_{k0}|`.
    pub deviation: f64,
}

/// Autocorrelation `a_k = ⟨φ, T^k φ⟩` for every shift with overlapping support.
pub fn shift_orthonormality(phi: &SampledFn) -> ShiftGram {
    let r = phi.resolution as i64;
    let reach = (phi.values.len() as i64 + r - 1) / r;
    let gram: Vec<(i64, f64)> = (-reach..=reach)
        .map(|k| {
            let s: f64 = phi
                .values
                .iter()
                .enumerate()
                .map(|(j, v)| v * phi.at(phi.offset + j as i64 - k * r))
                .sum();
            (k, s / r as f64)
        })
        .collect();
    let deviation = gram
        .iter()
        .map(|&(k, g)| (g - f64::from(u8::from(k == 0))).abs())
        .fold(0.0, f64::max);
    ShiftGram { gram, deviation }
}

/// `h_φ(t) = Σ_n |φ̂(t + 2πn)|² = Σ_k a_k e^{−ikt}` from the shift Gram.
pub fn harmonic_profile(phi: &SampledFn, ts: &[f64]) -> Vec<f64> {
    let g = shift_orthonormality(phi).gram;
    ts.iter()
        .map(|&t| g.iter().map(|&(k, a)| a * (k as f64 * t).cos()).sum())
        .collect()
}
