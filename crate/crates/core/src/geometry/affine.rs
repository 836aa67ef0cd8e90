use nalgebra::{DMatrix, DVector};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::code_space::Word;
use crate::error::{input, Result, WavelabError};

pub const BURN_IN: usize = 64;
pub const MIN_SAMPLES: usize = 10_000;
const WEIGHT_TOL: f64 = 1e-12;

#[derive(Deserialize)]
struct AffineRepr {
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    digits: Vec<Vec<i64>>,
    #[serde(default)]
    weights: Option<Vec<f64>>,
}

/// Affine IFS `τ_n(x) = A^{-1}(x + b_n)` with an expanding integer matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AffineRepr")]
pub struct AffineIfs {
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    digits: Vec<Vec<i64>>,
    weights: Vec<f64>,
    #[serde(skip)]
    a_inv: DMatrix<f64>,
}

impl TryFrom<AffineRepr> for AffineIfs {
    type Error = WavelabError;
    fn try_from(r: AffineRepr) -> Result<Self> {
        Self::new(r.a, r.digits, r.weights)
    }
}

impl AffineIfs {
    /// Uniform weights when `weights` is `None`.
    pub fn new(a: Vec<Vec<i64>>, digits: Vec<Vec<i64>>, weights: Option<Vec<f64>>) -> Result<Self> {
        let d = a.len();
        if d == 0 || a.iter().any(|row| row.len() != d) {
            return input("A must be a non-empty square matrix");
        }
        if digits.is_empty() || digits.iter().any(|b| b.len() != d) {
            return input(format!("need at least one digit of dimension {d}"));
        }
        let n = digits.len();
        let weights = weights.unwrap_or_else(|| vec![1.0 / n as f64; n]);
        if weights.len() != n || weights.iter().any(|&p| p.is_nan() || p <= 0.0) {
            return input("weights must be positive, one per digit");
        }
        if (weights.iter().sum::<f64>() - 1.0).abs() > WEIGHT_TOL {
            return input("weights must sum to 1");
        }
        let am = DMatrix::from_fn(d, d, |i, j| a[i][j] as f64);
        if am.complex_eigenvalues().iter().any(|l| l.norm() <= 1.0) {
            return input("A must have all eigenvalues outside the closed unit disk");
        }
        let a_inv = am
            .try_inverse()
            .ok_or_else(|| WavelabError::Input("A is singular".into()))?;
        for i in 0..n {
            for j in 0..i {
                let diff = DVector::from_fn(d, |k, _| (digits[i][k] - digits[j][k]) as f64);
                let q = &a_inv * diff;
                if q.iter().all(|v| (v - v.round()).abs() < 1e-9) {
                    return input(format!("digits {} and {} agree modulo A·Z^d", j + 1, i + 1));
                }
            }
        }
        Ok(Self {
            a,
            digits,
            weights,
            a_inv,
        })
    }

    /// `A = 2I`, digits `(0,0), (1,0), (0,1)`, uniform weights.
    pub fn sierpinski() -> Self {
        Self::new(
            vec![vec![2, 0], vec![0, 2]],
            vec![vec![0, 0], vec![1, 0], vec![0, 1]],
            None,
        )
        .expect("valid preset")
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn a_inverse(&self) -> &DMatrix<f64> {
        &self.a_inv
    }

    /// Operator 2-norm of `A^{-1}`.
    pub fn inverse_norm(&self) -> f64 {
        self.a_inv.clone().singular_values().max()
    }

    fn digit(&self, n: usize) -> DVector<f64> {
        DVector::from_iterator(self.dim(), self.digits[n].iter().map(|&v| v as f64))
    }

    fn mean_digit(&self) -> DVector<f64> {
        (0..self.len()).fold(DVector::zeros(self.dim()), |acc, n| {
            acc + self.digit(n) * self.weights[n]
        })
    }

    fn digit_second_moment(&self) -> DMatrix<f64> {
        (0..self.len()).fold(DMatrix::zeros(self.dim(), self.dim()), |acc, n| {
            let b = self.digit(n);
            acc + &b * b.transpose() * self.weights[n]
        })
    }

    /// `τ_n(x)` with `n` counted from 1.
    pub fn apply(&self, n: usize, x: &DVector<f64>) -> DVector<f64> {
        &self.a_inv * (x + self.digit(n - 1))
    }

    /// `E[x] = (A − I)^{-1} Σ p_n b_n`.
    pub fn mean(&self) -> DVector<f64> {
        let d = self.dim();
        let am = DMatrix::from_fn(d, d, |i, j| self.a[i][j] as f64);
        let shifted = am - DMatrix::identity(d, d);
        shifted
            .lu()
            .solve(&self.mean_digit())
            .expect("A − I is invertible for expanding A")
    }

    /// `E[x xᵀ]` from `M − A^{-1} M A^{-T} = A^{-1}(E b̄ᵀ + b̄ Eᵀ + B₂)A^{-T}`.
    pub fn second_moment(&self) -> DMatrix<f64> {
        let d = self.dim();
        let e = self.mean();
        let bbar = self.mean_digit();
        let c = &self.a_inv
            * (&e * bbar.transpose() + &bbar * e.transpose() + self.digit_second_moment())
            * self.a_inv.transpose();
        let k = DMatrix::identity(d * d, d * d) - self.a_inv.kronecker(&self.a_inv);
        let vec_c = DVector::from_column_slice(c.as_slice());
        let m = k.lu().solve(&vec_c).expect("Stein operator is invertible");
        DMatrix::from_column_slice(d, d, m.as_slice())
    }
}

/// `Σ_{k ≤ L} A^{-k} b_{w_k}`.
pub fn code_to_point(ifs: &AffineIfs, word: &Word) -> Result<DVector<f64>> {
    if word.is_empty() {
        return input("word must be non-empty");
    }
    if let Some(&s) = word.symbols().iter().find(|&&s| s > ifs.len()) {
        return input(format!("symbol {s} outside 1..{}", ifs.len()));
    }
    Ok(word
        .symbols()
        .iter()
        .rev()
        .fold(DVector::zeros(ifs.dim()), |x, &s| ifs.apply(s, &x)))
}

/// Chaos-game points stored row by row.
#[derive(Clone, Debug, PartialEq)]
pub struct ChaosSamples {
    dim: usize,
    coords: Vec<f64>,
}

impl ChaosSamples {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks(self.dim)
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record((0..self.dim).map(|k| format!("x{k}")))?;
        for p in self.points() {
            w.write_record(p.iter().map(|v| format!("{v:.17e}")))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Each sample is `V` of [`BURN_IN`] i.i.d. digits drawn with the IFS weights.
pub fn chaos_game(ifs: &AffineIfs, samples: usize, seed: u64) -> Result<ChaosSamples> {
    let dist = WeightedIndex::new(ifs.weights())
        .map_err(|e| WavelabError::Input(format!("weights: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = ifs.dim();
    let digits: Vec<DVector<f64>> = (0..ifs.len()).map(|n| ifs.digit(n)).collect();
    let mut coords = Vec::with_capacity(samples * d);
    let mut word = vec![0usize; BURN_IN];
    for _ in 0..samples {
        for w in word.iter_mut() {
            *w = dist.sample(&mut rng);
        }
        let x = word
            .iter()
            .rev()
            .fold(DVector::zeros(d), |x, &s| &ifs.a_inv * (x + &digits[s]));
        coords.extend(x.iter());
    }
    Ok(ChaosSamples { dim: d, coords })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    pub statistic: String,
    pub expected: f64,
    pub observed: f64,
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub samples: usize,
    pub seed: u64,
    pub order: usize,
    pub checks: Vec<MomentCheck>,
    pub max_abs_z: f64,
}

fn z_check(statistic: String, expected: f64, values: &[f64]) -> MomentCheck {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let diff = mean - expected;
    let z = if diff == 0.0 {
        0.0
    } else {
        diff / (var / n).sqrt()
    };
    MomentCheck {
        statistic,
        expected,
        observed: mean,
        z,
    }
}

/// z-scores of the analytic moments and the self-similarity identity up to `order`.
///
/// Self-similarity statistics are `x − Σ p_n τ_n x` and `x xᵀ − Σ p_n τ_n x (τ_n x)ᵀ`,
/// both with mean 0 under an invariant measure.
pub fn invariance_from_samples(
    ifs: &AffineIfs,
    pts: &ChaosSamples,
    order: usize,
) -> Result<InvarianceReport> {
    if !(1..=2).contains(&order) {
        return input("moment order must be 1 or 2");
    }
    if pts.len() < 2 || pts.dim() != ifs.dim() {
        return input("sample set does not match the IFS");
    }
    let d = ifs.dim();
    let ainv = &ifs.a_inv;
    let bbar = ifs.mean_digit();
    let b2 = ifs.digit_second_moment();
    let pairs: Vec<(usize, usize)> = if order == 2 {
        (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect()
    } else {
        Vec::new()
    };
    let n = pts.len();
    let mut first = vec![Vec::with_capacity(n); d];
    let mut first_ss = vec![Vec::with_capacity(n); d];
    let mut second = vec![Vec::with_capacity(n); pairs.len()];
    let mut second_ss = vec![Vec::with_capacity(n); pairs.len()];
    for p in pts.points() {
        let x = DVector::from_column_slice(p);
        let image = ainv * (&x + &bbar);
        for i in 0..d {
            first[i].push(x[i]);
            first_ss[i].push(x[i] - image[i]);
        }
        if !pairs.is_empty() {
            let inner = &x * x.transpose() + &x * bbar.transpose() + &bbar * x.transpose() + &b2;
            let image2 = ainv * inner * ainv.transpose();
            for (s, &(i, j)) in pairs.iter().enumerate() {
                second[s].push(x[i] * x[j]);
                second_ss[s].push(x[i] * x[j] - image2[(i, j)]);
            }
        }
    }

    let mean = ifs.mean();
    let mut checks = Vec::new();
    for i in 0..d {
        checks.push(z_check(format!("E[x{i}]"), mean[i], &first[i]));
        checks.push(z_check(
            format!("self-similarity E[x{i}]"),
            0.0,
            &first_ss[i],
        ));
    }
    if order == 2 {
        let m = ifs.second_moment();
        for (s, &(i, j)) in pairs.iter().enumerate() {
            checks.push(z_check(format!("E[x{i} x{j}]"), m[(i, j)], &second[s]));
            checks.push(z_check(
                format!("self-similarity E[x{i} x{j}]"),
                0.0,
                &second_ss[s],
            ));
        }
    }
    let max_abs_z = checks.iter().map(|c| c.z.abs()).fold(0.0, f64::max);
    Ok(InvarianceReport {
        samples: n,
        seed: 0,
        order,
        checks,
        max_abs_z,
    })
}

pub fn strong_invariance_check(
    ifs: &AffineIfs,
    samples: usize,
    seed: u64,
    order: usize,
) -> Result<InvarianceReport> {
    if samples < MIN_SAMPLES {
        return input(format!("need at least {MIN_SAMPLES} samples"));
    }
    let pts = chaos_game(ifs, samples, seed)?;
    let mut report = invariance_from_samples(ifs, &pts, order)?;
    report.seed = seed;
    Ok(report)
}
