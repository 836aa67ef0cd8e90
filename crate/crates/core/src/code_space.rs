//! Finite-depth cylinder functions on the code space of an iterated function
//! system.
//!
//! A point of the code space is a one-sided word `w_1 w_2 ...` over the
//! alphabet `{1..N}`. The shift `σ` drops the first symbol and the branch
//! `τ_i` prepends `i`. The measure is the product measure with branch
//! weights `p_1..p_N`. A function that depends only on the first `L`
//! symbols is stored as `N^L` complex values in canonical word order
//! (`w_1` most significant), so every operator below is exact.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{input, Result, WavelabError};

pub type C64 = Complex64;

/// Default cap on the number of stored values of a single cylinder function.
pub const DEFAULT_MAX_CELLS: usize = 1 << 24;

/// Environment variable that overrides [`DEFAULT_MAX_CELLS`].
pub const MAX_CELLS_ENV: &str = "WAVELAB_MAX_CELLS";

const WEIGHT_SUM_TOL: f64 = 1e-14;

fn default_max_cells() -> usize {
    std::env::var(MAX_CELLS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_MAX_CELLS)
}

/// Branch count and branch weights of an IFS code space.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "IfsSpecRepr", into = "IfsSpecRepr")]
pub struct IfsSpec {
    n: usize,
    weights: Vec<f64>,
    max_cells: usize,
}

#[derive(Serialize, Deserialize)]
struct IfsSpecRepr {
    #[serde(rename = "N")]
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
}

impl TryFrom<IfsSpecRepr> for IfsSpec {
    type Error = WavelabError;

    fn try_from(repr: IfsSpecRepr) -> Result<Self> {
        match repr.weights {
            Some(w) => {
                if w.len() != repr.n {
                    return input(format!("{} weights given for N = {}", w.len(), repr.n));
                }
                IfsSpec::with_weights(w)
            }
            None => IfsSpec::uniform(repr.n),
        }
    }
}

impl From<IfsSpec> for IfsSpecRepr {
    fn from(spec: IfsSpec) -> Self {
        let weights = (!spec.is_uniform()).then_some(spec.weights);
        IfsSpecRepr { n: spec.n, weights }
    }
}

impl PartialEq for IfsSpec {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self
                .weights
                .iter()
                .zip(&other.weights)
                .all(|(a, b)| (a - b).abs() <= 1e-15)
    }
}

impl IfsSpec {
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return input(format!("branch count must be at least 2, got {n}"));
        }
        Ok(Self {
            n,
            weights: vec![1.0 / n as f64; n],
            max_cells: default_max_cells(),
        })
    }

    pub fn with_weights(weights: Vec<f64>) -> Result<Self> {
        let n = weights.len();
        if n < 2 {
            return input(format!("branch count must be at least 2, got {n}"));
        }
        if let Some(p) = weights.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return input(format!("branch weights must be positive, got {p}"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() >= WEIGHT_SUM_TOL {
            return input(format!("branch weights sum to {sum}, not 1"));
        }
        Ok(Self {
            n,
            weights,
            max_cells: default_max_cells(),
        })
    }

    /// Replaces the cap on stored values per function.
    pub fn with_max_cells(mut self, max_cells: usize) -> Self {
        self.max_cells = max_cells.max(1);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, symbol: usize) -> f64 {
        self.weights[symbol - 1]
    }

    pub fn max_cells(&self) -> usize {
        self.max_cells
    }

    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.n as f64;
        self.weights.iter().all(|p| (p - u).abs() <= 1e-15)
    }

    /// Number of values stored at `depth`, or a capacity error.
    pub fn cells(&self, depth: usize) -> Result<usize> {
        let mut cells: u128 = 1;
        for _ in 0..depth {
            cells *= self.n as u128;
            if cells > self.max_cells as u128 {
                return Err(WavelabError::Capacity {
                    cells,
                    cap: self.max_cells,
                });
            }
        }
        Ok(cells as usize)
    }

    fn check_same(&self, other: &IfsSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            input("functions live on different code spaces")
        }
    }
}

/// A finite word over `{1..N}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    symbols: Vec<usize>,
}

impl Word {
    pub fn new(n: usize, symbols: Vec<usize>) -> Result<Self> {
        if let Some(s) = symbols.iter().find(|&&s| s == 0 || s > n) {
            return input(format!("symbol {s} outside 1..{n}"));
        }
        Ok(Self { symbols })
    }

    pub fn empty() -> Self {
        Self {
            symbols: Vec::new(),
        }
    }

    /// The word of length `len` with canonical index `index`.
    pub fn from_index(n: usize, len: usize, mut index: usize) -> Self {
        let mut symbols = vec![0; len];
        for slot in symbols.iter_mut().rev() {
            *slot = index % n + 1;
            index /= n;
        }
        Self { symbols }
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Canonical index `Σ (w_k − 1) N^(L−k)`.
    pub fn index(&self, n: usize) -> usize {
        self.symbols.iter().fold(0, |acc, &s| acc * n + (s - 1))
    }

    /// Product weight `p_{w_1} ··· p_{w_L}` of the cylinder `[w]`.
    pub fn measure(&self, spec: &IfsSpec) -> f64 {
        self.symbols.iter().map(|&s| spec.weight(s)).product()
    }
}

/// A complex function on the code space depending on the first `depth` symbols.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CylinderRepr", into = "CylinderRepr")]
pub struct CylinderFn {
    spec: IfsSpec,
    depth: usize,
    values: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct CylinderRepr {
    #[serde(flatten)]
    spec: IfsSpec,
    depth: usize,
    values: Vec<C64>,
}

impl TryFrom<CylinderRepr> for CylinderFn {
    type Error = WavelabError;

    fn try_from(r: CylinderRepr) -> Result<Self> {
        CylinderFn::from_values(&r.spec, r.depth, r.values)
    }
}

impl From<CylinderFn> for CylinderRepr {
    fn from(f: CylinderFn) -> Self {
        CylinderRepr {
            spec: f.spec,
            depth: f.depth,
            values: f.values,
        }
    }
}

impl CylinderFn {
    pub fn from_values(spec: &IfsSpec, depth: usize, values: Vec<C64>) -> Result<Self> {
        let cells = spec.cells(depth)?;
        if values.len() != cells {
            return input(format!(
                "depth {depth} over N = {} needs {cells} values, got {}",
                spec.n(),
                values.len()
            ));
        }
        Ok(Self {
            spec: spec.clone(),
            depth,
            values,
        })
    }

    pub fn from_real(spec: &IfsSpec, depth: usize, values: &[f64]) -> Result<Self> {
        Self::from_values(
            spec,
            depth,
            values.iter().map(|&v| C64::new(v, 0.0)).collect(),
        )
    }

    /// Builds a function from its value on each word of length `depth`.
    pub fn from_fn(spec: &IfsSpec, depth: usize, f: impl Fn(&Word) -> C64) -> Result<Self> {
        let cells = spec.cells(depth)?;
        let values = (0..cells)
            .map(|i| f(&Word::from_index(spec.n(), depth, i)))
            .collect();
        Ok(Self {
            spec: spec.clone(),
            depth,
            values,
        })
    }

    pub fn constant(spec: &IfsSpec, c: C64) -> Self {
        Self {
            spec: spec.clone(),
            depth: 0,
            values: vec![c],
        }
    }

    pub fn one(spec: &IfsSpec) -> Self {
        Self::constant(spec, C64::new(1.0, 0.0))
    }

    pub fn zeros(spec: &IfsSpec, depth: usize) -> Result<Self> {
        let cells = spec.cells(depth)?;
        Ok(Self {
            spec: spec.clone(),
            depth,
            values: vec![C64::new(0.0, 0.0); cells],
        })
    }

    /// Indicator of the cylinder set `[word]`.
    pub fn indicator(spec: &IfsSpec, word: &Word) -> Result<Self> {
        if let Some(&s) = word.symbols().iter().find(|&&s| s > spec.n()) {
            return input(format!("symbol {s} outside 1..{}", spec.n()));
        }
        let mut f = Self::zeros(spec, word.len())?;
        f.values[word.index(spec.n())] = C64::new(1.0, 0.0);
        Ok(f)
    }

    pub fn spec(&self) -> &IfsSpec {
        &self.spec
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    /// Value on the cylinder `[word]`; `word` must have length `depth`.
    pub fn at(&self, word: &Word) -> C64 {
        self.values[word.index(self.spec.n())]
    }

    /// Same function viewed at a larger depth.
    pub fn lift(&self, depth: usize) -> Result<Self> {
        if depth < self.depth {
            return input(format!("cannot lift depth {} to {depth}", self.depth));
        }
        if depth == self.depth {
            return Ok(self.clone());
        }
        let cells = self.spec.cells(depth)?;
        let rep = cells / self.values.len();
        let values = self
            .values
            .iter()
            .flat_map(|&v| std::iter::repeat_n(v, rep))
            .collect();
        Ok(Self {
            spec: self.spec.clone(),
            depth,
            values,
        })
    }

    /// Conditional expectation onto the first `depth` symbols (tail average).
    pub fn restrict_mean(&self, depth: usize) -> Result<Self> {
        if depth > self.depth {
            return input(format!("cannot restrict depth {} to {depth}", self.depth));
        }
        let n = self.spec.n();
        let mut values = self.values.clone();
        for _ in depth..self.depth {
            values = values
                .chunks_exact(n)
                .map(|c| c.iter().zip(self.spec.weights()).map(|(v, p)| v * p).sum())
                .collect();
        }
        Ok(Self {
            spec: self.spec.clone(),
            depth,
            values,
        })
    }

    fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            spec: self.spec.clone(),
            depth: self.depth,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.spec.check_same(&other.spec)?;
        let depth = self.depth.max(other.depth);
        let a = self.lift(depth)?;
        let b = other.lift(depth)?;
        let values = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(&x, &y)| f(x, y))
            .collect();
        Ok(Self {
            spec: self.spec.clone(),
            depth,
            values,
        })
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|v| v * c)
    }

    /// Pointwise `|f|²` as a real-valued cylinder function.
    pub fn abs2(&self) -> Self {
        self.map(|v| C64::new(v.norm_sqr(), 0.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product, lifted to the larger depth.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Largest pointwise modulus.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn min_abs(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// `‖self − other‖∞` after lifting to a common depth.
    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.sup_norm())
    }

    /// `∫ f dμ` for the product measure.
    pub fn integrate(&self) -> C64 {
        let n = self.spec.n();
        let mut values = self.values.clone();
        while values.len() > 1 {
            let stride = values.len() / n;
            values = (0..stride)
                .map(|v| {
                    (0..n)
                        .map(|b| values[b * stride + v] * self.spec.weights[b])
                        .sum()
                })
                .collect();
        }
        values[0]
    }

    /// `⟨f, g⟩ = ∫ f·conj(g) dμ`.
    pub fn inner_product(&self, other: &Self) -> Result<C64> {
        Ok(self.zip_with(other, |a, b| a * b.conj())?.integrate())
    }

    pub fn norm_sq(&self) -> f64 {
        self.abs2().integrate().re
    }

    /// The isometry `S f = f ∘ σ`.
    pub fn compose_sigma(&self) -> Result<Self> {
        let n = self.spec.n();
        self.spec.cells(self.depth + 1)?;
        let mut values = Vec::with_capacity(self.values.len() * n);
        for _ in 0..n {
            values.extend_from_slice(&self.values);
        }
        Ok(Self {
            spec: self.spec.clone(),
            depth: self.depth + 1,
            values,
        })
    }

    /// The transfer operator `S* f = Σ p_n f ∘ τ_n`.
    pub fn adjoint_sigma(&self) -> Self {
        if self.depth == 0 {
            return self.clone();
        }
        let stride = self.values.len() / self.spec.n();
        let values = (0..stride)
            .map(|v| {
                self.spec
                    .weights
                    .iter()
                    .enumerate()
                    .map(|(b, p)| self.values[b * stride + v] * p)
                    .sum()
            })
            .collect();
        Self {
            spec: self.spec.clone(),
            depth: self.depth - 1,
            values,
        }
    }

    /// `E_σ = S S*`, the projection onto functions of the form `g ∘ σ`.
    ///
    /// Depth is preserved; a constant is its own expectation.
    pub fn conditional_expectation(&self) -> Result<Self> {
        if self.depth == 0 {
            return Ok(self.clone());
        }
        self.adjoint_sigma().compose_sigma()
    }

    /// `f ∘ τ_k` for a branch `k` in `1..=N`.
    pub fn precompose_branch(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.spec.n() {
            return input(format!("branch {k} outside 1..{}", self.spec.n()));
        }
        if self.depth == 0 {
            return Ok(self.clone());
        }
        let stride = self.values.len() / self.spec.n();
        Ok(Self {
            spec: self.spec.clone(),
            depth: self.depth - 1,
            values: self.values[(k - 1) * stride..k * stride].to_vec(),
        })
    }
}

/// `S_m f = m · (f ∘ σ)`.
pub fn weighted_compose(m: &CylinderFn, f: &CylinderFn) -> Result<CylinderFn> {
    m.multiply(&f.compose_sigma()?)
}

/// `S_m* f = S*(conj(m) · f)`.
pub fn weighted_adjoint(m: &CylinderFn, f: &CylinderFn) -> Result<CylinderFn> {
    Ok(m.conj().multiply(f)?.adjoint_sigma())
}

/// The Ruelle operator `R_W f = S*(W · f)`.
pub fn ruelle_apply(w: &CylinderFn, f: &CylinderFn) -> Result<CylinderFn> {
    Ok(w.multiply(f)?.adjoint_sigma())
}

/// Finds `h` with `R_W h = h` and `∫ h dμ = 1` by power iteration from `h ≡ 1`.
///
/// Every iterate is kept at `depth`; `W` may be at most one level deeper.
pub fn harmonic_solve(
    w: &CylinderFn,
    depth: usize,
    tol: f64,
    max_iter: usize,
) -> Result<CylinderFn> {
    if w.depth() > depth + 1 {
        return input(format!(
            "R_W with W of depth {} does not preserve depth {depth}",
            w.depth()
        ));
    }
    if w.values().iter().any(|v| v.re < 0.0 || v.im != 0.0) {
        return input("Ruelle weight must be real and nonnegative");
    }
    let spec = w.spec();
    let mut h = CylinderFn::one(spec).lift(depth)?;
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let rh = ruelle_apply(w, &h)?.lift(depth)?;
        residual = rh.sup_distance(&h)?;
        if residual < tol {
            return Ok(h);
        }
        let mass = rh.integrate();
        if mass.norm() == 0.0 {
            break;
        }
        h = rh.scale(mass.inv());
    }
    Err(WavelabError::Convergence {
        iterations: max_iter,
        residual,
    })
}

/// Both sides of `∫ R_W(1_A) dμ = ∫_A W dμ` for the cylinder `A = [word]`.
pub fn density_check(w: &CylinderFn, word: &Word) -> Result<(C64, C64)> {
    let indicator = CylinderFn::indicator(w.spec(), word)?;
    let lhs = ruelle_apply(w, &indicator)?.integrate();
    let rhs = w.multiply(&indicator)?.integrate();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn uni(n: usize) -> IfsSpec {
        IfsSpec::uniform(n).unwrap()
    }

    fn real(spec: &IfsSpec, depth: usize, v: &[f64]) -> CylinderFn {
        CylinderFn::from_real(spec, depth, v).unwrap()
    }

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn spec_validation() {
        assert!(IfsSpec::uniform(1).is_err());
        assert!(IfsSpec::with_weights(vec![0.5, 0.6]).is_err());
        assert!(IfsSpec::with_weights(vec![1.2, -0.2]).is_err());
        assert!(IfsSpec::with_weights(vec![0.25, 0.75]).is_ok());
    }

    #[test]
    fn word_index_is_canonical() {
        let w = Word::new(3, vec![2, 1, 3]).unwrap();
        assert_eq!(w.index(3), 9 + 2);
        assert_eq!(Word::from_index(3, 3, 11), w);
        assert!(Word::new(2, vec![3]).is_err());
    }

    #[test]
    fn integrate_examples() {
        let s = uni(2);
        assert!(close(real(&s, 1, &[3.0, 1.0]).integrate(), c(2.0)));
        assert!(close(CylinderFn::constant(&s, c(4.5)).integrate(), c(4.5)));
        let p = IfsSpec::with_weights(vec![0.25, 0.75]).unwrap();
        assert!(close(real(&p, 1, &[1.0, 0.0]).integrate(), c(0.25)));
    }

    #[test]
    fn compose_sigma_examples() {
        let s = uni(2);
        let one = CylinderFn::one(&s).compose_sigma().unwrap();
        assert_eq!(one.depth(), 1);
        assert_eq!(one.values(), &[c(1.0), c(1.0)]);

        let ind = real(&s, 1, &[1.0, 0.0]).compose_sigma().unwrap();
        assert_eq!(ind.values(), &[c(1.0), c(0.0), c(1.0), c(0.0)]);

        let f = real(&s, 1, &[3.0, 1.0]);
        let sf = f.compose_sigma().unwrap();
        assert!((sf.norm_sq().sqrt() - 5f64.sqrt()).abs() < 1e-14);
        assert!((f.norm_sq().sqrt() - 5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn compose_sigma_respects_cap() {
        let s = uni(2).with_max_cells(4);
        let f = CylinderFn::zeros(&s, 2).unwrap();
        assert!(matches!(
            f.compose_sigma(),
            Err(WavelabError::Capacity { .. })
        ));
    }

    #[test]
    fn adjoint_examples() {
        let s = uni(2);
        let w11 = CylinderFn::indicator(&s, &Word::new(2, vec![1, 1]).unwrap()).unwrap();
        let a = w11.adjoint_sigma();
        assert_eq!(a.depth(), 1);
        assert!(close(a.values()[0], c(0.5)) && close(a.values()[1], c(0.0)));
        assert!(close(
            CylinderFn::one(&s).adjoint_sigma().values()[0],
            c(1.0)
        ));

        let w1 = CylinderFn::indicator(&s, &Word::new(2, vec![1]).unwrap()).unwrap();
        let lhs = w1.compose_sigma().unwrap().inner_product(&w11).unwrap();
        let rhs = w1.inner_product(&w11.adjoint_sigma()).unwrap();
        assert!(close(lhs, c(0.25)) && close(rhs, c(0.25)));
    }

    #[test]
    fn conditional_expectation_examples() {
        let s = uni(2);
        let w11 = CylinderFn::indicator(&s, &Word::new(2, vec![1, 1]).unwrap()).unwrap();
        let e = w11.conditional_expectation().unwrap();
        let expect = [0.5, 0.0, 0.5, 0.0];
        for (v, x) in e.values().iter().zip(expect) {
            assert!(close(*v, c(x)));
        }
        let one = CylinderFn::one(&s).lift(2).unwrap();
        assert!(
            one.conditional_expectation()
                .unwrap()
                .sup_distance(&one)
                .unwrap()
                < 1e-15
        );
    }

    #[test]
    fn multiply_and_inner_product() {
        let s = uni(2);
        let f = real(&s, 1, &[1.0, 0.0]);
        let g = real(&s, 1, &[0.0, 1.0]);
        assert_eq!(f.multiply(&g).unwrap().sup_norm(), 0.0);
        assert!(close(f.inner_product(&g).unwrap(), c(0.0)));
        let ones = real(&s, 1, &[1.0, 1.0]);
        assert!(close(ones.inner_product(&ones).unwrap(), c(1.0)));
        let f2 = real(&s, 1, &[2.0, 0.0]);
        let g2 = CylinderFn::one(&s).lift(2).unwrap();
        assert!(close(f2.inner_product(&g2).unwrap(), c(1.0)));

        let other = uni(3);
        assert!(f.multiply(&CylinderFn::one(&other)).is_err());
    }

    #[test]
    fn weighted_compose_examples() {
        let s = uni(2);
        let m = real(&s, 1, &[2f64.sqrt(), 0.0]);
        let f =
            CylinderFn::from_values(&s, 1, vec![C64::new(1.0, 2.0), C64::new(-3.0, 0.5)]).unwrap();
        let smf = weighted_compose(&m, &f).unwrap();
        let r2 = 2f64.sqrt();
        let expect = [f.values()[0] * r2, f.values()[1] * r2, c(0.0), c(0.0)];
        for (v, x) in smf.values().iter().zip(expect) {
            assert!(close(*v, x));
        }
        assert!((smf.norm_sq() - f.norm_sq()).abs() < 1e-14);

        let one = CylinderFn::one(&s);
        assert_eq!(
            weighted_compose(&one, &f).unwrap(),
            f.compose_sigma().unwrap()
        );

        let back = weighted_adjoint(&m, &smf).unwrap();
        assert!(back.sup_distance(&f).unwrap() < 1e-14);
    }

    #[test]
    fn ruelle_examples() {
        let s = uni(2);
        let w = real(&s, 1, &[2.0, 0.0]);
        let f = CylinderFn::from_values(&s, 1, vec![C64::new(1.5, -1.0), c(7.0)]).unwrap();
        let rf = ruelle_apply(&w, &f).unwrap();
        assert_eq!(rf.depth(), 0);
        assert!(close(rf.values()[0], f.values()[0]));

        let one = CylinderFn::one(&s);
        assert!(ruelle_apply(&w, &one).unwrap().sup_distance(&one).unwrap() < 1e-15);
        assert_eq!(ruelle_apply(&one, &f).unwrap(), f.adjoint_sigma());
    }

    #[test]
    fn harmonic_solve_finds_fixed_point() {
        let s = uni(2);
        // W = [1.5, 0.5, 0.5, 1.5] has S*W = [1, 1] so h = 1.
        let w = real(&s, 2, &[1.5, 0.5, 0.5, 1.5]);
        let h = harmonic_solve(&w, 1, 1e-12, 200).unwrap();
        assert!(h.sup_distance(&CylinderFn::one(&s)).unwrap() < 1e-12);

        // Column sums of the induced 2x2 transfer matrix are 1, but S*W != 1,
        // so the harmonic function is not constant.
        let w = real(&s, 2, &[1.5, 0.5, 0.3, 1.7]);
        let h = harmonic_solve(&w, 1, 1e-12, 500).unwrap();
        let rh = ruelle_apply(&w, &h).unwrap();
        assert!(rh.sup_distance(&h).unwrap() < 1e-12);
        assert!((h.integrate() - c(1.0)).norm() < 1e-12);
        assert!((h.values()[0] - h.values()[1]).norm() > 0.1);
    }

    #[test]
    fn harmonic_solve_reports_non_convergence() {
        let s = uni(2);
        let w = real(&s, 1, &[3.0, 1.0]);
        let r = harmonic_solve(&w, 2, 1e-14, 3);
        assert!(matches!(
            r,
            Err(WavelabError::Convergence { iterations: 3, .. })
        ));
        let deep = real(&s, 3, &[1.0; 8]);
        assert!(harmonic_solve(&deep, 1, 1e-12, 10).is_err());
    }

    #[test]
    fn density_check_examples() {
        let s = uni(2);
        let w = real(&s, 1, &[2.0, 0.0]);
        let (l, r) = density_check(&w, &Word::new(2, vec![1]).unwrap()).unwrap();
        assert!(close(l, c(1.0)) && close(r, c(1.0)));
        let (l, r) = density_check(&w, &Word::new(2, vec![2]).unwrap()).unwrap();
        assert!(close(l, c(0.0)) && close(r, c(0.0)));
        let one = CylinderFn::one(&s);
        let a = Word::new(2, vec![2, 1, 2]).unwrap();
        let (l, r) = density_check(&one, &a).unwrap();
        assert!(close(l, c(0.125)) && close(r, c(0.125)));
    }

    #[test]
    fn lift_then_restrict_recovers() {
        let s = IfsSpec::with_weights(vec![0.2, 0.3, 0.5]).unwrap();
        let f = real(&s, 2, &[1.0, -2.0, 3.0, 0.5, 0.25, 7.0, -1.0, 2.0, 9.0]);
        let back = f.lift(4).unwrap().restrict_mean(2).unwrap();
        assert!(back.sup_distance(&f).unwrap() < 1e-14);
    }

    #[test]
    fn json_shape() {
        let s = uni(2);
        let f = CylinderFn::from_values(&s, 1, vec![C64::new(1.0, -1.0), c(0.5)]).unwrap();
        let json = serde_json::to_value(&f).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"N": 2, "depth": 1, "values": [[1.0, -1.0], [0.5, 0.0]]})
        );
        let bad = serde_json::json!({"N": 2, "depth": 2, "values": [[1.0, 0.0]]});
        assert!(serde_json::from_value::<CylinderFn>(bad).is_err());
        let weighted = serde_json::json!({"N": 2, "weights": [0.25, 0.75], "depth": 0, "values": [[1.0, 0.0]]});
        let g: CylinderFn = serde_json::from_value(weighted).unwrap();
        assert!(!g.spec().is_uniform());
    }
}
