use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{input, Result};

/// Real polynomial with ascending coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Self(c)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    fn add_scaled(&mut self, other: &Poly, s: f64) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0.0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += s * b;
        }
    }

    fn times_x(&self, s: f64) -> Poly {
        let mut c = vec![0.0];
        c.extend(self.0.iter().map(|v| v * s));
        Poly(c)
    }
}

/// `n`-point Gauss–Chebyshev rule for the arcsine law on `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebyshevRule {
    nodes: Vec<f64>,
}

impl ChebyshevRule {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return input("rule needs at least one node");
        }
        let nodes = (1..=n)
            .map(|j| (1.0 - ((2 * j - 1) as f64 * PI / (2 * n) as f64).cos()) / 2.0)
            .collect();
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Exact for polynomials of degree below `2n`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().map(|&x| f(x)).sum::<f64>() / self.nodes.len() as f64
    }

    fn check_degree(&self, degree: usize) -> Result<()> {
        if degree >= 2 * self.nodes.len() {
            return input(format!(
                "degree {degree} needs more than {} nodes",
                self.nodes.len()
            ));
        }
        Ok(())
    }
}

/// `∫ x^k dμ = C(2k, k)/4^k`.
pub fn arcsine_moment(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * (2 * j - 1) as f64 / (2 * j) as f64)
}

fn logistic(x: f64) -> f64 {
    4.0 * x * (1.0 - x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticReport {
    /// `|∫ σ^k dμ − ∫ x^k dμ|` for `k = 0..=max_degree`.
    pub residuals: Vec<f64>,
    pub max: f64,
}

pub fn logistic_invariance(max_degree: usize, nodes: usize) -> Result<LogisticReport> {
    if nodes <= max_degree {
        return input(format!(
            "{nodes} nodes cannot integrate degree {}",
            2 * max_degree
        ));
    }
    let rule = ChebyshevRule::new(nodes)?;
    let residuals: Vec<f64> = (0..=max_degree as i32)
        .map(|k| (rule.integrate(|x| logistic(x).powi(k)) - rule.integrate(|x| x.powi(k))).abs())
        .collect();
    let max = residuals.iter().copied().fold(0.0, f64::max);
    Ok(LogisticReport { residuals, max })
}

/// `F f(x) = (f(τ_+(x)) + f(τ_−(x)))/2` with `τ_± = (1 ± √(1 − x))/2`, as a polynomial.
///
/// Uses the power sums `p_k = τ_+^k + τ_−^k`, `p_k = p_{k−1} − (x/4) p_{k−2}`.
pub fn branch_average(f: &Poly) -> Poly {
    let mut out = Poly(vec![0.0]);
    let mut prev = Poly(vec![2.0]);
    let mut cur = Poly(vec![1.0]);
    for (k, &c) in f.0.iter().enumerate() {
        let pk = match k {
            0 => prev.clone(),
            1 => cur.clone(),
            _ => {
                let mut next = cur.clone();
                next.add_scaled(&prev.times_x(0.25), -1.0);
                prev = std::mem::replace(&mut cur, next);
                cur.clone()
            }
        };
        out.add_scaled(&pk, c / 2.0);
    }
    out
}

/// `(1/x) ∫_0^x f(t) dt`, term by term.
pub fn mean_antiderivative(f: &Poly) -> Poly {
    Poly(
        f.0.iter()
            .enumerate()
            .map(|(k, c)| c / (k + 1) as f64)
            .collect(),
    )
}

/// The three pairings `⟨F f, g⟩_μ`, `⟨f, S g⟩_μ` and `⟨S*_int f, g⟩_μ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjointReport {
    pub branch_average: f64,
    pub composition: f64,
    pub mean_antiderivative: f64,
}

pub fn logistic_adjoint_compare(f: &Poly, g: &Poly, nodes: usize) -> Result<AdjointReport> {
    let rule = ChebyshevRule::new(nodes)?;
    rule.check_degree(f.degree() + 2 * g.degree())?;
    let ff = branch_average(f);
    let sf = mean_antiderivative(f);
    Ok(AdjointReport {
        branch_average: rule.integrate(|x| ff.eval(x) * g.eval(x)),
        composition: rule.integrate(|x| f.eval(x) * g.eval(logistic(x))),
        mean_antiderivative: rule.integrate(|x| sf.eval(x) * g.eval(x)),
    })
}
