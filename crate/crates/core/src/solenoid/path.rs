use std::collections::BTreeMap;

use crate::code_space::{CylinderFn, IfsSpec, C64};
use crate::error::{input, Result};

/// A product `Π_n g_n(x_n)` of coordinate factors; missing coordinates are `1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathProduct {
    factors: BTreeMap<usize, CylinderFn>,
}

impl PathProduct {
    pub fn factors(&self) -> impl Iterator<Item = (usize, &CylinderFn)> {
        self.factors.iter().map(|(&k, g)| (k, g))
    }

    pub fn max_coord(&self) -> usize {
        self.factors.keys().next_back().copied().unwrap_or(0)
    }

    fn insert(&mut self, k: usize, g: CylinderFn) -> Result<()> {
        let g = match self.factors.remove(&k) {
            Some(old) => old.multiply(&g)?,
            None => g,
        };
        self.factors.insert(k, g);
        Ok(())
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (&k, g) in &other.factors {
            out.insert(k, g.clone())?;
        }
        Ok(out)
    }

    /// `F ∘ σ̂`: `g_0 ↦ g_0 ∘ σ` at coordinate 0, `g_n` moves to `n − 1`.
    fn compose_shift(&self) -> Result<Self> {
        let mut out = Self {
            factors: BTreeMap::new(),
        };
        for (&k, g) in &self.factors {
            if k == 0 {
                out.insert(0, g.compose_sigma()?)?;
            } else {
                out.insert(k - 1, g.clone())?;
            }
        }
        Ok(out)
    }

    /// `F ∘ σ̂^{-1}`: every factor moves up one coordinate.
    fn compose_shift_inverse(&self) -> Self {
        Self {
            factors: self
                .factors
                .iter()
                .map(|(&k, g)| (k + 1, g.clone()))
                .collect(),
        }
    }

    /// The product as a function of `x_K` alone, using `x_n = σ^{K−n}(x_K)`.
    fn flatten(&self, spec: &IfsSpec, top: usize) -> Result<CylinderFn> {
        let mut out = CylinderFn::one(spec);
        for (&k, g) in &self.factors {
            if k > top {
                return input(format!("coordinate {k} above flatten level {top}"));
            }
            let mut g = g.clone();
            for _ in k..top {
                g = g.compose_sigma()?;
            }
            out = out.multiply(&g)?;
        }
        Ok(out)
    }
}

/// A finite sum of [`PathProduct`]s: a cylinder function on the solenoid.
#[derive(Clone, Debug, PartialEq)]
pub struct PathFn {
    spec: IfsSpec,
    terms: Vec<PathProduct>,
}

impl PathFn {
    pub fn zero(spec: &IfsSpec) -> Self {
        Self {
            spec: spec.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(spec: &IfsSpec) -> Self {
        Self {
            spec: spec.clone(),
            terms: vec![PathProduct {
                factors: BTreeMap::new(),
            }],
        }
    }

    /// `g ∘ π_k`.
    pub fn coordinate(k: usize, g: &CylinderFn) -> Self {
        let mut factors = BTreeMap::new();
        factors.insert(k, g.clone());
        Self {
            spec: g.spec().clone(),
            terms: vec![PathProduct { factors }],
        }
    }

    /// `Π_k f_k ∘ π_k` for `f_0, f_1, …`.
    pub fn product(spec: &IfsSpec, coords: &[CylinderFn]) -> Result<Self> {
        let mut p = PathProduct {
            factors: BTreeMap::new(),
        };
        for (k, f) in coords.iter().enumerate() {
            if f.spec() != spec {
                return input("coordinate functions must share the code space");
            }
            p.insert(k, f.clone())?;
        }
        Ok(Self {
            spec: spec.clone(),
            terms: vec![p],
        })
    }

    pub fn spec(&self) -> &IfsSpec {
        &self.spec
    }

    pub fn terms(&self) -> &[PathProduct] {
        &self.terms
    }

    pub fn max_coord(&self) -> usize {
        self.terms
            .iter()
            .map(PathProduct::max_coord)
            .max()
            .unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return input("path functions over different code spaces");
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self {
            spec: self.spec.clone(),
            terms,
        })
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            // The scalar rides on coordinate 0.
            let g = match t.factors.remove(&0) {
                Some(g) => g.scale(c),
                None => CylinderFn::constant(&self.spec, c),
            };
            t.factors.insert(0, g);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.mul(b)?);
            }
        }
        Ok(Self {
            spec: self.spec.clone(),
            terms,
        })
    }

    pub fn conj(&self) -> Self {
        Self {
            spec: self.spec.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| PathProduct {
                    factors: t.factors.iter().map(|(&k, g)| (k, g.conj())).collect(),
                })
                .collect(),
        }
    }

    pub fn compose_shift(&self) -> Result<Self> {
        Ok(Self {
            spec: self.spec.clone(),
            terms: self
                .terms
                .iter()
                .map(PathProduct::compose_shift)
                .collect::<Result<_>>()?,
        })
    }

    pub fn compose_shift_inverse(&self) -> Self {
        Self {
            spec: self.spec.clone(),
            terms: self
                .terms
                .iter()
                .map(PathProduct::compose_shift_inverse)
                .collect(),
        }
    }

    /// The function as a cylinder function of `x_top`, `top ≥ max_coord`.
    pub fn flatten(&self, top: usize) -> Result<CylinderFn> {
        self.terms.iter().try_fold(
            CylinderFn::constant(&self.spec, C64::new(0.0, 0.0)),
            |acc, t| acc.add(&t.flatten(&self.spec, top)?),
        )
    }

    /// Pointwise sup distance through the common normal form.
    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        self.check(other)?;
        let top = self.max_coord().max(other.max_coord());
        self.flatten(top)?.sup_distance(&other.flatten(top)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> IfsSpec {
        IfsSpec::uniform(2).unwrap()
    }

    fn f(vals: &[f64]) -> CylinderFn {
        let d = match vals.len() {
            1 => 0,
            2 => 1,
            4 => 2,
            _ => unreachable!(),
        };
        CylinderFn::from_real(&spec(), d, vals).unwrap()
    }

    #[test]
    fn shift_rules() {
        let g0 = f(&[1.0, 2.0]);
        let g1 = f(&[3.0, 5.0]);
        let p = PathFn::product(&spec(), &[g0.clone(), g1.clone()]).unwrap();
        let shifted = p.compose_shift().unwrap();
        let want = PathFn::coordinate(0, &g0.compose_sigma().unwrap().multiply(&g1).unwrap());
        assert_eq!(shifted.sup_distance(&want).unwrap(), 0.0);
        let back = shifted.compose_shift_inverse();
        // σ̂^{-1} σ̂ = id on the solenoid.
        assert!(back.sup_distance(&p).unwrap() < 1e-15);
    }

    #[test]
    fn flatten_normal_form() {
        let g = f(&[1.0, -1.0]);
        let a = PathFn::coordinate(0, &g);
        let b = PathFn::coordinate(1, &g.compose_sigma().unwrap());
        // g(x_0) = g(σ x_1) = (S g)(x_1)
        assert_eq!(a.sup_distance(&b).unwrap(), 0.0);
        let c = PathFn::coordinate(1, &g);
        assert!(a.sup_distance(&c).unwrap() > 1.0);
    }

    #[test]
    fn algebra() {
        let g = f(&[1.0, 2.0, 3.0, 4.0]);
        let a = PathFn::coordinate(2, &g);
        let two = a.add(&a).unwrap();
        assert_eq!(two.sup_distance(&a.scale(C64::new(2.0, 0.0))).unwrap(), 0.0);
        assert_eq!(two.sub(&a).unwrap().sup_distance(&a).unwrap(), 0.0);
        let sq = a.mul(&a).unwrap();
        assert_eq!(
            sq.sup_distance(&PathFn::coordinate(2, &g.multiply(&g).unwrap()))
                .unwrap(),
            0.0
        );
        assert_eq!(
            PathFn::one(&spec())
                .mul(&a)
                .unwrap()
                .sup_distance(&a)
                .unwrap(),
            0.0
        );
    }
}
