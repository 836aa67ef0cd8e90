use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cmatrix::{self, max_entry};
use crate::code_space::C64;
use crate::error::{input, Result, WavelabError};

use super::matrix::{unitarity_residual, MatrixFunction, DEFAULT_GRID_TOL};

const PROJECTION_TOL: f64 = 1e-13;
const CIRCLE_TOL: f64 = 1e-12;

/// Zero of a Blaschke factor; `Infinity` gives the factor `I − P + z^{−N} P`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Pole {
    Finite(C64),
    Infinity,
}

impl Serialize for Pole {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Pole::Finite(a) => a.serialize(s),
            Pole::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Pole {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Finite(C64),
            Tag(String),
        }
        match Raw::deserialize(d)? {
            Raw::Finite(a) => Ok(Pole::Finite(a)),
            Raw::Tag(t) if t == "inf" => Ok(Pole::Infinity),
            Raw::Tag(t) => Err(serde::de::Error::custom(format!("unknown pole tag {t:?}"))),
        }
    }
}

/// `I − P + φ_a(z^power) P` with `φ_a(w) = (w − a)/(1 − conj(a) w)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeFactor {
    pub a: Pole,
    #[serde(rename = "P", with = "cmatrix")]
    pub p: DMatrix<C64>,
    pub power: usize,
}

impl BlaschkeFactor {
    pub fn new(a: Pole, p: DMatrix<C64>, power: usize) -> Result<Self> {
        let f = Self { a, p, power };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        if let Pole::Finite(a) = self.a {
            if !a.re.is_finite() || !a.im.is_finite() || (a.norm() - 1.0).abs() < CIRCLE_TOL {
                return Err(WavelabError::Input(format!(
                    "Blaschke zero {a} lies on the unit circle"
                )));
            }
        }
        if !self.p.is_square() {
            return input("projection must be square");
        }
        if self.power == 0 {
            return input("factor power must be positive");
        }
        let herm = max_entry(&(&self.p - self.p.adjoint()));
        let idem = max_entry(&(&self.p * &self.p - &self.p));
        if herm.max(idem) >= PROJECTION_TOL {
            return input(format!(
                "P is not an orthogonal projection (residual {:e})",
                herm.max(idem)
            ));
        }
        Ok(())
    }

    /// Scalar part `φ_a(z^power)`.
    pub fn phase(&self, z: C64) -> C64 {
        let w = z.powi(self.power as i32);
        match self.a {
            Pole::Infinity => w.inv(),
            Pole::Finite(a) => (w - a) / (C64::new(1.0, 0.0) - a.conj() * w),
        }
    }

    pub fn eval(&self, z: C64) -> DMatrix<C64> {
        let n = self.p.nrows();
        let id = DMatrix::<C64>::identity(n, n);
        &id - &self.p + &self.p * self.phase(z)
    }
}

/// `V · Π_k (I − P_k + φ_{a_k}(z^N) P_k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProductRepr", into = "ProductRepr")]
pub struct RationalMatrixProduct {
    v: DMatrix<C64>,
    factors: Vec<BlaschkeFactor>,
}

#[derive(Serialize, Deserialize)]
struct ProductRepr {
    #[serde(rename = "V", with = "cmatrix")]
    v: DMatrix<C64>,
    factors: Vec<BlaschkeFactor>,
}

impl TryFrom<ProductRepr> for RationalMatrixProduct {
    type Error = WavelabError;
    fn try_from(r: ProductRepr) -> Result<Self> {
        RationalMatrixProduct::new(r.v, r.factors)
    }
}

impl From<RationalMatrixProduct> for ProductRepr {
    fn from(p: RationalMatrixProduct) -> Self {
        ProductRepr {
            v: p.v,
            factors: p.factors,
        }
    }
}

impl RationalMatrixProduct {
    pub fn new(v: DMatrix<C64>, factors: Vec<BlaschkeFactor>) -> Result<Self> {
        if !v.is_square() {
            return input("left factor V must be square");
        }
        let n = v.nrows();
        let id = DMatrix::<C64>::identity(n, n);
        if max_entry(&(v.adjoint() * &v - id)) >= PROJECTION_TOL {
            return input("left factor V must be unitary");
        }
        for f in &factors {
            f.validate()?;
            if f.p.nrows() != n {
                return input("factor size differs from V");
            }
        }
        Ok(Self { v, factors })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            v: DMatrix::identity(n, n),
            factors: Vec::new(),
        }
    }

    pub fn v(&self) -> &DMatrix<C64> {
        &self.v
    }

    pub fn factors(&self) -> &[BlaschkeFactor] {
        &self.factors
    }
}

impl MatrixFunction for RationalMatrixProduct {
    fn dim(&self) -> usize {
        self.v.nrows()
    }

    fn eval(&self, z: C64) -> DMatrix<C64> {
        self.factors
            .iter()
            .fold(self.v.clone(), |acc, f| acc * f.eval(z))
    }
}

/// Builds the evaluator; the product is validated on construction.
pub fn blaschke_product(product: RationalMatrixProduct) -> RationalMatrixProduct {
    product
}

/// `U^G(z) = G(z^N) U(z)`.
pub struct LoopAction<G, U> {
    g: G,
    u: U,
    power: usize,
    /// Set when `G` is not unitary on the sampled points `z^N`.
    pub warning: Option<String>,
}

impl<G: MatrixFunction, U: MatrixFunction> MatrixFunction for LoopAction<G, U> {
    fn dim(&self) -> usize {
        self.u.dim()
    }

    fn eval(&self, z: C64) -> DMatrix<C64> {
        self.g.eval(z.powi(self.power as i32)) * self.u.eval(z)
    }
}

pub fn loop_action_circle<G: MatrixFunction, U: MatrixFunction>(
    g: G,
    u: U,
    power: usize,
    angles: &[f64],
) -> Result<LoopAction<G, U>> {
    if g.dim() != u.dim() {
        return input("G and U have different sizes");
    }
    let pushed: Vec<f64> = angles.iter().map(|t| t * power as f64).collect();
    let residual = unitarity_residual(&g, &pushed).max;
    let warning = (residual >= DEFAULT_GRID_TOL)
        .then(|| format!("G is not unitary on the grid (residual {residual:e})"));
    Ok(LoopAction {
        g,
        u,
        power,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_filters::matrix::{periodicity_residual, unit_circle_grid};

    fn diag(a: f64, b: f64) -> DMatrix<C64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(a, 0.0),
            C64::new(b, 0.0),
        ]))
    }

    #[test]
    fn single_factor_at_zero_and_infinity() {
        let p = diag(1.0, 0.0);
        let z = C64::from_polar(1.0, 0.3);
        let f0 = BlaschkeFactor::new(Pole::Finite(C64::new(0.0, 0.0)), p.clone(), 2).unwrap();
        let prod = RationalMatrixProduct::new(DMatrix::identity(2, 2), vec![f0]).unwrap();
        let v = prod.eval(z);
        assert!((v[(0, 0)] - z * z).norm() < 1e-15);
        assert!((v[(1, 1)] - 1.0).norm() < 1e-15);
        assert!(v[(0, 1)].norm() < 1e-15);

        let finf = BlaschkeFactor::new(Pole::Infinity, p, 2).unwrap();
        let v = finf.eval(z);
        assert!((v[(0, 0)] - (z * z).inv()).norm() < 1e-15);
    }

    #[test]
    fn empty_product_is_identity() {
        let prod = RationalMatrixProduct::identity(3);
        let v = prod.eval(C64::new(0.2, 0.9));
        assert_eq!(v, DMatrix::identity(3, 3));
    }

    #[test]
    fn rejects_bad_factors() {
        let p = diag(1.0, 0.0);
        assert!(BlaschkeFactor::new(Pole::Finite(C64::new(0.0, 1.0)), p.clone(), 2).is_err());
        assert!(BlaschkeFactor::new(Pole::Finite(C64::new(0.5, 0.0)), diag(2.0, 0.0), 2).is_err());
        assert!(BlaschkeFactor::new(Pole::Finite(C64::new(0.5, 0.0)), p, 0).is_err());
    }

    #[test]
    fn unitary_and_periodic() {
        let v = DMatrix::from_fn(2, 2, |r, c| C64::new(if r == c { 0.0 } else { 1.0 }, 0.0));
        let q = DMatrix::from_fn(2, 2, |_, _| C64::new(0.5, 0.0));
        let factors = vec![
            BlaschkeFactor::new(Pole::Finite(C64::new(0.5, 0.2)), q.clone(), 3).unwrap(),
            BlaschkeFactor::new(Pole::Finite(C64::new(2.0, -1.0)), diag(0.0, 1.0), 3).unwrap(),
            BlaschkeFactor::new(Pole::Infinity, q, 3).unwrap(),
        ];
        let prod = RationalMatrixProduct::new(v, factors).unwrap();
        let grid = unit_circle_grid(256);
        assert!(unitarity_residual(&prod, &grid).max < 1e-12);
        assert!(periodicity_residual(&prod, 3, &grid).max < 1e-12);
    }

    #[test]
    fn loop_action_examples() {
        let grid = unit_circle_grid(64);
        let u = RationalMatrixProduct::new(
            DMatrix::identity(2, 2),
            vec![BlaschkeFactor::new(Pole::Finite(C64::new(0.0, 0.0)), diag(1.0, 0.0), 2).unwrap()],
        )
        .unwrap();
        let id = RationalMatrixProduct::identity(2);
        let act = loop_action_circle(&id, &u, 2, &grid).unwrap();
        assert!(act.warning.is_none());
        let z = C64::from_polar(1.0, 1.1);
        assert_eq!(act.eval(z), u.eval(z));

        // G(w) = diag(w, 1) acting on diag(z², 1) gives diag(z⁴, 1).
        let g = RationalMatrixProduct::new(
            DMatrix::identity(2, 2),
            vec![BlaschkeFactor::new(Pole::Finite(C64::new(0.0, 0.0)), diag(1.0, 0.0), 1).unwrap()],
        )
        .unwrap();
        let act = loop_action_circle(&g, &u, 2, &grid).unwrap();
        let v = act.eval(z);
        assert!((v[(0, 0)] - z.powi(4)).norm() < 1e-14);
        assert!((v[(1, 1)] - 1.0).norm() < 1e-15);
        let before = unitarity_residual(&u, &grid).max;
        assert!(unitarity_residual(&act, &grid).max <= before + 1e-13);
        assert!(periodicity_residual(&act, 2, &grid).max < 1e-13);
    }

    #[test]
    fn non_unitary_g_is_flagged() {
        struct Scaled;
        impl MatrixFunction for Scaled {
            fn dim(&self) -> usize {
                2
            }
            fn eval(&self, _z: C64) -> DMatrix<C64> {
                DMatrix::identity(2, 2) * C64::new(2.0, 0.0)
            }
        }
        let u = RationalMatrixProduct::identity(2);
        let act = loop_action_circle(Scaled, &u, 2, &unit_circle_grid(8)).unwrap();
        assert!(act.warning.is_some());
    }

    #[test]
    fn json_round_trip() {
        let json = serde_json::json!({
            "V": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]],
            "factors": [
                {"a": "inf", "P": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]], "power": 2},
                {"a": [0.5, 0.0], "P": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]], "power": 2}
            ]
        });
        let p: RationalMatrixProduct = serde_json::from_value(json.clone()).unwrap();
        assert_eq!(p.factors().len(), 2);
        assert_eq!(p.factors()[0].a, Pole::Infinity);
        assert_eq!(serde_json::to_value(&p).unwrap(), json);
    }
}
