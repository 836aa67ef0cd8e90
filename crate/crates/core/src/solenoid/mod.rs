//! Path-space measures on the solenoid, evaluated through exact moments.
//!
//! A point of the solenoid is a sequence `(x_0, x_1, …)` with
//! `σ(x_{n+1}) = x_n`. The measure `P` built from a Ruelle weight `W` and an
//! `R_W`-harmonic `h` is only ever touched through its moments
//! `∫ Π f_k(x_k) dP = ∫ f_0 R_W(f_1 R_W(⋯ R_W(f_K h))) dμ`.

mod path;

use serde::{Deserialize, Serialize};

use crate::code_space::{
    harmonic_solve, ruelle_apply, weighted_adjoint, weighted_compose, CylinderFn, IfsSpec, C64,
};
use crate::error::{input, Result, WavelabError};

pub use path::{PathFn, PathProduct};

/// Tolerance on `‖R_W h − h‖∞` and `|∫h − 1|`.
pub const HARMONIC_TOL: f64 = 1e-10;

/// Tolerance on `‖S*|m|² − 1‖∞` for `U_m` to be unitary.
pub const ADMISSIBLE_TOL: f64 = 1e-12;

/// `min |m|` below which `U_m^{-1}` is not formed.
pub const NONVANISHING_TOL: f64 = 1e-12;

const HARMONIC_SOLVE_TOL: f64 = 1e-13;
const HARMONIC_SOLVE_ITERS: usize = 100_000;

/// The measure `P` determined by `(W, h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolenoidMeasure {
    w: CylinderFn,
    h: CylinderFn,
    harmonic_residual: f64,
    mass_residual: f64,
}

impl SolenoidMeasure {
    pub fn new(w: CylinderFn, h: CylinderFn) -> Result<Self> {
        if w.spec() != h.spec() {
            return input("W and h live on different code spaces");
        }
        if w.values()
            .iter()
            .any(|v| v.im != 0.0 || v.re < 0.0 || !v.re.is_finite())
        {
            return input("W must be real and nonnegative");
        }
        let harmonic_residual = ruelle_apply(&w, &h)?.sup_distance(&h)?;
        let mass_residual = (h.integrate() - 1.0).norm();
        if harmonic_residual >= HARMONIC_TOL || mass_residual >= HARMONIC_TOL {
            return input(format!(
                "h is not a normalized R_W-harmonic function (residuals {harmonic_residual:e}, {mass_residual:e})"
            ));
        }
        Ok(Self {
            w,
            h,
            harmonic_residual,
            mass_residual,
        })
    }

    /// Uses `h ≡ 1` when `S* W = 1`, otherwise solves for `h`.
    pub fn from_weight(w: CylinderFn) -> Result<Self> {
        let one = CylinderFn::one(w.spec());
        let h = if w.adjoint_sigma().sup_distance(&one)? < ADMISSIBLE_TOL {
            one
        } else {
            harmonic_solve(
                &w,
                w.depth().saturating_sub(1),
                HARMONIC_SOLVE_TOL,
                HARMONIC_SOLVE_ITERS,
            )?
        };
        Self::new(w, h)
    }

    pub fn spec(&self) -> &IfsSpec {
        self.w.spec()
    }

    pub fn weight(&self) -> &CylinderFn {
        &self.w
    }

    pub fn harmonic(&self) -> &CylinderFn {
        &self.h
    }

    pub fn harmonic_residual(&self) -> f64 {
        self.harmonic_residual
    }

    pub fn mass_residual(&self) -> f64 {
        self.mass_residual
    }

    /// `∫ f_0 R_W(f_1 R_W(⋯ R_W(f_K h))) dμ`; an empty list gives `∫ h dμ`.
    pub fn moment(&self, coords: &[CylinderFn]) -> Result<C64> {
        let Some((last, rest)) = coords.split_last() else {
            return Ok(self.h.integrate());
        };
        let mut g = last.multiply(&self.h)?;
        for f in rest.iter().rev() {
            g = f.multiply(&ruelle_apply(&self.w, &g)?)?;
        }
        Ok(g.integrate())
    }

    /// `∫ F dP`.
    pub fn expect(&self, f: &PathFn) -> Result<C64> {
        if f.spec() != self.spec() {
            return input("path function over a different code space");
        }
        let one = CylinderFn::one(self.spec());
        let mut total = C64::new(0.0, 0.0);
        for t in f.terms() {
            let mut coords = vec![one.clone(); t.max_coord() + 1];
            for (k, g) in t.factors() {
                coords[k] = g.clone();
            }
            total += self.moment(&coords)?;
        }
        Ok(total)
    }

    /// `⟨F, G⟩_P = ∫ F conj(G) dP`.
    pub fn inner(&self, f: &PathFn, g: &PathFn) -> Result<C64> {
        self.expect(&f.mul(&g.conj())?)
    }
}

/// A moment request: the measure data plus coordinate functions `f_0..f_K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MomentRepr")]
pub struct MomentSpec {
    pub spec: IfsSpec,
    #[serde(rename = "W")]
    pub w: CylinderFn,
    pub h: HarmonicChoice,
    pub coords: Vec<CylinderFn>,
}

/// `h` given explicitly or `"auto"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HarmonicChoice {
    Given(CylinderFn),
    Auto(AutoTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

#[derive(Deserialize)]
struct MomentRepr {
    spec: IfsSpec,
    #[serde(rename = "W")]
    w: CylinderFn,
    h: HarmonicChoice,
    coords: Vec<CylinderFn>,
}

impl TryFrom<MomentRepr> for MomentSpec {
    type Error = WavelabError;
    fn try_from(r: MomentRepr) -> Result<Self> {
        let same = |f: &CylinderFn| f.spec() == &r.spec;
        let h_ok = match &r.h {
            HarmonicChoice::Given(h) => same(h),
            HarmonicChoice::Auto(_) => true,
        };
        if !same(&r.w) || !h_ok || !r.coords.iter().all(same) {
            return input("all functions must use the declared code space");
        }
        Ok(Self {
            spec: r.spec,
            w: r.w,
            h: r.h,
            coords: r.coords,
        })
    }
}

impl MomentSpec {
    pub fn measure(&self) -> Result<SolenoidMeasure> {
        match &self.h {
            HarmonicChoice::Given(h) => SolenoidMeasure::new(self.w.clone(), h.clone()),
            HarmonicChoice::Auto(_) => SolenoidMeasure::from_weight(self.w.clone()),
        }
    }
}

/// Moment value with the residuals of the measure data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub value: C64,
    pub harmonic_residual: f64,
    pub mass_residual: f64,
}

pub fn moment(ms: &MomentSpec) -> Result<MomentReport> {
    let measure = ms.measure()?;
    Ok(MomentReport {
        value: measure.moment(&ms.coords)?,
        harmonic_residual: measure.harmonic_residual(),
        mass_residual: measure.mass_residual(),
    })
}

/// `U_m F = (m ∘ π_0)(F ∘ σ̂)`.
pub fn apply_um(f: &PathFn, m: &CylinderFn) -> Result<PathFn> {
    PathFn::coordinate(0, m).mul(&f.compose_shift()?)
}

/// `U_m^{-1} F = (1/(m ∘ π_1))(F ∘ σ̂^{-1})`.
pub fn apply_um_inverse(f: &PathFn, m: &CylinderFn) -> Result<PathFn> {
    let low = m.min_abs();
    if low <= NONVANISHING_TOL {
        return Err(WavelabError::Precondition(format!(
            "m vanishes somewhere (min |m| = {low:e})"
        )));
    }
    let inv = CylinderFn::from_values(
        m.spec(),
        m.depth(),
        m.values().iter().map(|v| v.inv()).collect(),
    )?;
    PathFn::coordinate(1, &inv).mul(&f.compose_shift_inverse())
}

fn admissible_measure(m: &CylinderFn) -> Result<SolenoidMeasure> {
    let w = m.abs2();
    let one = CylinderFn::one(m.spec());
    let gap = w.adjoint_sigma().sup_distance(&one)?;
    if gap >= ADMISSIBLE_TOL {
        return Err(WavelabError::Precondition(format!(
            "S*|m|² differs from 1 by {gap:e}"
        )));
    }
    SolenoidMeasure::new(w, one)
}

/// How `U_m^n` was evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DilationRoute {
    /// `U_m^n W_0 f` for `n ≥ 0`.
    Forward,
    /// `U_m^{-|n|} W_0 f` through the explicit inverse.
    Inverse,
    /// `⟨W_0 f, U_m^{|n|} W_0 g⟩_P`, valid since `U_m` is unitary.
    Adjoint,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilationReport {
    pub n: i64,
    /// `⟨S_m^n f, g⟩_μ` (or `S_m^{*|n|}` for `n < 0`).
    pub lhs: C64,
    /// `⟨U_m^n W_0 f, W_0 g⟩_P`.
    pub rhs: C64,
    pub residual: f64,
    pub route: DilationRoute,
}

/// Checks `S_m^n = W_0* U_m^n W_0` and `S_m^{*|n|} = W_0* U_m^{−|n|} W_0` on `(f, g)`.
pub fn dilation_check(
    m: &CylinderFn,
    f: &CylinderFn,
    g: &CylinderFn,
    n: i64,
) -> Result<DilationReport> {
    let measure = admissible_measure(m)?;
    let k = n.unsigned_abs() as usize;
    let mut left = f.clone();
    for _ in 0..k {
        left = if n >= 0 {
            weighted_compose(m, &left)?
        } else {
            weighted_adjoint(m, &left)?
        };
    }
    let lhs = left.inner_product(g)?;

    let wf = PathFn::coordinate(0, f);
    let wg = PathFn::coordinate(0, g);
    let (rhs, route) = if n >= 0 {
        let mut p = wf;
        for _ in 0..k {
            p = apply_um(&p, m)?;
        }
        (measure.inner(&p, &wg)?, DilationRoute::Forward)
    } else if m.min_abs() > NONVANISHING_TOL {
        let mut p = wf;
        for _ in 0..k {
            p = apply_um_inverse(&p, m)?;
        }
        (measure.inner(&p, &wg)?, DilationRoute::Inverse)
    } else {
        let mut q = wg;
        for _ in 0..k {
            q = apply_um(&q, m)?;
        }
        (measure.inner(&wf, &q)?, DilationRoute::Adjoint)
    };
    Ok(DilationReport {
        n,
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
        route,
    })
}

/// Which form of the covariance axiom was checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomForm {
    /// `U_m π(f) U_m^{-1} = π(f ∘ σ)`.
    Conjugation,
    /// `U_m π(f) = π(f ∘ σ) U_m`, used when `m` vanishes somewhere.
    Intertwining,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub form: AxiomForm,
    /// Sup distance between the two sides over all probes.
    pub covariance: f64,
    /// `‖U_m 1 − m ∘ π_0‖∞`.
    pub scaling: f64,
}

impl AxiomReport {
    pub fn max(&self) -> f64 {
        self.covariance.max(self.scaling)
    }
}

/// Probes `W_0 g`, `g ∘ π_1`, `(g ∘ π_0)(conj(g) ∘ π_2)` and `1`.
pub fn standard_probes(g: &CylinderFn) -> Result<Vec<PathFn>> {
    let spec = g.spec();
    Ok(vec![
        PathFn::coordinate(0, g),
        PathFn::coordinate(1, g),
        PathFn::coordinate(0, g).mul(&PathFn::coordinate(2, &g.conj()))?,
        PathFn::one(spec),
    ])
}

/// Checks the covariance and scaling axioms with `π(f) = M_{f ∘ π_0}` and `φ = 1`.
pub fn axiom_check(m: &CylinderFn, f: &CylinderFn, g: &CylinderFn) -> Result<AxiomReport> {
    let pi_f = PathFn::coordinate(0, f);
    let pi_fs = PathFn::coordinate(0, &f.compose_sigma()?);
    let form = if m.min_abs() > NONVANISHING_TOL {
        AxiomForm::Conjugation
    } else {
        AxiomForm::Intertwining
    };
    let mut covariance: f64 = 0.0;
    for probe in standard_probes(g)? {
        let (lhs, rhs) = match form {
            AxiomForm::Conjugation => (
                apply_um(&pi_f.mul(&apply_um_inverse(&probe, m)?)?, m)?,
                pi_fs.mul(&probe)?,
            ),
            AxiomForm::Intertwining => (
                apply_um(&pi_f.mul(&probe)?, m)?,
                pi_fs.mul(&apply_um(&probe, m)?)?,
            ),
        };
        covariance = covariance.max(lhs.sup_distance(&rhs)?);
    }
    let one = PathFn::one(m.spec());
    let scaling = apply_um(&one, m)?.sup_distance(&PathFn::coordinate(0, m))?;
    Ok(AxiomReport {
        form,
        covariance,
        scaling,
    })
}

/// Both sides of `∫ F ∘ σ̂^{-1} dP = ∫ (W ∘ π_0) F dP`.
pub fn measure_change_check(measure: &SolenoidMeasure, f: &PathFn) -> Result<(C64, C64)> {
    let lhs = measure.expect(&f.compose_shift_inverse())?;
    let rhs = measure.expect(&PathFn::coordinate(0, measure.weight()).mul(f)?)?;
    Ok((lhs, rhs))
}

/// Both sides of `⟨W_0 f, W_0 g⟩_P = ∫ f conj(g) h dμ`.
pub fn w0_isometry_check(
    measure: &SolenoidMeasure,
    f: &CylinderFn,
    g: &CylinderFn,
) -> Result<(C64, C64)> {
    let lhs = measure.inner(&PathFn::coordinate(0, f), &PathFn::coordinate(0, g))?;
    let rhs = f.multiply(measure.harmonic())?.inner_product(g)?;
    Ok((lhs, rhs))
}

/// Both sides of the marginal identity: `f_0` followed by `K` unit coordinates, and `∫ f_0 h dμ`.
pub fn marginal_check(measure: &SolenoidMeasure, f0: &CylinderFn, k: usize) -> Result<(C64, C64)> {
    let mut coords = vec![CylinderFn::one(measure.spec()); k + 1];
    coords[0] = f0.clone();
    let lhs = measure.moment(&coords)?;
    let rhs = f0.multiply(measure.harmonic())?.integrate();
    Ok((lhs, rhs))
}

/// `‖U_m W_0 f − W_0 S_m f‖∞`: `U_m` maps `W_0 L²` into itself.
pub fn res0_invariance(m: &CylinderFn, f: &CylinderFn) -> Result<f64> {
    let lhs = apply_um(&PathFn::coordinate(0, f), m)?;
    let rhs = PathFn::coordinate(0, &weighted_compose(m, f)?);
    lhs.sup_distance(&rhs)
}
