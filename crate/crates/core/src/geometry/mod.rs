//! Concrete measures: the logistic map with its arcsine law, and affine fractal IFS.

mod affine;
mod logistic;

pub use affine::{
    chaos_game, code_to_point, invariance_from_samples, strong_invariance_check, AffineIfs,
    ChaosSamples, InvarianceReport, MomentCheck, BURN_IN, MIN_SAMPLES,
};
pub use logistic::{
    arcsine_moment, branch_average, logistic_adjoint_compare, logistic_invariance,
    mean_antiderivative, AdjointReport, ChebyshevRule, LogisticReport, Poly,
};
