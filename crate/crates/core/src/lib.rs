//! Wavelet filters as representations of the Cuntz relations.
//!
//! The crate works in four settings that share one algebraic core:
//!
//! * [`code_space`]: finite-depth functions on the code space of an iterated
//!   function system, with the shift `σ`, its adjoint, conditional
//!   expectations and Ruelle operators, all exact.
//! * [`ifs_filters`]: filter banks `m_1..m_N` on that space, their
//!   verification, constructions, analysis/synthesis and the loop-group action.
//! * [`circle_filters`] and [`classic_mra`]: the classical circle case
//!   `σ(z) = z^N` with Laurent polynomials, CQF completion, Blaschke
//!   products, the cascade algorithm and perfect-reconstruction filter banks.
//! * [`solenoid`], [`rkhs`] and [`geometry`]: path-space moments, kernel
//!   conditions on finite point sets, and concrete measure examples.
//!
//! The command-line front end lives in [`cli`].

pub mod circle_filters;
pub mod classic_mra;
pub mod cli;
pub mod cmatrix;
pub mod code_space;
pub mod error;
pub mod geometry;
pub mod ifs_filters;
pub mod rkhs;
pub mod solenoid;

pub use code_space::{CylinderFn, IfsSpec, Word, C64};
pub use error::{Result, WavelabError};
