//! Numerical laboratory for the fixed-point stability of n-Jordan derivations
//! on the matrix C*-algebras `M_k(ℂ)`.
//!
//! Given an approximately derivation-like map `f`, the crate computes the
//! corrected map `D(x) = lim f(2ᵐx)/2ᵐ`, checks that `D` is an
//! (n-Jordan, *-n-Jordan) derivation, and certifies the explicit error bound
//! `‖f(x) − D(x)‖ ≤ B(x)` on seeded sample clouds.

// `!(v >= 0.0)` style range checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod config;
pub mod control;
pub mod corrector;
pub mod defects;
pub mod error;
pub mod maps;
pub mod report;
pub mod scenario;
pub mod verify;

pub use algebra::{sample_elements, sample_unit_scalars, AlgebraElement, Distribution, SampleSpec, UnitScalar};
pub use control::{generalized_distance, scaling_check, Anchor, ControlFunction, ExtReal, GeneralizedDistance};
pub use corrector::{apply_j, correct, corrected_map, rate_estimate, CorrectionDiagnostics, PointDiagnostic};
pub use defects::{combined_defect, fit_theta, jensen_defect, njordan_defect, njordan_sum, star_defect, ThetaFit};
pub use error::{Error, Result};
pub use maps::{inner_derivation, oddify, perturb, AlgebraMap, PerturbationShape, PerturbationSpec};
pub use verify::{bound_constant, BoundSpec, CheckReport, ConstantChoice};
