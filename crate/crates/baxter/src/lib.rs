//! Exact-arithmetic workbench for particle-conserving solutions of the
//! Yang-Baxter equation, their multiparametric and colour-dependent twist
//! deformations, and the quantum algebras those solutions generate.
//!
//! Everything is computed over exact rational arithmetic: scalars are
//! multivariate rational functions with `BigRational` coefficients, checks
//! either expand symbolically (a complete decision procedure) or evaluate at
//! seeded random rational points (deterministic per seed), and no floating
//! point appears anywhere.
//!
//! The layers, bottom to top:
//!
//! * [`scalar`]: interned symbols, canonicalized rational functions, the
//!   square-root sugar for antisymmetric deformation tables, parsing,
//!   evaluation, and seeded sampling.
//! * [`tensor`]: sparse operators on tensor products with exact entries.
//! * [`rmatrix`]: particle-conserving vertex-model matrices given by
//!   coefficient tables, the standard builders, the Yang-Baxter check, and
//!   the twist transformation.
//! * [`twistcore`]: the coefficient-level constraint system equivalent to
//!   the Yang-Baxter equation for this ansatz, its twist invariance, and
//!   the scalar-factor identities behind twist covariance of monodromy
//!   products.
//! * [`algebra`]: free associative words, quadratic rewrite systems, the
//!   exchange relations generated by a matrix, diagonal extensions, and the
//!   realization maps between deformed and undeformed generator sets.
//! * [`yangian`]: mode-indexed relation families extracted from spectral
//!   series, structural matching against closed-form families, span
//!   certificates, and the evaluation representation.
//! * [`csmodel`]: deformation-phase representations of transpositions on
//!   multi-particle states.

pub mod algebra;
pub mod csmodel;
pub mod error;
pub mod report;
pub mod rmatrix;
pub mod scalar;
pub mod tensor;
pub mod twistcore;
pub mod yangian;

pub use error::{Error, Result};
