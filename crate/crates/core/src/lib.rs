//! Exact computer algebra for codimension-one foliations of generalized
//! Lotka-Volterra type on projective 3-space and their branched pull-backs
//! to projective 4-space.
//!
//! All arithmetic is exact over the number field Q(i, sqrt2). The module
//! stack, bottom to top:
//!
//! - [`qfield`]: scalars in Q(i, sqrt2) with exact sign and classification.
//! - [`mpoly`]: sparse multivariate polynomials, parser and printer.
//! - [`forms`]: exterior algebra (wedge, d, contraction, pullback).
//! - [`foliation`]: Lotka-Volterra 2-forms on P^3, singular points, degrees.
//! - [`genericity`]: residue conditions at simple singularities, table report.
//! - [`branched`]: branched rational maps P^4 -> P^3, weight regimes, pulled
//!   back foliations, degree and counting laws, holonomy obstruction.

pub mod branched;
pub mod error;
pub mod foliation;
pub mod forms;
pub mod genericity;
pub mod mpoly;
pub mod qfield;

pub use error::Error;
