//! Exact Hausdorff limits at infinity of proper polynomial dilations projected
//! to tori and nilmanifolds, with a floating-point harness that checks the
//! predictions numerically.
//!
//! The crate is layered bottom-up:
//!
//! * [`scalar`]: exact arithmetic in a real number field `Q(θ)`.
//! * [`qlinalg`]: subspaces, lattices, Hermite normal form and the rational
//!   closure of a subspace relative to a lattice.
//! * [`unipotent`]: unipotent matrix groups, `exp`/`log`, abelianization.
//! * [`limits`]: multi-coset normal forms and the family of Hausdorff limits.
//! * [`numeric`]: sampling, torus and Heisenberg distances, Hausdorff
//!   distances and convergence experiments.

pub mod limits;
pub mod numeric;
pub mod qlinalg;
pub mod scalar;
pub mod unipotent;

pub use scalar::{FieldRef, NumberField, Rational, Scalar};
