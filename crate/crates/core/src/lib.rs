//! Twisted logarithmic de Rham cohomology of central, reduced hyperplane
//! arrangements, computed in exact rational arithmetic.
//!
//! The pieces, bottom up:
//!
//! - [`algebra`]: polynomials and polynomial differential forms over `Q`.
//! - [`linalg`]: fraction-free rank, kernel and solve.
//! - [`arrangement`]: validation, intersection lattice, Möbius function,
//!   dense edges.
//! - [`weights`]: residues along edges, the weight conditions and the
//!   integer shift that enforces them.
//! - [`logforms`]: bases of the graded pieces `Ω^j(log A)_q`.
//! - [`derham`]: `∇_ω` and `ι_E` matrices, subcomplex cohomology.
//! - [`bsideals`]: candidate Bernstein–Sato components.
//! - [`io`], [`verify`], [`cli`]: the arrangement file, the invariant suite
//!   and the command-line front end.

pub mod algebra;
pub mod arrangement;
pub mod bsideals;
pub mod cli;
pub mod derham;
pub mod error;
pub mod io;
pub mod linalg;
pub mod logforms;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
