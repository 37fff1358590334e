//! Difference-of-convex (DC) optimization toolkit.
//!
//! Solves problems of the form
//!
//! ```text
//!     minimize  f0(x) - g0(x)
//!   subject to  fi(x) - gi(x) <= 0   (i = 1..m)
//!               x in D
//! ```
//!
//! where every `fj`, `gj` is smooth convex and `D` is a simple convex set.
//! The toolkit provides the convex-concave procedure (CCCP and its
//! constrained variant CCCP+), Frank-Wolfe on epigraph reformulations of the
//! same problems, a constrained Frank-Wolfe variant that linearizes
//! difference-of-convex constraints, non-asymptotic gap-rate certificates,
//! and reductions showing how proximal-point, mirror-descent and
//! proximal-gradient recursions arise as Frank-Wolfe on suitable epigraphs.

pub mod analysis;
pub mod cli;
pub mod connections;
pub mod error;
pub mod linalg;
pub mod problems;
pub mod rng;
pub mod solvers;
pub mod transforms;

pub use error::DcError;
