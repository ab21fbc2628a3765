//! Toolkit for solving systems of multivariate quadratic equations over
//! small finite fields, with four pipelines (plain XL, hybrid XL, hybrid
//! Wiedemann XL, and a polynomial-ring XL that eliminates most of the
//! Macaulay matrix once before the guess loop) and an analytical cost
//! estimator for choosing parameters.

pub mod bench;
pub mod estimate;
pub mod field;
pub mod instance;
pub mod linalg;
pub mod macaulay;
pub mod poly;
pub mod pxl;
pub mod xl;

pub use field::{Fe, FieldContext, FieldError};
pub use poly::{Monomial, MonomialOrder, Polynomial, QuadraticSystem};
pub use xl::{SolveOutcome, SolveStatus, SolverAlgorithm, SolverConfig};
