//! Exact tools for sign-representation, threshold weight and
//! communication-complexity bounds of Boolean functions.
//!
//! Functions are on `{−1, 1}^n`. An input is an index `x < 2^n`; bit `j−1`
//! of `x` set means variable `j` equals `−1`. All bound computations are
//! exact over rationals unless a result says otherwise.

pub mod boolean;
pub mod comm;
pub mod error;
pub mod fourier;
pub mod lifting;
pub mod lp;
pub mod matrix;
pub mod measures;
pub mod modfn;
pub mod poly;
pub mod rational;
pub mod report;
pub mod spec;
pub mod symmetric;

pub use boolean::{BooleanFunction, Ltf, SymmetricPredicate};
pub use error::{Error, Result};
pub use fourier::FourierTable;
pub use lp::{LinearProgram, LpSolution, Relation, Sense, Status};
pub use matrix::CommMatrix;
pub use poly::SparsePolynomial;
pub use rational::Rational;
pub use report::{BoundKind, BoundReport, Direction};
pub use comm::JointDistribution;
pub use spec::FunctionSpec;
