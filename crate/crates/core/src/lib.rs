//! Exact Lie algebras of polynomial vector fields.
//!
//! Derivations of K[x1..xn] (K = Q) with coefficients in the fraction field
//! R = K(x1..xn) are represented as vector fields `sum c_i d/dx_i`. On top of
//! exact polynomial and rational-function arithmetic the crate computes Lie
//! brackets, finite-dimensional spans closed under the bracket, rank over R,
//! lower central series, centers and centralizers, slices of locally
//! nilpotent derivations, and a constructive classification of nilpotent
//! algebras whose center has corank at most two, together with explicit
//! embeddings into the triangular algebra u_n.

pub mod classify;
pub mod derivation;
pub mod elim;
pub mod embed;
pub mod error;
pub mod gcd;
pub mod lie;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod random;
pub mod ratfunc;
pub mod report;
pub mod scalar;
pub mod triangular;

pub use classify::{build_l1, build_l2, classify, ClassificationVerdict, VerdictCase};
pub use derivation::{bracket, find_slice, local_nilpotency, Derivation, LocalNilpotencyVerdict, Slice};
pub use elim::{solve_dependence, Dependence};
pub use embed::{embed, EmbeddingMap};
pub use error::{Error, Result};
pub use lie::{CenterData, Nilpotency, SpannedLieAlgebra};
pub use poly::MultiPoly;
pub use ratfunc::RatFunc;
pub use scalar::Scalar;
