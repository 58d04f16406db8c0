//! Permutahedra, permutocubes and the algebra built on them.
//!
//! The crate is organised bottom-up:
//!
//! - [`setcalc`]: ordered partitions, shuffles, indexing maps, disjoint unions, signs
//! - [`permutahedron`]: faces of `P_n`, the projections `Δ_{r,s}`, `ρ_n`, `γ_n`,
//!   `h_{A|B}`, `φ_{A|B}` and the coface/codegeneracy generators
//! - [`permutocube`]: faces of `B_n`, their operators and the projection to `I^n`
//! - [`chains`]: integer chains, cellular boundaries, tensor products, homology
//! - [`diagonals`]: orthogonal streams and the explicit diagonals on `P_n`, `B_n`, `I^n`
//! - [`omega`]: finite cubical sets, the monoidal permutahedral set `ΩQ`,
//!   truncating twisting functions and twisted Cartesian products
//! - [`hirsch`]: dg algebras, the bar construction and Hirsch operations

pub mod chains;
pub mod diagonals;
pub mod hirsch;
pub mod mutation;
pub mod omega;
pub mod permutahedron;
pub mod permutocube;
pub mod setcalc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("blocks not disjoint")]
    NotDisjoint,
    #[error("signs require full partition")]
    NotFull,
    #[error("set is not a subset of the indexing set")]
    NotSubset,
    #[error("translation produces a negative element")]
    Negative,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("decomposition not applicable")]
    NotApplicable,
    #[error("not a vertex of the support cell")]
    NotAVertex,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
