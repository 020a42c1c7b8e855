//! Hidden-subgroup solvers.
//!
//! Three routes to the same answer: the character-sampling solver for
//! finite abelian groups, the two-phase solver for `W_n`, and the
//! classical brute-force baseline that queries the oracle on every group
//! element. The baseline doubles as the verification oracle for the
//! quantum solvers in every harness.

pub mod abelian;
pub mod f2;
pub mod wn;

pub use abelian::{
    brute_force_hsp, kernel_of_characters, sample_character, solve_abelian_hsp,
    AbelianHspInstance, AbelianSolverReport,
};
pub use f2::{solve_affine, F2Matrix, F2Span};
pub use wn::{brute_force_wn, solve_wn_hsp, WnHspInstance, WnSolverReport};

use crate::groups::GroupError;
use crate::qsim::QsimError;
use crate::wreath::WreathError;
use thiserror::Error;

/// Consecutive non-shrinking character draws required before the abelian
/// solver declares the running kernel stable. Each non-shrinking draw from
/// a kernel still above the hidden subgroup happens with probability at
/// most 1/2, so eight in a row bound the per-instance false-stop rate by
/// 2^-8 — comfortably inside a 99% recovery target.
pub const STABLE_ROUNDS: u32 = 8;

/// Batches of `4n` iterations the `W_n` solver may spend before giving up.
pub const WN_MAX_BATCHES: usize = 5;

#[derive(Debug, Error)]
pub enum HspError {
    #[error(transparent)]
    Sim(#[from] QsimError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Wreath(#[from] WreathError),
    #[error("group of order {0} exceeds the brute-force bound")]
    TooLarge(u64),
    #[error("oracle does not separate cosets of the declared subgroup")]
    OracleNotSeparating,
    #[error("iteration budget exhausted after {rounds} rounds")]
    BudgetExceeded { rounds: u32 },
    #[error("samples are mutually inconsistent; the oracle does not hide a subgroup")]
    InconsistentSamples,
}
