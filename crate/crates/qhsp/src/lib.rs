//! Hidden-subgroup solvers over finite groups, a dense state-vector
//! simulator for the quantum subroutines they use, and a subgroup-based
//! encryption protocol with an adversary harness.
//!
//! The crate is organized around five layers:
//!
//! * [`groups`] — finite abelian groups in invariant-factor form: arithmetic,
//!   subgroups, Smith/Hermite normal forms, discrete logs, characters and
//!   annihilators, plus a parameter-validated generic-group builder.
//! * [`wreath`] — the non-abelian family `W_n = Z_2^n wr Z_2`: element
//!   arithmetic, closures, conjugation.
//! * [`qsim`] — two-register state-vector simulation: superpositions,
//!   oracle application, partial measurement, Fourier transforms over
//!   finite abelian groups.
//! * [`hsp`] — hidden-subgroup solvers: the abelian character-sampling
//!   solver, the `W_n` solver, and the classical brute-force baseline,
//!   with the F_2 linear algebra they need.
//! * [`qep`] — the encryption protocol: key-derived subgroup generators,
//!   digit encoding into subgroup elements, group-wide chaff, a bit-exact
//!   wire format, and the attack harness measuring what an eavesdropper
//!   recovers at different oracle strengths.
//!
//! The `examples/` directory demonstrates each capability end to end; the
//! `qhsp` binary exposes file-based encryption and the experiment harness.

pub mod cli;
pub mod groups;
pub mod hsp;
pub mod qep;
pub mod qsim;
pub mod wreath;

pub use groups::{AbelianGroup, GroupElement, GroupError, Subgroup};
