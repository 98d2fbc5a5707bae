//! Exact arithmetic for binomial-coefficient congruences modulo `p^2`
//! attached to real quadratic fields, with independent two-sided verifiers.
//!
//! Module map:
//! - [`arith`]: residues mod `p` and `p^2`, inverses, `C(p-1, k)`, harmonic sums
//! - [`ntheory`]: factorization, Möbius, totient, Jacobi/Kronecker symbols
//! - [`lucas`]: Lucas sequences by fast doubling, plus the plain recurrence
//! - [`bernoulli`]: Bernoulli numbers mod `p` and exact, partial harmonic sums
//! - [`quadfield`]: fundamental units and class numbers of real quadratic fields
//! - [`congruence`]: the verifiers and their reports
//! - [`grid`]: sorted exhaustive runs over parameter ranges
//! - [`selftest`]: the built-in invariant suite
//! - [`cli`]: the `quadbinom` command line

pub mod arith;
pub mod bernoulli;
pub mod cli;
pub mod congruence;
pub mod error;
pub mod grid;
pub mod lucas;
pub mod ntheory;
pub mod quadfield;
pub mod selftest;

pub use arith::Residue;
pub use congruence::{CongruenceReport, TheoremId};
pub use error::{Error, Result};
pub use grid::{run_grid, Family, GridOutcome, GridSpec};
pub use quadfield::{FieldCache, QuadFieldInvariants};
