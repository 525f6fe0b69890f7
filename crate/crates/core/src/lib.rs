//! Executable companions to counting arguments about representable matroids.
//!
//! The crate covers five layers:
//!
//! * [`matroid`]: matroids as sorted basis families over 1-indexed ground sets,
//!   exchange-axiom validation, duality, nonbases and canonical forms.
//! * [`gf`]: lookup-table arithmetic for GF(q), q ≤ 16, and dense matrices.
//! * [`poly`] and [`patterns`]: exact integer polynomials, the minor polynomials
//!   of `[x | I_r]`, and exhaustive zero-pattern enumeration over finite fields.
//! * [`represent`]: backtracking search for a representation `[u | I_r]`.
//! * [`bounds`]: high-precision base-2 logarithms of the counting bounds.
//!
//! [`enumerate`] builds isomorph-free censuses on top of these, and
//! [`census_file`] / [`report`] handle persistence for the `matrep` binary.

pub mod bounds;
pub mod census_file;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod gf;
pub mod matroid;
pub mod patterns;
pub mod poly;
pub mod polyfile;
pub mod report;
pub mod represent;

pub use error::{Error, Result};
pub use gf::{GfContext, GfMatrix};
pub use matroid::{CanonicalKey, Matroid, Permutation, SubsetMask};
