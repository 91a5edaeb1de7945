//! Desk-scale numerical toolkit for twisted multi-shifts on truncated
//! Fock-type spaces: polyball membership tests, noncommutative Berezin
//! kernels and transforms, Fourier/radial machinery for the associated Hardy
//! algebra, and characteristic-function model theory, all realized as
//! executable identity and residual checks on finite truncations.
//!
//! Index conventions: factors, slots and letters are 1-based (generator
//! labels); basis positions are 0-based. Truncation is by total grade
//! `Σ|β_i| ≤ N`, and "interior" always means total grade ≤ N−1, where the
//! compressed-shift identities hold exactly.

pub mod berezin;
pub mod error;
pub mod fock;
pub mod gallery;
pub mod hardy;
pub mod io;
pub mod models;
pub mod numerics;
pub mod polyball;
pub mod twist;
pub mod words;

pub use error::{Error, Result};
pub use numerics::{CMatrix, CVector, Tolerances};
