//! Laplace-type sequence transform: forward images `φ_n(s)`, Laguerre and
//! residue inversion, backward-difference calculus on image sequences,
//! closed-form recurrence solving, Hurwitz zeta and exact identity sweeps.

// `!(x <= tol)` rejects NaN on purpose; index loops walk parallel sequences.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod diffeq;
pub mod error;
pub mod exact;
pub mod identities;
pub mod poly;
pub mod laguerre;
pub mod nabla;
pub mod quadrature;
pub mod residue;
pub mod special;
pub mod suite;
pub mod transform;

pub use error::{Error, Result};
