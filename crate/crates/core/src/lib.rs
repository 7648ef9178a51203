//! Orbit spaces of qutrit mixed states under U(3) and its SU(2)×U(1) subgroup.
//!
//! The crate is `no_std` (with `alloc`) and purely computational:
//!
//! - [`su3`]: Gell-Mann basis, structure constants, Bloch ⇄ density conversions.
//! - [`invariants`]: Casimirs `c2`, `c3` and local invariants `f1..f4`.
//! - [`grad`]: Procesi–Schwarz gradient (Gram) matrices, numeric and closed form,
//!   their determinant and the boundary hypersurfaces Σ±.
//! - [`membership`]: semi-algebraic membership tests and 3-d slices of the local
//!   orbit space.
//! - [`molien`]: Molien series by closed-form expansion and torus quadrature.
//! - [`counting`]: invariant polynomials as the kernel of the infinitesimal action.
//! - [`sampling`]: reproducible random states and group elements.
//!
//! IO, the command line, and parallel drivers live in the companion
//! `qutrit-orbit-cli` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod counting;
pub mod error;
pub mod exact;
pub mod grad;
pub mod invariants;
pub mod linalg;
pub mod membership;
pub mod molien;
pub mod poly;
pub mod sampling;
pub mod su3;

pub use error::{Error, Result};
pub use invariants::{GlobalInvariants, LocalInvariantPoint, LocalInvariants};
pub use su3::{BlochVector, DensityMatrix};
