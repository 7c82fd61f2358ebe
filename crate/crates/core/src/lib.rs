//! Exact piecewise-linear and specialization layers of motivic integration.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactcore`]: big rationals, integer matrices, Laurent polynomials;
//! * [`semilinear`]: definable subsets of `Q^n` and their calculus;
//! * [`euler`]: the two Euler characteristics `χ` and `χ'`;
//! * [`gamma_classes`]: Γ-classes, morphisms, singleton orbits, volume and
//!   lattice counting;
//! * [`denefsum`]: closed-form character sums over lattice points of
//!   polyhedra;
//! * [`motivic`]: restricted motivic classes and their retractions;
//! * [`igusa`]: Igusa integrals assembled from strata, with a p-adic oracle.

pub mod denefsum;
pub mod error;
pub mod exactcore;
pub mod euler;
pub mod gamma_classes;
pub mod igusa;
pub mod motivic;
pub mod semilinear;

pub use error::{Error, Result};
pub use exactcore::{IntLaurent, IntMatrix, LaurentPoly, RatLaurent, Rational};
