//! Quantum and classical mechanics of a charged particle on a plane with a
//! uniform perpendicular magnetic field.
//!
//! The crate is organised around an exact symbolic engine for functions of the
//! form `P(x, y) * exp(Q(x, y))` and for polynomial-coefficient differential
//! operators ([`symbolic`]). On top of it sit the gauge-specific Hamiltonians
//! and magnetic translations ([`gauge`]), closed-form Landau eigenfunctions
//! and their degeneracy ladders ([`eigen`]), an independent finite-difference
//! oracle ([`grid`]) and an RK4 integrator for the classical flow
//! ([`classical`]).

pub mod classical;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod gauge;
pub mod grid;
pub mod symbolic;
pub mod units;

pub use error::{Error, Result};
pub use num_complex::Complex64 as Complex;
