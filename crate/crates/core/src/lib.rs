//! Traversal times for a quantum particle crossing a one-dimensional
//! piecewise-constant potential.
//!
//! The crate solves the stationary scattering problem by global edge
//! matching ([`scattering`]), evaluates the complex conditional times
//! obtained as weak values of the region projector ([`weaktimes`]),
//! simulates physical clocks that read those times out ([`clock`]) and ships
//! brute-force validators for all of it ([`oracle`], [`verify`]).
//!
//! Natural units (`hbar = mass = 1`) are the default; every entry point takes
//! a [`UnitSystem`] for rescaling.

// `!(x > 0.0)` is used throughout so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clock;
mod error;
pub mod format;
mod local;
pub mod oracle;
pub mod profile;
pub mod scattering;
mod special;
mod units;
pub mod verify;
pub mod weaktimes;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use profile::{PotentialProfile, Region, Segment};
pub use scattering::{solve_stationary, Channel, ScatteringSolution};
pub use units::UnitSystem;
pub use weaktimes::{ChannelTimes, ComplexTime, TimeChannel};
