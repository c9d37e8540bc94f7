//! Siegert resonances of open one-dimensional quantum systems.
//!
//! The crate finds resonant states (poles with purely outgoing boundary
//! conditions) of continuum and tight-binding models, checks the flux and
//! lifetime identities they satisfy, and evolves the diverging eigenfunctions
//! on a finite lattice whose ends carry an energy-dependent effective
//! potential.
//!
//! Everything here is pure computation on `alloc` collections; file formats,
//! the command line and parallel scans live in the `resonant-cli` crate.
//!
//! Module map:
//!
//! * [`units`], [`state`], [`dispersion`]: unit conventions, complex wave
//!   numbers/energies, classification and the two dispersion relations.
//! * [`delta_well`]: exact double-delta resonances, parity curves, S matrix.
//! * [`flux`]: imaginary energy vs. boundary momentum flux, lifetimes and the
//!   expanding-volume particle number.
//! * [`lattice`]: effective-potential boundaries, determinant landscape and
//!   the self-consistent pole iteration.
//! * [`friedrichs`]: chain-plus-adatom quartic and its eigenfunctions.
//! * [`dynamics`]: RK4 time evolution with fixed effective boundaries.
//! * [`jost`]: partial-wave Jost functions, S matrix, cross sections, poles.
//! * [`linalg`], [`poly`], [`newton`], [`stats`]: numeric plumbing.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod delta_well;
pub mod dispersion;
pub mod dynamics;
pub mod error;
pub mod flux;
pub mod friedrichs;
pub mod jost;
pub mod lattice;
pub mod linalg;
pub mod newton;
pub mod poly;
pub mod state;
pub mod stats;
pub mod units;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use state::{ComplexEnergy, ComplexWaveNumber, Parity, ResonantState, StateKind};
pub use units::Units;

/// Shorthand used throughout the crate.
pub(crate) type C64 = Complex64;

/// Imaginary unit.
pub(crate) const I: C64 = C64 { re: 0.0, im: 1.0 };
