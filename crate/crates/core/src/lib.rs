//! Heat transport through a three-spin chain coupled to thermal reservoirs.
//!
//! The chain Hamiltonian is diagonalized exactly, each spin exchanges energy
//! with its own bosonic reservoir, and the secular master equation reduces
//! to a rate equation on eigenstate populations. From there the crate
//! computes invariant subspaces, steady states, heat currents and the
//! transistor and diode figures of merit. [`analytic`] holds closed-form
//! results for the longitudinal and transverse field cases.

pub mod analytic;
pub mod config;
pub mod error;
pub mod exec;
pub mod lindblad;
pub mod model;
pub mod observables;
pub mod steadystate;

pub use config::{System, SystemConfig, Tolerances};
pub use error::{Error, Result};
pub use exec::Execution;
