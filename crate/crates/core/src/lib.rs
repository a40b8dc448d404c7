//! Design and analysis models for focusing surface-acoustic-wave resonators.
//!
//! The crate is `no_std` and only needs `alloc`. It covers the 2D
//! Hermite-Gauss beam family, anisotropic velocity profiles, resonance
//! frequencies and two-port spectra, transducer overlap efficiencies,
//! curved electrode layouts and the analysis of scanned mode images.
//! File formats and the command-line front end live in the `sawfocus` crate.

#![no_std]
#![warn(missing_docs)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod beam;
pub mod error;
pub mod imaging;
pub mod layout;
pub mod material;
pub mod numeric;
pub mod resonator;
pub mod transducer;

pub use error::{Error, Result};
