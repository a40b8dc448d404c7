//! File formats, synthetic data and command implementations on top of
//! `sawfocus-core`. The `sawfocus` binary is a thin clap front end over
//! [`commands`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod synth;

pub use error::{Error, Result};
