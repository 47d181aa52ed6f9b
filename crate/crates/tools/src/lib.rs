//! File formats, the sweep harness and command implementations built on
//! `spectral-core`.

pub mod commands;
pub mod formats;
pub mod harness;
