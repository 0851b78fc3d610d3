//! File formats, experiment records, parallel sweeps and the `fpinc`
//! command line on top of [`fpinc_core`].

pub mod cli;
pub mod error;
pub mod io;
pub mod record;
pub mod sweep;

pub use error::{Error, Result};
pub use fpinc_core as core;
