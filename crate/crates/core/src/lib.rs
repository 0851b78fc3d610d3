//! Incidence geometry over prime fields: exact point/line incidence
//! counting, constructive refinement of point-line configurations,
//! projective reduction to partial sum-product grids, and the partial
//! sum-product statistics those grids are measured by.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, parallel
//! sweeps and the command line live in the `fpinc` crate.

#![no_std]

extern crate alloc;

pub mod error;
pub mod field;
pub mod harness;
pub mod incidence;
pub mod plane;
pub mod ratio;
pub mod refine;
pub mod sumprod;

pub use error::{Error, Result};
pub use field::{Fe, PlaneContext};
pub use incidence::{IncidenceProfile, LineSet, PointSet};
pub use plane::{AffLine, AffinePoint, ProjLine, ProjMap, ProjPoint};
