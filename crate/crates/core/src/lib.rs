//! Rank-metric codes over finite field extensions and their
//! intersecting-type properties.
//!
//! The crate is `no_std` (with `alloc`). File formats, the command line
//! interface and the parallel search driver live in the `rankint` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod poly;

pub mod code;
pub mod constructions;
pub mod field;
pub mod geometry;
pub mod linalg;
pub mod properties;
pub mod search;

pub use code::{RankCode, Spectrum};
pub use error::{Error, Result};
pub use field::{ExtField, Fqm};
pub use geometry::{QSystem, SpannabilityWitness};
pub use linalg::{FqMatrix, FqSubspace};
