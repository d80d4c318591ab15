//! File formats, reports, the search driver and the command line interface
//! on top of `rankint-core`.

pub mod cli;
pub mod codefile;
pub mod feasible;
pub mod report;
pub mod search;

pub use rankint_core as core;
