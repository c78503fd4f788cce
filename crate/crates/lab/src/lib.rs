//! File output, parallel drivers and the command-line front end for
//! `multipoint-core`.

pub mod cli;
pub mod output;
pub mod parallel;

pub use multipoint_core as core;
