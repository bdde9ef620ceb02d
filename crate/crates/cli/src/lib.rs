//! Command-line front end for `specdet`: configuration, drivers and report
//! emission.

pub mod config;
pub mod emit;
pub mod run;
