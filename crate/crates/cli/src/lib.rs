//! Command-line front end, report files and the parallel campaign runner
//! for `isonear-core`.

pub mod cli;
pub mod error;
pub mod matrix_file;
pub mod report;
pub mod reproduce;
pub mod runner;
