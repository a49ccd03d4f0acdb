//! Best approximation of square complex matrices by partial isometries in
//! the operator norm.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the CLI and
//! the parallel campaign runner live in the `isonear` companion crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod linalg;
pub mod nearness;
pub mod oracle;
pub mod polar;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Subspace, SvdFactors, Tolerance};
pub use nearness::{Characterization, ConditionCheck, NearnessReport};
pub use num_complex::Complex64;
pub use polar::{PartialIsometry, PolarData, ProjectionPair};
