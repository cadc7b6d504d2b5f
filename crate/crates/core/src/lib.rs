//! Symbolic verification of Dirac structures, Lie algebroids and polynomial
//! Lie groupoids on coordinate patches, with exact rational arithmetic.

// Index loops mirror the component formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod report;
pub mod algebroid;
pub mod cartan;
pub mod cli;
pub mod courant;
pub mod groupoid;
pub mod symalg;
pub mod tanlift;

pub use error::{Error, Result};
