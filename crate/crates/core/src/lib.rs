//! Exact computations with one-sided twisted complexes over presented
//! dg-categories.

pub mod dgcore;
pub mod error;
pub mod exactlin;
pub mod formats;
pub mod gen;
pub mod homotopy;
pub mod samples;
pub mod tstruct;
pub mod twisted;

pub use error::{Error, Result};
