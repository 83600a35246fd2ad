//! IO, file formats and parallel drivers around `toricode-core`.

pub mod engine;
pub mod format;
pub mod reproduce;
pub mod rng;
pub mod survey;
