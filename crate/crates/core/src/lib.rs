//! Exact two-dimensional lattice geometry and the linear codes it generates.
//!
//! Everything in this crate is integer or rational arithmetic: polygons with
//! lattice vertices, affine unimodular maps, canonical forms for equivalence
//! testing, exhaustive classification of polygons fitting in a small square,
//! finite fields `F_q` for prime powers `q`, the evaluation codes a polygon
//! defines over such a field, and minimum-distance machinery (exhaustive,
//! low-support bounds, and a multi-information-set search).
//!
//! The crate is `no_std` (with `alloc`); all IO, parallel drivers and the CLI
//! live in the companion `toricode` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classify;
pub mod code;
pub mod dist;
pub mod error;
pub mod gf;
pub mod ldp;
pub mod normal_form;
pub mod point;
pub mod polygon;
pub mod rational;
pub mod unimodular;

pub use error::Error;
pub use normal_form::{is_equivalent, normal_form, NormalForm};
pub use point::Point;
pub use polygon::Polygon;
pub use unimodular::UnimodularMap;
