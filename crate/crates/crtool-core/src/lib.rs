//! Numerical models of the smooth boundary parts of the classical symmetric
//! domains and of the tube over the light cone: Levi forms, Levi foliations,
//! the tensor `R`, the invariant `ν`, explicit maps between the models and a
//! decision procedure for the regularity classification.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classify;
pub mod crframe;
pub mod domains;
pub mod error;
pub mod foliation;
pub mod maps;
pub mod nu;
pub mod numerics;
pub mod rng;

pub use error::{Error, Result};
