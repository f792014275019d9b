#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![doc = include_str!("../README.md")]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cpdyn;
pub mod dilation;
pub mod eigenlists;
pub mod error;
pub mod freeprod;
pub mod linalg;
pub mod matrix;
pub mod moments;
pub mod offwhite;
pub mod opalg;
pub mod prodsys;
pub mod random;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, RealMatrix};

pub type C64 = num_complex::Complex64;
