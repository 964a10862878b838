#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
extern crate alloc;

pub mod conformal;
mod dd;
pub mod disk;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod rectangle;
mod roots;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
