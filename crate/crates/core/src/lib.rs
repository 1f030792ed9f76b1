#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Coherent work processes and the coherent Crooks relation on
//! discrete-energy quantum systems.

pub mod cli;
pub mod cwp;
pub mod decomposition;
pub mod error;
pub mod fluctuation;
pub mod io;
pub mod ladder;
pub mod linalg;
pub mod nnls;
pub mod potential;

pub use error::{Error, Result};
