//! Exact combinatorics of hard-disk configurations in a strip.
//!
//! The configuration space `conf(n, w)` of `n` unit disks in an infinite
//! strip of width `w` is modelled by the finite complex `cell(n, w)`.
//! This crate enumerates its cells, computes GF(2) homology, classifies
//! critical cells of the discrete gradient on it, multiplies degree-one
//! cohomology classes, and certifies the topological complexity
//! `2n - 2⌈n/w⌉ + 1` for `n > w` through an explicit zero-divisor product.

pub mod cli;
pub mod error;
pub mod homology;
pub mod morse;
pub mod ring;
pub mod symbols;
pub mod tc;
pub mod verify;

pub use error::{Error, ParseError, Result};
pub use morse::{Classifier, CriticalCell, WheelOrder};
pub use symbols::{Label, StripParams, Symbol};
