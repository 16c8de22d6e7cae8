//! Exact combinatorics of cyclic quotient surface singularities.
//!
//! - [`hj`]: Hirzebruch–Jung continued fractions, continuants, remainder
//!   sequences and duals.
//! - [`wahl`]: k-Wahl chains and dual k-Wahl chains.
//! - [`mckay`]: special representations of `1/r(1,a)` and their length encoding.
//! - [`zerocf`]: zero continued fractions, weights and P-resolution counts.
//! - [`markov`]: k-generalized Markov triples.
//! - [`verify`]: corpus-wide checks that produce [`verify::Report`]s.

pub mod error;
pub mod hj;
pub mod markov;
pub mod mckay;
mod ser;
pub mod verify;
pub mod wahl;
pub mod zerocf;

pub use error::{Error, Result};
pub use hj::{continuants, expand, hj_dual, remainders, reverse, HJChain, ReducedFraction};
