//! Exact combinatorics for Kazhdan-Lusztig polynomials of symmetric and
//! affine symmetric groups, the parabolic double-coset matrix calculus with
//! its cancellation procedure, and intersection-cohomology polynomials of
//! nilpotent orbit closures of linear and cyclic quivers.
//!
//! All arithmetic is exact: polynomial coefficients are checked 64-bit
//! integers and overflow is reported as an error, never wrapped.
//!
//! The crate is organized around the objects it computes with:
//!
//! - [`qpoly`]: integer-coefficient polynomials in `q`;
//! - [`symgroup`]: the finite symmetric group `S_d` (one-line notation,
//!   Bruhat order, KL polynomials, index cancellation);
//! - [`affsymgroup`]: the extended affine symmetric group (window notation);
//! - [`cosetmat`]: matrices with prescribed row/column sums parametrizing
//!   parabolic double cosets of `S_d`;
//! - [`affcosetmat`]: the biperiodic analogue for the affine group;
//! - [`quiverorbits`]: multisegments, orbit closures, IC polynomials,
//!   skew-shape standard forms, and decomposition numbers;
//! - [`oracle`]: brute-force reimplementations (reflection-cover Bruhat
//!   order, whole-group KL tables) used to cross-check everything else.

pub mod affcosetmat;
pub mod affsymgroup;
pub mod cosetmat;
mod engine;
pub mod error;
mod fxhash;
pub mod oracle;
pub mod qpoly;
pub mod quiverorbits;
pub mod symgroup;

pub use error::{Error, Result};
pub use qpoly::QPoly;
