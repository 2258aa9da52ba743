//! Exact index arithmetic for iterated closed-orbit spectra.
//!
//! The crate is built around three layers:
//!
//! * [`scalar`] — exact arithmetic in `Q` and real quadratic fields
//!   `Q(sqrt(d))`, with a literal grammar, exact comparison, floor and
//!   distance-to-nearest-integer. Every decision made anywhere in this
//!   crate reduces to integer arithmetic on these values; no floating
//!   point participates in any accepted or rejected result.
//! * [`index`] — Bott-style block calculus for the lower/upper
//!   Conley-Zehnder indices, mean index and signature multiplicities of
//!   iterated spectra, together with an independent crossing-count
//!   oracle and the dynamical-convexity test.
//! * [`jump`] and [`analyzer`] — the constructive common-index-jump
//!   solver (torus vector, rational-relation lattice, orthant vertices,
//!   integer search with exact certificates) and catalogue-level
//!   verification (degree windows, carrier feasibility, rationality and
//!   resonance classification).
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the CLI
//! live in the companion `czjump` crate.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod analyzer;
pub mod index;
pub mod jump;
pub mod scalar;

pub use scalar::{ExactScalar, PiMultiple, ScalarError};
