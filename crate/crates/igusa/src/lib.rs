//! Exact computation of p-adic Igusa zeta integrals as rational functions
//! in t = q^(-s), exact Laurent expansion of their poles with coefficients
//! in ℚ[L, L^-1] (L a formal symbol for ln q), and the unextendability
//! calculus for semi-invariant distributions: orbit admissibility,
//! character-lattice pairings, stratification pole bounds, and the residue
//! 1-cocycle criteria.
//!
//! Everything is exact: arbitrary-precision integers, rationals, and
//! symbolic L. No floating point appears anywhere.
//!
//! Module map:
//! * [`padic`] — valuations, Haar-measure shells, zero counting mod p^m.
//! * [`symbolic`] — rational functions in t, Laurent expansion, fitting.
//! * [`zeta`] — Schwartz functions and the zeta integral engine.
//! * [`lattice`] — character lattices, orbits, admissibility, verdicts.
//! * [`identities`] — Laurent-coefficient invariance identities.
//! * [`cocycle`] — residue 1-cocycles, coboundary search, non-vanishing.
//! * [`scenario`] — built-in problem instances and the scenario loader.
//! * [`pipeline`] — compute → analyze → verdict orchestration and reports.

pub mod cocycle;
pub mod error;
pub mod identities;
pub mod lattice;
pub mod padic;
pub mod pipeline;
pub mod rat;
pub mod scenario;
pub mod symbolic;
pub mod zeta;

pub use error::{Error, Result};
