//! Exact-arithmetic kernel for differential-difference algebra.
//!
//! The crate implements, at desk scale and entirely over exact rationals:
//!
//! - [`scalars`]: the coefficient field `Q(t1..tk)` with commuting
//!   derivations and a shift automorphism;
//! - [`polyalg`]: commutative polynomial algebra over that field (Groebner
//!   bases, ideal membership with certificates, saturation, a bounded
//!   three-valued primality oracle);
//! - [`diffpoly`]: the differential-difference polynomial ring `K{x1..xn}`
//!   with the canonical ranking and leader/separant/initial anatomy;
//! - [`rittkolchin`]: Ritt reduction with certificates, characteristic
//!   sets, coherence, and saturation-ideal membership;
//! - [`geometry`]: presented delta-closed sets, instance verification for
//!   the existential-closedness axioms, the sigma-power product trick, and
//!   D-varieties with sharp points;
//! - [`jets`]: algebraic jet spaces at rational points as exact kernel
//!   bases, with the jet-separation test;
//! - [`dsmod`]: (Delta,sigma)-modules in matrix form, gauge transforms,
//!   sharp spaces, and the induced module on jet spaces.
//!
//! Everything is pure and immutable; no floating point appears anywhere.

pub mod diffpoly;
pub mod dsmod;
pub mod geometry;
pub mod jets;
pub mod linalg;
pub mod polyalg;
pub mod rittkolchin;
pub mod scalars;
