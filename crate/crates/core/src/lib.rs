//! Isotopy invariants of bonded links (knots and links carrying extra bond
//! segments, as in disulfide-bonded proteins).
//!
//! The crate computes the value of a bonded link diagram in the framed bonded
//! Kauffman bracket skein module, expressed in the free basis of theta-curve
//! and handcuff-link powers, together with the writhe-normalized form, the
//! reduced polynomial in `Z[A^{±1}, Θ, H]`, and the topological specialization
//! in which every handcuff collapses to `δ·Θ`.
//!
//! Layout:
//!
//! * [`laurent`] — exact sparse Laurent polynomials in `A` over bigints.
//! * [`coeff`] — fractions with denominators restricted to powers of
//!   `f1 = 1 + A^4` and `f2 = 1 + A^4 + A^8`, the two invertible factors of
//!   the coefficient ring.
//! * [`skein`] — module elements `Σ p_{m,n} Θ^m H^n` and the bivariate
//!   polynomial ring used by the reduced invariant.
//! * [`diagram`] — the combinatorial planar-diagram model: edges, crossings,
//!   trivalent bond vertices, validation, writhe, components, JSON codec and
//!   canonical keys.
//! * [`moves`] — Reidemeister-style rewriters (`I±`, `II`, `III`, `IV`,
//!   `IV'`, `RV`, `V`, bond slide) and the seeded random-move driver used by
//!   the invariance test suites.
//! * [`engine`] — the recursive, memoized evaluation of diagrams into the
//!   skein basis, plus normalization and reduction.
//!
//! The crate is `no_std`-compatible (with `alloc`); the `std` feature is on
//! by default and `parallel` enables rayon-based branch parallelism in the
//! engine.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod coeff;
pub mod diagram;
pub mod engine;
pub mod laurent;
pub mod moves;
pub mod skein;

pub use coeff::Coefficient;
pub use diagram::BondedDiagram;
pub use engine::{EvaluationOptions, EvaluationResult, Mode};
pub use laurent::IntLaurent;
pub use skein::{BivariateLaurent, SkeinValue};
