//! Exact combinatorics behind minimal foliations by hyperbolic surfaces on
//! fibered 3-manifolds.
//!
//! - [`sl2z`]: trace trichotomy, periodic points and `S`/`T` words for integer 2x2 matrices.
//! - [`cover`]: ramification profiles, Riemann–Hurwitz, the pillowcase family
//!   `Σ_d(a1..a4)`, double covers of the torus and leaf genus growth.
//! - [`origami`]: square-tiled surfaces, their SL(2,Z) action and lifts of toral automorphisms.
//! - [`homology`]: integral first homology of origamis, induced actions and Torelli order.
//! - [`torus3`]: mapping-torus geometry, Euler class bookkeeping and period rank.
//! - [`holonomy`]: circle pseudogroup simulation and affine stabilizers.

pub mod cover;
pub mod error;
pub mod holonomy;
pub mod homology;
pub mod linalg;
pub mod origami;
pub mod perm;
pub mod quadratic;
pub mod sl2z;
pub mod torus3;

pub use error::{Error, Result};
pub use origami::Origami;
pub use perm::Perm;
pub use sl2z::{IntMatrix2, Token, TraceClass};
