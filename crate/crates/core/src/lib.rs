//! Exact-arithmetic filtrations, (mixed) Hodge structures and spectral
//! sequences of filtered complexes.
//!
//! Everything is computed over Q and the Gaussian rationals Q(i): subspaces
//! are canonical RREF row bases of a fixed coordinate space, filtrations are
//! finite chains of subspaces, and the homological machinery (pages of
//! spectral sequences, Hodge and mixed Hodge complexes, weight spectral
//! sequences of strata data) is built from sums, intersections, images and
//! preimages of those subspaces. No floating point anywhere.

pub mod error;
pub mod scalar;
pub mod mat;
pub mod subspace;
pub mod filt;
pub mod hodge;
pub mod mhs;
pub mod complex;
pub mod specseq;
pub mod mhc;
pub mod geometry;
pub mod fixtures;

pub use error::{Error, Result};
pub use mat::Mat;
pub use scalar::Scalar;
pub use subspace::{kernel, Quotient, Subquotient, Subspace};
