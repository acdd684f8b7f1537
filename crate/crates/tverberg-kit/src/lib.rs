//! A computational toolkit for collective unavoidability of simplicial
//! complexes and colored Tverberg-type partition theorems.
//!
//! The pipeline: build colored complex families on a labeled ground set,
//! decide `(r,s)`-unavoidability (plain and rainbow) by exhaustive search,
//! cross-check against the Kneser-graph clique criterion, run a discrete
//! Morse matching on the symmetrized deleted join and machine-verify the
//! resulting connectivity certificate, corroborate with an exact-rational
//! homology oracle, and demonstrate the geometric conclusion on concrete
//! rational point configurations.

pub mod complex;
pub mod error;
pub mod families;
pub mod geometry;
pub mod homology;
pub mod instance;
pub mod kneser;
pub mod morse;
pub mod unavoidability;

pub use error::{Error, Result};
