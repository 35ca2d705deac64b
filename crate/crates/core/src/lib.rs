//! Finite quandles, their inner automorphism groups, and the factorization
//! of surjective homomorphisms between connected quandles.
//!
//! Permutations act on the right: `x·p = p.image(x)`, and `p.then(q)` applies
//! `p` first. A quandle's table stores `x ▷ y` at row `x`, column `y`, and the
//! symmetry `S_y` is the column `x ↦ x ▷ y`.

pub mod augment;
pub mod catalog;
pub mod cli;
pub mod coset;
pub mod error;
pub mod factorize;
pub mod format;
pub mod permgroup;
pub mod quandle;
pub mod quotient;

pub use error::{Error, Result};
pub use permgroup::{PermGroup, Permutation};
pub use quandle::{Quandle, QuandleHom};
