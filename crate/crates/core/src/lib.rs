//! Exact factorization of orthogonal bases of the hyperbolic lattice.
//!
//! The lattice is `Z^{2n}` with the even symmetric form that pairs `e_i`
//! with `e'_i` to 1 and everything else to 0. Coordinates are laid out as
//! `(p_1..p_n, q_1..q_n)`: the first half holds coefficients on the
//! unprimed vectors `e_i`, the second half on the primed vectors `e'_i`.
//!
//! Any orthogonal basis (a basis reproducing the standard Gram matrix) is
//! factored into a [`Certificate`]: a word of `(-2)`-reflections that fixes
//! the mod-2 image, followed by a word of the four families of even
//! elementary operations ([`Generator::OpI`] .. [`Generator::OpIV`]) that
//! finishes the job inside the congruence subgroup. Certificates are checked
//! by [`verify::verify_certificate`], which multiplies the generator matrices
//! independently of the reduction code.
//!
//! The crate is `no_std` and only needs `alloc`. All arithmetic is on `i128`
//! with overflow reported as [`Error::Overflow`].
//!
//! ```
//! use orthobasis::{factor_full, verify::{random_isometry, verify_certificate}};
//!
//! let (basis, _word) = random_isometry(3, 12, 7).unwrap();
//! let cert = factor_full(&basis).unwrap();
//! assert!(verify_certificate(&cert).ok);
//! ```
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
pub mod generators;
pub mod lattice;
pub mod reduction;
pub mod verify;

pub use error::{BasisError, Error, GramViolation, Result};
pub use generators::{Generator, MoveWord, Sign};
pub use lattice::{
    mod2_reduce, validate_orthogonal_basis, AmbientVector, ColumnLabel, Int, IntMatrix,
    Mod2Matrix, Mod2Vector, OrthogonalBasis,
};
pub use reduction::{factor_full, transform_between, Certificate};
